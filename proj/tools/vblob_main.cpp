#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "vblob/config.hpp"
#include "vblob/errors.hpp"

namespace {

void add_common_flags(CLI::App* cmd, vblob::RunConfig& cfg, std::string& config_path) {
    cmd->add_option("--config", config_path, "JSON config file; flags override its values");
    cmd->add_option("--data", cfg.data, "rankine | lamb_oseen | sign_changing_pair");
    cmd->add_option("--omega0", cfg.omega0, "vorticity amplitude (or circulation)");
    cmd->add_option("--radius", cfg.radius, "support radius (or sigma)");
    cmd->add_option("--eps", cfg.eps, "blob scale");
    cmd->add_option("--dt", cfg.dt, "time step");
    cmd->add_option("--T", cfg.T, "final time");
    cmd->add_option("--n", cfg.n, "blobs per axis");
    cmd->add_option("--theta", cfg.theta, "treecode opening ratio");
    cmd->add_option("--order", cfg.order, "treecode multipole order");
    cmd->add_option("--levels", cfg.levels, "refinement levels");
    cmd->add_option("--mode", cfg.mode, "stability: strong_l1 | weak_oscillatory");
    cmd->add_option("--delta", cfg.delta, "probe weight perturbation");
    cmd->add_option("--gamma", cfg.gamma, "measure distance threshold");
    cmd->add_option("--r", cfg.r, "observation ball radius");
    cmd->add_option("--out", cfg.out, "output directory");
    cmd->add_flag("--deterministic,!--no-deterministic", cfg.deterministic,
                  "byte-identical reruns (forces one thread)");
    cmd->add_option("--threads", cfg.threads, "worker threads (non-deterministic runs)");
    cmd->add_flag("--plots", cfg.plots, "emit SVG plots alongside the CSVs");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vortex blob experiments for 2D incompressible flow"};
    app.require_subcommand(1);

    vblob::RunConfig flags;  // flag values, merged over the config file
    std::string config_path;
    for (const char* name :
         {"simulate", "verify", "stability", "existence", "kernel-check", "probe"}) {
        auto* cmd = app.add_subcommand(name);
        add_common_flags(cmd, flags, config_path);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    const auto* cmd = app.get_subcommands().front();
    try {
        vblob::RunConfig cfg;
        if (!config_path.empty()) cfg = vblob::parse_config_file(config_path);
        cfg.command = cmd->get_name();
        // flags override file values; unset flags keep the file's choice
        auto merge = [&](const char* name, auto member) {
            if (cmd->count(name) > 0) cfg.*member = flags.*member;
        };
        merge("--data", &vblob::RunConfig::data);
        merge("--omega0", &vblob::RunConfig::omega0);
        merge("--radius", &vblob::RunConfig::radius);
        merge("--eps", &vblob::RunConfig::eps);
        merge("--dt", &vblob::RunConfig::dt);
        merge("--T", &vblob::RunConfig::T);
        merge("--n", &vblob::RunConfig::n);
        merge("--theta", &vblob::RunConfig::theta);
        merge("--order", &vblob::RunConfig::order);
        merge("--levels", &vblob::RunConfig::levels);
        merge("--mode", &vblob::RunConfig::mode);
        merge("--delta", &vblob::RunConfig::delta);
        merge("--gamma", &vblob::RunConfig::gamma);
        merge("--r", &vblob::RunConfig::r);
        merge("--out", &vblob::RunConfig::out);
        merge("--deterministic", &vblob::RunConfig::deterministic);
        merge("--threads", &vblob::RunConfig::threads);
        merge("--plots", &vblob::RunConfig::plots);

        vblob::validate(cfg);
        return vblob::dispatch(cfg);
    } catch (const vblob::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const vblob::BlowUpError& e) {
        std::fprintf(stderr, "numerical abort: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
