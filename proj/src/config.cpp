#include "vblob/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "vblob/errors.hpp"
#include "vblob/io.hpp"
#include "vblob/weakform.hpp"

namespace vblob {
namespace {

using json = nlohmann::json;

const std::array<std::string, 6> kCommands = {"simulate",  "verify",       "stability",
                                              "existence", "kernel-check", "probe"};
const std::array<std::string, 3> kDataKinds = {"rankine", "lamb_oseen",
                                               "sign_changing_pair"};
const std::array<std::string, 2> kModes = {"strong_l1", "weak_oscillatory"};

template <std::size_t N>
bool one_of(const std::string& v, const std::array<std::string, N>& set) {
    for (const auto& s : set)
        if (s == v) return true;
    return false;
}

void require_positive(double v, const std::string& key) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError("config key \"" + key + "\" must be positive", key);
}

void require_positive(int v, const std::string& key) {
    if (v < 1) throw ConfigError("config key \"" + key + "\" must be positive", key);
}

FlowConfig flow_config(const RunConfig& cfg) {
    FlowConfig fc;
    fc.dt = cfg.dt;
    fc.coupling = Coupling::self_consistent;
    fc.tree.theta = cfg.theta;
    fc.tree.order = cfg.order;
    fc.tree.threads = cfg.deterministic ? 1 : cfg.threads;
    // keep roughly 100 stored frames so long runs stay in memory
    fc.store_stride = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(cfg.T / cfg.dt)) / 100);
    return fc;
}

std::vector<Vec2> label_grid(const BoundingBox& box, double margin, double h) {
    std::vector<Vec2> out;
    const BoundingBox b = box.inflated(margin);
    const int nx = static_cast<int>(std::ceil(b.extent().x1 / h));
    const int ny = static_cast<int>(std::ceil(b.extent().x2 / h));
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            out.push_back({b.lo.x1 + (i + 0.5) * h, b.lo.x2 + (j + 0.5) * h});
    return out;
}

int run_simulate(const RunConfig& cfg) {
    const auto spec = make_initial_data(cfg);
    const auto field = discretize(spec, cfg.eps, cfg.n);
    const auto labels = label_grid(spec.support_box(), 1.0, 0.1);
    const auto run = integrate_flow(field, cfg.T, flow_config(cfg), labels);
    io::write_run_snapshots(std::filesystem::path(cfg.out) / "snapshots", run,
                            std::max<std::size_t>(1, run.times.size() / 10));
    return 0;
}

int run_verify(const RunConfig& cfg) {
    const auto spec = make_initial_data(cfg);
    const auto field = discretize(spec, cfg.eps, cfg.n);
    const auto box = spec.support_box();
    const double half =
        0.5 * std::max(box.extent().x1, box.extent().x2) + 1.0;
    const auto labels = label_grid(box, 1.5, 0.08);
    const auto run = integrate_flow(field, cfg.T, flow_config(cfg), labels);

    const auto psi = TestFunction::make_bump({0.0, 0.0}, half,
                                             TimeProfile::vanishing_at(cfg.T));
    const auto phi = TestFunction::divfree_from_stream(psi);

    std::vector<std::pair<std::string, ResidualReport>> reports;
    reports.emplace_back("symmetrized_vorticity",
                         symmetrized_vorticity_residual(run, psi, field));
    reports.emplace_back("symmetrized_velocity",
                         symmetrized_velocity_residual(run, phi, field, 0.05));
    reports.emplace_back("weak_velocity", weak_velocity_residual(run, phi, field, 0.05));
    reports.emplace_back("renormalized_arctan",
                         renormalized_residual(run, Nonlinearity::arctan_fn(), psi, spec));
    io::write_residual_reports(std::filesystem::path(cfg.out) / "residuals.csv", reports);

    for (const auto& [name, rep] : reports) {
        const double scale = std::max({std::abs(rep.time_term),
                                       std::abs(rep.interaction_term),
                                       std::abs(rep.initial_term), 1e-12});
        if (std::abs(rep.residual) > std::max(rep.quadrature_error_estimate, 1e-3 * scale))
            return 1;
    }
    return 0;
}

int run_stability(const RunConfig& cfg) {
    const auto spec = make_initial_data(cfg);
    const auto mode = cfg.mode == "strong_l1" ? Perturbation::strong_l1
                                              : Perturbation::weak_oscillatory;
    const auto rep = run_stability_experiment(spec, mode, cfg.levels, cfg.T, flow_config(cfg));
    io::write_stability_report(cfg.out, rep);
    if (!rep.flow_decreasing || !rep.velocity_decreasing) return 1;
    if (mode == Perturbation::strong_l1 && !rep.omega_decreasing) return 1;
    if (mode == Perturbation::weak_oscillatory && cfg.levels > 1 &&
        rep.min_consecutive_omega_l1 <= 0.1 * rep.omega_l1_scale)
        return 1;
    return 0;
}

int run_existence(const RunConfig& cfg) {
    const auto spec = make_initial_data(cfg);
    std::vector<double> eps_levels;
    for (int k = cfg.levels - 1; k >= 0; --k)
        eps_levels.push_back(cfg.eps * std::pow(2.0, k));
    const auto rep = run_existence_pipeline(spec, eps_levels, cfg.T, flow_config(cfg));
    io::write_convergence_report(cfg.out, rep);
    return rep.fine_levels_monotone ? 0 : 1;
}

int run_kernel_check(const RunConfig& cfg) {
    const auto rep = run_kernel_scaling_experiment({4.0 / 3.0, 1.5, 5.0 / 3.0},
                                                   {0.4, 0.2, 0.1, 0.05});
    io::write_slope_report(cfg.out, rep, cfg.plots);
    for (const auto& e : rep.entries) {
        if (e.inconclusive) return 1;
        if (e.slope < e.alpha_target - 0.05 || e.slope > e.alpha_target + 0.15) return 1;
    }
    return 0;
}

int run_probe(const RunConfig& cfg) {
    const auto spec = make_initial_data(cfg);
    const auto field = discretize(spec, cfg.eps, cfg.n);
    auto perturbed = field;
    perturbed.weights[perturbed.weights.size() / 2] += cfg.delta;
    const auto labels = label_grid(spec.support_box(), 1.0, 0.1);
    const auto fc = flow_config(cfg);
    const auto run_a = integrate_flow(field, cfg.T, fc, labels);
    const auto run_b = integrate_flow(perturbed, cfg.T, fc, labels);
    const auto rep = run_fundamental_estimate_probe(
        run_a, run_b, {0.5 * cfg.gamma, cfg.gamma, 2.0 * cfg.gamma}, cfg.r, 0.0);
    io::write_probe_report(cfg.out, rep);
    return 0;
}

}  // namespace

InitialVorticitySpec make_initial_data(const RunConfig& cfg) {
    if (cfg.data == "rankine") return InitialVorticitySpec::rankine(cfg.omega0, cfg.radius);
    if (cfg.data == "lamb_oseen")
        return InitialVorticitySpec::lamb_oseen(cfg.omega0, cfg.radius);
    return InitialVorticitySpec::sign_changing_pair(cfg.omega0, cfg.radius,
                                                    {-1.5 * cfg.radius, 0.0},
                                                    {1.5 * cfg.radius, 0.0});
}

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what(), "");
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object", "");

    RunConfig cfg;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "command")
                cfg.command = value.get<std::string>();
            else if (key == "data")
                cfg.data = value.get<std::string>();
            else if (key == "omega0")
                cfg.omega0 = value.get<double>();
            else if (key == "radius")
                cfg.radius = value.get<double>();
            else if (key == "eps")
                cfg.eps = value.get<double>();
            else if (key == "dt")
                cfg.dt = value.get<double>();
            else if (key == "T")
                cfg.T = value.get<double>();
            else if (key == "n")
                cfg.n = value.get<int>();
            else if (key == "theta")
                cfg.theta = value.get<double>();
            else if (key == "order")
                cfg.order = value.get<int>();
            else if (key == "levels")
                cfg.levels = value.get<int>();
            else if (key == "mode")
                cfg.mode = value.get<std::string>();
            else if (key == "delta")
                cfg.delta = value.get<double>();
            else if (key == "gamma")
                cfg.gamma = value.get<double>();
            else if (key == "r")
                cfg.r = value.get<double>();
            else if (key == "out")
                cfg.out = value.get<std::string>();
            else if (key == "deterministic")
                cfg.deterministic = value.get<bool>();
            else if (key == "threads")
                cfg.threads = value.get<int>();
            else if (key == "plots")
                cfg.plots = value.get<bool>();
            else
                throw ConfigError("unknown config key \"" + key + "\"", key);
        } catch (const json::exception&) {
            throw ConfigError("config key \"" + key + "\" has the wrong type", key);
        }
    }
    validate(cfg);
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path, "");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate(const RunConfig& cfg) {
    if (!one_of(cfg.command, kCommands))
        throw ConfigError("config key \"command\" must name a subcommand", "command");
    if (!one_of(cfg.data, kDataKinds))
        throw ConfigError("config key \"data\" must name an initial datum", "data");
    if (!one_of(cfg.mode, kModes))
        throw ConfigError("config key \"mode\" must be strong_l1 or weak_oscillatory",
                          "mode");
    if (!std::isfinite(cfg.omega0))
        throw ConfigError("config key \"omega0\" must be finite", "omega0");
    require_positive(cfg.radius, "radius");
    require_positive(cfg.eps, "eps");
    require_positive(cfg.dt, "dt");
    require_positive(cfg.T, "T");
    require_positive(cfg.n, "n");
    require_positive(cfg.theta, "theta");
    require_positive(cfg.order, "order");
    require_positive(cfg.levels, "levels");
    require_positive(cfg.delta, "delta");
    require_positive(cfg.gamma, "gamma");
    require_positive(cfg.r, "r");
    require_positive(cfg.threads, "threads");
    if (cfg.out.empty()) throw ConfigError("config key \"out\" must be a path", "out");
}

std::string effective_config_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["command"] = cfg.command;
    j["data"] = cfg.data;
    j["omega0"] = cfg.omega0;
    j["radius"] = cfg.radius;
    j["eps"] = cfg.eps;
    j["dt"] = cfg.dt;
    j["T"] = cfg.T;
    j["n"] = cfg.n;
    j["theta"] = cfg.theta;
    j["order"] = cfg.order;
    j["levels"] = cfg.levels;
    j["mode"] = cfg.mode;
    j["delta"] = cfg.delta;
    j["gamma"] = cfg.gamma;
    j["r"] = cfg.r;
    j["out"] = cfg.out;
    j["deterministic"] = cfg.deterministic;
    j["threads"] = cfg.threads;
    j["plots"] = cfg.plots;
    return j.dump(2) + "\n";
}

int dispatch(const RunConfig& cfg) {
    try {
        validate(cfg);
        io::write_text(std::filesystem::path(cfg.out) / "effective_config.json",
                       effective_config_json(cfg));
        if (cfg.command == "simulate") return run_simulate(cfg);
        if (cfg.command == "verify") return run_verify(cfg);
        if (cfg.command == "stability") return run_stability(cfg);
        if (cfg.command == "existence") return run_existence(cfg);
        if (cfg.command == "kernel-check") return run_kernel_check(cfg);
        return run_probe(cfg);
    } catch (const BlowUpError&) {
        return 3;
    } catch (const ConfigError&) {
        return 2;
    } catch (const std::invalid_argument&) {
        return 2;
    } catch (const CoverageError&) {
        return 2;
    }
}

}  // namespace vblob
