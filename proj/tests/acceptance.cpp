// Acceptance gate: one pass/fail line per criterion, exit code = failures.
// All tolerances are pinned here, next to the check that uses them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "vblob/diagnostics.hpp"
#include "vblob/experiments.hpp"
#include "vblob/io.hpp"
#include "vblob/kernel.hpp"
#include "vblob/weakform.hpp"

using namespace vblob;

namespace {

using clk = std::chrono::steady_clock;

double seconds_since(clk::time_point t0) {
    return std::chrono::duration<double>(clk::now() - t0).count();
}

int g_failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail) {
    std::printf("criterion %2d  %-34s %s  %s\n", idx, name, ok ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

std::vector<Vec2> square_labels(double half, double spacing) {
    std::vector<Vec2> out;
    const int n = static_cast<int>(std::round(2.0 * half / spacing));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            out.push_back({-half + (i + 0.5) * spacing, -half + (j + 0.5) * spacing});
    return out;
}

// --- 1: point-vortex exactness ------------------------------------------

void criterion_1() {
    const auto t0 = clk::now();
    VortexBlobField f;
    f.positions = {{0.0, 0.0}};
    f.weights = {kTwoPi};
    f.blob_scale = 1e-3;
    FlowConfig cfg;
    cfg.dt = 1e-3;
    cfg.store_stride = 100;
    const auto flow = integrate_flow(f, kTwoPi, cfg, {{1.0, 0.0}});
    const double err = (flow.states.back()[0] - Vec2{1.0, 0.0}).norm();
    const double elapsed = seconds_since(t0);
    report(1, "point-vortex revolution", err <= 1e-5 && elapsed < 10.0,
           fmt("position error %.2e (tol 1e-05), %.1f s (budget 10 s)", err, elapsed));
}

// --- 2, 3, 7: shared Rankine fixture ------------------------------------

struct RankineFixture {
    InitialVorticitySpec spec = InitialVorticitySpec::rankine(1.0, 1.0);
    VortexBlobField field0;
    FlowMap run;        // eps 0.02, dt 1e-3
    FlowMap run_coarse; // eps 0.04, dt 2e-3, same T
};

RankineFixture make_fixture() {
    RankineFixture fx;
    fx.field0 = discretize(fx.spec, 0.02, 113);
    FlowConfig cfg;
    cfg.dt = 1e-3;
    cfg.coupling = Coupling::self_consistent;
    cfg.store_stride = 20;
    const auto labels = square_labels(2.6, 0.08);
    fx.run = integrate_flow(fx.field0, 1.0, cfg, labels);
    FlowConfig coarse = cfg;
    coarse.dt = 2e-3;
    coarse.store_stride = 20;
    fx.run_coarse = integrate_flow(discretize(fx.spec, 0.04, 56), 1.0, coarse, labels);
    return fx;
}

void criterion_2(const RankineFixture& fx) {
    const auto grid = GridSpec::covering({{-1.6, -1.6}, {1.6, 1.6}}, 0.02);
    const auto centers = grid_centers(grid);
    const auto push = pushforward_vorticity(fx.spec, fx.run, 1.0, centers);
    double l1_err = 0.0, l1_ref = 0.0;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const double ref = fx.spec.value(centers[i]);
        l1_err += std::abs(push.values[i] - ref) * grid.cell_area();
        l1_ref += std::abs(ref) * grid.cell_area();
    }
    const double rel = l1_err / l1_ref;

    const VelocityEvaluator eval(run_field_at(fx.run, fx.run.times.size() - 1));
    double worst = 0.0;
    for (const double r : {0.5, 2.0})
        for (int k = 0; k < 16; ++k) {
            const double a = kTwoPi * k / 16.0;
            const double speed = eval.at({r * std::cos(a), r * std::sin(a)}).norm();
            worst = std::max(worst, std::abs(speed - 0.25) / 0.25);
        }
    report(2, "rankine steady state", rel <= 0.02 && worst <= 0.01,
           fmt("pushforward L1 error %.2e rel (tol 0.02), speed error %.2e rel (tol 0.01)",
               rel, worst));
}

struct ResidualSet {
    ResidualReport renorm, sym_w, sym_v, weak_v;
};

ResidualSet all_residuals(const FlowMap& run, const InitialVorticitySpec& spec,
                          const VortexBlobField& field0) {
    const auto profile = TimeProfile::vanishing_at(run.t_end());
    const auto phi = TestFunction::make_bump({0.0, 0.0}, 2.0, profile);
    const auto phibar = TestFunction::divfree_from_stream(phi);
    ResidualSet rs;
    rs.renorm = renormalized_residual(run, Nonlinearity::arctan_fn(), phi, spec);
    rs.sym_w = symmetrized_vorticity_residual(run, phi, field0);
    rs.sym_v = symmetrized_velocity_residual(run, phibar, field0, 0.04);
    rs.weak_v = weak_velocity_residual(run, phibar, field0, 0.04);
    return rs;
}

double natural_scale(const ResidualReport& r) {
    return std::max({std::abs(r.time_term), std::abs(r.interaction_term),
                     std::abs(r.initial_term), 1.0});
}

void criterion_3(const RankineFixture& fx) {
    const auto fine = all_residuals(fx.run, fx.spec, fx.field0);
    const auto coarse =
        all_residuals(fx.run_coarse, fx.spec, fx.run_coarse.base_field);

    const ResidualReport* fr[] = {&fine.renorm, &fine.sym_w, &fine.sym_v, &fine.weak_v};
    const ResidualReport* cr[] = {&coarse.renorm, &coarse.sym_w, &coarse.sym_v,
                                  &coarse.weak_v};
    const char* tags[] = {"renorm", "sym-w", "sym-v", "weak-v"};
    bool small = true, shrinks = true;
    std::string detail;
    for (int i = 0; i < 4; ++i) {
        const double scale = natural_scale(*fr[i]);
        const double rel = std::abs(fr[i]->residual) / scale;
        small = small && rel <= 1e-3;
        // ties below 1e-6 of scale count as converged to the quadrature floor
        const bool dec = std::abs(fr[i]->residual) < std::abs(cr[i]->residual) ||
                         std::abs(fr[i]->residual) <= 1e-6 * scale;
        shrinks = shrinks && dec;
        detail += fmt("%s %.1e/%.1e ", tags[i], std::abs(fr[i]->residual),
                      std::abs(cr[i]->residual));
    }

    // identity gap, measured against the unsigned bilinear-form magnitude
    // (the signed sides nearly cancel for radially symmetric data)
    const auto psi = TestFunction::make_bump({0.6, 0.2}, 1.8, TimeProfile::constant());
    const auto phibar = TestFunction::divfree_from_stream(psi);
    const auto field_T = run_field_at(fx.run, fx.run.times.size() - 1);
    const auto gap = sym_weak_identity_gap(field_T, phibar, 0.02);
    const VelocityEvaluator eval(field_T);
    const auto grid = GridSpec::covering(
        {{0.6 - 1.8, 0.2 - 1.8}, {0.6 + 1.8, 0.2 + 1.8}}, 0.02);
    const auto centers = grid_centers(grid);
    const auto v = eval(centers);
    double unsigned_tensor = 0.0;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const auto j = phibar.jacobian(0.0, centers[i]);
        unsigned_tensor += std::abs(j.contract(v[i], v[i])) * grid.cell_area();
    }
    const double gap_rel = gap.gap / unsigned_tensor;

    report(3, "weak-form residuals", small && shrinks && gap_rel <= 1e-3,
           detail + fmt("(rel tol 1e-03, fine<=coarse), gap %.1e rel (tol 1e-03)",
                        gap_rel));
}

// --- 4: equivalence identity ---------------------------------------------

void criterion_4() {
    const auto psi = TestFunction::make_bump({0.2, -0.1}, 1.5, TimeProfile::plateau(0.5, 1.0));
    const auto phibar = TestFunction::divfree_from_stream(psi);
    std::mt19937 rng(20260826);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const Vec2 x{u(rng), u(rng)}, y{u(rng), u(rng)};
        worst = std::max(worst,
                         std::abs(barh_phi(phibar, 0.3, x, y) - h_phi(psi, 0.3, x, y)));
    }
    report(4, "equivalence identity", worst <= 1e-12,
           fmt("max |barH - H| %.2e on 10^4 samples (tol 1e-12)", worst));
}

// --- 5: kernel scaling ----------------------------------------------------

void criterion_5() {
    const auto t0 = clk::now();
    const auto rep =
        run_kernel_scaling_experiment({4.0 / 3.0, 1.5, 5.0 / 3.0}, {0.4, 0.2, 0.1, 0.05});
    bool ok = true;
    std::string detail;
    for (const auto& e : rep.entries) {
        ok = ok && !e.inconclusive && e.slope >= e.alpha_target - 0.05 &&
             e.slope <= e.alpha_target + 0.15;
        detail += fmt("p %.2f slope %.3f (target %.3f) ", e.p, e.slope, e.alpha_target);
    }
    const double elapsed = seconds_since(t0);
    ok = ok && elapsed < 60.0;
    report(5, "kernel translation scaling", ok,
           detail + fmt("window [a-0.05,a+0.15], %.1f s (budget 60 s)", elapsed));
}

// --- 6: HLS bound ----------------------------------------------------------

void criterion_6() {
    std::vector<VortexBlobField> corpus;
    auto add = [&](const InitialVorticitySpec& s, int n) {
        corpus.push_back(discretize(s, 0.05, n));
    };
    add(InitialVorticitySpec::rankine(1.0, 1.0), 64);
    add(InitialVorticitySpec::rankine(2.0, 0.7), 64);
    add(InitialVorticitySpec::rankine(0.5, 1.5), 96);
    add(InitialVorticitySpec::rankine(1.0, 1.0, {0.8, -0.4}), 64);
    add(InitialVorticitySpec::lamb_oseen(1.0, 0.5), 96);
    add(InitialVorticitySpec::lamb_oseen(-2.0, 0.3), 96);
    add(InitialVorticitySpec::lamb_oseen(0.5, 1.0), 128);
    add(InitialVorticitySpec::sign_changing_pair(1.0, 0.6, {1.0, 0.0}, {-1.0, 0.0}), 96);
    add(InitialVorticitySpec::patch_union({{{-0.9, 0.0}, 0.5, 1.0}, {{1.1, 0.3}, 0.4, -0.7}}),
        96);
    add(InitialVorticitySpec::patch_union(
            {{{0.0, 0.0}, 0.8, 1.0}, {{1.5, 0.5}, 0.3, 2.0}, {{-1.2, -0.8}, 0.4, 0.5}}),
        112);

    // empirical uniform bound on m2(v)/l1(omega) across the corpus
    const double kHlsConstant = 0.5;
    double worst_ratio = 0.0, worst_drift = 0.0;
    for (const auto& f : corpus) {
        const double r1 = hls_ratio(f, 3.0, 0.024);
        const double r2 = hls_ratio(f, 3.0, 0.012);
        worst_ratio = std::max(worst_ratio, std::max(r1, r2));
        worst_drift = std::max(worst_drift, std::abs(r2 - r1) / r1);
    }

    const auto g = GridSpec::covering({{-1.0, -1.0}, {1.0, 1.0}}, 2.0 / 512);
    SampledScalarField u{g, {}};
    for (const auto& c : grid_centers(g)) u.values.push_back(1.0 / c.norm());
    const double m2 = m2_seminorm(u, 1.0);
    const double m2_err = std::abs(m2 - std::sqrt(kTwoPi / 2.0)) / std::sqrt(kTwoPi / 2.0);

    report(6, "hls bound over 10-field corpus",
           worst_ratio <= kHlsConstant && worst_drift <= 0.20 && m2_err <= 0.03,
           fmt("max ratio %.3f (bound %.2f), refinement drift %.1f%% (tol 20%%), "
               "m2(1/|x|) error %.2e rel (tol 0.03)",
               worst_ratio, kHlsConstant, 100.0 * worst_drift, m2_err));
}

// --- 7: conservation suite -------------------------------------------------

void criterion_7(const RankineFixture& fx) {
    bool circ_exact = true;
    for (const FlowMap* run : {&fx.run, &fx.run_coarse}) {
        const double c0 = total_circulation(run->base_field);
        for (std::size_t k = 0; k < run->times.size(); ++k)
            circ_exact = circ_exact && total_circulation(run_field_at(*run, k)) == c0;
    }

    const double comp = compressibility_estimate(fx.run, 0.0, 1.0);

    // forward-backward closure order, strong single blob as in the flow suite
    VortexBlobField f;
    f.positions = {{0.0, 0.0}};
    f.weights = {25.0};
    f.blob_scale = 0.6;
    const std::vector<Vec2> labels{{1.0, 0.0}, {0.0, 0.7}, {-0.5, -0.5}};
    std::vector<double> errs;
    for (const double dt : {0.05, 0.025, 0.0125}) {
        FlowConfig cfg;
        cfg.dt = dt;
        const auto flow = integrate_flow(f, 1.0, cfg, labels);
        const auto back = backward_flow(flow, 1.0);
        double e = 0.0;
        for (std::size_t i = 0; i < labels.size(); ++i)
            e = std::max(e, (back[i] - labels[i]).norm());
        errs.push_back(e);
    }
    const double order =
        std::min(std::log2(errs[0] / errs[1]), std::log2(errs[1] / errs[2]));

    report(7, "conservation suite",
           circ_exact && comp >= 0.95 && comp <= 1.05 && order >= 3.9,
           fmt("circulation bit-exact %s, compressibility %.4f (tol 1+-0.05), "
               "composition order %.2f (tol 3.9)",
               circ_exact ? "yes" : "no", comp, order));
}

// --- 8: stability, strong mode ---------------------------------------------

void criterion_8() {
    const auto t0 = clk::now();
    const auto spec = InitialVorticitySpec::rankine(1.0, 1.0);
    const auto labels = square_labels(2.4, 0.08);
    FlowConfig cfg;
    cfg.dt = 0.01;
    cfg.coupling = Coupling::self_consistent;
    cfg.store_stride = 2;
    std::vector<FlowMap> runs;
    const int n_axis[] = {31, 63, 125};
    const double eps[] = {0.08, 0.04, 0.02};
    for (int k = 0; k < 3; ++k)
        runs.push_back(integrate_flow(discretize(spec, eps[k], n_axis[k]), 1.0, cfg, labels));

    RunDistances d[2];
    double flow_fine_gamma[2];
    for (int k = 0; k < 2; ++k) {
        d[k] = run_distances(runs[k], runs[2], 0.05, 2.0, 0.05);
        double sup = 0.0;
        for (int si = 1; si <= 5; ++si)
            for (int ti = 1; ti <= 5; ++ti)
                sup = std::max(sup, flow_measure_distance(runs[k], runs[2], 0.005, 2.0,
                                                          0.2 * si, 0.2 * ti));
        flow_fine_gamma[k] = sup;
    }

    // at gamma = 0.05 the trajectories already agree below the threshold, so
    // both areas sit at the exact-zero floor; a shared floor passes only when
    // the strict decrease is visible at gamma = 0.005
    const bool flow_ok =
        d[0].flow > d[1].flow ||
        (d[0].flow == 0.0 && d[1].flow == 0.0 && flow_fine_gamma[0] > flow_fine_gamma[1]);
    const bool ok = flow_ok && d[0].omega_l1 > d[1].omega_l1 &&
                    d[0].velocity_l1 > d[1].velocity_l1;
    const double elapsed = seconds_since(t0);
    report(8, "stability, strong mode", ok && elapsed < 600.0,
           fmt("flow %.3g/%.3g (gamma 5e-3: %.3g/%.3g), omega %.3g/%.3g, "
               "v %.3g/%.3g, %.0f s (budget 600 s)",
               d[0].flow, d[1].flow, flow_fine_gamma[0], flow_fine_gamma[1], d[0].omega_l1,
               d[1].omega_l1, d[0].velocity_l1, d[1].velocity_l1, elapsed));
}

// --- 9: stability, weak mode -------------------------------------------------

void criterion_9() {
    FlowConfig cfg;
    cfg.dt = 0.01;
    cfg.coupling = Coupling::self_consistent;
    cfg.store_stride = 2;
    const auto rep = run_stability_experiment(InitialVorticitySpec::rankine(1.0, 1.0),
                                              Perturbation::weak_oscillatory, 3, 1.0, cfg);
    auto worst_pairing = [&](std::size_t k) {
        double w = 0.0;
        for (const double p : rep.levels[k].pairings) w = std::max(w, std::abs(p));
        return w;
    };
    // checkerboard data pairs against the dictionary like a weak-null sequence
    bool pair_ok = worst_pairing(2) < worst_pairing(0);
    for (std::size_t k = 0; k < 3; ++k)
        pair_ok = pair_ok && worst_pairing(k) <= 1e-3 * rep.omega_l1_scale;
    const bool strong_gap = rep.min_consecutive_omega_l1 > 0.1 * rep.omega_l1_scale;
    report(9, "stability, weak mode",
           rep.flow_decreasing && rep.velocity_decreasing && pair_ok && strong_gap,
           fmt("flow dec %s, v dec %s, pairings %.1e/%.1e/%.1e (tol 1e-3*l1, fine<coarse), "
               "consecutive omega L1 %.3f (floor %.3f)",
               rep.flow_decreasing ? "yes" : "no", rep.velocity_decreasing ? "yes" : "no",
               worst_pairing(0), worst_pairing(1), worst_pairing(2),
               rep.min_consecutive_omega_l1, 0.1 * rep.omega_l1_scale));
}

// --- 10: fundamental-estimate probe ------------------------------------------

void criterion_10() {
    const auto spec = InitialVorticitySpec::rankine(1.0, 1.0);
    const auto field = discretize(spec, 0.08, 32);
    FlowConfig cfg;
    cfg.dt = 0.01;
    cfg.coupling = Coupling::self_consistent;
    const auto labels = square_labels(2.2, 0.05);
    const auto base = integrate_flow(field, 0.5, cfg, labels);

    // gamma sits where the coarsest perturbation stays below saturation of
    // the full ball and the finest falls through the label-area floor
    const double gamma = 3e-4;
    std::vector<double> dv, dist;
    for (const double delta : {1e-2, 1e-3, 1e-4}) {
        auto pert = field;
        pert.weights[pert.weights.size() / 2] += delta;
        const auto run = integrate_flow(pert, 0.5, cfg, labels);
        const auto rep = run_fundamental_estimate_probe(base, run, {gamma}, 2.0, 0.0);
        dv.push_back(rep.dv_l1.back());
        dist.push_back(rep.sup_distances[0]);
    }
    // exact zeros certify faster-than-linear decay but cannot enter the fit
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < dv.size(); ++i) {
        if (dist[i] > 0.0) {
            xs.push_back(dv[i]);
            ys.push_back(dist[i]);
        }
    }
    bool zeros_at_tail = true;
    for (std::size_t i = 1; i < dist.size(); ++i)
        if (dist[i] > 0.0 && dist[i - 1] == 0.0) zeros_at_tail = false;
    const double slope = xs.size() >= 2 ? fit_loglog_slope(xs, ys) : 0.0;
    report(10, "fundamental-estimate probe",
           xs.size() >= 2 && zeros_at_tail && slope >= 0.9,
           fmt("distances %.3g/%.3g/%.3g at gamma %.0e, slope %.2f (tol 0.9, zeros only "
               "past the smallest dv)",
               dist[0], dist[1], dist[2], gamma, slope));
}

// --- 11: treecode -------------------------------------------------------------

void criterion_11() {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto random_field = [&](std::size_t n) {
        VortexBlobField f;
        f.blob_scale = 0.01;
        for (std::size_t i = 0; i < n; ++i) {
            f.positions.push_back({u(rng), u(rng)});
            f.weights.push_back(u(rng) * 4.0 / static_cast<double>(n));
        }
        return f;
    };

    const auto small = random_field(10000);
    const auto direct = velocity_direct(small, small.positions);
    const auto tree = velocity_treecode(small, small.positions, 0.3, 8);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < direct.size(); ++i) {
        num = std::max(num, (tree.velocity[i] - direct[i]).norm());
        den = std::max(den, direct[i].norm());
    }
    const double rel = num / den;

    const auto big = random_field(100000);
    auto t0 = clk::now();
    const auto vd = velocity_direct(big, big.positions);
    const double t_direct = seconds_since(t0);
    t0 = clk::now();
    const auto vt = velocity_treecode(big, big.positions, 0.3, 8);
    const double t_tree = seconds_since(t0);
    const double speedup = t_direct / t_tree;
    (void)vd;
    (void)vt;

    report(11, "treecode accuracy and speedup", rel <= 1e-6 && speedup >= 10.0,
           fmt("relative error %.2e (tol 1e-06), speedup %.1fx at N=M=1e5 (tol 10x, "
               "direct %.1f s, tree %.2f s)",
               rel, speedup, t_direct, t_tree));
}

}  // namespace

int main() {
    const auto t0 = clk::now();
    criterion_1();
    const auto fx = make_fixture();
    criterion_2(fx);
    criterion_3(fx);
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7(fx);
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    std::printf("%d/11 criteria passed, %.0f s total\n", 11 - g_failures,
                seconds_since(t0));
    return g_failures;
}
