#include "vblob/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "vblob/errors.hpp"
#include "vblob/diagnostics.hpp"
#include "vblob/kernel.hpp"
#include "vblob/weakform.hpp"

namespace vblob {
namespace {

std::vector<double> checkpoints(double T, int n = 5) {
    std::vector<double> out;
    for (int k = 0; k < n; ++k) out.push_back(T * k / static_cast<double>(n - 1));
    return out;
}

std::size_t nearest_index(const std::vector<double>& times, double t) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < times.size(); ++k)
        if (std::abs(times[k] - t) < std::abs(times[best] - t)) best = k;
    return best;
}

std::vector<Vec2> ball_nodes(double r, double spacing) {
    const GridSpec g = GridSpec::covering({{-r, -r}, {r, r}}, spacing);
    std::vector<Vec2> out;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const Vec2 x = g.center(i, j);
            if (x.norm2() <= r * r) out.push_back(x);
        }
    return out;
}

double omega_l1_at(const FlowMap& a, const FlowMap& b, double t, double r,
                   double spacing) {
    const GridSpec g = GridSpec::covering({{-r, -r}, {r, r}}, spacing);
    const auto fa = run_field_at(a, nearest_index(a.times, t));
    const auto fb = run_field_at(b, nearest_index(b.times, t));
    const auto wa = eval_vorticity_grid(fa, g);
    const auto wb = eval_vorticity_grid(fb, g);
    double s = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const Vec2 x = g.center(i, j);
            if (x.norm2() > r * r) continue;
            const std::size_t n = static_cast<std::size_t>(j) * g.nx + i;
            s += std::abs(wa.values[n] - wb.values[n]);
        }
    return s * g.cell_area();
}

double omega_l1_max(const FlowMap& a, const FlowMap& b, double r, double spacing) {
    double worst = 0.0;
    for (const double t : checkpoints(std::min(a.t_end(), b.t_end())))
        worst = std::max(worst, omega_l1_at(a, b, t, r, spacing));
    return worst;
}

double velocity_l1_at(const FlowMap& a, const FlowMap& b, double t,
                      const std::vector<Vec2>& nodes, double cell_area) {
    const auto va = a.velocity_at(t, nodes);
    const auto vb = b.velocity_at(t, nodes);
    double s = 0.0;
    for (std::size_t n = 0; n < nodes.size(); ++n) s += (va[n] - vb[n]).norm();
    return s * cell_area;
}

std::vector<Vec2> square_labels(double half, double h) {
    std::vector<Vec2> out;
    const int n = std::max(2, static_cast<int>(std::round(2.0 * half / h)));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            out.push_back({-half + (i + 0.5) * h, -half + (j + 0.5) * h});
    return out;
}

int blobs_per_axis(const InitialVorticitySpec& spec, double eps) {
    const Vec2 ext = spec.support_box().extent();
    const double span = std::max(ext.x1, ext.x2);
    return std::clamp(static_cast<int>(std::ceil(span / (0.8 * eps))), 16, 160);
}

/// Checkerboard sign flip at scale 1/n; |weights| unchanged.
void apply_checkerboard(VortexBlobField& f, int n) {
    for (std::size_t i = 0; i < f.positions.size(); ++i) {
        const long cx = static_cast<long>(std::floor(f.positions[i].x1 * n));
        const long cy = static_cast<long>(std::floor(f.positions[i].x2 * n));
        if (((cx + cy) & 1) != 0) f.weights[i] = -f.weights[i];
    }
}

// a distance pair that already sits at the exact zero of the counting floor is
// treated as converged, not as a monotonicity failure
bool improved(double fine, double coarse) {
    return fine < coarse || (fine == 0.0 && coarse == 0.0);
}

void reject_unless_equi_integrable(const std::vector<VortexBlobField>& family) {
    for (const auto& f : family) {
        const double l1 = l1_norm(f);
        if (l1 == 0.0) continue;
        if (equi_integrability_modulus(f, 0.05) > 0.8 * l1)
            throw ParameterError(
                "perturbation family is not uniformly equi-integrable");
    }
}

}  // namespace

const std::vector<std::function<double(Vec2)>>& weak_dictionary() {
    static const std::vector<std::function<double(Vec2)>> dict = [] {
        std::vector<std::function<double(Vec2)>> d;
        const Vec2 centers[8] = {{0.0, 0.0}, {1.0, 0.0},  {-1.0, 0.0}, {0.0, 1.0},
                                 {0.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}, {0.5, -0.5}};
        for (const Vec2 c : centers)
            d.push_back([c](Vec2 x) { return std::exp(-(x - c).norm2()); });
        d.push_back([](Vec2 x) { return std::sin(x.x1); });
        d.push_back([](Vec2 x) { return std::cos(x.x1); });
        d.push_back([](Vec2 x) { return std::sin(x.x2); });
        d.push_back([](Vec2 x) { return std::cos(x.x2); });
        d.push_back([](Vec2 x) { return std::sin(x.x1 + x.x2); });
        d.push_back([](Vec2 x) { return std::sin(2.0 * x.x1); });
        d.push_back([](Vec2 x) { return std::cos(2.0 * x.x2); });
        d.push_back([](Vec2 x) { return std::sin(x.x1) * std::cos(x.x2); });
        return d;
    }();
    return dict;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ParameterError("slope fit needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!(x[k] > 0.0) || !(y[k] > 0.0))
            throw ParameterError("slope fit needs positive samples");
        const double lx = std::log(x[k]), ly = std::log(y[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

RunDistances run_distances(const FlowMap& a, const FlowMap& b, double gamma, double r,
                           double grid_spacing) {
    RunDistances d;
    const double T = std::min(a.t_end(), b.t_end());
    const auto lattice = checkpoints(T);
    for (const double s : lattice)
        for (const double t : lattice)
            d.flow = std::max(d.flow, flow_measure_distance(a, b, gamma, r, s, t));
    d.omega_l1 = omega_l1_max(a, b, r, grid_spacing);
    const auto nodes = ball_nodes(r, grid_spacing);
    for (const double t : lattice)
        d.velocity_l1 = std::max(
            d.velocity_l1, velocity_l1_at(a, b, t, nodes, grid_spacing * grid_spacing));
    return d;
}

ConvergenceReport run_existence_pipeline(const InitialVorticitySpec& spec,
                                         std::vector<double> eps_levels, double T,
                                         const FlowConfig& cfg) {
    if (eps_levels.size() < 3)
        throw ParameterError("existence pipeline needs at least 3 blob scales");
    std::sort(eps_levels.begin(), eps_levels.end(), std::greater<>());

    const auto box = spec.support_box();
    const double r = 0.5 * std::max(box.extent().x1, box.extent().x2) + 1.0;
    const auto labels = square_labels(r + 0.5, 0.08);

    FlowConfig run_cfg = cfg;
    run_cfg.coupling = Coupling::self_consistent;

    ConvergenceReport rep;
    rep.eps_levels = eps_levels;
    std::vector<FlowMap> runs;
    std::vector<std::vector<double>> pf_values;
    const auto pf_nodes = ball_nodes(r - 0.5, 0.1);
    for (const double eps : eps_levels) {
        const auto field = discretize(spec, eps, blobs_per_axis(spec, eps));
        rep.circulations.push_back(total_circulation(field));
        runs.push_back(integrate_flow(field, T, run_cfg, labels));
        const auto pf = pushforward_vorticity(spec, runs.back(), T, pf_nodes);
        pf_values.push_back(pf.values);
    }

    for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
        ConvergencePair pair;
        pair.eps_coarse = eps_levels[k];
        pair.eps_fine = eps_levels[k + 1];
        pair.distances = run_distances(runs[k], runs[k + 1], 0.05, r, 0.05);
        double s = 0.0;
        for (std::size_t n = 0; n < pf_nodes.size(); ++n)
            s += std::abs(pf_values[k][n] - pf_values[k + 1][n]);
        pair.pushforward_l1 = s * 0.1 * 0.1;
        rep.pairs.push_back(pair);
    }

    const auto& last = rep.pairs.back();
    const auto& prev = rep.pairs[rep.pairs.size() - 2];
    rep.fine_levels_monotone = improved(last.distances.flow, prev.distances.flow) &&
                               improved(last.distances.omega_l1, prev.distances.omega_l1) &&
                               improved(last.distances.velocity_l1, prev.distances.velocity_l1);
    for (std::size_t k = 0; k + 2 < rep.pairs.size(); ++k) {
        const auto& c = rep.pairs[k];
        const auto& f = rep.pairs[k + 1];
        if (!improved(f.distances.flow, c.distances.flow) ||
            !improved(f.distances.omega_l1, c.distances.omega_l1) ||
            !improved(f.distances.velocity_l1, c.distances.velocity_l1))
            rep.warnings.push_back("non-monotone distances at a coarse level pair");
    }
    return rep;
}

StabilityReport run_stability_experiment(const InitialVorticitySpec& base,
                                         Perturbation mode, int n_levels, double T,
                                         const FlowConfig& cfg) {
    if (n_levels < 1) throw ParameterError("stability experiment needs n_levels >= 1");

    std::vector<VortexBlobField> fields;
    std::vector<double> params;
    for (int k = 0; k < n_levels; ++k) {
        if (mode == Perturbation::strong_l1) {
            const double eps = 0.08 / std::pow(2.0, k);
            fields.push_back(discretize(base, eps, blobs_per_axis(base, eps)));
            params.push_back(eps);
        } else {
            const int n = 8 << k;
            auto f = discretize(base, 0.02, 128);
            apply_checkerboard(f, n);
            fields.push_back(std::move(f));
            params.push_back(1.0 / n);
        }
    }
    reject_unless_equi_integrable(fields);

    const auto box = base.support_box();
    const double r = 0.5 * std::max(box.extent().x1, box.extent().x2) + 1.0;
    const auto labels = square_labels(r + 0.5, 0.08);
    FlowConfig run_cfg = cfg;
    run_cfg.coupling = Coupling::self_consistent;

    std::vector<FlowMap> runs;
    for (const auto& f : fields) runs.push_back(integrate_flow(f, T, run_cfg, labels));

    StabilityReport rep;
    rep.mode = mode;
    rep.omega_l1_scale = l1_norm(fields.back());
    for (const auto& g : weak_dictionary())
        rep.pairings_finest.push_back(weak_l1_pairing(fields.back(), g));
    for (const auto& f : fields)
        rep.equi_integrability_bound =
            std::max(rep.equi_integrability_bound, equi_integrability_modulus(f, 0.05));

    for (int k = 0; k < n_levels; ++k) {
        StabilityLevel lvl;
        lvl.level_param = params[k];
        for (const auto& g : weak_dictionary())
            lvl.pairings.push_back(weak_l1_pairing(fields[k], g));
        if (k + 1 < n_levels) {
            // oscillatory velocities are an order smaller, so the displacement
            // threshold must follow
            const double gamma = mode == Perturbation::strong_l1 ? 0.05 : 0.01;
            lvl.to_finest = run_distances(runs[k], runs.back(), gamma, r, 0.05);
            lvl.omega_l1_consecutive = omega_l1_max(runs[k], runs[k + 1], r, 0.05);
        }
        rep.levels.push_back(std::move(lvl));
    }

    // vacuously true until there are at least two comparisons
    rep.flow_decreasing = rep.velocity_decreasing = rep.omega_decreasing = true;
    rep.min_consecutive_omega_l1 = n_levels > 1 ? 1e300 : 0.0;
    for (int k = 0; k + 2 < n_levels; ++k) {
        const auto& c = rep.levels[k].to_finest;
        const auto& f = rep.levels[k + 1].to_finest;
        rep.flow_decreasing = rep.flow_decreasing && improved(f.flow, c.flow);
        rep.velocity_decreasing =
            rep.velocity_decreasing && improved(f.velocity_l1, c.velocity_l1);
        rep.omega_decreasing =
            rep.omega_decreasing && improved(rep.levels[k + 1].omega_l1_consecutive,
                                             rep.levels[k].omega_l1_consecutive);
    }
    for (int k = 0; k + 1 < n_levels; ++k)
        rep.min_consecutive_omega_l1 =
            std::min(rep.min_consecutive_omega_l1, rep.levels[k].omega_l1_consecutive);
    return rep;
}

SlopeReport run_kernel_scaling_experiment(const std::vector<double>& p_list,
                                          std::vector<double> h_list) {
    std::sort(h_list.begin(), h_list.end());
    h_list.erase(std::unique(h_list.begin(), h_list.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-15; }),
                 h_list.end());
    if (h_list.size() < 2)
        throw ParameterError("kernel scaling needs at least two distinct offsets");

    SlopeReport rep;
    for (const double p : p_list) {
        if (!(p > 1.0) || !(p < 2.0))
            throw ParameterError("kernel scaling requires 1 < p < 2");
        SlopeEntry e;
        e.p = p;
        e.alpha_target = 2.0 / p - 1.0;
        for (const double h : h_list) {
            const auto tn = kernel_translation_norm({h, 0.0}, p);
            e.h.push_back(h);
            e.values.push_back(tn.value);
            e.quadrature_errors.push_back(tn.quadrature_error);
            if (tn.quadrature_error > 0.1 * tn.value) e.inconclusive = true;
        }
        e.slope = fit_loglog_slope(e.h, e.values);
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

ProbeReport run_fundamental_estimate_probe(const FlowMap& a, const FlowMap& b,
                                           const std::vector<double>& gamma_list,
                                           double r, double eta) {
    ProbeReport rep;
    rep.gammas = gamma_list;
    const double T = std::min(a.t_end(), b.t_end());
    const auto lattice = checkpoints(T);
    for (const double gamma : gamma_list) {
        double sup = 0.0;
        for (const double s : lattice)
            for (const double t : lattice)
                sup = std::max(sup, flow_measure_distance(a, b, gamma, r, s, t));
        rep.sup_distances.push_back(sup);
    }

    for (const double lambda : {r, 2.0 * r, 4.0 * r}) {
        const double spacing = lambda / 30.0;
        const auto nodes = ball_nodes(lambda, spacing);
        std::vector<double> vals;
        for (const double t : lattice)
            vals.push_back(velocity_l1_at(a, b, t, nodes, spacing * spacing));
        double integral = 0.0;
        for (std::size_t k = 1; k < lattice.size(); ++k)
            integral += 0.5 * (lattice[k] - lattice[k - 1]) * (vals[k] + vals[k - 1]);
        rep.lambdas.push_back(lambda);
        rep.dv_l1.push_back(integral);
    }

    if (rep.dv_l1.back() < 1e-14) {
        rep.degenerate = true;
        rep.ratios.assign(gamma_list.size(), 0.0);
    } else {
        for (const double d : rep.sup_distances)
            rep.ratios.push_back(std::max(0.0, d - eta) / rep.dv_l1.back());
    }
    return rep;
}

}  // namespace vblob
