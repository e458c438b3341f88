#include "vblob/weakform.hpp"

#include <algorithm>
#include <cmath>

#include "vblob/errors.hpp"
#include "vblob/kernel.hpp"

namespace vblob {
namespace {

double trapz(const std::vector<double>& t, const std::vector<double>& f) {
    double s = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k)
        s += 0.5 * (t[k] - t[k - 1]) * (f[k] + f[k - 1]);
    return s;
}

/// Trapezoid on every other node (last node kept), for a refinement estimate.
double trapz_coarse(const std::vector<double>& t, const std::vector<double>& f) {
    std::vector<double> tc, fc;
    for (std::size_t k = 0; k < t.size(); k += 2) {
        tc.push_back(t[k]);
        fc.push_back(f[k]);
    }
    if (t.size() % 2 == 0 && !t.empty()) {
        tc.push_back(t.back());
        fc.push_back(f.back());
    }
    return trapz(tc, fc);
}

double time_refinement_error(const std::vector<double>& t, const std::vector<double>& f) {
    if (t.size() < 3) return 0.0;
    return std::abs(trapz(t, f) - trapz_coarse(t, f));
}

std::vector<Vec2> support_nodes(const TestFunction& phi, double spacing) {
    if (!(spacing > 0.0)) throw ParameterError("grid spacing must be positive");
    const Vec2 c = phi.support_center();
    const double r = phi.support_radius();
    const GridSpec g = GridSpec::covering({{c.x1 - r, c.x2 - r}, {c.x1 + r, c.x2 + r}},
                                          spacing);
    std::vector<Vec2> nodes;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const Vec2 x = g.center(i, j);
            if ((x - c).norm2() < r * r) nodes.push_back(x);
        }
    return nodes;
}

double mean_particle_spacing(const VortexBlobField& f) {
    if (f.positions.size() < 2) return 0.0;
    const auto box = f.bounding_box();
    const double area = box.extent().x1 * box.extent().x2;
    return std::sqrt(std::max(area, 0.0) / static_cast<double>(f.positions.size()));
}

template <class Pair>
double double_sum(const std::vector<Vec2>& pos, const std::vector<double>& w, Pair pair) {
    double s = 0.0;
    for (std::size_t i = 0; i < pos.size(); ++i)
        for (std::size_t j = i + 1; j < pos.size(); ++j)
            s += 2.0 * w[i] * w[j] * pair(pos[i], pos[j]);
    return s;
}

/// Grid quadrature of |v|^2 over supp phi must be stable under refinement,
/// else v is outside L^2_loc there and the formulation does not apply.
void energy_guard(const VortexBlobField& field, const TestFunction& phi, double spacing) {
    auto energy = [&](double h) {
        const auto nodes = support_nodes(phi, h);
        VelocityEvaluator ev(field);
        const auto v = ev(nodes);
        double s = 0.0;
        for (const auto& u : v) s += u.norm2();
        return s * h * h;
    };
    const double coarse = energy(spacing);
    const double fine = energy(0.5 * spacing);
    if (std::abs(fine - coarse) > 0.05 * std::max(std::abs(fine), 1e-300))
        throw ParameterError("local energy guard failed: |v|^2 quadrature unstable under refinement");
}

}  // namespace

VortexBlobField run_field_at(const FlowMap& run, std::size_t k) {
    VortexBlobField f = run.base_field;
    if (!run.carrier_states.empty()) f.positions = run.carrier_states.at(k);
    return f;
}

ResidualReport symmetrized_vorticity_residual(const FlowMap& run, const TestFunction& phi,
                                              const VortexBlobField& omega0) {
    const auto& t = run.times;
    std::vector<double> ft(t.size()), fd(t.size());
    double l1 = 0.0;
    for (const double w : run.base_field.weights) l1 += std::abs(w);
    for (std::size_t k = 0; k < t.size(); ++k) {
        const auto f = run_field_at(run, k);
        double s = 0.0;
        for (std::size_t i = 0; i < f.positions.size(); ++i)
            s += f.weights[i] * phi.dt_value(t[k], f.positions[i]);
        ft[k] = s;
        fd[k] = double_sum(f.positions, f.weights, [&](const Vec2& x, const Vec2& y) {
            return h_phi(phi, t[k], x, y);
        });
    }
    ResidualReport rep;
    rep.time_term = trapz(t, ft);
    rep.interaction_term = -trapz(t, fd);
    rep.initial_term = 0.0;
    for (std::size_t i = 0; i < omega0.positions.size(); ++i)
        rep.initial_term += omega0.weights[i] * phi.value(0.0, omega0.positions[i]);
    rep.residual = rep.time_term + rep.interaction_term + rep.initial_term;

    // first-order space bound: blob radius + particle spacing smear the
    // integrands, Lipschitz constants bound the resulting displacement error
    const double T = t.empty() ? 0.0 : t.back();
    const double delta = run.base_field.blob_scale + mean_particle_spacing(run.base_field);
    const double space = l1 * phi.lip_constant() * phi.time_profile().sup_dq * delta * T +
                         2.0 * l1 * l1 * phi.lip_gradient_constant() * delta * T +
                         l1 * phi.lip_constant() * delta;
    rep.quadrature_error_estimate =
        time_refinement_error(t, ft) + time_refinement_error(t, fd) + space;
    return rep;
}

ResidualReport symmetrized_velocity_residual(const FlowMap& run, const TestFunction& phi,
                                             const VortexBlobField& omega0,
                                             double grid_spacing) {
    const auto& t = run.times;
    const double area = grid_spacing * grid_spacing;
    const auto nodes = support_nodes(phi, grid_spacing);
    std::vector<double> ft(t.size()), fd(t.size());
    double l1 = 0.0;
    for (const double w : run.base_field.weights) l1 += std::abs(w);
    for (std::size_t k = 0; k < t.size(); ++k) {
        const auto f = run_field_at(run, k);
        VelocityEvaluator ev(f, run.cfg.method, run.cfg.tree);
        const auto v = ev(nodes);
        double s = 0.0;
        for (std::size_t n = 0; n < nodes.size(); ++n)
            s += phi.dt_value_vec(t[k], nodes[n]).dot(v[n]);
        ft[k] = s * area;
        fd[k] = double_sum(f.positions, f.weights, [&](const Vec2& x, const Vec2& y) {
            return barh_phi(phi, t[k], x, y);
        });
    }
    auto initial_at = [&](double h) {
        const auto nn = support_nodes(phi, h);
        VelocityEvaluator ev0(omega0);
        const auto v0 = ev0(nn);
        double s = 0.0;
        for (std::size_t n = 0; n < nn.size(); ++n)
            s += phi.value_vec(0.0, nn[n]).dot(v0[n]);
        return s * h * h;
    };
    ResidualReport rep;
    rep.time_term = trapz(t, ft);
    rep.interaction_term = -trapz(t, fd);
    rep.initial_term = initial_at(grid_spacing);
    rep.residual = rep.time_term + rep.interaction_term + rep.initial_term;

    const double T = t.empty() ? 0.0 : t.back();
    const double delta = run.base_field.blob_scale + mean_particle_spacing(run.base_field);
    const double space = 2.0 * l1 * l1 * phi.lip_gradient_constant() * delta * T +
                         std::abs(rep.initial_term - initial_at(2.0 * grid_spacing));
    rep.quadrature_error_estimate =
        time_refinement_error(t, ft) + time_refinement_error(t, fd) + space;
    return rep;
}

ResidualReport renormalized_residual(const FlowMap& run, const Nonlinearity& beta,
                                     const TestFunction& phi,
                                     const InitialVorticitySpec& omega0) {
    const auto& t = run.times;
    const double h = label_grid_spacing(run.labels);
    const double area = h * h;
    const Vec2 c = phi.support_center();
    const double r = phi.support_radius();

    std::vector<double> bw(run.labels.size());
    for (std::size_t l = 0; l < run.labels.size(); ++l)
        bw[l] = beta.beta(omega0.value(run.labels[l])) * area;

    std::vector<double> ft(t.size());
    double vmax = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const auto& pos = run.states[k];
        // labels must cover supp phi: the integrand lives there even when
        // beta(0) != 0
        BoundingBox box{pos.front(), pos.front()};
        for (const auto& p : pos) {
            box.lo.x1 = std::min(box.lo.x1, p.x1);
            box.lo.x2 = std::min(box.lo.x2, p.x2);
            box.hi.x1 = std::max(box.hi.x1, p.x1);
            box.hi.x2 = std::max(box.hi.x2, p.x2);
        }
        if (!box.contains(BoundingBox{{c.x1 - r, c.x2 - r}, {c.x1 + r, c.x2 + r}}))
            throw CoverageError("transported labels do not cover the test support", 0.0);

        std::vector<std::size_t> idx;
        std::vector<Vec2> pts;
        for (std::size_t l = 0; l < pos.size(); ++l)
            if ((pos[l] - c).norm2() < r * r) {
                idx.push_back(l);
                pts.push_back(pos[l]);
            }
        const auto v = run.velocity_at(t[k], pts);
        double s = 0.0;
        for (std::size_t n = 0; n < idx.size(); ++n) {
            vmax = std::max(vmax, v[n].norm());
            s += bw[idx[n]] * (phi.dt_value(t[k], pts[n]) +
                               phi.gradient(t[k], pts[n]).dot(v[n]));
        }
        ft[k] = s;
    }
    ResidualReport rep;
    rep.time_term = trapz(t, ft);
    rep.interaction_term = 0.0;  // folded into the transported integrand
    rep.initial_term = 0.0;
    for (std::size_t l = 0; l < run.labels.size(); ++l)
        rep.initial_term += bw[l] * phi.value(0.0, run.labels[l]);
    rep.residual = rep.time_term + rep.initial_term;

    const double T = t.empty() ? 0.0 : t.back();
    const double space = beta.sup_abs * h * (2.0 * r) *
                         (phi.time_profile().sup_dq + phi.lip_constant() * vmax) * (T + 1.0);
    rep.quadrature_error_estimate = time_refinement_error(t, ft) + space;
    return rep;
}

ResidualReport weak_velocity_residual(const FlowMap& run, const TestFunction& phi,
                                      const VortexBlobField& omega0, double grid_spacing) {
    energy_guard(run_field_at(run, 0), phi, grid_spacing);

    const auto& t = run.times;
    const double area = grid_spacing * grid_spacing;
    const auto nodes = support_nodes(phi, grid_spacing);
    std::vector<double> ft(t.size()), fg(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        const auto f = run_field_at(run, k);
        VelocityEvaluator ev(f, run.cfg.method, run.cfg.tree);
        const auto v = ev(nodes);
        double st = 0.0, sg = 0.0;
        for (std::size_t n = 0; n < nodes.size(); ++n) {
            st += phi.dt_value_vec(t[k], nodes[n]).dot(v[n]);
            sg += phi.jacobian(t[k], nodes[n]).contract(v[n], v[n]);
        }
        ft[k] = st * area;
        fg[k] = sg * area;
    }
    auto initial_at = [&](double h) {
        const auto nn = support_nodes(phi, h);
        VelocityEvaluator ev0(omega0);
        const auto v0 = ev0(nn);
        double s = 0.0;
        for (std::size_t n = 0; n < nn.size(); ++n)
            s += phi.value_vec(0.0, nn[n]).dot(v0[n]);
        return s * h * h;
    };
    ResidualReport rep;
    rep.time_term = trapz(t, ft);
    rep.interaction_term = trapz(t, fg);
    rep.initial_term = initial_at(grid_spacing);
    rep.residual = rep.time_term + rep.interaction_term + rep.initial_term;
    rep.quadrature_error_estimate =
        time_refinement_error(t, ft) + time_refinement_error(t, fg) +
        std::abs(rep.initial_term - initial_at(2.0 * grid_spacing));
    return rep;
}

SymWeakGap sym_weak_identity_gap(const VortexBlobField& omega, const TestFunction& phi,
                                 double grid_spacing) {
    if (!omega.positions.empty()) energy_guard(omega, phi, grid_spacing);

    SymWeakGap g;
    g.double_sum = double_sum(omega.positions, omega.weights,
                              [&](const Vec2& x, const Vec2& y) {
                                  return barh_phi(phi, 0.0, x, y);
                              });
    const auto nodes = support_nodes(phi, grid_spacing);
    VelocityEvaluator ev(omega);
    const auto v = ev(nodes);
    double s = 0.0;
    for (std::size_t n = 0; n < nodes.size(); ++n)
        s += phi.jacobian(0.0, nodes[n]).contract(v[n], v[n]);
    g.tensor_integral = s * grid_spacing * grid_spacing;
    g.gap = std::abs(g.double_sum + g.tensor_integral);
    return g;
}

}  // namespace vblob
