#include "vblob/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vblob/errors.hpp"

namespace vblob {
namespace {

using BatchVel = std::function<std::vector<Vec2>(double, const std::vector<Vec2>&)>;

std::vector<Vec2> axpy(const std::vector<Vec2>& x, double a, const std::vector<Vec2>& k) {
    std::vector<Vec2> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * k[i];
    return out;
}

void rk_step(const BatchVel& vel, double t, double dt, std::vector<Vec2>& x,
             Integrator integ) {
    const auto k1 = vel(t, x);
    if (integ == Integrator::rk2) {
        const auto k2 = vel(t + 0.5 * dt, axpy(x, 0.5 * dt, k1));
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += dt * k2[i];
        return;
    }
    const auto k2 = vel(t + 0.5 * dt, axpy(x, 0.5 * dt, k1));
    const auto k3 = vel(t + 0.5 * dt, axpy(x, 0.5 * dt, k2));
    const auto k4 = vel(t + dt, axpy(x, dt, k3));
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

double max_norm(const std::vector<Vec2>& pts) {
    double m = 0.0;
    for (const auto& p : pts) m = std::max(m, p.norm());
    return m;
}

double resolve_blowup_bound(const FlowConfig& cfg, const std::vector<Vec2>& initial) {
    if (cfg.blowup_bound > 0.0) return cfg.blowup_bound;
    return 1e3 * std::max(max_norm(initial), 1.0);
}

void check_cfg(const FlowConfig& cfg, double T) {
    if (!(T > 0.0)) throw ParameterError("horizon T must be positive");
    if (!(cfg.dt > 0.0) || cfg.dt > T * (1.0 + 1e-12))
        throw ParameterError("dt must lie in (0, T]");
    if (cfg.store_stride == 0) throw ParameterError("store_stride must be >= 1");
}

/// Common time loop: advances `state`, records the tail [label_offset, end) as
/// label states and the head [0, label_offset) as carrier states.
FlowMap run_loop(const BatchVel& vel, double T, const FlowConfig& cfg,
                 const std::vector<Vec2>& labels, std::vector<Vec2> state,
                 std::size_t label_offset) {
    const auto steps = static_cast<std::size_t>(std::ceil(T / cfg.dt - 1e-12));
    const double h = T / static_cast<double>(steps);
    const double bound = resolve_blowup_bound(cfg, state);

    FlowMap flow;
    flow.labels = labels;
    flow.cfg = cfg;

    auto record = [&](double t) {
        flow.times.push_back(t);
        flow.states.emplace_back(state.begin() + static_cast<std::ptrdiff_t>(label_offset),
                                 state.end());
        if (label_offset > 0)
            flow.carrier_states.emplace_back(
                state.begin(), state.begin() + static_cast<std::ptrdiff_t>(label_offset));
    };
    record(0.0);

    for (std::size_t k = 0; k < steps; ++k) {
        const double t = h * static_cast<double>(k);
        rk_step(vel, t, h, state, cfg.integrator);
        const double mx = max_norm(state);
        if (!(mx <= bound))
            throw BlowUpError("trajectory exceeded the blow-up bound", mx, t + h);
        if ((k + 1) % cfg.store_stride == 0 || k + 1 == steps) record(t + h);
    }
    return flow;
}

std::size_t time_index_below(const std::vector<double>& times, double t) {
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const auto k = static_cast<std::size_t>(it - times.begin());
    return k == 0 ? 0 : k - 1;
}

}  // namespace

double label_grid_spacing(const std::vector<Vec2>& labels) {
    for (int axis = 0; axis < 2; ++axis) {
        std::vector<double> c(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i)
            c[i] = axis == 0 ? labels[i].x1 : labels[i].x2;
        std::sort(c.begin(), c.end());
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < c.size(); ++i) {
            const double d = c[i] - c[i - 1];
            if (d > 1e-12) gap = std::min(gap, d);
        }
        if (std::isfinite(gap)) return gap;
    }
    throw ParameterError("labels do not form a nondegenerate grid");
}

std::vector<Vec2> FlowMap::positions_at(double t) const {
    const double tol = 1e-9 * std::max(1.0, t_end());
    if (t < -tol || t > t_end() + tol)
        throw ParameterError("query time outside the integrated range");
    t = std::clamp(t, 0.0, t_end());
    if (times.size() == 1 || t <= times.front()) return states.front();
    if (t >= times.back()) return states.back();
    const std::size_t k = time_index_below(times, t);
    const double w = (t - times[k]) / (times[k + 1] - times[k]);
    std::vector<Vec2> out(labels.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (1.0 - w) * states[k][i] + w * states[k + 1][i];
    return out;
}

std::vector<Vec2> FlowMap::velocity_at(double t, const std::vector<Vec2>& points) const {
    if (custom_velocity) return custom_velocity(t, points);
    if (cfg.coupling == Coupling::frozen_field || carrier_states.empty()) {
        VelocityEvaluator ev(base_field, cfg.method, cfg.tree);
        return ev(points);
    }
    t = std::clamp(t, 0.0, t_end());
    const std::size_t k = time_index_below(times, t);
    VortexBlobField f = base_field;
    if (k + 1 >= times.size() || t <= times[k]) {
        f.positions = carrier_states[k];
    } else {
        const double w = (t - times[k]) / (times[k + 1] - times[k]);
        f.positions.resize(carrier_states[k].size());
        for (std::size_t i = 0; i < f.positions.size(); ++i)
            f.positions[i] = (1.0 - w) * carrier_states[k][i] + w * carrier_states[k + 1][i];
    }
    VelocityEvaluator ev(std::move(f), cfg.method, cfg.tree);
    return ev(points);
}

FlowMap integrate_flow(const VortexBlobField& field0, double T, const FlowConfig& cfg,
                       const std::vector<Vec2>& labels) {
    field0.validate();
    check_cfg(cfg, T);

    FlowMap flow;
    if (cfg.coupling == Coupling::frozen_field) {
        VelocityEvaluator ev(field0, cfg.method, cfg.tree);
        const BatchVel vel = [&ev](double, const std::vector<Vec2>& pts) { return ev(pts); };
        flow = run_loop(vel, T, cfg, labels, labels, 0);
    } else {
        std::vector<Vec2> state = field0.positions;
        state.insert(state.end(), labels.begin(), labels.end());
        const std::size_t nc = field0.positions.size();
        const BatchVel vel = [&](double, const std::vector<Vec2>& s) {
            VortexBlobField f = field0;
            f.positions.assign(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(nc));
            VelocityEvaluator ev(std::move(f), cfg.method, cfg.tree);
            return ev(s);
        };
        flow = run_loop(vel, T, cfg, labels, std::move(state), nc);
    }
    flow.base_field = field0;
    return flow;
}

FlowMap integrate_flow(VelocityFn b, double T, const FlowConfig& cfg,
                       const std::vector<Vec2>& labels) {
    check_cfg(cfg, T);
    const BatchVel vel = [&b](double t, const std::vector<Vec2>& pts) { return b(t, pts); };
    FlowMap flow = run_loop(vel, T, cfg, labels, labels, 0);
    flow.custom_velocity = std::move(b);
    return flow;
}

std::vector<Vec2> backward_flow(const FlowMap& flow, double t,
                                const std::vector<Vec2>& points) {
    const double tol = 1e-9 * std::max(1.0, flow.t_end());
    if (t < -tol || t > flow.t_end() + tol)
        throw ParameterError("backward start time outside the integrated range");
    t = std::clamp(t, 0.0, flow.t_end());
    std::vector<Vec2> x = points;
    if (t == 0.0) return x;

    const auto steps = static_cast<std::size_t>(std::ceil(t / flow.cfg.dt - 1e-12));
    const double h = -t / static_cast<double>(steps);
    const double bound = resolve_blowup_bound(flow.cfg, x);
    const BatchVel vel = [&flow](double s, const std::vector<Vec2>& pts) {
        return flow.velocity_at(s, pts);
    };
    for (std::size_t k = 0; k < steps; ++k) {
        const double s = t + h * static_cast<double>(k);
        rk_step(vel, s, h, x, flow.cfg.integrator);
        const double mx = max_norm(x);
        if (!(mx <= bound))
            throw BlowUpError("backward trajectory exceeded the blow-up bound", mx, s + h);
    }
    return x;
}

std::vector<Vec2> backward_flow(const FlowMap& flow, double t) {
    return backward_flow(flow, t, flow.positions_at(t));
}

PushforwardResult pushforward_vorticity(const InitialVorticitySpec& omega0,
                                        const FlowMap& flow, double t,
                                        const std::vector<Vec2>& query_points) {
    const auto back = backward_flow(flow, t, query_points);
    const double h = flow.labels.size() > 1 ? label_grid_spacing(flow.labels) : 0.0;
    BoundingBox cover{{std::numeric_limits<double>::infinity(),
                       std::numeric_limits<double>::infinity()},
                      {-std::numeric_limits<double>::infinity(),
                       -std::numeric_limits<double>::infinity()}};
    for (const auto& l : flow.labels) {
        cover.lo.x1 = std::min(cover.lo.x1, l.x1);
        cover.lo.x2 = std::min(cover.lo.x2, l.x2);
        cover.hi.x1 = std::max(cover.hi.x1, l.x1);
        cover.hi.x2 = std::max(cover.hi.x2, l.x2);
    }
    cover = cover.inflated(0.5 * h);

    PushforwardResult res;
    res.values.resize(back.size());
    res.extrapolated.resize(back.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        res.values[i] = omega0.value(back[i]);
        res.extrapolated[i] = !cover.contains(back[i]);
    }
    return res;
}

CompressibilityReport compressibility_report(const FlowMap& flow, double t_from,
                                             double t_to) {
    const double h = label_grid_spacing(flow.labels);
    (void)flow.positions_at(t_from);  // range check; anchor density is uniform
    const auto pos = flow.positions_at(t_to);

    BoundingBox box{pos.front(), pos.front()};
    for (const auto& p : pos) {
        box.lo.x1 = std::min(box.lo.x1, p.x1);
        box.lo.x2 = std::min(box.lo.x2, p.x2);
        box.hi.x1 = std::max(box.hi.x1, p.x1);
        box.hi.x2 = std::max(box.hi.x2, p.x2);
    }
    // counting cells: side a multiple of the label spacing, anchored half a
    // cell below the lowest image so an undeformed grid bins exactly
    const double ext = std::max(box.extent().x1, box.extent().x2) + h;
    const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ext / (3.0 * h))));
    const double side = static_cast<double>(m) * h;
    const Vec2 anchor{box.lo.x1 - 0.5 * h, box.lo.x2 - 0.5 * h};
    const auto nbx = static_cast<std::size_t>(std::floor(box.extent().x1 / side)) + 1;
    const auto nby = static_cast<std::size_t>(std::floor(box.extent().x2 / side)) + 1;

    std::vector<std::size_t> count(nbx * nby, 0);
    for (const auto& p : pos) {
        const auto i = static_cast<std::size_t>((p.x1 - anchor.x1) / side);
        const auto j = static_cast<std::size_t>((p.x2 - anchor.x2) / side);
        if (i < nbx && j < nby) ++count[j * nbx + i];
    }
    const std::size_t peak = *std::max_element(count.begin(), count.end());
    CompressibilityReport rep;
    rep.value = static_cast<double>(peak) * h * h / (side * side);
    rep.variance_warning = peak < 100;
    return rep;
}

double compressibility_estimate(const FlowMap& flow, double t_from, double t_to) {
    return compressibility_report(flow, t_from, t_to).value;
}

double flow_measure_distance(const FlowMap& a, const FlowMap& b, double gamma, double r,
                             double s, double t) {
    if (!(gamma > 0.0) || !(r > 0.0))
        throw ParameterError("gamma and r must be positive");
    if (a.labels.size() != b.labels.size() || !std::equal(a.labels.begin(), a.labels.end(),
                                                          b.labels.begin()))
        throw GridMismatchError("flow label grids differ");
    const double h = label_grid_spacing(a.labels);
    const auto at = a.positions_at(t);
    const auto as = a.positions_at(s);
    const auto bs = b.positions_at(s);
    std::size_t n = 0;
    for (std::size_t i = 0; i < at.size(); ++i)
        if (at[i].norm2() <= r * r && (as[i] - bs[i]).norm() > gamma) ++n;
    return static_cast<double>(n) * h * h;
}

}  // namespace vblob
