#pragma once

#include <functional>
#include <vector>

#include "vblob/field.hpp"
#include "vblob/initial_data.hpp"
#include "vblob/velocity.hpp"

namespace vblob {

enum class Integrator { rk4, rk2 };

enum class Coupling {
    frozen_field,     // tracers in the fixed t=0 blob field
    self_consistent,  // carriers advect themselves, velocity re-induced per stage
};

struct FlowConfig {
    double dt = 1e-3;
    Integrator integrator = Integrator::rk4;
    Coupling coupling = Coupling::frozen_field;
    double blowup_bound = 0.0;    // 0: 10^3 * initial support radius
    std::size_t store_stride = 1; // keep every k-th step (final step always kept)
    VelocityEvaluator::Method method = VelocityEvaluator::Method::automatic;
    TreecodeParams tree{};
};

/// Arbitrary velocity callback b(t, x) evaluated on a batch of points.
/// Lets tests drive the integrator with synthetic non-divergence-free fields.
using VelocityFn =
    std::function<std::vector<Vec2>(double t, const std::vector<Vec2>& points)>;

/// Sampled flow X(s, 0, label) anchored at time 0, plus enough carrier state
/// to re-induce the velocity field at any intermediate time, so two-time
/// queries are answered by ODE integration instead of array inversion.
struct FlowMap {
    std::vector<Vec2> labels;
    std::vector<double> times;              // stored times, times[0] == 0
    std::vector<std::vector<Vec2>> states;  // states[k][i], states[0] == labels

    FlowConfig cfg{};
    VortexBlobField base_field;                     // weights, eps, mollifier
    std::vector<std::vector<Vec2>> carrier_states;  // per stored time, self_consistent
    VelocityFn custom_velocity;                     // set for synthetic fields

    double t_end() const { return times.back(); }

    /// Label positions at t, linear in time between stored steps.
    std::vector<Vec2> positions_at(double t) const;

    /// Velocity of the underlying field at time t on a batch of points.
    std::vector<Vec2> velocity_at(double t, const std::vector<Vec2>& points) const;
};

/// Integrate labels (and carriers, in self_consistent mode) over [0, T].
/// Throws BlowUpError when any trajectory leaves the configured bound.
FlowMap integrate_flow(const VortexBlobField& field0, double T, const FlowConfig& cfg,
                       const std::vector<Vec2>& labels);

/// Same integrator driven by a caller-supplied velocity callback.
FlowMap integrate_flow(VelocityFn b, double T, const FlowConfig& cfg,
                       const std::vector<Vec2>& labels);

/// X(0, t, .) at the given points, by reverse ODE integration through the
/// stored field history. Defaults to the label positions at time t.
std::vector<Vec2> backward_flow(const FlowMap& flow, double t,
                                const std::vector<Vec2>& points);
std::vector<Vec2> backward_flow(const FlowMap& flow, double t);

struct PushforwardResult {
    std::vector<double> values;
    std::vector<bool> extrapolated;  // backward image left the label coverage
};

/// omega(t, x) = omega^0(X(0, t, x)) at each query point.
PushforwardResult pushforward_vorticity(const InitialVorticitySpec& omega0,
                                        const FlowMap& flow, double t,
                                        const std::vector<Vec2>& query_points);

struct CompressibilityReport {
    double value;
    bool variance_warning;  // too few labels per counting cell
};

/// Max over counting cells of the label density ratio between t_to and the
/// uniform anchor density; ~1 for measure-preserving flows. Labels must form
/// a uniform grid.
CompressibilityReport compressibility_report(const FlowMap& flow, double t_from,
                                             double t_to);
double compressibility_estimate(const FlowMap& flow, double t_from, double t_to);

/// Smallest positive coordinate gap of a uniform label grid.
double label_grid_spacing(const std::vector<Vec2>& labels);

/// Area of {x in B_r at time t : |X_A(s,t,x) - X_B(s,t,x)| > gamma}, estimated
/// by counting labels whose time-t position (under A) lies in B_r and whose
/// time-s positions under the two flows differ by more than gamma.
double flow_measure_distance(const FlowMap& a, const FlowMap& b, double gamma, double r,
                             double s, double t);

}  // namespace vblob
