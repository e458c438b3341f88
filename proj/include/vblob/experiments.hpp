#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vblob/field.hpp"
#include "vblob/flow.hpp"

namespace vblob {

/// Fixed dictionary of 16 bounded functions (|g| <= 1) used to witness weak
/// L^1 convergence of vorticities.
const std::vector<std::function<double(Vec2)>>& weak_dictionary();

/// Least-squares slope of log(y) against log(x); x and y positive.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Distances between two runs sharing the label grid: flow distance is the sup
/// over a 5x5 (s,t) checkpoint lattice, the omega and velocity distances are
/// maxima over the t checkpoints of grid L^1 norms on B_r.
struct RunDistances {
    double flow = 0.0;
    double omega_l1 = 0.0;
    double velocity_l1 = 0.0;
};
RunDistances run_distances(const FlowMap& a, const FlowMap& b, double gamma, double r,
                           double grid_spacing);

struct ConvergencePair {
    double eps_coarse = 0.0;
    double eps_fine = 0.0;
    RunDistances distances;        // between consecutive mollification levels
    double pushforward_l1 = 0.0;   // pushforward omega distance at the final time
};

struct ConvergenceReport {
    std::vector<double> eps_levels;
    std::vector<double> circulations;  // per level, exactly constant in time
    std::vector<ConvergencePair> pairs;
    bool fine_levels_monotone = false;  // all three distances decrease at the finest pair
    std::vector<std::string> warnings;
};

/// Mollify/solve/limit construction: one self-consistent run per blob scale,
/// consecutive-level distances must shrink at the finest pair.
ConvergenceReport run_existence_pipeline(const InitialVorticitySpec& spec,
                                         std::vector<double> eps_levels, double T,
                                         const FlowConfig& cfg);

enum class Perturbation { strong_l1, weak_oscillatory };

struct StabilityLevel {
    double level_param = 0.0;  // blob scale (strong) or oscillation scale (weak)
    RunDistances to_finest;
    double omega_l1_consecutive = 0.0;  // to the next finer level
    std::vector<double> pairings;       // dictionary pairings of omega^0
};

struct StabilityReport {
    Perturbation mode{};
    double omega_l1_scale = 0.0;  // l1 norm of the finest data
    std::vector<StabilityLevel> levels;  // coarse to fine, finest carries no distances
    std::vector<double> pairings_finest;
    double equi_integrability_bound = 0.0;
    bool flow_decreasing = false;
    bool velocity_decreasing = false;
    bool omega_decreasing = false;
    double min_consecutive_omega_l1 = 0.0;
};

/// Perturbation families around the base data: shrinking mollification scale
/// (strong) or sign checkerboard at scale 1/n, n = 8 * 2^k (weak). Throws
/// ParameterError when the family is not uniformly equi-integrable.
StabilityReport run_stability_experiment(const InitialVorticitySpec& base,
                                         Perturbation mode, int n_levels, double T,
                                         const FlowConfig& cfg);

struct SlopeEntry {
    double p = 0.0;
    double alpha_target = 0.0;  // 2/p - 1
    double slope = 0.0;
    bool inconclusive = false;  // quadrature error above 10% of a value
    std::vector<double> h;
    std::vector<double> values;
    std::vector<double> quadrature_errors;
};

struct SlopeReport {
    std::vector<SlopeEntry> entries;
};

/// log-log slope of ||tau_h K - K||_p against |h| for each p in (1, 2).
SlopeReport run_kernel_scaling_experiment(const std::vector<double>& p_list,
                                          std::vector<double> h_list);

struct ProbeReport {
    std::vector<double> gammas;
    std::vector<double> sup_distances;    // per gamma, sup over the (s,t) lattice
    std::vector<double> lambdas;          // {r, 2r, 4r}
    std::vector<double> dv_l1;            // ||v_A - v_B||_{L1((0,T) x B_lambda)}
    bool degenerate = false;              // identical runs, ratio 0/0
    std::vector<double> ratios;           // (distance - eta)/dv at the widest ball
};

/// Empirical version of the flow stability estimate: tabulates flow measure
/// distances against the L^1 velocity gap.
ProbeReport run_fundamental_estimate_probe(const FlowMap& a, const FlowMap& b,
                                           const std::vector<double>& gamma_list,
                                           double r, double eta);

}  // namespace vblob
