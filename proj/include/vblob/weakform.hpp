#pragma once

#include "vblob/flow.hpp"
#include "vblob/test_function.hpp"

namespace vblob {

struct ResidualReport {
    double residual;                   // time_term + interaction_term + initial_term
    double quadrature_error_estimate;  // measured time refinement + space bound
    double time_term;
    double interaction_term;  // signed as it enters the residual
    double initial_term;
};

/// Carrier field of a run at stored time index k (base field for frozen runs).
VortexBlobField run_field_at(const FlowMap& run, std::size_t k);

/// int int dphi/dt w dx dt - int int int H_phi w w + int phi(0) w0.
/// Particle quadrature in space, trapezoid on the stored time steps, the i<j
/// half of the symmetric double sum doubled.
ResidualReport symmetrized_vorticity_residual(const FlowMap& run, const TestFunction& phi,
                                              const VortexBlobField& omega0);

/// int int dphi/dt . v - int int int barH_phi w w + int phi(0) . v0, with the
/// v-integrals on a grid of the given spacing over the support of phi and
/// v0 = K_eps * omega0.
ResidualReport symmetrized_velocity_residual(const FlowMap& run, const TestFunction& phi,
                                             const VortexBlobField& omega0,
                                             double grid_spacing);

/// int int (dphi/dt + grad phi . v) beta(omega) + int phi(0) beta(omega0).
/// beta(omega(t,.)) is evaluated through the Lagrangian formula: the label
/// grid transports beta(omega0) with unit Jacobian, so the space integrals
/// become sums over transported labels. Labels must cover supp phi at all
/// stored times.
ResidualReport renormalized_residual(const FlowMap& run, const Nonlinearity& beta,
                                     const TestFunction& phi,
                                     const InitialVorticitySpec& omega0);

/// int int dphi/dt . v + grad phi : (v (x) v) + int phi(0) . v0. Requires the
/// local energy guard: the grid quadrature of |v|^2 over supp phi must move
/// less than 5% under one refinement, else the formulation does not apply.
ResidualReport weak_velocity_residual(const FlowMap& run, const TestFunction& phi,
                                      const VortexBlobField& omega0, double grid_spacing);

struct SymWeakGap {
    double gap;              // |double_sum + tensor_integral|
    double double_sum;       // sum_ij G_i G_j barH_phi(x_i, x_j)
    double tensor_integral;  // int grad phi : (v (x) v) dx
};

/// Two sides of the identity int int barH_phi w w = -int grad phi : (v (x) v);
/// the gap measures pure quadrature error. Same energy guard as above.
SymWeakGap sym_weak_identity_gap(const VortexBlobField& omega, const TestFunction& phi,
                                 double grid_spacing);

}  // namespace vblob
