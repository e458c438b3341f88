#pragma once

#include <functional>

#include "vblob/field.hpp"
#include "vblob/grid.hpp"

namespace vblob {

/// M2 (weak-L2) seminorm sup_lambda lambda * area{|u| > lambda}^(1/2) of the
/// samples restricted to B_{domain_radius}, by layer cake over a logarithmic
/// lambda grid.
struct M2Report {
    double seminorm = 0.0;
    double seminorm_squared = 0.0;   // the power convention, recorded alongside
    bool resolution_limited = false; // some levels had too few cells to count
};
M2Report m2_seminorm_report(const SampledScalarField& u, double domain_radius);
double m2_seminorm(const SampledScalarField& u, double domain_radius);

/// m2_seminorm(|v|) / l1_norm(omega) with |v| sampled on B_{domain_radius};
/// spacing 0 picks radius/128. Throws ParameterError on zero vorticity.
double hls_ratio(const VortexBlobField& field, double domain_radius,
                 double spacing = 0.0);

/// Area of {x in B_r : |u - u_ref| > gamma} by cell counting. Grids must match.
double local_measure_distance(const SampledScalarField& u,
                              const SampledScalarField& u_ref, double gamma, double r);

/// <omega, g> = sum Gamma_i g(x_i) against a bounded test function.
double weak_l1_pairing(const VortexBlobField& omega,
                       const std::function<double(Vec2)>& g);

}  // namespace vblob
