#pragma once

#include <optional>
#include <vector>

#include "vblob/grid.hpp"
#include "vblob/initial_data.hpp"
#include "vblob/mollifier.hpp"
#include "vblob/vec2.hpp"

namespace vblob {

/// Weighted particle set with a mollification scale: the discrete carrier of
/// omega(t,.) in L^1(R^2). Immutable after construction by convention; the
/// evolution modules copy positions and never touch weights.
struct VortexBlobField {
    std::vector<Vec2> positions;
    std::vector<double> weights;  // signed circulations Gamma_i
    double blob_scale = 0.0;      // eps
    const MollifierSpec* mollifier = &MollifierSpec::gaussian();

    std::size_t size() const { return positions.size(); }
    void validate() const;
    BoundingBox bounding_box() const;
};

/// Vortex-blob initialization: weights omega^0(x_i) * dx^2 on a uniform grid
/// over the support (or a caller-supplied box), atomic kinds taken verbatim.
/// Throws CoverageError when the box misses part of the support.
VortexBlobField discretize(const InitialVorticitySpec& spec, double eps, int n_per_axis,
                           std::optional<BoundingBox> box = std::nullopt);

/// Blob reconstruction omega_eps(x) = sum Gamma_i rho_eps(x - x_i).
double eval_vorticity(const VortexBlobField& field, const Vec2& x);

/// omega_eps sampled on a grid; bucketed by the mollifier cutoff so the cost
/// is O(cells + N * local neighbourhood).
SampledScalarField eval_vorticity_grid(const VortexBlobField& field, const GridSpec& grid);

/// sum |Gamma_i|; exact for non-overlapping signed blobs, O(eps) bias otherwise.
double l1_norm(const VortexBlobField& field);

/// sum Gamma_i, conserved exactly in time by every evolution routine.
double total_circulation(const VortexBlobField& field);

struct EquiIntegrabilityResult {
    double value;
    bool resolution_warning;  // evaluation grid coarser than eps
};

/// sup over sets of measure <= delta of int |omega_eps|, computed by the
/// layer-cake rule on an evaluation grid (default cell side eps/2, bounding
/// box inflated by 4 eps).
EquiIntegrabilityResult equi_integrability_modulus_report(const VortexBlobField& field,
                                                          double delta, double spacing = 0.0);
double equi_integrability_modulus(const VortexBlobField& field, double delta,
                                  double spacing = 0.0);

}  // namespace vblob
