#include "vblob/field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vblob/errors.hpp"

namespace vblob {

void VortexBlobField::validate() const {
    if (positions.size() != weights.size())
        throw ParameterError("VortexBlobField: positions/weights length mismatch");
    if (blob_scale <= 0.0) throw ParameterError("VortexBlobField: blob_scale must be positive");
    double mass = 0.0;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (!positions[i].finite() || !std::isfinite(weights[i]))
            throw ParameterError("VortexBlobField: non-finite entry");
        mass += std::abs(weights[i]);
    }
    if (!std::isfinite(mass)) throw ParameterError("VortexBlobField: infinite total mass");
}

BoundingBox VortexBlobField::bounding_box() const {
    if (positions.empty()) return {{0, 0}, {0, 0}};
    BoundingBox b{positions.front(), positions.front()};
    for (const auto& p : positions) {
        b.lo.x1 = std::min(b.lo.x1, p.x1);
        b.lo.x2 = std::min(b.lo.x2, p.x2);
        b.hi.x1 = std::max(b.hi.x1, p.x1);
        b.hi.x2 = std::max(b.hi.x2, p.x2);
    }
    return b;
}

GridSpec GridSpec::covering(const BoundingBox& box, double spacing) {
    if (spacing <= 0.0) throw ParameterError("GridSpec: spacing must be positive");
    const Vec2 ext = box.extent();
    GridSpec g;
    g.origin = box.lo;
    g.spacing = spacing;
    g.nx = std::max(1, static_cast<int>(std::ceil(ext.x1 / spacing)));
    g.ny = std::max(1, static_cast<int>(std::ceil(ext.x2 / spacing)));
    return g;
}

GridSpec GridSpec::over_ball(double radius, int cells_per_axis) {
    GridSpec g;
    g.spacing = 2.0 * radius / cells_per_axis;
    g.origin = {-radius, -radius};
    g.nx = g.ny = cells_per_axis;
    return g;
}

std::vector<Vec2> grid_centers(const GridSpec& g) {
    std::vector<Vec2> pts;
    pts.reserve(g.count());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) pts.push_back(g.center(i, j));
    return pts;
}

VortexBlobField discretize(const InitialVorticitySpec& spec, double eps, int n_per_axis,
                           std::optional<BoundingBox> box) {
    if (eps <= 0.0) throw ParameterError("discretize: eps must be positive");
    VortexBlobField field;
    field.blob_scale = eps;

    if (spec.atomic()) {
        for (const auto& v : spec.atoms()) {
            field.positions.push_back(v.position);
            field.weights.push_back(v.circulation);
        }
        return field;
    }

    if (n_per_axis < 4) throw ParameterError("discretize: n_per_axis must be >= 4");
    const BoundingBox support = spec.support_box();
    const BoundingBox domain = box.value_or(support);
    const Vec2 ext = domain.extent();
    const double dx = std::max(ext.x1, ext.x2) / n_per_axis;
    const int nx = static_cast<int>(std::ceil(ext.x1 / dx));
    const int ny = static_cast<int>(std::ceil(ext.x2 / dx));
    const double cell = dx * dx;

    if (!domain.contains(support)) {
        // measure the mass the assignment grid would miss
        double deficit = 0.0;
        const int m = 4 * n_per_axis;
        const Vec2 sext = support.extent();
        const double sx = sext.x1 / m, sy = sext.x2 / m;
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) {
                const Vec2 p{support.lo.x1 + (i + 0.5) * sx, support.lo.x2 + (j + 0.5) * sy};
                if (!domain.contains(p)) deficit += std::abs(spec.value(p)) * sx * sy;
            }
        throw CoverageError("discretize: grid does not cover the vorticity support", deficit);
    }

    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const Vec2 p{domain.lo.x1 + (i + 0.5) * dx, domain.lo.x2 + (j + 0.5) * dx};
            const double w = spec.value(p) * cell;
            if (w != 0.0) {
                field.positions.push_back(p);
                field.weights.push_back(w);
            }
        }
    return field;
}

double eval_vorticity(const VortexBlobField& field, const Vec2& x) {
    const double eps = field.blob_scale;
    const MollifierSpec& m = *field.mollifier;
    const double cutoff2 = std::pow(m.cutoff_in_eps() * eps, 2);
    double sum = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) {
        const Vec2 d = x - field.positions[i];
        if (d.norm2() > cutoff2) continue;
        sum += field.weights[i] * m.rho_eps(d, eps);
    }
    return sum;
}

SampledScalarField eval_vorticity_grid(const VortexBlobField& field, const GridSpec& grid) {
    SampledScalarField out{grid, std::vector<double>(grid.count(), 0.0)};
    const double eps = field.blob_scale;
    const MollifierSpec& m = *field.mollifier;
    const double cutoff = m.cutoff_in_eps() * eps;
    const double cutoff2 = cutoff * cutoff;
    const int reach = static_cast<int>(std::ceil(cutoff / grid.spacing)) + 1;

    // scatter each blob onto the cells it can reach
    for (std::size_t k = 0; k < field.size(); ++k) {
        const Vec2 p = field.positions[k];
        const double w = field.weights[k];
        const int ic = static_cast<int>(std::floor((p.x1 - grid.origin.x1) / grid.spacing));
        const int jc = static_cast<int>(std::floor((p.x2 - grid.origin.x2) / grid.spacing));
        for (int j = std::max(0, jc - reach); j <= std::min(grid.ny - 1, jc + reach); ++j)
            for (int i = std::max(0, ic - reach); i <= std::min(grid.nx - 1, ic + reach); ++i) {
                const Vec2 d = grid.center(i, j) - p;
                if (d.norm2() > cutoff2) continue;
                out.values[static_cast<std::size_t>(j) * grid.nx + i] += w * m.rho_eps(d, eps);
            }
    }
    return out;
}

double l1_norm(const VortexBlobField& field) {
    double s = 0.0;
    for (double w : field.weights) s += std::abs(w);
    return s;
}

double total_circulation(const VortexBlobField& field) {
    return std::accumulate(field.weights.begin(), field.weights.end(), 0.0);
}

EquiIntegrabilityResult equi_integrability_modulus_report(const VortexBlobField& field,
                                                          double delta, double spacing) {
    if (delta <= 0.0) throw ParameterError("equi_integrability_modulus: delta must be positive");
    if (field.size() == 0) return {0.0, false};
    const double eps = field.blob_scale;
    const double h = spacing > 0.0 ? spacing : eps / 2.0;
    const bool warn = h > eps;

    const GridSpec grid = GridSpec::covering(field.bounding_box().inflated(4.0 * eps), h);
    SampledScalarField omega = eval_vorticity_grid(field, grid);
    for (auto& v : omega.values) v = std::abs(v);
    std::sort(omega.values.begin(), omega.values.end(), std::greater<>());

    const double cell = grid.cell_area();
    double area = 0.0, mass = 0.0;
    for (double v : omega.values) {
        if (v == 0.0 || area >= delta) break;
        const double take = std::min(cell, delta - area);
        mass += v * take;
        area += take;
    }
    return {std::min(mass, l1_norm(field)), warn};
}

double equi_integrability_modulus(const VortexBlobField& field, double delta, double spacing) {
    return equi_integrability_modulus_report(field, delta, spacing).value;
}

}  // namespace vblob
