#pragma once

#include <string>
#include <variant>
#include <vector>

#include "vblob/grid.hpp"
#include "vblob/vec2.hpp"

namespace vblob {

enum class VorticityKind {
    rankine,
    lamb_oseen,
    patch_union,
    sign_changing_pair,
    point_vortex_array,
    file_samples,
};

struct Patch {
    Vec2 center;
    double radius;
    double amplitude;
};

struct PointVortex {
    Vec2 position;
    double circulation;
};

/// Initial vorticity omega^0 in L^1(R^2). Density kinds expose a pointwise
/// formula; atomic kinds (point_vortex_array, file_samples) carry explicit
/// circulations. Unbounded tails (lamb_oseen) are truncated at 6 sigma and
/// the discarded mass is reported through truncated_mass_bound().
class InitialVorticitySpec {
public:
    static InitialVorticitySpec rankine(double omega0, double radius, Vec2 center = {});
    static InitialVorticitySpec lamb_oseen(double circulation, double sigma, Vec2 center = {});
    static InitialVorticitySpec patch_union(std::vector<Patch> patches);
    static InitialVorticitySpec sign_changing_pair(double amplitude, double radius,
                                                   Vec2 plus_center, Vec2 minus_center);
    static InitialVorticitySpec point_vortex_array(std::vector<PointVortex> vortices);
    /// CSV rows x1,x2,omega_value; weights are omega_value * cell_area.
    static InitialVorticitySpec file_samples(const std::string& path, double cell_area = 1.0);

    VorticityKind kind() const { return kind_; }
    bool atomic() const {
        return kind_ == VorticityKind::point_vortex_array || kind_ == VorticityKind::file_samples;
    }

    /// Pointwise omega^0(x); throws for atomic kinds.
    double value(const Vec2& x) const;

    /// Particles for atomic kinds; throws otherwise.
    const std::vector<PointVortex>& atoms() const;

    /// Box containing the (possibly truncated) support.
    BoundingBox support_box() const;

    /// Upper bound on |omega^0| mass outside support_box().
    double truncated_mass_bound() const;

private:
    struct RankineData { double omega0; double radius; Vec2 center; };
    struct LambOseenData { double circulation; double sigma; Vec2 center; };
    struct PatchesData { std::vector<Patch> patches; };
    struct AtomsData { std::vector<PointVortex> atoms; };

    InitialVorticitySpec() = default;
    VorticityKind kind_ = VorticityKind::rankine;
    std::variant<RankineData, LambOseenData, PatchesData, AtomsData> data_;
};

}  // namespace vblob
