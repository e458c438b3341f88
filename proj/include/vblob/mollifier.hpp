#pragma once

#include <vector>

#include "vblob/vec2.hpp"

namespace vblob {

enum class MollifierProfile { gaussian, compact_bump };

/// Radial probability mollifier rho with int rho = 1. The scaled family is
/// rho_eps(x) = eps^-2 rho(x/eps). compact_bump is supported in the unit
/// ball; gaussian is a convenience profile without compact support and is
/// flagged as such in reports.
class MollifierSpec {
public:
    static const MollifierSpec& gaussian();
    static const MollifierSpec& compact_bump();

    MollifierProfile profile() const { return profile_; }
    double normalization() const { return normalization_; }
    bool compactly_supported() const { return profile_ == MollifierProfile::compact_bump; }

    /// Unit-scale profile value at radius r.
    double rho(double r) const;

    /// rho_eps evaluated at offset dx.
    double rho_eps(const Vec2& dx, double eps) const;

    /// Mass of the ball of radius s under the unit-scale profile,
    /// i.e. the swirl factor of the desingularized kernel K_eps.
    double swirl(double s) const;

    /// Radius (in units of eps) beyond which 1 - swirl < 1e-12.
    double cutoff_in_eps() const;

private:
    explicit MollifierSpec(MollifierProfile p);

    MollifierProfile profile_;
    double normalization_;
    std::vector<double> cdf_;  // compact_bump radial CDF on [0,1]
};

}  // namespace vblob
