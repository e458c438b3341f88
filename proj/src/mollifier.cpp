#include "vblob/mollifier.hpp"

#include <cmath>

#include "vblob/kernel.hpp"

namespace vblob {
namespace {

constexpr int kCdfSamples = 4096;

double bump_radial(double r) {
    // unnormalized exp(-1/(1-r^2)) on [0,1)
    if (r >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r * r));
}

}  // namespace

MollifierSpec::MollifierSpec(MollifierProfile p) : profile_(p) {
    if (p == MollifierProfile::gaussian) {
        normalization_ = 1.0 / kTwoPi;
        return;
    }
    // Cumulative radial mass 2 pi int_0^s r e^{-1/(1-r^2)} dr by composite
    // Simpson on a dense grid; the integrand is C^inf on [0,1].
    cdf_.resize(kCdfSamples + 1);
    const double dr = 1.0 / kCdfSamples;
    cdf_[0] = 0.0;
    for (int i = 1; i <= kCdfSamples; ++i) {
        const double r0 = (i - 1) * dr, r1 = i * dr, rm = 0.5 * (r0 + r1);
        cdf_[i] = cdf_[i - 1] + dr / 6.0 *
                                    (r0 * bump_radial(r0) + 4.0 * rm * bump_radial(rm) +
                                     r1 * bump_radial(r1));
    }
    normalization_ = 1.0 / (kTwoPi * cdf_[kCdfSamples]);
    for (auto& v : cdf_) v /= cdf_[kCdfSamples];
}

const MollifierSpec& MollifierSpec::gaussian() {
    static const MollifierSpec m(MollifierProfile::gaussian);
    return m;
}

const MollifierSpec& MollifierSpec::compact_bump() {
    static const MollifierSpec m(MollifierProfile::compact_bump);
    return m;
}

double MollifierSpec::rho(double r) const {
    if (profile_ == MollifierProfile::gaussian)
        return normalization_ * std::exp(-0.5 * r * r);
    return normalization_ * bump_radial(r);
}

double MollifierSpec::rho_eps(const Vec2& dx, double eps) const {
    return rho(dx.norm() / eps) / (eps * eps);
}

double MollifierSpec::swirl(double s) const {
    if (s <= 0.0) return 0.0;
    if (profile_ == MollifierProfile::gaussian)
        return 1.0 - std::exp(-0.5 * s * s);
    if (s >= 1.0) return 1.0;
    const double u = s * kCdfSamples;
    const int i = static_cast<int>(u);
    const double f = u - i;
    return cdf_[i] * (1.0 - f) + cdf_[i + 1] * f;
}

double MollifierSpec::cutoff_in_eps() const {
    return profile_ == MollifierProfile::gaussian ? 7.5 : 1.0;
}

}  // namespace vblob
