#pragma once

#include <stdexcept>

#include "vblob/errors.hpp"
#include "vblob/vec2.hpp"

namespace vblob {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Biot-Savart kernel K(x) = x^perp / (2 pi |x|^2).
/// Throws std::domain_error at x = 0; callers desingularize via blobs.
inline Vec2 eval_kernel(const Vec2& x) {
    const double r2 = x.norm2();
    if (r2 == 0.0) throw std::domain_error("eval_kernel: zero argument");
    return x.perp() * (1.0 / (kTwoPi * r2));
}

/// K = K * 1_{B_r(0)} + K * 1_{B_r(0)^c}. The closed ball |x| <= radius
/// counts as near, so near + far reassembles K(x) bit-for-bit.
struct KernelSplit {
    Vec2 near;
    Vec2 far;
    double radius;
};

inline KernelSplit split_kernel(const Vec2& x, double radius) {
    if (radius <= 0.0) throw ParameterError("split_kernel: radius must be positive");
    const Vec2 k = eval_kernel(x);
    if (x.norm2() <= radius * radius) return {k, Vec2{0.0, 0.0}, radius};
    return {Vec2{0.0, 0.0}, k, radius};
}

/// H_phi(t,x,y) = -1/2 K(x-y) . (grad phi(t,x) - grad phi(t,y)), extended by 0
/// on the diagonal (the quadrature measure of the diagonal is zero).
/// Phi needs gradient(t, x) -> Vec2.
template <class Phi>
double h_phi(const Phi& phi, double t, const Vec2& x, const Vec2& y) {
    const Vec2 d = x - y;
    if (d.x1 == 0.0 && d.x2 == 0.0) return 0.0;
    return -0.5 * eval_kernel(d).dot(phi.gradient(t, x) - phi.gradient(t, y));
}

/// barH_phi(t,x,y) = 1/2 K(x-y)^perp . (phi(t,x) - phi(t,y)), 0 on the diagonal.
/// Phi needs value_vec(t, x) -> Vec2.
template <class Phi>
double barh_phi(const Phi& phi, double t, const Vec2& x, const Vec2& y) {
    const Vec2 d = x - y;
    if (d.x1 == 0.0 && d.x2 == 0.0) return 0.0;
    return 0.5 * eval_kernel(d).perp().dot(phi.value_vec(t, x) - phi.value_vec(t, y));
}

/// Adaptive quadrature controls for the translation-norm integral.
struct QuadratureSpec {
    double domain_radius = 4.0;  // integrate over B_R, R >= 4
    int base_cells = 64;         // base grid per axis over [-R, R]^2
    double grading = 0.25;       // refine while cell diagonal > grading * distance to singularity
    int max_depth = 26;
};

struct TranslationNorm {
    double value;             // approximation of ||tau_h K - K||_{L^p(B_R)}
    double truncation_bound;  // analytic bound on the tail over |x| > R
    double quadrature_error;  // |coarse - fine| refinement estimate
};

/// ||tau_h K - K||_{L^p(B_R)} with tau_h K(x) = K(x+h). Singularities at 0 and
/// -h are resolved by graded cell subdivision; the tail over |x| > R is bounded
/// analytically and reported. Requires 1 < p < 2 and |h| <= 1.
TranslationNorm kernel_translation_norm(const Vec2& h, double p, const QuadratureSpec& quad = {});

}  // namespace vblob
