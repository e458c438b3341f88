#pragma once

#include <span>
#include <vector>

#include "vblob/field.hpp"
#include "vblob/vec2.hpp"

namespace vblob {

/// Desingularized kernel K_eps = K * rho_eps; closed form for the gaussian
/// profile, tabulated radial mass for the compact bump. K_eps(0) = 0.
Vec2 eval_kernel_blob(const Vec2& dx, double eps, const MollifierSpec& m);

/// Exact O(N*M) summation v(x) = sum Gamma_i K_eps(x - x_i) with a fixed
/// pairwise reduction order, reproducible bit-for-bit at fixed thread count.
std::vector<Vec2> velocity_direct(const VortexBlobField& field, std::span<const Vec2> targets,
                                  int threads = 1);

struct TreecodeParams {
    double theta = 0.4;  // opening ratio r_node / distance, in (0,1)
    int order = 8;       // multipole truncation
    int leaf_size = 32;
    int threads = 1;
};

struct TreecodeResult {
    std::vector<Vec2> velocity;
    double error_bound;  // max over targets of the accumulated truncation bound
};

/// Barnes-Hut evaluation of the same sum with complex multipole expansions.
/// Far-field acceptance also requires clearance of the mollifier cutoff so
/// K_eps == K on every accepted interaction. Degenerate all-coincident
/// clouds fall through to direct summation at the depth cap.
TreecodeResult velocity_treecode(const VortexBlobField& field, std::span<const Vec2> targets,
                                 double theta, int order, int leaf_size = 32, int threads = 1);

/// Read-only v = K * omega evaluator with automatic method choice.
class VelocityEvaluator {
public:
    enum class Method { direct, treecode, automatic };

    explicit VelocityEvaluator(VortexBlobField field, Method method = Method::automatic,
                               TreecodeParams params = {});

    std::vector<Vec2> operator()(std::span<const Vec2> targets) const;
    Vec2 at(const Vec2& x) const;

    const VortexBlobField& field() const { return field_; }

private:
    VortexBlobField field_;
    Method method_;
    TreecodeParams params_;
};

}  // namespace vblob
