#include "vblob/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <thread>

#include "vblob/errors.hpp"
#include "vblob/kernel.hpp"

namespace vblob {
namespace {

using cplx = std::complex<double>;

void run_chunked(std::size_t n, int threads, const auto& body) {
    if (threads <= 1 || n < 256) {
        body(std::size_t{0}, n);
        return;
    }
    const std::size_t chunk = (n + threads - 1) / threads;
    std::vector<std::thread> pool;
    for (std::size_t b = 0; b < n; b += chunk)
        pool.emplace_back(body, b, std::min(n, b + chunk));
    for (auto& t : pool) t.join();
}

// swirl factor divided by 2 pi r^2; gaussian inlined, bump via the table
inline double blob_factor(double r2, double eps, const MollifierSpec& m, double cutoff2) {
    if (r2 == 0.0) return 0.0;
    if (r2 >= cutoff2) return 1.0 / (kTwoPi * r2);
    if (m.profile() == MollifierProfile::gaussian)
        return (1.0 - std::exp(-0.5 * r2 / (eps * eps))) / (kTwoPi * r2);
    return m.swirl(std::sqrt(r2) / eps) / (kTwoPi * r2);
}

Vec2 direct_block(const VortexBlobField& f, const Vec2& x, std::size_t begin, std::size_t end,
                  double cutoff2) {
    // pairwise tree reduction: fixed association independent of threading
    if (end - begin > 128) {
        const std::size_t mid = begin + (end - begin) / 2;
        return direct_block(f, x, begin, mid, cutoff2) + direct_block(f, x, mid, end, cutoff2);
    }
    Vec2 acc{0.0, 0.0};
    const double eps = f.blob_scale;
    for (std::size_t i = begin; i < end; ++i) {
        const Vec2 d = x - f.positions[i];
        acc += d.perp() * (f.weights[i] * blob_factor(d.norm2(), eps, *f.mollifier, cutoff2));
    }
    return acc;
}

struct Tree {
    struct Node {
        cplx center;     // expansion center (particle centroid)
        double rmax;     // max particle distance from center
        double amass;    // sum |Gamma| in the node
        int begin, end;  // particle range
        int child[4];    // -1 when absent
    };

    std::vector<Node> nodes;
    std::vector<cplx> coeffs;  // nodes.size() * (order + 1)
    std::vector<Vec2> pos;     // reordered particles
    std::vector<double> wgt;
    int order;

    static constexpr int kMaxDepth = 48;

    int build(std::vector<int>& index, const VortexBlobField& f, int begin, int end,
              Vec2 lo, Vec2 hi, int leaf_size, int depth) {
        const int id = static_cast<int>(nodes.size());
        nodes.push_back({});
        Node n{};
        n.begin = begin;
        n.end = end;
        n.child[0] = n.child[1] = n.child[2] = n.child[3] = -1;

        Vec2 centroid{0.0, 0.0};
        for (int i = begin; i < end; ++i) centroid += f.positions[index[i]];
        centroid = centroid / static_cast<double>(end - begin);
        n.center = {centroid.x1, centroid.x2};
        for (int i = begin; i < end; ++i) {
            n.rmax = std::max(n.rmax, (f.positions[index[i]] - centroid).norm());
            n.amass += std::abs(f.weights[index[i]]);
        }

        if (end - begin > leaf_size && depth < kMaxDepth) {
            const Vec2 mid = (lo + hi) * 0.5;
            int bounds[5];
            bounds[0] = begin;
            auto* base = index.data();
            auto* m1 = std::partition(base + begin, base + end,
                                      [&](int i) { return (quadrant_of(f, i, mid) & 2) == 0; });
            auto* m0 = std::partition(base + begin, m1,
                                      [&](int i) { return (quadrant_of(f, i, mid) & 1) == 0; });
            auto* m2 = std::partition(m1, base + end,
                                      [&](int i) { return (quadrant_of(f, i, mid) & 1) == 0; });
            bounds[1] = static_cast<int>(m0 - base);
            bounds[2] = static_cast<int>(m1 - base);
            bounds[3] = static_cast<int>(m2 - base);
            bounds[4] = end;
            const Vec2 corners[4][2] = {{lo, mid},
                                        {{mid.x1, lo.x2}, {hi.x1, mid.x2}},
                                        {{lo.x1, mid.x2}, {mid.x1, hi.x2}},
                                        {mid, hi}};
            for (int q = 0; q < 4; ++q)
                if (bounds[q + 1] > bounds[q])
                    n.child[q] = build(index, f, bounds[q], bounds[q + 1], corners[q][0],
                                       corners[q][1], leaf_size, depth + 1);
        }
        nodes[id] = n;
        return id;
    }

    static int quadrant_of(const VortexBlobField& f, int i, const Vec2& mid) {
        const Vec2& p = f.positions[i];
        return (p.x1 >= mid.x1 ? 1 : 0) | (p.x2 >= mid.x2 ? 2 : 0);
    }

    void compute_coeffs() {
        coeffs.assign(nodes.size() * (order + 1), cplx{0.0, 0.0});
        for (std::size_t id = 0; id < nodes.size(); ++id) {
            const Node& n = nodes[id];
            cplx* a = &coeffs[id * (order + 1)];
            for (int i = n.begin; i < n.end; ++i) {
                const cplx dz{pos[i].x1 - n.center.real(), pos[i].x2 - n.center.imag()};
                cplx zk = wgt[i];
                for (int k = 0; k <= order; ++k) {
                    a[k] += zk;
                    zk *= dz;
                }
            }
        }
    }
};

}  // namespace

Vec2 eval_kernel_blob(const Vec2& dx, double eps, const MollifierSpec& m) {
    const double cutoff = m.cutoff_in_eps() * eps;
    return dx.perp() * blob_factor(dx.norm2(), eps, m, cutoff * cutoff);
}

std::vector<Vec2> velocity_direct(const VortexBlobField& field, std::span<const Vec2> targets,
                                  int threads) {
    const double cutoff = field.mollifier->cutoff_in_eps() * field.blob_scale;
    const double cutoff2 = cutoff * cutoff;
    std::vector<Vec2> out(targets.size());
    run_chunked(targets.size(), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t t = b; t < e; ++t)
            out[t] = direct_block(field, targets[t], 0, field.size(), cutoff2);
    });
    return out;
}

TreecodeResult velocity_treecode(const VortexBlobField& field, std::span<const Vec2> targets,
                                 double theta, int order, int leaf_size, int threads) {
    if (!(theta > 0.0 && theta < 1.0))
        throw ParameterError("velocity_treecode: theta must lie in (0,1)");
    if (order < 0) throw ParameterError("velocity_treecode: order must be >= 0");
    if (field.size() == 0 || targets.empty())
        return {std::vector<Vec2>(targets.size(), Vec2{0, 0}), 0.0};

    Tree tree;
    tree.order = order;
    std::vector<int> index(field.size());
    std::iota(index.begin(), index.end(), 0);
    const BoundingBox bb = field.bounding_box();
    // square root cell so aspect ratio stays bounded
    const Vec2 c = (bb.lo + bb.hi) * 0.5;
    const double half = std::max({bb.extent().x1, bb.extent().x2, 1e-300}) * 0.5;
    tree.build(index, field, 0, static_cast<int>(field.size()), {c.x1 - half, c.x2 - half},
               {c.x1 + half, c.x2 + half}, leaf_size, 0);
    tree.pos.resize(field.size());
    tree.wgt.resize(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
        tree.pos[i] = field.positions[index[i]];
        tree.wgt[i] = field.weights[index[i]];
    }
    tree.compute_coeffs();

    const double eps = field.blob_scale;
    const MollifierSpec& m = *field.mollifier;
    const double cutoff = m.cutoff_in_eps() * eps;
    const double cutoff2 = cutoff * cutoff;
    // conservative opening: accept at a slightly smaller ratio than theta so
    // the classical theta^(order+1) estimate holds with margin
    const double inv_theta = 1.2 / theta;

    std::vector<Vec2> out(targets.size());
    std::vector<double> bound_all(targets.size(), 0.0);

    run_chunked(targets.size(), threads, [&](std::size_t tb, std::size_t te) {
        std::vector<int> stack;
        stack.reserve(256);
        for (std::size_t t = tb; t < te; ++t) {
            const cplx z{targets[t].x1, targets[t].x2};
            cplx acc{0.0, 0.0};
            Vec2 near{0.0, 0.0};
            double err = 0.0;
            stack.clear();
            stack.push_back(0);
            while (!stack.empty()) {
                const Tree::Node& n = tree.nodes[stack.back()];
                stack.pop_back();
                const cplx dz = z - n.center;
                const double d = std::abs(dz);
                if (d > n.rmax * inv_theta && d > n.rmax + cutoff) {
                    const cplx* a = &tree.coeffs[(&n - tree.nodes.data()) * (tree.order + 1)];
                    const cplx u = 1.0 / dz;
                    cplx s = a[tree.order];
                    for (int k = tree.order - 1; k >= 0; --k) s = s * u + a[k];
                    acc += s * u;
                    err += n.amass / (kTwoPi * (d - n.rmax)) *
                           std::pow(n.rmax / d, tree.order + 1);
                    continue;
                }
                if (n.child[0] < 0 && n.child[1] < 0 && n.child[2] < 0 && n.child[3] < 0) {
                    for (int i = n.begin; i < n.end; ++i) {
                        const Vec2 dd = targets[t] - tree.pos[i];
                        near += dd.perp() * (tree.wgt[i] * blob_factor(dd.norm2(), eps, m, cutoff2));
                    }
                    continue;
                }
                for (int q = 3; q >= 0; --q)
                    if (n.child[q] >= 0) stack.push_back(n.child[q]);
            }
            out[t] = near + Vec2{acc.imag(), acc.real()} / kTwoPi;
            bound_all[t] = err;
        }
    });
    const double max_bound = *std::max_element(bound_all.begin(), bound_all.end());
    return {std::move(out), max_bound};
}

VelocityEvaluator::VelocityEvaluator(VortexBlobField field, Method method, TreecodeParams params)
    : field_(std::move(field)), method_(method), params_(params) {}

std::vector<Vec2> VelocityEvaluator::operator()(std::span<const Vec2> targets) const {
    Method m = method_;
    if (m == Method::automatic)
        m = field_.size() * targets.size() > 250000 ? Method::treecode : Method::direct;
    if (m == Method::direct) return velocity_direct(field_, targets, params_.threads);
    return velocity_treecode(field_, targets, params_.theta, params_.order, params_.leaf_size,
                             params_.threads)
        .velocity;
}

Vec2 VelocityEvaluator::at(const Vec2& x) const {
    return velocity_direct(field_, std::span<const Vec2>{&x, 1}).front();
}

}  // namespace vblob
