#include "vblob/initial_data.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "vblob/errors.hpp"
#include "vblob/kernel.hpp"

namespace vblob {
namespace {

constexpr double kLambCut = 6.0;  // truncate lamb_oseen support at 6 sigma

BoundingBox disk_box(const Vec2& c, double r) {
    return {{c.x1 - r, c.x2 - r}, {c.x1 + r, c.x2 + r}};
}

BoundingBox merge(const BoundingBox& a, const BoundingBox& b) {
    return {{std::min(a.lo.x1, b.lo.x1), std::min(a.lo.x2, b.lo.x2)},
            {std::max(a.hi.x1, b.hi.x1), std::max(a.hi.x2, b.hi.x2)}};
}

}  // namespace

InitialVorticitySpec InitialVorticitySpec::rankine(double omega0, double radius, Vec2 center) {
    if (radius <= 0.0) throw ParameterError("rankine: radius must be positive");
    InitialVorticitySpec s;
    s.kind_ = VorticityKind::rankine;
    s.data_ = RankineData{omega0, radius, center};
    return s;
}

InitialVorticitySpec InitialVorticitySpec::lamb_oseen(double circulation, double sigma, Vec2 center) {
    if (sigma <= 0.0) throw ParameterError("lamb_oseen: sigma must be positive");
    InitialVorticitySpec s;
    s.kind_ = VorticityKind::lamb_oseen;
    s.data_ = LambOseenData{circulation, sigma, center};
    return s;
}

InitialVorticitySpec InitialVorticitySpec::patch_union(std::vector<Patch> patches) {
    if (patches.empty()) throw ParameterError("patch_union: no patches");
    for (const auto& p : patches)
        if (p.radius <= 0.0) throw ParameterError("patch_union: radius must be positive");
    InitialVorticitySpec s;
    s.kind_ = VorticityKind::patch_union;
    s.data_ = PatchesData{std::move(patches)};
    return s;
}

InitialVorticitySpec InitialVorticitySpec::sign_changing_pair(double amplitude, double radius,
                                                              Vec2 plus_center, Vec2 minus_center) {
    InitialVorticitySpec s = patch_union({{plus_center, radius, amplitude},
                                          {minus_center, radius, -amplitude}});
    s.kind_ = VorticityKind::sign_changing_pair;
    return s;
}

InitialVorticitySpec InitialVorticitySpec::point_vortex_array(std::vector<PointVortex> vortices) {
    if (vortices.empty()) throw ParameterError("point_vortex_array: empty");
    InitialVorticitySpec s;
    s.kind_ = VorticityKind::point_vortex_array;
    s.data_ = AtomsData{std::move(vortices)};
    return s;
}

InitialVorticitySpec InitialVorticitySpec::file_samples(const std::string& path, double cell_area) {
    std::ifstream in(path);
    if (!in) throw ParameterError("file_samples: cannot open " + path);
    std::vector<PointVortex> atoms;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        double x1, x2, w;
        char c1, c2;
        if (!(row >> x1 >> c1 >> x2 >> c2 >> w) || c1 != ',' || c2 != ',')
            throw ParameterError("file_samples: malformed row '" + line + "' in " + path);
        atoms.push_back({{x1, x2}, w * cell_area});
    }
    if (atoms.empty()) throw ParameterError("file_samples: no rows in " + path);
    InitialVorticitySpec s;
    s.kind_ = VorticityKind::file_samples;
    s.data_ = AtomsData{std::move(atoms)};
    return s;
}

double InitialVorticitySpec::value(const Vec2& x) const {
    switch (kind_) {
        case VorticityKind::rankine: {
            const auto& d = std::get<RankineData>(data_);
            return (x - d.center).norm2() <= d.radius * d.radius ? d.omega0 : 0.0;
        }
        case VorticityKind::lamb_oseen: {
            const auto& d = std::get<LambOseenData>(data_);
            const double r2 = (x - d.center).norm2();
            if (r2 > kLambCut * kLambCut * d.sigma * d.sigma) return 0.0;
            return d.circulation / (kTwoPi * d.sigma * d.sigma) *
                   std::exp(-r2 / (2.0 * d.sigma * d.sigma));
        }
        case VorticityKind::patch_union:
        case VorticityKind::sign_changing_pair: {
            double v = 0.0;
            for (const auto& p : std::get<PatchesData>(data_).patches)
                if ((x - p.center).norm2() <= p.radius * p.radius) v += p.amplitude;
            return v;
        }
        default:
            throw ParameterError("value(): atomic vorticity kinds have no density");
    }
}

const std::vector<PointVortex>& InitialVorticitySpec::atoms() const {
    if (!atomic()) throw ParameterError("atoms(): not an atomic vorticity kind");
    return std::get<AtomsData>(data_).atoms;
}

BoundingBox InitialVorticitySpec::support_box() const {
    switch (kind_) {
        case VorticityKind::rankine: {
            const auto& d = std::get<RankineData>(data_);
            return disk_box(d.center, d.radius);
        }
        case VorticityKind::lamb_oseen: {
            const auto& d = std::get<LambOseenData>(data_);
            return disk_box(d.center, kLambCut * d.sigma);
        }
        case VorticityKind::patch_union:
        case VorticityKind::sign_changing_pair: {
            const auto& ps = std::get<PatchesData>(data_).patches;
            BoundingBox b = disk_box(ps.front().center, ps.front().radius);
            for (const auto& p : ps) b = merge(b, disk_box(p.center, p.radius));
            return b;
        }
        default: {
            const auto& a = std::get<AtomsData>(data_).atoms;
            BoundingBox b{a.front().position, a.front().position};
            for (const auto& v : a) b = merge(b, {v.position, v.position});
            return b;
        }
    }
}

double InitialVorticitySpec::truncated_mass_bound() const {
    if (kind_ != VorticityKind::lamb_oseen) return 0.0;
    const auto& d = std::get<LambOseenData>(data_);
    return std::abs(d.circulation) * std::exp(-0.5 * kLambCut * kLambCut);
}

}  // namespace vblob
