#include <cmath>
#include <fstream>

#include "doctest.h"
#include "vblob/errors.hpp"
#include "vblob/field.hpp"
#include "vblob/kernel.hpp"

using namespace vblob;

namespace {

VortexBlobField unit_rankine(double eps = 0.05, int n = 256) {
    return discretize(InitialVorticitySpec::rankine(1.0, 1.0), eps, n,
                      BoundingBox{{-1.1, -1.1}, {1.1, 1.1}});
}

}  // namespace

TEST_CASE("mollifiers are probability densities") {
    for (const MollifierSpec* m : {&MollifierSpec::gaussian(), &MollifierSpec::compact_bump()}) {
        // radial quadrature of 2 pi r rho(r)
        const int n = 200000;
        const double rmax = m->cutoff_in_eps();
        const double dr = rmax / n;
        double mass = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = (i + 0.5) * dr;
            mass += kTwoPi * r * m->rho(r) * dr;
        }
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(m->swirl(m->cutoff_in_eps()) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(m->rho(0.3) >= 0.0);
    }
    CHECK(MollifierSpec::compact_bump().rho(1.0) == 0.0);
    CHECK(MollifierSpec::compact_bump().swirl(1.0) == 1.0);
}

TEST_CASE("discretize: rankine mass converges to pi") {
    const auto f = unit_rankine();
    CHECK(total_circulation(f) == doctest::Approx(M_PI).epsilon(0.01));
    CHECK(l1_norm(f) == doctest::Approx(M_PI).epsilon(0.01));
    CHECK(f.blob_scale == 0.05);
    f.validate();
}

TEST_CASE("discretize: single point vortex stays atomic") {
    const auto spec = InitialVorticitySpec::point_vortex_array({{{0.25, -0.5}, 1.0}});
    const auto f = discretize(spec, 0.01, 64);
    REQUIRE(f.size() == 1);
    CHECK(f.weights[0] == 1.0);
    CHECK(f.positions[0] == Vec2{0.25, -0.5});
}

TEST_CASE("discretize: sign-changing pair cancels exactly") {
    const auto spec =
        InitialVorticitySpec::sign_changing_pair(1.0, 0.5, {-1.0, 0.0}, {1.0, 0.0});
    const auto f = discretize(spec, 0.02, 256);
    CHECK(std::abs(total_circulation(f)) <= 1e-12);
    CHECK(l1_norm(f) == doctest::Approx(M_PI / 2.0).epsilon(0.01));
}

TEST_CASE("discretize: insufficient box reports the missing mass") {
    const auto spec = InitialVorticitySpec::rankine(1.0, 1.0);
    try {
        discretize(spec, 0.05, 64, BoundingBox{{-0.5, -1.5}, {1.5, 1.5}});
        FAIL("expected CoverageError");
    } catch (const CoverageError& e) {
        CHECK(e.mass_deficit > 0.1);   // roughly the area of the cut segment
        CHECK(e.mass_deficit < M_PI);
    }
}

TEST_CASE("eval_vorticity: single blob, superposition, compact support") {
    VortexBlobField f;
    f.blob_scale = 0.1;
    f.positions = {{0.0, 0.0}};
    f.weights = {1.0};
    const double peak = 1.0 / (kTwoPi * 0.1 * 0.1);
    CHECK(eval_vorticity(f, {0.0, 0.0}) == doctest::Approx(peak).epsilon(1e-12));

    f.positions.push_back({0.0, 0.0});
    f.weights.push_back(1.0);
    CHECK(eval_vorticity(f, {0.0, 0.0}) == doctest::Approx(2.0 * peak).epsilon(1e-12));

    f.mollifier = &MollifierSpec::compact_bump();
    CHECK(eval_vorticity(f, {5.0, 0.0}) == 0.0);
}

TEST_CASE("eval_vorticity_grid agrees with pointwise evaluation") {
    const auto f = unit_rankine(0.06, 64);
    const GridSpec g = GridSpec::over_ball(1.3, 41);
    const auto sampled = eval_vorticity_grid(f, g);
    for (int j = 3; j < g.ny; j += 7)
        for (int i = 1; i < g.nx; i += 5) {
            const double ref = eval_vorticity(f, g.center(i, j));
            CHECK(sampled.values[static_cast<std::size_t>(j) * g.nx + i] ==
                  doctest::Approx(ref).epsilon(1e-12));
        }
}

TEST_CASE("l1_norm: empty field and homogeneity") {
    VortexBlobField f;
    f.blob_scale = 0.1;
    CHECK(l1_norm(f) == 0.0);

    auto g = unit_rankine(0.05, 128);
    const double base = l1_norm(g);
    for (auto& w : g.weights) w *= -2.5;
    CHECK(l1_norm(g) == doctest::Approx(2.5 * base).epsilon(1e-12));
}

TEST_CASE("equi-integrability modulus: indicator layer cake") {
    const auto f = unit_rankine(0.03, 256);
    CHECK(equi_integrability_modulus(f, 0.5) == doctest::Approx(0.5).epsilon(0.02));
    CHECK(equi_integrability_modulus(f, 4.0) == doctest::Approx(M_PI).epsilon(0.02));

    // coarse evaluation grid flags a resolution warning
    CHECK(equi_integrability_modulus_report(f, 0.5, 0.1).resolution_warning);
    CHECK_FALSE(equi_integrability_modulus_report(f, 0.5).resolution_warning);
}

TEST_CASE("equi-integrability modulus: uniform over mollification levels") {
    // rho_{1/n} * 1_{B_1} realized as blob fields with shrinking eps
    const double delta = 0.5;
    const double cap = equi_integrability_modulus(unit_rankine(0.12, 128), delta);
    double prev = cap;
    for (double eps : {0.06, 0.03}) {
        const double v = equi_integrability_modulus(unit_rankine(eps, 128), delta);
        CHECK(v <= 1.1 * std::max(delta, cap));  // uniformly bounded in n
        prev = v;
    }
    CHECK(prev <= delta * 1.05);
}

TEST_CASE("file_samples round trip") {
    const char* path = "vblob_test_samples.csv";
    {
        std::ofstream out(path);
        out << "# x1,x2,omega\n";
        out << "0.0,0.0,2.0\n0.5,0.25,-1.0\n";
    }
    const auto spec = InitialVorticitySpec::file_samples(path, 0.5);
    const auto f = discretize(spec, 0.01, 4);
    REQUIRE(f.size() == 2);
    CHECK(f.weights[0] == 1.0);
    CHECK(f.weights[1] == -0.5);
    CHECK(f.positions[1] == Vec2{0.5, 0.25});
    std::remove(path);
}
