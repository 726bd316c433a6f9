#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "spectral_shapes/conformal.hpp"
#include "spectral_shapes/recenter.hpp"

using namespace spectral_shapes;

namespace {

DiskQuadrature& quad() {
    static DiskQuadrature q(32, 128, 512);
    return q;
}

DiscreteMeasure uniform_boundary() {
    return pullback_boundary_measure(ConformalMap::identity(),
                                     DensityField::constant(1.0), quad());
}

DiscreteMeasure lebesgue() {
    return pullback_area_measure(ConformalMap::identity(),
                                 DensityField::constant(1.0), quad());
}

}  // namespace

TEST_CASE("recentering a shifted uniform measure recovers the shift") {
    for (auto psi : {PsiMap::identity(), PsiMap::bessel_radial()}) {
        for (const auto& base : {uniform_boundary(), lebesgue()}) {
            auto shifted =
                pushforward(base, DiskAutomorphism::recentering({0.3, 0.0}));
            auto res = renormalize(shifted, psi);
            REQUIRE(res.residual <= 1e-10);
            REQUIRE(std::abs(res.xi - Complex(-0.3, 0.0)) < 1e-9);
            auto centered = pushforward(shifted, res.map());
            REQUIRE(std::abs(center_of_mass(centered, psi)) <= 1e-10);
        }
    }
}

TEST_CASE("already centered measures stay put") {
    auto res = renormalize(uniform_boundary(), PsiMap::identity());
    REQUIRE(std::abs(res.xi) < 1e-9);
}

TEST_CASE("centering point is independent of the Newton seed") {
    ConformalMap phi({{0.0, 0.0}, {1.0, 0.0}, {0.25, 0.15}, {-0.05, 0.1}});
    auto m = pullback_boundary_measure(phi, DensityField::constant(1.0), quad());
    auto ref = renormalize(m, PsiMap::identity());
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 8; ++t) {
        Complex seed = std::polar(0.9 * u(rng), 2.0 * std::numbers::pi * u(rng));
        auto res = renormalize(m, PsiMap::identity(), seed);
        REQUIRE(std::abs(res.xi - ref.xi) < 1e-8);
    }
}

TEST_CASE("centering is rotation equivariant") {
    ConformalMap phi({{0.0, 0.0}, {1.0, 0.0}, {0.2, 0.1}});
    auto m = pullback_boundary_measure(phi, DensityField::constant(1.0), quad());
    for (auto psi : {PsiMap::identity(), PsiMap::bessel_radial()}) {
        auto base = renormalize(m, psi);
        for (double th : {0.6, 2.0, 4.5}) {
            Complex rot = std::polar(1.0, th);
            auto rotated = pushforward(m, DiskAutomorphism::rotation(rot));
            auto res = renormalize(rotated, psi);
            REQUIRE(std::abs(res.xi - rot * base.xi) < 1e-8);
        }
    }
}

TEST_CASE("centering depends continuously on the measure") {
    ConformalMap phi({{0.0, 0.0}, {1.0, 0.0}, {0.2, -0.1}});
    auto m = pullback_boundary_measure(phi, DensityField::constant(1.0), quad());
    auto base = renormalize(m, PsiMap::identity());
    auto wobble = m;
    for (size_t i = 0; i < wobble.size(); ++i) wobble.w[i] *= 1.0 + 1e-6 * std::cos(3.0 * std::arg(wobble.z[i]));
    auto res = renormalize(wobble, PsiMap::identity(), base.xi);
    REQUIRE(std::abs(res.xi - base.xi) < 1e-4);
}

TEST_CASE("both variants center an off-center interior measure") {
    // The recentered Lebesgue measure has angularly symmetric preimage, so
    // both radial weights admit the same exact centering point.
    auto blob = pushforward(lebesgue(), DiskAutomorphism::recentering({0.4, 0.2}));
    auto ri = renormalize(blob, PsiMap::identity());
    auto rb = renormalize(blob, PsiMap::bessel_radial());
    REQUIRE(ri.residual <= 1e-10);
    REQUIRE(rb.residual <= 1e-10);
    REQUIRE(std::abs(ri.xi - Complex(-0.4, -0.2)) < 1e-9);
    REQUIRE(std::abs(rb.xi - Complex(-0.4, -0.2)) < 1e-9);
}

TEST_CASE("single boundary atom admits no centering") {
    DiscreteMeasure degenerate;
    degenerate.push_back({1.0, 0.0}, 1.0, Part::Boundary);
    REQUIRE_THROWS_AS(renormalize(degenerate, PsiMap::identity()), Error);
}
