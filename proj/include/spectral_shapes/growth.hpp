#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "conformal.hpp"
#include "error.hpp"
#include "measure.hpp"
#include "quadrature.hpp"

namespace spectral_shapes {

// Interior mass of the measure inside the closed subdisk of radius r.
inline double growth_function(const DiscreteMeasure& m, double r) {
    double s = 0.0;
    for (size_t i = 0; i < m.size(); ++i)
        if (m.part[i] == Part::Interior && std::abs(m.z[i]) <= r) s += m.w[i];
    return s;
}

// rho-mass that the map pushes into the subdisk |z| < r. For the unit density
// this is the exact coefficient series; otherwise a dedicated radial rule on
// [0, r] paired with a uniform angular rule (spectrally accurate for smooth
// densities).
inline double pullback_subdisk_mass(const ConformalMap& phi, const DensityField& rho,
                                    double r, int nr = 64, int ntheta = 256) {
    require(r >= 0.0 && r <= 1.0, "pullback_subdisk_mass: r outside [0, 1]");
    require(rho.pointwise(), "pullback_subdisk_mass: needs a pointwise density");
    if (rho.is_constant_one()) return phi.image_area(r);
    if (r == 0.0) return 0.0;
    GaussLegendre gl(nr, 0.0, r);
    double s = 0.0;
    const double dtheta = 2.0 * std::numbers::pi / ntheta;
    for (int j = 0; j < ntheta; ++j) {
        Complex dir = std::polar(1.0, dtheta * j);
        for (int i = 0; i < nr; ++i) {
            Complex z = gl.x[i] * dir;
            s += gl.w[i] * gl.x[i] * dtheta * rho(phi(z)) * std::norm(phi.derivative(z));
        }
    }
    return s;
}

struct GrowthReport {
    std::vector<double> radii;
    std::vector<double> defect;  // G(r) - pi r^2 after normalizing mass to pi
    double max_defect = 0.0;
    bool equality = false;  // defect identically ~0: the flat case
};

// Evaluates the normalized mass-concentration defect on n_radii radii.
// Densities whose pullback is subharmonic keep max_defect <= 0 up to
// quadrature error; equality across all radii happens only when the pullback
// density is constant.
inline GrowthReport check_growth(const ConformalMap& phi, const DensityField& rho,
                                 int n_radii = 200) {
    require(n_radii >= 2, "check_growth: need at least 2 radii");
    double total = pullback_subdisk_mass(phi, rho, 1.0);
    require(total > 0.0, "check_growth: zero total mass");
    GrowthReport rep;
    rep.max_defect = -1e300;
    for (int m = 1; m <= n_radii; ++m) {
        double r = static_cast<double>(m) / n_radii;
        double g = std::numbers::pi * pullback_subdisk_mass(phi, rho, r) / total;
        double d = g - std::numbers::pi * r * r;
        rep.radii.push_back(r);
        rep.defect.push_back(d);
        rep.max_defect = std::max(rep.max_defect, d);
    }
    double amax = 0.0;
    for (double d : rep.defect) amax = std::max(amax, std::abs(d));
    rep.equality = amax <= 1e-10 * std::numbers::pi;
    return rep;
}

struct ComparisonReport {
    double lhs = 0.0;   // integral of h(|z|) against the normalized measure
    double rhs = 0.0;   // the same integral against the flat disk
    double defect = 0.0;  // lhs - rhs, expected >= -tol under outward dominance
};

// For an interior measure normalized to mass pi whose growth stays below
// pi r^2, the average of a nondecreasing radial h dominates the flat-disk
// average. h must be nondecreasing on [0, 1]; a decreasing sample rejects it.
inline ComparisonReport radial_comparison(const DiscreteMeasure& m,
                                          const std::function<double(double)>& h,
                                          int n_gl = 128) {
    for (int i = 0; i + 1 <= 256; ++i) {
        double a = static_cast<double>(i) / 256, b = static_cast<double>(i + 1) / 256;
        require(h(b) >= h(a) - 1e-12 * (std::abs(h(a)) + 1.0),
                "radial_comparison: h is not nondecreasing");
        if (i + 1 == 256) break;
    }
    double mass = m.mass(Part::Interior);
    require(mass > 0.0, "radial_comparison: measure has no interior mass");
    ComparisonReport rep;
    for (size_t i = 0; i < m.size(); ++i)
        if (m.part[i] == Part::Interior) rep.lhs += m.w[i] * h(std::abs(m.z[i]));
    rep.lhs *= std::numbers::pi / mass;
    GaussLegendre gl(n_gl, 0.0, 1.0);
    for (int i = 0; i < n_gl; ++i)
        rep.rhs += gl.w[i] * gl.x[i] * h(gl.x[i]);
    rep.rhs *= 2.0 * std::numbers::pi;
    rep.defect = rep.lhs - rep.rhs;
    return rep;
}

}  // namespace spectral_shapes
