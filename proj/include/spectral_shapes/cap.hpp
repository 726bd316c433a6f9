#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "error.hpp"
#include "quadrature.hpp"

namespace spectral_shapes {

// Region of the closed disk cut off by a geodesic: the set of z with
// 2 Re(conj(p) z) >= k (1 + |z|^2), where p is the unit pole (midpoint of the
// boundary arc), l in (0, 2pi) is the arc's angular length, and k = cos(l/2).
// For l < pi this is a lens near p; l = pi gives a half disk; l > pi the
// complement of a lens (k < 0). The same inequality covers all three cases.
struct HyperbolicCap {
    double l;
    Complex p;
    double k;

    HyperbolicCap(double l_, Complex p_) : l(l_), p(p_), k(std::cos(l_ / 2.0)) {
        require(l > 0.0 && l < 2.0 * std::numbers::pi,
                "HyperbolicCap: arc length must lie in (0, 2pi)");
        double a = std::abs(p);
        require(std::abs(a - 1.0) < 1e-9, "HyperbolicCap: |p| must be 1");
        p /= a;
    }

    bool contains(Complex z) const {
        return 2.0 * std::real(std::conj(p) * z) >= k * (1.0 + std::norm(z));
    }

    // Anticonformal reflection across the bounding geodesic: an involution
    // fixing the geodesic, swapping the cap with its complement, and mapping
    // the unit circle to itself. At l = pi it reduces to z -> -p^2 conj(z).
    Complex reflect(Complex z) const {
        Complex zb = std::conj(z);
        return (p * zb - k) / (k * zb - std::conj(p));
    }

    // Endpoints of the boundary arc, at angles -l/2 and +l/2 from p.
    Complex vertex_minus() const { return p * std::polar(1.0, -l / 2.0); }
    Complex vertex_plus() const { return p * std::polar(1.0, l / 2.0); }

    // Intersection of the geodesic with the symmetry axis through p.
    Complex axis_point() const {
        return std::tan(std::numbers::pi / 4.0 - l / 4.0) * p;
    }

    // Euclidean circle carrying the geodesic (undefined at l = pi, where the
    // geodesic is the diameter perpendicular to p).
    Complex euclid_center() const {
        require(std::abs(k) > 1e-12, "HyperbolicCap: geodesic is a diameter");
        return p / k;
    }
    double euclid_radius() const {
        require(std::abs(k) > 1e-12, "HyperbolicCap: geodesic is a diameter");
        return std::sqrt(1.0 - k * k) / std::abs(k);
    }
};

}  // namespace spectral_shapes
