#pragma once

#include <cmath>
#include <complex>

#include "error.hpp"
#include "quadrature.hpp"

namespace spectral_shapes {

// Holomorphic automorphism of the unit disk in the normal form
// z -> omega * (z + xi) / (conj(xi) z + 1), |omega| = 1, |xi| < 1.
// The pair (omega, xi) is unique for each automorphism, which makes
// composition and inversion exact algebra instead of pointwise fitting.
struct DiskAutomorphism {
    Complex omega{1.0, 0.0};
    Complex xi{0.0, 0.0};

    DiskAutomorphism() = default;

    DiskAutomorphism(Complex om, Complex x) : omega(om), xi(x) {
        double a = std::abs(omega);
        require(std::abs(a - 1.0) < 1e-9, "DiskAutomorphism: |omega| must be 1");
        omega /= a;
        require(std::abs(xi) < 1.0, "DiskAutomorphism: |xi| must be < 1");
    }

    // Rotation z -> omega z.
    static DiskAutomorphism rotation(Complex om) { return {om, 0.0}; }

    // Recentering z -> (z + xi)/(conj(xi) z + 1); sends -xi to the origin.
    static DiskAutomorphism recentering(Complex x) { return {{1.0, 0.0}, x}; }

    Complex operator()(Complex z) const {
        return omega * (z + xi) / (std::conj(xi) * z + 1.0);
    }

    Complex derivative(Complex z) const {
        Complex d = std::conj(xi) * z + 1.0;
        return omega * (1.0 - std::norm(xi)) / (d * d);
    }

    DiskAutomorphism inverse() const { return {std::conj(omega), -omega * xi}; }

    // Composition (*this) after g, computed in closed form. The denominator
    // A = omega_g + xi * conj(xi_g) cannot vanish since |xi * xi_g| < 1.
    DiskAutomorphism after(const DiskAutomorphism& g) const {
        Complex A = g.omega + xi * std::conj(g.xi);
        Complex B = g.omega * g.xi + xi;
        Complex om = omega * std::conj(g.omega) * A / std::conj(A);
        return {om, B / A};
    }
};

// Gromov-style invariant of pairs: |z - w| / |1 - conj(w) z|, preserved by
// every disk automorphism.
inline double pseudo_hyperbolic_distance(Complex z, Complex w) {
    return std::abs(z - w) / std::abs(1.0 - std::conj(w) * z);
}

}  // namespace spectral_shapes
