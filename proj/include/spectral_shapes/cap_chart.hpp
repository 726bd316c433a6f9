#pragma once

#include <cmath>
#include <complex>

#include "cap.hpp"
#include "error.hpp"

namespace spectral_shapes {

// Conformal chart of a cap from the unit disk. Built from the vertex map
// M(z) = (z - vm)/(z - vp), which straightens the cap into a quarter-plane
// sector with apex at the origin (the arc and the geodesic cross the circle
// at right angles); aligning the sector, squaring, and a Cayley step then
// yield the disk. Landmarks: -1 -> vm, +1 -> vp, -i -> p (arc midpoint),
// +i -> axis point; the lower unit semicircle covers the boundary arc and the
// upper semicircle covers the geodesic.
struct CapChart {
    HyperbolicCap cap;
    Complex vm, vp;
    Complex alpha;  // unit direction of the sector edge used for alignment

    explicit CapChart(const HyperbolicCap& a)
        : cap(a), vm(a.vertex_minus()), vp(a.vertex_plus()) {
        Complex eS = sector_ray(cap.p);
        Complex eG = sector_ray(cap.axis_point());
        double cr = std::imag(eG * std::conj(eS));
        // The two rays are perpendicular; the cross product fixes which one
        // bounds the sector counterclockwise.
        require(std::abs(cr) > 0.999, "CapChart: sector rays not perpendicular");
        alpha = cr > 0 ? eS : eG;
    }

    Complex to_cap(Complex w) const {
        Complex v = std::sqrt(half_plane(w));
        Complex u = alpha * v;
        require(std::abs(u - 1.0) > 1e-14, "CapChart: to_cap hit the excluded point");
        return (vp * u - vm) / (u - 1.0);
    }

    Complex to_cap_derivative(Complex w) const {
        Complex v = std::sqrt(half_plane(w));
        require(std::abs(v) > 1e-150, "CapChart: derivative singular at w = -1");
        Complex u = alpha * v;
        require(std::abs(u - 1.0) > 1e-14, "CapChart: derivative hit the excluded point");
        Complex one_minus_w = 1.0 - w;
        Complex ds = Complex(0, 2) / (one_minus_w * one_minus_w);
        Complex dv = ds / (2.0 * v);
        Complex du = alpha * dv;
        return (vm - vp) / ((u - 1.0) * (u - 1.0)) * du;
    }

    // Inverse chart; z must stay away from the vertex vp (use near_vertex and
    // nudge before calling when atoms may sit on a vertex).
    Complex to_disk(Complex z) const {
        require(std::abs(z - vp) > 1e-14, "CapChart: to_disk at the vertex vp");
        Complex u = (z - vm) / (z - vp);
        Complex v = std::conj(alpha) * u;
        Complex s = v * v;
        return (s - Complex(0, 1)) / (s + Complex(0, 1));
    }

    bool near_vertex(Complex z, double tol = 1e-10) const {
        return std::abs(z - vm) < tol || std::abs(z - vp) < tol;
    }

    // Pulls a near-vertex atom slightly toward the interior so the inverse
    // chart stays well conditioned.
    Complex nudge_inward(Complex z, double step = 1e-8) const {
        Complex g = cap.axis_point();
        Complex d = g - z;
        double n = std::abs(d);
        require(n > 1e-12, "CapChart: cannot nudge, axis point coincides");
        return z + step * d / n;
    }

  private:
    // Cayley-type lift of the closed disk to the closed upper half plane.
    // Rounding can push boundary images a hair below the real axis (down to a
    // negative zero), where the principal square root jumps branch; clamp that
    // noise back onto the axis with a positive zero.
    Complex half_plane(Complex w) const {
        Complex s = Complex(0, 1) * (1.0 + w) / (1.0 - w);
        if (s.imag() <= 0.0 && s.imag() > -1e-12 * (1.0 + std::abs(s)))
            s = Complex(s.real(), 0.0);
        return s;
    }

    Complex sector_ray(Complex z) const {
        Complex u = (z - vm) / (z - vp);
        double n = std::abs(u);
        require(n > 1e-150, "CapChart: landmark coincides with a vertex");
        return u / n;
    }
};

}  // namespace spectral_shapes
