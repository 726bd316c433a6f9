#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "bessel.hpp"
#include "error.hpp"
#include "measure.hpp"
#include "moebius.hpp"

namespace spectral_shapes {

// Angular-equivariant test map of the closed disk used for centering.
// Identity keeps z; the radial variant substitutes the disk eigenprofile
// f(|z|) for |z|, which matches boundary values (f(1) = 1) while weighting
// the interior the way the first Neumann mode does.
struct PsiMap {
    enum class Kind { Identity, BesselRadial };
    Kind kind = Kind::Identity;
    RadialEigenProfile profile;

    static PsiMap identity() { return {}; }
    static PsiMap bessel_radial() { return {Kind::BesselRadial, {}}; }

    Complex operator()(Complex z) const {
        if (kind == Kind::Identity) return z;
        double r = std::abs(z);
        if (r < 1e-300) return {0.0, 0.0};
        return profile.f(std::min(r, 1.0)) * (z / r);
    }
};

inline Complex center_of_mass(const DiscreteMeasure& m, const PsiMap& psi) {
    double mass = m.mass();
    require(mass > 0.0, "center_of_mass: zero mass");
    Complex s = 0.0;
    for (size_t i = 0; i < m.size(); ++i) s += m.w[i] * psi(m.z[i]);
    return s / mass;
}

// Transport of atoms by a disk automorphism; weights and parts are kept, and
// boundary atoms are snapped back onto the circle to stop rounding drift.
inline DiscreteMeasure pushforward(const DiscreteMeasure& m,
                                   const DiskAutomorphism& g) {
    DiscreteMeasure out = m;
    for (size_t i = 0; i < out.size(); ++i) {
        Complex w = g(out.z[i]);
        if (out.part[i] == Part::Boundary) w /= std::abs(w);
        out.z[i] = w;
    }
    return out;
}

struct RenormalizationResult {
    Complex xi{0.0, 0.0};
    double residual = 0.0;
    int iterations = 0;
    bool used_grid = false;

    DiskAutomorphism map() const { return DiskAutomorphism::recentering(xi); }
};

// Finds xi with zero psi-center of the recentered measure: the centering
// point is unique when it exists, so Newton from a decent seed converges
// quadratically. Steps are damped and kept inside the disk; if the seeded
// iteration stalls, a 32x32 polar scan picks a fresh seed. Failure after the
// scan means the measure is degenerate (e.g. concentrated at one boundary
// atom, where no centering exists) and is reported as an error.
inline RenormalizationResult renormalize(const DiscreteMeasure& m, const PsiMap& psi,
                                         Complex seed = {0.0, 0.0},
                                         double tol = 1e-10, int max_iter = 200) {
    m.validate();
    auto F = [&](Complex xi) {
        return center_of_mass(pushforward(m, DiskAutomorphism::recentering(xi)), psi);
    };
    const double h = 1e-6;
    const double rmax = 1.0 - 1e-9;

    auto clamp = [&](Complex xi) {
        double a = std::abs(xi);
        return a > rmax ? xi * (rmax / a) : xi;
    };

    auto newton = [&](Complex xi, int budget, int& used) {
        xi = clamp(xi);
        Complex f = F(xi);
        for (used = 0; used < budget && std::abs(f) > tol; ++used) {
            Complex fx = (F(clamp(xi + h)) - F(clamp(xi - h))) / (2.0 * h);
            Complex fy = (F(clamp(xi + Complex(0, h))) - F(clamp(xi - Complex(0, h)))) /
                         (2.0 * h);
            // Solve the real 2x2 system [fx fy] d = -f.
            double a = fx.real(), b = fy.real(), c = fx.imag(), d = fy.imag();
            double det = a * d - b * c;
            if (std::abs(det) < 1e-300) break;
            Complex step(-(d * f.real() - b * f.imag()) / det,
                         -(-c * f.real() + a * f.imag()) / det);
            double t = 1.0;
            Complex xin = xi;
            Complex fn = f;
            for (int half = 0; half < 40; ++half) {
                Complex cand = clamp(xi + t * step);
                Complex fc = F(cand);
                if (std::abs(fc) < std::abs(f)) {
                    xin = cand;
                    fn = fc;
                    break;
                }
                t *= 0.5;
            }
            if (xin == xi) break;
            xi = xin;
            f = fn;
        }
        return std::make_pair(xi, std::abs(f));
    };

    RenormalizationResult res;
    int used = 0;
    auto [xi, r] = newton(seed, max_iter, used);
    res.xi = xi;
    res.residual = r;
    res.iterations = used;
    if (r <= tol) return res;

    // Seeded run stalled: scan a polar grid for the best restart.
    res.used_grid = true;
    Complex best = seed;
    double best_r = r;
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j) {
            Complex cand = std::polar(0.97 * (i + 0.5) / 32.0,
                                      2.0 * std::numbers::pi * j / 32.0);
            double rc = std::abs(F(cand));
            if (rc < best_r) {
                best_r = rc;
                best = cand;
            }
        }
    auto [xi2, r2] = newton(best, max_iter, used);
    res.xi = xi2;
    res.residual = r2;
    res.iterations += used;
    require(r2 <= tol,
            "renormalize: no centering point found; measure is degenerate "
            "(residual " + std::to_string(r2) + ")");
    return res;
}

}  // namespace spectral_shapes
