#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "cap.hpp"
#include "cap_chart.hpp"
#include "error.hpp"
#include "inertia.hpp"
#include "measure.hpp"
#include "moebius.hpp"
#include "recenter.hpp"

namespace spectral_shapes {

// Reflects the complement of the cap onto the cap: atoms inside stay, atoms
// outside move to their geodesic mirror image. Weights and parts are kept, so
// integrals of reflection-symmetric functions are preserved exactly.
inline DiscreteMeasure fold(const DiscreteMeasure& m, const HyperbolicCap& cap) {
    DiscreteMeasure out = m;
    for (size_t i = 0; i < out.size(); ++i) {
        if (!cap.contains(out.z[i])) {
            Complex r = cap.reflect(out.z[i]);
            if (out.part[i] == Part::Boundary) r /= std::abs(r);
            out.z[i] = r;
        }
    }
    return out;
}

// Evaluates a function defined on the cap on the whole closed disk by
// reading mirror images: the result is invariant under the cap reflection
// and continuous across the geodesic.
template <class F>
auto lift(F u, const HyperbolicCap& cap) {
    return [u = std::move(u), cap](Complex z) {
        return cap.contains(z) ? u(z) : u(cap.reflect(z));
    };
}

// Result of transplanting a folded measure back to the full disk through the
// cap chart, recentered and rotation-gauged. The transplant map is
// z -> gauge * d_xi(chart.to_disk(z)); its inverse is the conformal map from
// the disk onto the cap that the Rayleigh-quotient bounds refer to.
struct Rearrangement {
    HyperbolicCap cap;
    CapChart chart;
    PsiMap psi;
    DiscreteMeasure folded;   // nu restricted-and-reflected onto the cap
    DiscreteMeasure zeta;     // transplanted measure on the disk, psi-centered
    DiskAutomorphism gauge_map;  // rotation(gauge) after recentering(xi)
    Complex gauge;
    RenormalizationResult centering;
    double nudged_mass = 0.0;   // weight carried by vertex-perturbed atoms
    double dropped_mass = 0.0;  // weight of atoms lost to chart failures

    Complex transplant(Complex z) const { return gauge_map(chart.to_disk(z)); }
};

// Folds the measure over the cap, maps the cap to the disk by the chart,
// recenters so the psi-center vanishes, and fixes the rotation gauge
// omega = p^2 * conj(psi'(-xi)) / |psi'(-xi)|. That gauge makes the family
// continuous in the cap and attains both degenerate limits: the full-disk cap
// reproduces the input measure and the vanishing cap reproduces its geodesic
// reflection. Atoms within 1e-10 of a vertex are nudged 1e-8 inward before
// inversion; atoms the chart still cannot place are dropped, and the dropped
// weight must stay below 1e-8 of the total.
inline Rearrangement rearranged(const DiscreteMeasure& m, const HyperbolicCap& cap,
                                const PsiMap& psi, Complex xi_seed = {0.0, 0.0}) {
    m.validate();
    CapChart chart(cap);
    DiscreteMeasure folded = fold(m, cap);

    DiscreteMeasure y;
    double nudged = 0.0, dropped = 0.0;
    for (size_t i = 0; i < folded.size(); ++i) {
        Complex z = folded.z[i];
        double nudge_w = 0.0;
        if (chart.near_vertex(z)) {
            z = chart.nudge_inward(z);
            nudge_w = folded.w[i];
        }
        try {
            Complex w = chart.to_disk(z);
            double a = std::abs(w);
            if (a > 1.0) w /= a;
            if (folded.part[i] == Part::Boundary && a > 1e-300) w /= std::abs(w);
            y.push_back(w, folded.w[i], folded.part[i]);
            nudged += nudge_w;
        } catch (const Error&) {
            dropped += folded.w[i];
        }
    }
    require(dropped < 1e-8 * m.mass(),
            "rearranged: mass lost at cap vertices exceeds the 1e-8 budget");

    RenormalizationResult centering = renormalize(y, psi, xi_seed);
    Complex dpsi = chart.to_cap_derivative(-centering.xi);
    Complex gauge = cap.p * cap.p * std::conj(dpsi) / std::abs(dpsi);

    DiskAutomorphism g(gauge, centering.xi);
    Rearrangement r{cap,   chart, psi,       std::move(folded), pushforward(y, g),
                    g,     gauge, centering, nudged,            dropped};
    return r;
}

// Boundary trace of the folded test function <Psi(.), t> on a uniform grid of
// the unit circle: points outside the cap read the value at their mirror
// image, so the trace is continuous across the fold.
inline std::vector<double> lift_boundary_trace(const Rearrangement& r, Complex t,
                                               int n) {
    require(n >= 4, "lift_boundary_trace: grid too small");
    std::vector<double> out;
    out.reserve(n);
    for (int j = 0; j < n; ++j) {
        Complex z = std::polar(1.0, 2.0 * std::numbers::pi * j / n);
        if (!r.cap.contains(z)) z = r.cap.reflect(z);
        if (r.chart.near_vertex(z)) z = r.chart.nudge_inward(z);
        Complex y = r.transplant(z);
        double a = std::abs(y);
        if (a > 1.0) y /= a;
        out.push_back(std::real(std::conj(t) * r.psi(y)));
    }
    return out;
}

// Dirichlet energy of the harmonic extension of uniformly sampled boundary
// values: E = pi * sum_{k>=1} k (a_k^2 + b_k^2) from the trapezoid Fourier
// coefficients, truncated below the Nyquist frequency.
inline double harmonic_extension_energy(const std::vector<double>& values) {
    int n = static_cast<int>(values.size());
    require(n >= 8, "harmonic_extension_energy: need at least 8 samples");
    double e = 0.0;
    for (int k = 1; 2 * k < n; ++k) {
        double a = 0.0, b = 0.0;
        for (int j = 0; j < n; ++j) {
            double th = 2.0 * std::numbers::pi * j * k / n;
            a += values[j] * std::cos(th);
            b += values[j] * std::sin(th);
        }
        a *= 2.0 / n;
        b *= 2.0 / n;
        e += k * (a * a + b * b);
    }
    return std::numbers::pi * e;
}

struct FoldedBound {
    InertiaForm form;      // inertia of the transplanted measure
    double energy;         // Dirichlet energy of one folded test function
    double quotient;       // 2 * energy / lambda_min: the eigenvalue bound
    double times_mass;     // quotient scaled by the input measure's mass
};

// Two-dimensional family of folded test functions: each direction t has
// doubled energy 2*E(X_t) upstairs and squared mass at least t^T Q t
// downstairs, so every eigenvalue reachable by this family is at most
// 2*energy/lambda_min(Q). For the identity psi (boundary measures, Steklov
// ladder) E(X_t) = pi; for the radial-profile psi (area measures, Neumann
// ladder) E(X_t) = zeta^2 * I_f / 2 with I_f the disk integral of f(|z|)^2.
inline FoldedBound folded_bound(const Rearrangement& r, double input_mass) {
    InertiaForm q = InertiaForm::from(r.zeta, r.psi);
    double energy;
    if (r.psi.kind == PsiMap::Kind::Identity) {
        energy = std::numbers::pi;
    } else {
        GaussLegendre gl(64, 0.0, 1.0);
        double i_f = 0.0;
        for (size_t i = 0; i < gl.x.size(); ++i) {
            double f = r.psi.profile.f(gl.x[i]);
            i_f += gl.w[i] * gl.x[i] * f * f;
        }
        i_f *= 2.0 * std::numbers::pi;
        energy = 0.5 * r.psi.profile.eigenvalue() * i_f;
    }
    double lmin = q.lambda_min();
    require(lmin > 0.0, "folded_bound: degenerate inertia form");
    double quotient = 2.0 * energy / lmin;
    return {q, energy, quotient, quotient * input_mass};
}

// Convenience entry: rearrange nu over the cap and return the eigenvalue
// bound 2 sup_t E(X_t) / int X_t^2 dzeta_a.
inline FoldedBound folded_rayleigh_bound(const DiscreteMeasure& nu,
                                         const HyperbolicCap& cap, const PsiMap& psi,
                                         Complex xi_seed = {0.0, 0.0}) {
    return folded_bound(rearranged(nu, cap, psi, xi_seed), nu.mass());
}

}  // namespace spectral_shapes
