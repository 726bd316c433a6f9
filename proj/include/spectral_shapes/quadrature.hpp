#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "error.hpp"

namespace spectral_shapes {

using Complex = std::complex<double>;

// Gauss-Legendre rule on [a,b]; nodes ascending. Nodes found by Newton on
// the Legendre recurrence, started from the Chebyshev-angle estimate.
struct GaussLegendre {
    std::vector<double> x;
    std::vector<double> w;

    explicit GaussLegendre(int n, double a = -1.0, double b = 1.0) {
        require(n >= 1, "GaussLegendre: need n >= 1");
        x.resize(n);
        w.resize(n);
        const long double half = 0.5L * (static_cast<long double>(b) - a);
        const long double mid = 0.5L * (static_cast<long double>(b) + a);
        for (int i = 0; i < (n + 1) / 2; ++i) {
            long double t = std::cos(std::numbers::pi_v<long double> *
                                     (i + 0.75L) / (n + 0.5L));
            long double dp = 0.0L;
            for (int it = 0; it < 100; ++it) {
                long double p0 = 1.0L, p1 = t;
                if (n == 1) { p1 = 1.0L; p0 = 0.0L; }
                for (int k = 2; k <= n; ++k) {
                    long double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (t * p1 - p0) / (t * t - 1.0L);
                long double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-19L) break;
            }
            long double wi = 2.0L / ((1.0L - t * t) * dp * dp);
            x[i] = static_cast<double>(mid + half * t);
            w[i] = static_cast<double>(half * wi);
            x[n - 1 - i] = static_cast<double>(mid - half * t);
            w[n - 1 - i] = w[i];
        }
    }
};

// Exact value of the unit-disk integral of x^a y^b; zero unless both even.
inline double disk_monomial_integral(int a, int b) {
    if (a % 2 != 0 || b % 2 != 0) return 0.0;
    auto dfact = [](int m) {
        long double p = 1.0L;
        for (int k = m; k >= 2; k -= 2) p *= k;
        return p;
    };
    long double ang = 2.0L * std::numbers::pi_v<long double> *
                      dfact(a - 1) * dfact(b - 1) / dfact(a + b);
    return static_cast<double>(ang / (a + b + 2));
}

// Tensor rule on the unit disk: Gauss-Legendre in radius on [0,1], uniform in
// angle, plus a separate uniform boundary rule on the unit circle.
// Interior weights carry the area Jacobian r. The rule integrates polynomials
// of total degree up to min(2*n_r - 2, n_theta - 1) exactly; construction
// self-tests that (so an angular resolution too small for the advertised
// degree is caught immediately, not silently aliased).
struct DiskQuadrature {
    int n_r;
    int n_theta;
    int n_boundary;

    std::vector<double> r;         // radial nodes on (0,1)
    std::vector<double> w_r;       // radial GL weights on [0,1] (no Jacobian)
    std::vector<Complex> nodes;    // interior nodes, theta-major then r
    std::vector<double> weights;   // interior weights, sum = pi
    std::vector<Complex> boundary_nodes;   // on the unit circle
    std::vector<double> boundary_weights;  // each 2*pi/n_boundary

    explicit DiskQuadrature(int nr = 64, int ntheta = 256, int nb = 1024)
        : n_r(nr), n_theta(ntheta), n_boundary(nb) {
        require(nr >= 2 && ntheta >= 4 && nb >= 4, "DiskQuadrature: rule too small");
        GaussLegendre gl(nr, 0.0, 1.0);
        r = gl.x;
        w_r = gl.w;
        nodes.reserve(static_cast<size_t>(nr) * ntheta);
        weights.reserve(static_cast<size_t>(nr) * ntheta);
        const double dtheta = 2.0 * std::numbers::pi / ntheta;
        for (int j = 0; j < ntheta; ++j) {
            double th = dtheta * j;
            Complex dir = std::polar(1.0, th);
            for (int i = 0; i < nr; ++i) {
                nodes.push_back(r[i] * dir);
                weights.push_back(w_r[i] * r[i] * dtheta);
            }
        }
        boundary_nodes.reserve(nb);
        boundary_weights.assign(nb, 2.0 * std::numbers::pi / nb);
        for (int j = 0; j < nb; ++j)
            boundary_nodes.push_back(std::polar(1.0, 2.0 * std::numbers::pi * j / nb));
        self_test();
    }

    int exact_degree() const { return std::min(2 * n_r - 2, n_theta - 1); }

    // Rejects a request to integrate polynomial content beyond the rule's
    // exactness degree.
    void require_exact(int degree) const {
        require(degree >= 0 && degree <= exact_degree(),
                "DiskQuadrature: degree " + std::to_string(degree) +
                    " exceeds rule exactness " + std::to_string(exact_degree()));
    }

    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }

    template <class F>
    double integrate_boundary(F&& f) const {
        double s = 0.0;
        for (size_t i = 0; i < boundary_nodes.size(); ++i)
            s += boundary_weights[i] * f(boundary_nodes[i]);
        return s;
    }

  private:
    void self_test() const {
        double mass = 0.0;
        for (double wi : weights) mass += wi;
        require(std::abs(mass - std::numbers::pi) < 1e-12 * std::numbers::pi,
                "DiskQuadrature: interior mass check failed");
        double bmass = 0.0;
        for (double wi : boundary_weights) bmass += wi;
        require(std::abs(bmass - 2.0 * std::numbers::pi) < 1e-12,
                "DiskQuadrature: boundary mass check failed");

        int dmax = exact_degree();
        int atop = std::min(dmax, 12);
        atop -= atop % 2;
        const int cases[][2] = {{0, 0}, {2, 0},     {0, 2},         {4, 2},
                                {6, 6}, {atop, 0},  {1, 0},         {3, 1},
                                {5, 0}, {atop - 2, 2}};
        for (auto& c : cases) {
            int a = c[0], b = c[1];
            if (a < 0 || a + b > dmax) continue;
            double got = integrate([&](Complex z) {
                return std::pow(z.real(), a) * std::pow(z.imag(), b);
            });
            double want = disk_monomial_integral(a, b);
            double scale = std::max(1.0, std::abs(want));
            require(std::abs(got - want) < 1e-12 * scale,
                    "DiskQuadrature: monomial exactness check failed");
        }
    }
};

}  // namespace spectral_shapes
