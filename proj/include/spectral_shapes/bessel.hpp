#pragma once

#include <cmath>
#include <utility>

#include "error.hpp"

namespace spectral_shapes {

namespace bessel_detail {

// Power series in long double. Alternating terms peak near m ~ x/2 with
// magnitude ~1e4 at x = 12, so extended precision keeps the cancellation
// error below 1e-15.
inline std::pair<long double, long double> j01_series(long double x) {
    long double h = x / 2.0L, h2 = h * h;
    long double t0 = 1.0L, s0 = 1.0L;
    long double t1 = h, s1 = h;
    for (int m = 1; m < 200; ++m) {
        t0 *= -h2 / (static_cast<long double>(m) * m);
        t1 *= -h2 / (static_cast<long double>(m) * (m + 1));
        s0 += t0;
        s1 += t1;
        if (std::abs(t0) < 1e-22L && std::abs(t1) < 1e-22L) break;
    }
    return {s0, s1};
}

// Miller downward recurrence, normalized by J0 + 2*sum J_{2k} = 1.
inline std::pair<long double, long double> j01_miller(long double x) {
    int top = static_cast<int>(x) + 30;
    long double jp = 0.0L, jc = 1e-30L;
    long double sum = 0.0L, j0 = 0.0L, j1 = 0.0L;
    for (int n = top; n >= 1; --n) {
        long double jm = (2.0L * n / x) * jc - jp;
        jp = jc;
        jc = jm;
        if (n - 1 == 0) j0 = jc;
        if (n - 1 == 1) j1 = jc;
        if ((n - 1) % 2 == 0) sum += (n - 1 == 0) ? jc : 2.0L * jc;
    }
    return {j0 / sum, j1 / sum};
}

inline std::pair<long double, long double> j01(long double x) {
    return x <= 12.0L ? j01_series(x) : j01_miller(x);
}

}  // namespace bessel_detail

// J0 and J1 on [0, 20], accurate to ~1e-16.
inline double bessel_j0(double x) {
    require(x >= 0.0 && x <= 20.0, "bessel_j0: x out of [0, 20]");
    return static_cast<double>(bessel_detail::j01(x).first);
}

inline double bessel_j1(double x) {
    require(x >= 0.0 && x <= 20.0, "bessel_j1: x out of [0, 20]");
    return static_cast<double>(bessel_detail::j01(x).second);
}

// J1'(x) = J0(x) - J1(x)/x, with the x = 0 limit 1/2.
inline double bessel_j1_prime(double x) {
    require(x >= 0.0 && x <= 20.0, "bessel_j1_prime: x out of [0, 20]");
    if (x == 0.0) return 0.5;
    auto [j0, j1] = bessel_detail::j01(x);
    return static_cast<double>(j0 - j1 / x);
}

// First positive zero of J1', located by bisection to 1e-15.
// J1 rises from 0 to its first maximum here, so J1' changes sign once
// on [1.5, 2.5].
inline double first_j1_prime_zero() {
    static const double zeta = [] {
        double lo = 1.5, hi = 2.5;
        require(bessel_j1_prime(lo) > 0.0 && bessel_j1_prime(hi) < 0.0,
                "first_j1_prime_zero: bracket invalid");
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            double mid = 0.5 * (lo + hi);
            (bessel_j1_prime(mid) > 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }();
    return zeta;
}

// Radial profile f(r) = J1(zeta*r)/J1(zeta): f(0) = 0, f(1) = 1, f'(1) = 0,
// and f(r)cos(theta) is the first nonconstant Neumann mode of the unit disk
// with eigenvalue zeta^2.
struct RadialEigenProfile {
    double zeta;
    double j1_zeta;

    RadialEigenProfile()
        : zeta(first_j1_prime_zero()), j1_zeta(bessel_j1(first_j1_prime_zero())) {}

    double f(double r) const { return bessel_j1(zeta * r) / j1_zeta; }
    double fp(double r) const { return zeta * bessel_j1_prime(zeta * r) / j1_zeta; }
    double eigenvalue() const { return zeta * zeta; }
};

}  // namespace spectral_shapes
