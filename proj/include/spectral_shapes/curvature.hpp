#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "conformal.hpp"
#include "error.hpp"

namespace spectral_shapes {

struct CurvatureSample {
    Complex z;
    double lap_log_rho;
    double K;  // -(1/(2 rho)) * Laplacian(log rho)
};

// Gaussian curvature of the metric rho |dz|^2 at the given points, via a
// five-point Laplacian of log rho with step h. Points must stay h away from
// wherever rho stops being defined; rho must be pointwise and positive.
inline std::vector<CurvatureSample> gaussian_curvature(const DensityField& rho,
                                                       const std::vector<Complex>& pts,
                                                       double h = 1.0 / 128) {
    require(rho.pointwise(), "gaussian_curvature: needs a pointwise density");
    require(h > 0.0, "gaussian_curvature: step must be positive");
    std::vector<CurvatureSample> out;
    out.reserve(pts.size());
    for (Complex z : pts) {
        auto lg = [&](Complex p) {
            double v = rho(p);
            require(std::isfinite(v) && v > 0.0,
                    "gaussian_curvature: density not positive near sample point");
            return std::log(v);
        };
        double lap = (lg(z + h) + lg(z - h) + lg(z + Complex(0, h)) +
                      lg(z - Complex(0, h)) - 4.0 * lg(z)) /
                     (h * h);
        out.push_back({z, lap, -lap / (2.0 * rho(z))});
    }
    return out;
}

// Minimum of Laplacian(log rho) over a polar grid of the subdisk |z| <= rmax.
// Nonnegative minimum (up to stencil error) certifies the log-subharmonicity
// hypothesis of the density-ladder bounds.
inline double min_log_laplacian(const DensityField& rho, double rmax = 0.9,
                                int nr = 24, int nth = 48, double h = 1.0 / 128) {
    require(rmax > 0.0 && rmax + h < 1.0 + 1e-12,
            "min_log_laplacian: grid must stay inside the disk");
    std::vector<Complex> pts;
    pts.push_back(0.0);
    for (int i = 1; i <= nr; ++i)
        for (int j = 0; j < nth; ++j)
            pts.push_back(std::polar(rmax * i / nr, 2.0 * std::numbers::pi * j / nth));
    double mn = 1e300;
    for (const auto& s : gaussian_curvature(rho, pts, h)) mn = std::min(mn, s.lap_log_rho);
    return mn;
}

}  // namespace spectral_shapes
