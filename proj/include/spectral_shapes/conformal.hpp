#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "measure.hpp"
#include "quadrature.hpp"

namespace spectral_shapes {

// Polynomial map of the closed unit disk, z -> sum c_k z^k. Construction
// rejects maps whose derivative vanishes somewhere on a 4096-point sample of
// the closed disk; that is a proxy for local univalence, not a proof of
// injectivity.
struct ConformalMap {
    std::vector<Complex> coeff;

    explicit ConformalMap(std::vector<Complex> c) : coeff(std::move(c)) {
        require(coeff.size() >= 2, "ConformalMap: need degree >= 1");
        double min_abs = std::abs(derivative(0.0));
        const int n_rad = 8, n_ang = 512;
        for (int i = 1; i <= n_rad; ++i) {
            double r = static_cast<double>(i) / n_rad;
            for (int j = 0; j < n_ang; ++j) {
                Complex z = std::polar(r, 2.0 * std::numbers::pi * j / n_ang);
                min_abs = std::min(min_abs, std::abs(derivative(z)));
            }
        }
        require(min_abs > 1e-9,
                "ConformalMap: derivative vanishes on the sample grid");
    }

    static ConformalMap identity() { return ConformalMap({{0.0, 0.0}, {1.0, 0.0}}); }

    int degree() const { return static_cast<int>(coeff.size()) - 1; }

    Complex operator()(Complex z) const {
        Complex s = 0.0;
        for (size_t k = coeff.size(); k-- > 0;) s = s * z + coeff[k];
        return s;
    }

    Complex derivative(Complex z) const {
        Complex s = 0.0;
        for (size_t k = coeff.size(); k-- > 1;) s = s * z + static_cast<double>(k) * coeff[k];
        return s;
    }

    // Area of the image of the subdisk |z| < r, counted with multiplicity:
    // pi * sum k |c_k|^2 r^{2k}. Exact, no quadrature.
    double image_area(double r = 1.0) const {
        long double s = 0.0L;
        long double r2 = static_cast<long double>(r) * r, p = 1.0L;
        for (size_t k = 1; k < coeff.size(); ++k) {
            p *= r2;
            s += static_cast<long double>(k) * std::norm(coeff[k]) * p;
        }
        return static_cast<double>(std::numbers::pi_v<long double> * s);
    }
};

// Positive weight on the image domain. Analytic kinds evaluate anywhere; the
// sampled kind carries one value per node of the grid it was built against
// and cannot be evaluated elsewhere.
struct DensityField {
    enum class Kind { Pointwise, Sampled };

    Kind kind = Kind::Pointwise;
    std::string label = "const:1";
    std::function<double(Complex)> fn = [](Complex) { return 1.0; };
    std::vector<double> sample_values;

    static DensityField constant(double c) {
        require(std::isfinite(c) && c > 0.0, "DensityField: constant must be positive");
        DensityField d;
        d.fn = [c](Complex) { return c; };
        d.label = "const:" + std::to_string(c);
        return d;
    }

    static DensityField exp_r2() {
        DensityField d;
        d.fn = [](Complex w) { return std::exp(std::norm(w)); };
        d.label = "exp_r2";
        return d;
    }

    static DensityField from_function(std::function<double(Complex)> f,
                                      std::string label) {
        DensityField d;
        d.fn = std::move(f);
        d.label = std::move(label);
        return d;
    }

    static DensityField from_samples(std::vector<double> values, std::string label) {
        DensityField d;
        d.kind = Kind::Sampled;
        d.sample_values = std::move(values);
        d.label = std::move(label);
        d.fn = nullptr;
        return d;
    }

    bool pointwise() const { return kind == Kind::Pointwise; }

    double operator()(Complex w) const {
        require(pointwise(), "DensityField: sampled density has no pointwise values");
        return fn(w);
    }

    bool is_constant_one() const { return label == "const:1.000000" || label == "const:1"; }
};

namespace pullback_detail {

inline double density_at(const DensityField& rho, Complex w, size_t node_index,
                         size_t node_count) {
    double v;
    if (rho.pointwise()) {
        v = rho(w);
    } else {
        require(rho.sample_values.size() == node_count,
                "pullback: sampled density does not match the quadrature grid");
        v = rho.sample_values[node_index];
    }
    require(std::isfinite(v) && v > 0.0, "pullback: density must be positive");
    return v;
}

}  // namespace pullback_detail

// Interior pullback: atoms at quadrature nodes with weight
// q_j * rho(phi(z_j)) * |phi'(z_j)|^2. Total mass approximates the rho-area
// of the image domain.
inline DiscreteMeasure pullback_area_measure(const ConformalMap& phi,
                                             const DensityField& rho,
                                             const DiskQuadrature& quad) {
    DiscreteMeasure m;
    const size_t n = quad.nodes.size();
    for (size_t j = 0; j < n; ++j) {
        Complex z = quad.nodes[j];
        double d = pullback_detail::density_at(rho, phi(z), j, n) *
                   std::norm(phi.derivative(z));
        m.push_back(z, quad.weights[j] * d, Part::Interior);
    }
    m.validate();
    return m;
}

// Boundary pullback: atoms on the unit circle with weight
// q_j * rho(phi(z_j)) * |phi'(z_j)|. Total mass approximates the rho-length
// of the image boundary.
inline DiscreteMeasure pullback_boundary_measure(const ConformalMap& phi,
                                                 const DensityField& rho,
                                                 const DiskQuadrature& quad) {
    DiscreteMeasure m;
    const size_t n = quad.boundary_nodes.size();
    for (size_t j = 0; j < n; ++j) {
        Complex z = quad.boundary_nodes[j];
        double d = pullback_detail::density_at(rho, phi(z), j, n) *
                   std::abs(phi.derivative(z));
        m.push_back(z, quad.boundary_weights[j] * d, Part::Boundary);
    }
    m.validate();
    return m;
}

}  // namespace spectral_shapes
