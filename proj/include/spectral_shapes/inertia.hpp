#pragma once

#include <cmath>
#include <complex>

#include "error.hpp"
#include "measure.hpp"
#include "recenter.hpp"

namespace spectral_shapes {

// Second-moment form of the psi-image of a measure:
// Q(t) = int <Psi(z), t>^2 dnu(z) as a symmetric 2x2 matrix in t.
struct InertiaForm {
    double qxx = 0.0, qxy = 0.0, qyy = 0.0;

    static InertiaForm from(const DiscreteMeasure& m, const PsiMap& psi) {
        InertiaForm q;
        for (size_t i = 0; i < m.size(); ++i) {
            Complex v = psi(m.z[i]);
            q.qxx += m.w[i] * v.real() * v.real();
            q.qxy += m.w[i] * v.real() * v.imag();
            q.qyy += m.w[i] * v.imag() * v.imag();
        }
        return q;
    }

    double trace() const { return qxx + qyy; }

    double gap() const {
        return std::hypot(qxx - qyy, 2.0 * qxy);  // lambda_max - lambda_min
    }

    double lambda_min() const { return 0.5 * (trace() - gap()); }
    double lambda_max() const { return 0.5 * (trace() + gap()); }

    double anisotropy_rel() const {
        double t = trace();
        require(t > 0.0, "InertiaForm: zero trace");
        return gap() / t;
    }

    bool multiple(double tol_rel = 1e-6) const { return anisotropy_rel() <= tol_rel; }

    // Axis of the larger eigenvalue as a point of the projective line,
    // encoded by the double angle e^{2 i theta}; continuous wherever the
    // eigenvalues stay separated. Refused at a numerically multiple form
    // rather than reporting an arbitrary axis.
    Complex direction_double_angle() const {
        require(!multiple(), "InertiaForm: direction undefined at a multiple form");
        Complex d(qxx - qyy, 2.0 * qxy);
        return d / std::abs(d);
    }
};

// Distance between two projective directions given by double angles.
inline double projective_distance(Complex d1, Complex d2) {
    return std::abs(d1 - d2);
}

}  // namespace spectral_shapes
