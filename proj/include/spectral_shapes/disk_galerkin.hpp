#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "conformal.hpp"
#include "error.hpp"
#include "quadrature.hpp"

namespace spectral_shapes {

namespace galerkin_detail {

// Index of x^a y^b in the dense coefficient triangle, degree-major.
inline int tri_index(int a, int b) {
    int d = a + b;
    return d * (d + 1) / 2 + b;
}

inline int tri_size(int degree) { return (degree + 1) * (degree + 2) / 2; }

inline std::vector<long double> binomial_row(int n) {
    std::vector<long double> c(n + 1, 1.0L);
    for (int k = 1; k <= n; ++k) c[k] = c[k - 1] * (n - k + 1) / k;
    return c;
}

// Monomial coefficients of r^{2j} * Re((x+iy)^m) (cosine) or
// r^{2j} * Im((x+iy)^m) (sine), a polynomial of total degree m + 2j.
inline std::vector<long double> harmonic_shell_monomials(int m, int j, bool sine,
                                                         int degree) {
    std::vector<long double> out(tri_size(degree), 0.0L);
    auto bm = binomial_row(m);
    auto bj = binomial_row(j);
    for (int t = sine ? 1 : 0; t <= m; t += 2) {
        int half = sine ? (t - 1) / 2 : t / 2;
        long double s = (half % 2 == 0) ? bm[t] : -bm[t];
        for (int i = 0; i <= j; ++i)
            out[tri_index(m - t + 2 * (j - i), t + 2 * i)] += s * bj[i];
    }
    return out;
}

}  // namespace galerkin_detail

// Polynomial basis on the disk to total degree N, orthonormal in the
// quadrature L2 inner product. Orthonormalization runs chain by chain over
// the rotation-harmonic shells r^{m+2j} cos(m th), r^{m+2j} sin(m th): the
// uniform angular grid makes distinct frequencies exactly orthogonal, so only
// the short radial chains need Gram-Schmidt, which tames the conditioning of
// the raw monomial Gram matrix. Carried out in long double with a second
// orthogonalization pass. Gradients come from the same chain combinations
// applied to the exact shell derivatives, and each function's monomial
// coefficients are kept alongside.
struct NeumannBasis {
    int degree = 0;
    int count = 0;
    Eigen::MatrixXd values;    // quadrature nodes x count
    Eigen::MatrixXd grad_x;
    Eigen::MatrixXd grad_y;
    Eigen::MatrixXd monomial;  // tri_size(degree) x count

    static NeumannBasis build(int N, const DiskQuadrature& quad) {
        using galerkin_detail::tri_size;
        require(N >= 1 && N <= 40, "NeumannBasis: degree out of range");
        int n = static_cast<int>(quad.nodes.size());
        int count = tri_size(N);
        NeumannBasis basis;
        basis.degree = N;
        basis.count = count;
        basis.values = Eigen::MatrixXd(n, count);
        basis.grad_x = Eigen::MatrixXd(n, count);
        basis.grad_y = Eigen::MatrixXd(n, count);
        basis.monomial = Eigen::MatrixXd::Zero(count, count);

        // Per-node power and trigonometric tables up to degree N.
        std::vector<long double> rp(static_cast<size_t>(n) * (N + 1));
        std::vector<long double> ct(static_cast<size_t>(n) * (N + 1));
        std::vector<long double> st(static_cast<size_t>(n) * (N + 1));
        for (int i = 0; i < n; ++i) {
            long double r = std::abs(quad.nodes[i]);
            long double th = std::atan2(static_cast<long double>(quad.nodes[i].imag()),
                                        static_cast<long double>(quad.nodes[i].real()));
            long double c1 = std::cos(th), s1 = std::sin(th);
            rp[i * (N + 1)] = 1.0L;
            ct[i * (N + 1)] = 1.0L;
            st[i * (N + 1)] = 0.0L;
            for (int k = 1; k <= N; ++k) {
                rp[i * (N + 1) + k] = rp[i * (N + 1) + k - 1] * r;
                ct[i * (N + 1) + k] =
                    ct[i * (N + 1) + k - 1] * c1 - st[i * (N + 1) + k - 1] * s1;
                st[i * (N + 1) + k] =
                    st[i * (N + 1) + k - 1] * c1 + ct[i * (N + 1) + k - 1] * s1;
            }
        }

        auto inner = [&](const std::vector<long double>& a,
                         const std::vector<long double>& b) {
            long double s = 0.0L;
            for (int i = 0; i < n; ++i) s += quad.weights[i] * a[i] * b[i];
            return s;
        };

        int col = 0;
        for (int m = 0; m <= N; ++m) {
            for (int trig = 0; trig < (m == 0 ? 1 : 2); ++trig) {
                bool sine = trig == 1;
                int nj = (N - m) / 2 + 1;
                // Raw shell values and exact polar-form gradients:
                // f = r^q T(m th) with q = m + 2j,
                // df/dx = cos(th) f_r - sin(th) f_th / r,
                // df/dy = sin(th) f_r + cos(th) f_th / r.
                std::vector<std::vector<long double>> f(nj), gx(nj), gy(nj);
                for (int j = 0; j < nj; ++j) {
                    int q = m + 2 * j;
                    f[j].resize(n);
                    gx[j].assign(n, 0.0L);
                    gy[j].assign(n, 0.0L);
                    for (int i = 0; i < n; ++i) {
                        const long double* rpi = &rp[i * (N + 1)];
                        const long double* cti = &ct[i * (N + 1)];
                        const long double* sti = &st[i * (N + 1)];
                        long double tv = sine ? sti[m] : cti[m];
                        f[j][i] = rpi[q] * tv;
                        if (q == 0) continue;
                        long double fr = q * rpi[q - 1] * tv;
                        long double ft_r = m * rpi[q - 1] * (sine ? cti[m] : -sti[m]);
                        gx[j][i] = cti[1] * fr - sti[1] * ft_r;
                        gy[j][i] = sti[1] * fr + cti[1] * ft_r;
                    }
                }
                // Gram-Schmidt along the radial chain, with one
                // reorthogonalization pass; combo[j] expresses the result in
                // the raw shells.
                std::vector<std::vector<long double>> combo(nj);
                for (int j = 0; j < nj; ++j) {
                    combo[j].assign(nj, 0.0L);
                    combo[j][j] = 1.0L;
                    for (int pass = 0; pass < 2; ++pass) {
                        for (int s = 0; s < j; ++s) {
                            long double pr = inner(f[j], f[s]);
                            for (int i = 0; i < n; ++i) f[j][i] -= pr * f[s][i];
                            for (int t = 0; t <= s; ++t) combo[j][t] -= pr * combo[s][t];
                        }
                    }
                    long double nrm = std::sqrt(inner(f[j], f[j]));
                    require(nrm > 1e-30, "NeumannBasis: degenerate radial chain");
                    for (int i = 0; i < n; ++i) f[j][i] /= nrm;
                    for (int t = 0; t <= j; ++t) combo[j][t] /= nrm;
                }
                // Emit columns: values, combined gradients, monomials.
                for (int j = 0; j < nj; ++j) {
                    for (int i = 0; i < n; ++i) {
                        basis.values(i, col) = static_cast<double>(f[j][i]);
                        long double ax = 0.0L, ay = 0.0L;
                        for (int t = 0; t <= j; ++t) {
                            ax += combo[j][t] * gx[t][i];
                            ay += combo[j][t] * gy[t][i];
                        }
                        basis.grad_x(i, col) = static_cast<double>(ax);
                        basis.grad_y(i, col) = static_cast<double>(ay);
                    }
                    std::vector<long double> mono(count, 0.0L);
                    for (int t = 0; t <= j; ++t) {
                        auto shell = galerkin_detail::harmonic_shell_monomials(
                            m, t, sine, N);
                        for (int u = 0; u < count; ++u)
                            mono[u] += combo[j][t] * shell[u];
                    }
                    for (int u = 0; u < count; ++u)
                        basis.monomial(u, col) = static_cast<double>(mono[u]);
                    ++col;
                }
            }
        }
        require(col == count, "NeumannBasis: basis enumeration mismatch");
        return basis;
    }
};

struct GeneralizedEigProblem {
    Eigen::MatrixXd A;  // stiffness, symmetric positive semidefinite
    Eigen::MatrixXd B;  // weighted mass, symmetric positive definite
    std::string kind = "custom";
    int basis_degree = 0;
    int n_interior = 0;
    int n_boundary = 0;
};

namespace galerkin_detail {

inline void check_weights(const std::vector<double>& w, size_t expected,
                          const char* who) {
    require(w.size() == expected,
            std::string(who) + ": weight samples do not match the quadrature grid");
    for (double v : w)
        require(std::isfinite(v) && v > 0.0,
                std::string(who) + ": weight must be positive at every node");
}

inline void finish_problem(GeneralizedEigProblem& pr, const char* who) {
    pr.A = 0.5 * (pr.A + pr.A.transpose()).eval();
    pr.B = 0.5 * (pr.B + pr.B.transpose()).eval();
    Eigen::LLT<Eigen::MatrixXd> llt(pr.B);
    require(llt.info() == Eigen::Success,
            std::string(who) + ": weighted mass matrix is not positive definite");
}

}  // namespace galerkin_detail

// Weak Neumann problem on the disk with interior weight delta:
// A_ij = int grad b_i . grad b_j dz, B_ij = int delta b_i b_j dz. The
// natural boundary condition needs no constraint on the basis.
inline GeneralizedEigProblem assemble_neumann(const std::vector<double>& delta,
                                              int N, const DiskQuadrature& quad) {
    galerkin_detail::check_weights(delta, quad.nodes.size(), "assemble_neumann");
    NeumannBasis basis = NeumannBasis::build(N, quad);
    int n = static_cast<int>(quad.nodes.size());
    Eigen::VectorXd w(n), wd(n);
    for (int i = 0; i < n; ++i) {
        w[i] = quad.weights[i];
        wd[i] = quad.weights[i] * delta[i];
    }
    GeneralizedEigProblem pr;
    pr.A = basis.grad_x.transpose() * w.asDiagonal() * basis.grad_x +
           basis.grad_y.transpose() * w.asDiagonal() * basis.grad_y;
    pr.B = basis.values.transpose() * wd.asDiagonal() * basis.values;
    pr.kind = "neumann";
    pr.basis_degree = N;
    pr.n_interior = n;
    galerkin_detail::finish_problem(pr, "assemble_neumann");
    return pr;
}

// Steklov problem on the disk with boundary weight w: harmonic basis
// {1} u {r^n cos n th, r^n sin n th}, stiffness exactly diag(0, pi n, pi n),
// boundary mass B_ij = int_{S1} w b_i b_j d th by quadrature.
inline GeneralizedEigProblem assemble_steklov(const std::vector<double>& wsamp,
                                              int N, const DiskQuadrature& quad) {
    galerkin_detail::check_weights(wsamp, quad.boundary_nodes.size(),
                                   "assemble_steklov");
    require(N >= 1 && 2 * N + 1 < static_cast<int>(quad.boundary_nodes.size()),
            "assemble_steklov: harmonic degree exceeds the boundary grid");
    int nb = static_cast<int>(quad.boundary_nodes.size());
    int count = 2 * N + 1;
    Eigen::MatrixXd V(nb, count);
    for (int i = 0; i < nb; ++i) {
        double th = std::arg(quad.boundary_nodes[i]);
        V(i, 0) = 1.0;
        for (int m = 1; m <= N; ++m) {
            V(i, 2 * m - 1) = std::cos(m * th);
            V(i, 2 * m) = std::sin(m * th);
        }
    }
    Eigen::VectorXd ww(nb);
    for (int i = 0; i < nb; ++i) ww[i] = quad.boundary_weights[i] * wsamp[i];
    GeneralizedEigProblem pr;
    pr.A = Eigen::MatrixXd::Zero(count, count);
    for (int m = 1; m <= N; ++m) {
        pr.A(2 * m - 1, 2 * m - 1) = std::numbers::pi * m;
        pr.A(2 * m, 2 * m) = std::numbers::pi * m;
    }
    pr.B = V.transpose() * ww.asDiagonal() * V;
    pr.kind = "steklov";
    pr.basis_degree = N;
    pr.n_boundary = nb;
    galerkin_detail::finish_problem(pr, "assemble_steklov");
    return pr;
}

// Full spectrum of the pencil (A, B), ascending; eigenvalues below 1e-10 are
// reported as 0, eigenvectors are B-orthonormal columns.
struct Spectrum {
    std::vector<double> values;
    Eigen::MatrixXd vectors;
    std::string kind;
    int basis_degree = 0;
    int n_interior = 0;
    int n_boundary = 0;

    double value(size_t k) const {
        require(k < values.size(), "Spectrum: index out of range");
        return values[k];
    }
};

inline Spectrum solve_spectrum(const GeneralizedEigProblem& pr) {
    // The dense solver assumes B is positive definite and will not flag an
    // indefinite input on its own.
    Eigen::LLT<Eigen::MatrixXd> llt(pr.B);
    require(llt.info() == Eigen::Success,
            "solve_spectrum: mass matrix is not positive definite");
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
        pr.A, pr.B, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    require(es.info() == Eigen::Success,
            "solve_spectrum: eigenvalue iteration did not converge");
    Spectrum s;
    s.values.resize(es.eigenvalues().size());
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        double v = es.eigenvalues()[i];
        s.values[i] = v < 1e-10 ? 0.0 : v;
    }
    s.vectors = es.eigenvectors();
    s.kind = pr.kind;
    s.basis_degree = pr.basis_degree;
    s.n_interior = pr.n_interior;
    s.n_boundary = pr.n_boundary;
    return s;
}

struct EigenPair {
    double value = 0.0;
    Eigen::VectorXd vector;
};

// k-th eigenpair of the pencil with a residual certificate:
// ||A v - lambda B v|| <= 1e-8 ||B v||.
inline EigenPair eigen_k(const GeneralizedEigProblem& pr, int k) {
    Spectrum s = solve_spectrum(pr);
    require(k >= 0 && k < static_cast<int>(s.values.size()),
            "eigen_k: index out of range");
    Eigen::VectorXd v = s.vectors.col(k);
    Eigen::VectorXd bv = pr.B * v;
    double lam = v.dot(pr.A * v) / v.dot(bv);
    double res = (pr.A * v - lam * bv).norm();
    require(res <= 1e-8 * bv.norm(),
            "eigen_k: residual " + std::to_string(res) + " exceeds tolerance at k=" +
                std::to_string(k) + ", lambda=" + std::to_string(lam) +
                " (dense solve, size " + std::to_string(pr.A.rows()) + ")");
    return {s.value(k), std::move(v)};
}

// Shared default quadrature for the disk solvers.
inline const DiskQuadrature& solver_quadrature() {
    static DiskQuadrature quad(64, 256, 1024);
    return quad;
}

// Interior weight delta = rho(phi(z)) |phi'(z)|^2 sampled at the quadrature
// nodes; sampled densities must match the interior grid.
inline std::vector<double> interior_weight_samples(const ConformalMap& phi,
                                                   const DensityField& rho,
                                                   const DiskQuadrature& quad) {
    std::vector<double> out(quad.nodes.size());
    for (size_t j = 0; j < quad.nodes.size(); ++j) {
        Complex z = quad.nodes[j];
        out[j] = pullback_detail::density_at(rho, phi(z), j, quad.nodes.size()) *
                 std::norm(phi.derivative(z));
    }
    return out;
}

// Boundary weight w = rho(phi(z)) |phi'(z)| sampled at the boundary nodes.
inline std::vector<double> boundary_weight_samples(const ConformalMap& phi,
                                                   const DensityField& rho,
                                                   const DiskQuadrature& quad) {
    std::vector<double> out(quad.boundary_nodes.size());
    for (size_t j = 0; j < quad.boundary_nodes.size(); ++j) {
        Complex z = quad.boundary_nodes[j];
        out[j] =
            pullback_detail::density_at(rho, phi(z), j, quad.boundary_nodes.size()) *
            std::abs(phi.derivative(z));
    }
    return out;
}

inline Spectrum neumann_spectrum(const ConformalMap& phi, const DensityField& rho,
                                 int N = 20,
                                 const DiskQuadrature& quad = solver_quadrature()) {
    return solve_spectrum(assemble_neumann(interior_weight_samples(phi, rho, quad),
                                           N, quad));
}

inline Spectrum steklov_spectrum(const ConformalMap& phi, const DensityField& rho,
                                 int N = 64,
                                 const DiskQuadrature& quad = solver_quadrature()) {
    return solve_spectrum(assemble_steklov(boundary_weight_samples(phi, rho, quad),
                                           N, quad));
}

}  // namespace spectral_shapes
