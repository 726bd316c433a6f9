#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "../error.hpp"
#include "assemble.hpp"
#include "mesh.hpp"

namespace spectral_shapes {

// First K generalized eigenpairs of a P1 discretization, ascending. Vectors
// are columns over all mesh vertices (Steklov interior values harmonically
// extended from the boundary trace).
struct FemSpectrum {
    enum class Kind { Neumann, Steklov };

    std::vector<double> values;
    Eigen::MatrixXd vectors;
    Kind kind = Kind::Neumann;
    int n_vertex = 0;

    double value(size_t k) const {
        require(k < values.size(), "FemSpectrum: eigenvalue index out of range");
        return values[k];
    }
};

namespace eigensolve_detail {

// B-orthonormalizes the columns of S by whitening the Gram matrix, dropping
// directions whose Gram eigenvalue falls below a relative cutoff.
inline Eigen::MatrixXd b_orthonormalize(const Eigen::SparseMatrix<double>& B,
                                        const Eigen::MatrixXd& S,
                                        double cut_rel = 1e-10) {
    if (S.cols() == 0) return S;
    Eigen::MatrixXd G = S.transpose() * (B * S);
    G = 0.5 * (G + G.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    require(es.info() == Eigen::Success, "b_orthonormalize: Gram factorization failed");
    double top = es.eigenvalues().maxCoeff();
    if (top <= 0.0) return Eigen::MatrixXd(S.rows(), 0);
    double cut = top * cut_rel;
    int keep = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > cut) ++keep;
    Eigen::MatrixXd T(S.cols(), keep);
    int c = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > cut)
            T.col(c++) = es.eigenvectors().col(i) / std::sqrt(es.eigenvalues()(i));
    return S * T;
}

// Subtracts the B-projection onto the B-orthonormal block X, twice for
// stability.
inline void b_project_out(const Eigen::SparseMatrix<double>& B,
                          const Eigen::MatrixXd& X, Eigen::MatrixXd& W) {
    if (X.cols() == 0 || W.cols() == 0) return;
    for (int pass = 0; pass < 2; ++pass)
        W -= X * (X.transpose() * (B * W));
}

struct BlockEigResult {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

// Locally optimal block preconditioned CG for the smallest K pairs of
// A x = lambda B x, preconditioned by a sparse factorization of A + sigma B.
// The shift is set from the Weyl density of the pencil so the factorization
// acts as an approximate shift-inverted operator on the target window.
inline BlockEigResult lobpcg_smallest(const Eigen::SparseMatrix<double>& A,
                                      const Eigen::SparseMatrix<double>& B, int K,
                                      double tol) {
    int n = static_cast<int>(A.rows());
    int guard = std::max(4, K / 5);
    int m = std::min(K + guard, n - 1);
    require(m >= K, "lobpcg: block smaller than requested count");

    double area = B.sum();
    require(area > 0.0, "lobpcg: mass matrix has nonpositive total");
    double sigma = 4.0 * std::numbers::pi * (m + 1) / area;

    Eigen::SparseMatrix<double> M = A + sigma * B;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> shift(M);
    require(shift.info() == Eigen::Success, "lobpcg: shifted factorization failed");

    // Deterministic start block: the constant vector plus hashed noise.
    Eigen::MatrixXd X(n, m);
    uint64_t state = 0x5eed5eed5eed5eedULL;
    auto next = [&]() {
        state += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return 2.0 * ((z >> 11) * 0x1.0p-53) - 1.0;
    };
    X.col(0).setOnes();
    for (int j = 1; j < m; ++j)
        for (int i = 0; i < n; ++i) X(i, j) = next();

    // Stable-basis variant: the X, W, P blocks are kept mutually
    // B-orthonormal so the subspace Gram never needs a rank-revealing
    // whitening of a near-singular matrix, which would put a noise floor on
    // the residuals. Corrections are solved only for unconverged columns and
    // normalized so straggler directions survive the cutoff.
    Eigen::MatrixXd P(n, 0);
    for (int iter = 0; iter < 300; ++iter) {
        X = b_orthonormalize(B, X);
        require(X.cols() >= K, "lobpcg: block lost rank");
        int mc = static_cast<int>(X.cols());

        Eigen::MatrixXd AX = A * X;
        Eigen::MatrixXd H = X.transpose() * AX;
        H = 0.5 * (H + H.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rr(H);
        require(rr.info() == Eigen::Success, "lobpcg: Rayleigh-Ritz failed");
        X = (X * rr.eigenvectors()).eval();
        AX = (AX * rr.eigenvectors()).eval();
        Eigen::VectorXd lam = rr.eigenvalues();

        Eigen::MatrixXd BX = B * X;
        Eigen::MatrixXd R = AX - BX * lam.asDiagonal();
        bool done = true;
        for (int k = 0; k < K; ++k) {
            double scale = std::max(1.0, std::abs(lam(k))) * BX.col(k).norm();
            if (R.col(k).norm() > tol * scale) {
                done = false;
                break;
            }
        }
        if (done) {
            BlockEigResult out;
            out.values = lam.head(K);
            out.vectors = X.leftCols(K);
            return out;
        }

        std::vector<int> active;
        for (int k = 0; k < mc; ++k)
            if (R.col(k).norm() >
                0.1 * tol * std::max(1.0, std::abs(lam(k))) * BX.col(k).norm())
                active.push_back(k);
        Eigen::MatrixXd Ract(n, static_cast<int>(active.size()));
        for (size_t a = 0; a < active.size(); ++a) Ract.col(a) = R.col(active[a]);
        Eigen::MatrixXd W = shift.solve(Ract);
        for (int j = 0; j < W.cols(); ++j) {
            double nn = W.col(j).norm();
            if (nn > 0.0) W.col(j) /= nn;
        }
        b_project_out(B, X, W);
        b_project_out(B, P, W);
        W = b_orthonormalize(B, W, 1e-8);

        Eigen::MatrixXd S(n, mc + W.cols() + P.cols());
        S << X, W, P;
        int sc = static_cast<int>(S.cols());
        require(sc >= K, "lobpcg: search space lost rank");

        Eigen::MatrixXd AS = A * S;
        Eigen::MatrixXd Hs = S.transpose() * AS;
        Hs = 0.5 * (Hs + Hs.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hs);
        require(es.info() == Eigen::Success, "lobpcg: subspace solve failed");
        int mnew = std::min(m, sc);
        Eigen::MatrixXd Y = es.eigenvectors().leftCols(mnew);
        Eigen::MatrixXd Xnew = S * Y;
        if (sc > mc) {
            // The correction directions span the non-X part of the new block.
            P = S.rightCols(sc - mc) * Y.bottomRows(sc - mc);
            b_project_out(B, Xnew, P);
            P = b_orthonormalize(B, P, 1e-8);
        } else {
            P.resize(n, 0);
        }
        X = Xnew;
    }
    require(false, "lobpcg: eigenvalue iteration did not converge");
    return {};
}

inline void certify_pair(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         const Eigen::VectorXd& v, double lam, double tol,
                         const char* what) {
    double resid = (A * v - lam * (B * v)).norm();
    double scale = std::max(1.0, std::abs(lam)) * (B * v).norm();
    require(resid <= tol * scale, std::string(what) + ": residual " +
                                      std::to_string(resid) + " exceeds tolerance");
}

inline void clamp_near_zero(std::vector<double>& v) {
    for (auto& x : v)
        if (std::abs(x) < 1e-9) x = 0.0;
}

}  // namespace eigensolve_detail

// Neumann eigenvalues: stiffness against consistent mass over the whole mesh.
// Dense solve below 2000 vertices, block iteration above.
inline FemSpectrum solve_neumann_fem(const TriMesh& mesh, int K = 12) {
    FemOperators ops = assemble_fem(mesh);
    int n = static_cast<int>(mesh.vertex.size());
    require(K >= 1 && K < n, "solve_neumann_fem: K out of range");
    const double tol = 1e-8;

    FemSpectrum out;
    out.kind = FemSpectrum::Kind::Neumann;
    out.n_vertex = n;

    if (n < 2000) {
        Eigen::MatrixXd Ad = Eigen::MatrixXd(ops.stiffness);
        Eigen::MatrixXd Bd = Eigen::MatrixXd(ops.mass);
        Eigen::LLT<Eigen::MatrixXd> llt(Bd);
        require(llt.info() == Eigen::Success,
                "solve_neumann_fem: mass matrix not positive definite");
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
            Ad, Bd, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
        require(ges.info() == Eigen::Success, "solve_neumann_fem: dense solve failed");
        out.values.assign(ges.eigenvalues().data(), ges.eigenvalues().data() + K);
        out.vectors = ges.eigenvectors().leftCols(K);
        for (int k = 0; k < K; ++k)
            eigensolve_detail::certify_pair(Ad, Bd, out.vectors.col(k), out.values[k],
                                            tol, "solve_neumann_fem");
    } else {
        auto res = eigensolve_detail::lobpcg_smallest(ops.stiffness, ops.mass, K, tol);
        out.values.assign(res.values.data(), res.values.data() + K);
        out.vectors = res.vectors;
    }
    eigensolve_detail::clamp_near_zero(out.values);
    return out;
}

// Steklov eigenvalues: the stiffness is reduced onto the boundary vertices by
// eliminating the interior block exactly (the interior rows carry no boundary
// mass, so the pencil restricts to the boundary-coupled complement), then the
// Schur complement meets the consistent boundary edge mass in a dense solve.
inline FemSpectrum solve_steklov_fem(const TriMesh& mesh, int K = 12) {
    FemOperators ops = assemble_fem(mesh);
    int n = static_cast<int>(mesh.vertex.size());
    int nb = static_cast<int>(ops.boundary_vertex.size());
    require(nb >= 3, "solve_steklov_fem: no boundary vertices");
    require(K >= 1 && K < nb, "solve_steklov_fem: K out of range");
    const double tol = 1e-8;

    std::vector<int> where(n, -1);
    for (int i = 0; i < nb; ++i) where[ops.boundary_vertex[i]] = i;
    std::vector<int> interior;
    interior.reserve(n - nb);
    for (int i = 0; i < n; ++i)
        if (where[i] < 0) {
            where[i] = -2 - static_cast<int>(interior.size());
            interior.push_back(i);
        }
    int ni = static_cast<int>(interior.size());

    std::vector<Eigen::Triplet<double>> tii, tib, tbb;
    for (int col = 0; col < ops.stiffness.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(ops.stiffness, col); it;
             ++it) {
            int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
            bool rb = where[r] >= 0, cb = where[c] >= 0;
            int ri = rb ? where[r] : -2 - where[r];
            int ci = cb ? where[c] : -2 - where[c];
            if (!rb && !cb) tii.emplace_back(ri, ci, it.value());
            else if (!rb && cb) tib.emplace_back(ri, ci, it.value());
            else if (rb && cb) tbb.emplace_back(ri, ci, it.value());
        }

    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(nb, nb);
    for (auto& t : tbb) S(t.row(), t.col()) += t.value();

    Eigen::MatrixXd Xext;  // interior extension operator, u_I = -Xext u_B
    if (ni > 0) {
        Eigen::SparseMatrix<double> Aii(ni, ni), Aib(ni, nb);
        Aii.setFromTriplets(tii.begin(), tii.end());
        Aib.setFromTriplets(tib.begin(), tib.end());
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> fact(Aii);
        require(fact.info() == Eigen::Success,
                "solve_steklov_fem: interior factorization failed");
        Eigen::MatrixXd Aib_d = Eigen::MatrixXd(Aib);
        Xext = fact.solve(Aib_d);
        S -= Aib_d.transpose() * Xext;
    }
    S = 0.5 * (S + S.transpose()).eval();

    Eigen::MatrixXd Bb(nb, nb);
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j)
            Bb(i, j) = ops.boundary_mass.coeff(ops.boundary_vertex[i],
                                               ops.boundary_vertex[j]);
    Eigen::LLT<Eigen::MatrixXd> llt(Bb);
    require(llt.info() == Eigen::Success,
            "solve_steklov_fem: boundary mass not positive definite");

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
        S, Bb, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    require(ges.info() == Eigen::Success, "solve_steklov_fem: dense solve failed");

    FemSpectrum out;
    out.kind = FemSpectrum::Kind::Steklov;
    out.n_vertex = n;
    out.values.assign(ges.eigenvalues().data(), ges.eigenvalues().data() + K);
    Eigen::MatrixXd Ub = ges.eigenvectors().leftCols(K);
    for (int k = 0; k < K; ++k)
        eigensolve_detail::certify_pair(S, Bb, Ub.col(k), out.values[k], tol,
                                        "solve_steklov_fem");

    out.vectors = Eigen::MatrixXd::Zero(n, K);
    for (int i = 0; i < nb; ++i) out.vectors.row(ops.boundary_vertex[i]) = Ub.row(i);
    if (ni > 0) {
        Eigen::MatrixXd Ui = -Xext * Ub;
        for (int i = 0; i < ni; ++i) out.vectors.row(interior[i]) = Ui.row(i);
    }
    eigensolve_detail::clamp_near_zero(out.values);
    return out;
}

}  // namespace spectral_shapes
