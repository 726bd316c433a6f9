#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "error.hpp"
#include "folding.hpp"
#include "inertia.hpp"

namespace spectral_shapes {

struct CapSearchOptions {
    int n_l = 24;
    int n_p = 48;
    double tol_rel = 1e-6;       // target anisotropy relative to trace
    int refine_budget = 200;     // Nelder-Mead iterations
    size_t subsample_limit = 4000;  // grid stage works on at most this many atoms
    double l_clamp = 1e-6;       // keep l away from the cylinder ends
};

struct CapSearchTracePoint {
    double l;
    double p_angle;
    double anisotropy_rel;
};

struct CapSearchResult {
    double l = 0.0;
    Complex p{1.0, 0.0};
    double anisotropy_rel = 0.0;
    InertiaForm form;
    bool multiple_input = false;  // input was already multiple; trivial cap
    bool converged = false;
    int evaluations = 0;
    std::vector<CapSearchTracePoint> trace;

    HyperbolicCap cap() const { return {l, p}; }
};

namespace cap_search_detail {

inline DiscreteMeasure subsample(const DiscreteMeasure& m, size_t limit) {
    if (m.size() <= limit) return m;
    size_t stride = (m.size() + limit - 1) / limit;
    DiscreteMeasure out;
    for (size_t i = 0; i < m.size(); i += stride)
        out.push_back(m.z[i], m.w[i], m.part[i]);
    return out;
}

}  // namespace cap_search_detail

// Searches the cap cylinder for a cap whose rearranged measure has an
// isotropic inertia form. The existence argument guarantees the zero set is
// nonempty for simple measures; the search scans a coarse (l, p) grid with
// warm-started recentering along each meridian, then root-finds the traceless
// part of the inertia form with damped Newton from a few well separated
// cells. A multiple form is a transversal zero of that 2-vector, so Newton
// converges quadratically where the scalar anisotropy has a conical minimum
// that defeats simplex descent; Nelder-Mead remains as the fallback. Failure
// to reach the tolerance is an error (it would contradict the existence
// result, so it signals numerical breakdown, not geometry).
inline CapSearchResult find_multiple_cap(const DiscreteMeasure& m, const PsiMap& psi,
                                         const CapSearchOptions& opt = {}) {
    m.validate();
    CapSearchResult res;

    InertiaForm base = InertiaForm::from(m, psi);
    if (base.multiple(opt.tol_rel)) {
        // Already multiple: the full-disk cap convention, no search needed.
        res.l = 2.0 * std::numbers::pi - opt.l_clamp;
        res.p = {1.0, 0.0};
        res.anisotropy_rel = base.anisotropy_rel();
        res.form = base;
        res.multiple_input = true;
        res.converged = true;
        return res;
    }

    const double lo = opt.l_clamp, hi = 2.0 * std::numbers::pi - opt.l_clamp;
    auto clamp_l = [&](double l) { return std::min(hi, std::max(lo, l)); };

    DiscreteMeasure coarse = cap_search_detail::subsample(m, opt.subsample_limit);

    int evals = 0;
    auto objective = [&](const DiscreteMeasure& meas, double l, double p_angle,
                         Complex& warm_xi) {
        ++evals;
        try {
            HyperbolicCap cap(clamp_l(l), std::polar(1.0, p_angle));
            auto r = rearranged(meas, cap, psi, warm_xi);
            warm_xi = r.centering.xi;
            return InertiaForm::from(r.zeta, psi).anisotropy_rel();
        } catch (const Error&) {
            return 1e300;  // infeasible cell
        }
    };

    struct Cell {
        double a, l, p;
        Complex xi;
    };
    std::vector<Cell> cells;
    double best = 1e300, best_l = std::numbers::pi, best_p = 0.0;
    Complex best_xi = 0.0;
    auto visit = [&](const DiscreteMeasure& meas, double l, double p_angle,
                     Complex& warm) {
        double a = objective(meas, l, p_angle, warm);
        res.trace.push_back({clamp_l(l), p_angle, a});
        cells.push_back({a, clamp_l(l), p_angle, warm});
        if (a < best) {
            best = a;
            best_l = clamp_l(l);
            best_p = p_angle;
            best_xi = warm;
        }
    };
    for (int j = 0; j < opt.n_p; ++j) {
        double p_angle = 2.0 * std::numbers::pi * j / opt.n_p;
        Complex warm{0.0, 0.0};
        for (int i = 0; i < opt.n_l; ++i) {
            // Sweep l from wide caps down: the wide end is closest to the
            // identity so the warm start chain stays on the solution branch.
            double l = (2.0 * std::numbers::pi) * (opt.n_l - i - 0.5) / opt.n_l;
            visit(coarse, l, p_angle, warm);
        }
        // Two extra thin caps below the uniform floor: zeros of the traceless
        // field can hug the vanishing end of the cylinder.
        for (double frac : {0.25, 0.125})
            visit(coarse, 2.0 * std::numbers::pi * frac / opt.n_l, p_angle, warm);
    }

    double sol_l = best_l, sol_p = best_p;
    Complex sol_xi = best_xi;
    bool solved = false;

    // Traceless part of the inertia form on the full measure, the field whose
    // transversal zero the search is after.
    auto vec_obj = [&](double l, double p_angle, Complex& warm, bool& feasible) {
        ++evals;
        std::array<double, 3> out{0.0, 0.0, 1.0};
        try {
            HyperbolicCap cap(clamp_l(l), std::polar(1.0, p_angle));
            auto r = rearranged(m, cap, psi, warm);
            warm = r.centering.xi;
            InertiaForm q = InertiaForm::from(r.zeta, psi);
            out = {q.qxx - q.qyy, 2.0 * q.qxy, q.trace()};
            feasible = true;
        } catch (const Error&) {
            feasible = false;
        }
        return out;
    };
    auto aniso_of = [](const std::array<double, 3>& f) {
        return std::hypot(f[0], f[1]) / f[2];
    };

    auto newton_from = [&](const Cell& c) {
        double l = c.l, p = c.p;
        Complex warm = c.xi;
        bool feasible = false;
        auto f = vec_obj(l, p, warm, feasible);
        if (!feasible) return false;
        double an = aniso_of(f);
        // The discrete fold jumps whenever the cap edge crosses an atom, so a
        // finite difference spanning a crossing yields a garbage Jacobian. A
        // stalled iteration retries with a sharply smaller h before the start
        // is abandoned.
        double h = 1e-4;
        int stalls = 0;
        for (int it = 0; it < 24 && an > 0.2 * opt.tol_rel; ++it) {
            auto stall = [&] {
                h *= 0.125;
                return ++stalls > 2;
            };
            double lh = clamp_l(l + h);
            if (lh - l < 0.5 * h) lh = clamp_l(l - h);
            Complex w1 = warm, w2 = warm;
            bool ok1 = false, ok2 = false;
            auto f1 = vec_obj(lh, p, w1, ok1);
            auto f2 = vec_obj(l, p + h, w2, ok2);
            if (!ok1 || !ok2) {
                if (stall()) return false;
                continue;
            }
            double j00 = (f1[0] - f[0]) / (lh - l), j01 = (f2[0] - f[0]) / h;
            double j10 = (f1[1] - f[1]) / (lh - l), j11 = (f2[1] - f[1]) / h;
            double det = j00 * j11 - j01 * j10;
            if (!(std::abs(det) > 1e-12)) {
                if (stall()) return false;
                continue;
            }
            double sl = (-f[0] * j11 + f[1] * j01) / det;
            double sp = (-f[1] * j00 + f[0] * j10) / det;
            double widest = std::max(std::abs(sl), std::abs(sp));
            if (widest > 0.8) {
                sl *= 0.8 / widest;
                sp *= 0.8 / widest;
            }
            bool accepted = false;
            for (int half = 0; half < 5 && !accepted; ++half) {
                Complex wt = warm;
                bool okt = false;
                auto ft = vec_obj(clamp_l(l + sl), p + sp, wt, okt);
                if (okt && aniso_of(ft) < an) {
                    l = clamp_l(l + sl);
                    p += sp;
                    warm = wt;
                    f = ft;
                    an = aniso_of(ft);
                    accepted = true;
                }
                sl *= 0.5;
                sp *= 0.5;
            }
            if (!accepted) {
                if (stall()) return false;
                continue;
            }
            stalls = 0;
        }
        if (an > opt.tol_rel) return false;
        sol_l = l;
        sol_p = p;
        sol_xi = warm;
        return true;
    };

    // Polish from several grid cells: the global grid minimum is not always in
    // the basin of the zero, and reflection-symmetric measures put twin zeros
    // on opposite meridians. Cells one meridian apart are kept distinct, since
    // a narrow basin can sit between two shallow nonzero minima of |v| whose
    // cells score better than its own.
    {
        std::vector<Cell> sorted = cells;
        std::sort(sorted.begin(), sorted.end(),
                  [](const Cell& a, const Cell& b) { return a.a < b.a; });
        const double sep_l = 1.5 * 2.0 * std::numbers::pi / opt.n_l;
        const double sep_p = 0.75 * 2.0 * std::numbers::pi / opt.n_p;
        std::vector<Cell> starts;
        for (const Cell& c : sorted) {
            if (starts.size() >= 10) break;
            if (c.a >= 1e300) break;
            bool duplicate = false;
            for (const Cell& s : starts) {
                double dp_c =
                    std::abs(std::remainder(c.p - s.p, 2.0 * std::numbers::pi));
                if (std::abs(c.l - s.l) < sep_l && dp_c < sep_p) duplicate = true;
            }
            if (!duplicate) starts.push_back(c);
        }
        for (const Cell& c : starts)
            if (newton_from(c)) {
                solved = true;
                break;
            }
    }

    if (!solved) {
        // Nelder-Mead on (l, p_angle) against the full measure.
        double dl = 2.0 * std::numbers::pi / opt.n_l,
               dp = 2.0 * std::numbers::pi / opt.n_p;
        std::array<std::array<double, 2>, 3> simplex = {
            {{best_l, best_p}, {clamp_l(best_l + 0.5 * dl), best_p},
             {best_l, best_p + 0.5 * dp}}};
        std::array<double, 3> value{};
        auto full_obj = [&](const std::array<double, 2>& x) {
            Complex warm = best_xi;
            return objective(m, x[0], x[1], warm);
        };
        for (int i = 0; i < 3; ++i) value[i] = full_obj(simplex[i]);

        for (int it = 0; it < opt.refine_budget; ++it) {
            std::array<int, 3> ord = {0, 1, 2};
            std::sort(ord.begin(), ord.end(),
                      [&](int a, int b) { return value[a] < value[b]; });
            if (value[ord[0]] <= 0.2 * opt.tol_rel) break;
            auto &xb = simplex[ord[0]], &xm = simplex[ord[1]], &xw = simplex[ord[2]];
            std::array<double, 2> cen = {0.5 * (xb[0] + xm[0]),
                                         0.5 * (xb[1] + xm[1])};
            auto blend = [&](double t) {
                return std::array<double, 2>{cen[0] + t * (cen[0] - xw[0]),
                                             cen[1] + t * (cen[1] - xw[1])};
            };
            auto xr = blend(1.0);
            double vr = full_obj(xr);
            if (vr < value[ord[0]]) {
                auto xe = blend(2.0);
                double ve = full_obj(xe);
                if (ve < vr) { xw = xe; value[ord[2]] = ve; }
                else { xw = xr; value[ord[2]] = vr; }
            } else if (vr < value[ord[1]]) {
                xw = xr;
                value[ord[2]] = vr;
            } else {
                auto xc = blend(-0.5);
                double vc = full_obj(xc);
                if (vc < value[ord[2]]) { xw = xc; value[ord[2]] = vc; }
                else {
                    for (int i : {ord[1], ord[2]}) {
                        simplex[i] = {0.5 * (simplex[i][0] + xb[0]),
                                      0.5 * (simplex[i][1] + xb[1])};
                        value[i] = full_obj(simplex[i]);
                    }
                }
            }
        }

        int ib = 0;
        for (int i = 1; i < 3; ++i)
            if (value[i] < value[ib]) ib = i;
        sol_l = clamp_l(simplex[ib][0]);
        sol_p = simplex[ib][1];
        sol_xi = best_xi;
    }

    res.l = clamp_l(sol_l);
    res.p = std::polar(1.0, sol_p);
    res.evaluations = evals;

    HyperbolicCap cap(res.l, res.p);
    auto r = rearranged(m, cap, psi, sol_xi);
    res.form = InertiaForm::from(r.zeta, psi);
    res.anisotropy_rel = res.form.anisotropy_rel();
    res.converged = res.anisotropy_rel <= opt.tol_rel;
    require(res.converged,
            "find_multiple_cap: search exhausted with best anisotropy " +
                std::to_string(res.anisotropy_rel) +
                "; this contradicts the existence result and signals numerical "
                "breakdown");
    return res;
}

}  // namespace spectral_shapes
