#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../bessel.hpp"
#include "../cap_search.hpp"
#include "../conformal.hpp"
#include "../folding.hpp"
#include "../growth.hpp"
#include "../measure.hpp"
#include "../recenter.hpp"
#include "audit.hpp"

namespace spectral_shapes {

struct SuiteItem {
    std::string name;
    bool pass = false;
    std::string detail;
    // Present when the property failed on a concrete measure: serialized next
    // to the report so the case can be replayed through the CLI.
    std::optional<DiscreteMeasure> offender;
};

struct SuiteReport {
    uint64_t seed = 0;
    std::vector<SuiteItem> items;
    bool all_pass = false;

    std::string text() const {
        std::ostringstream os;
        os << "# Machinery suite\nseed = " << seed << "\n\n";
        int passed = 0;
        for (auto& it : items) {
            os << (it.pass ? "PASS " : "FAIL ") << it.name;
            if (!it.detail.empty()) os << "  " << it.detail;
            os << "\n";
            if (it.pass) ++passed;
        }
        os << "\nOverall: " << (all_pass ? "PASS" : "FAIL") << " (" << passed << "/"
           << items.size() << ")\n";
        return os.str();
    }
};

namespace suite_detail {

inline DiskQuadrature& quad() {
    static DiskQuadrature q(16, 64, 512);
    return q;
}

inline ConformalMap asym_map() {
    return ConformalMap({{0.0, 0.0}, {1.0, 0.0}, {0.22, 0.1}, {-0.05, 0.12}});
}

inline std::string fmt_e(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", x);
    return buf;
}

// Dirichlet energy of one transplanted sheet, computed through the chart
// chain. Conformal invariance makes the exact value pi; the folded test
// function doubles it.
inline double sheet_energy(const Rearrangement& r) {
    DiskQuadrature q32(32, 128, 128);
    return q32.integrate([&](Complex w) {
        Complex z = r.chart.to_cap(w);
        Complex w_rt = r.chart.to_disk(z);
        Complex dpsi_w = r.chart.to_cap_derivative(w);
        Complex dpsi_rt = r.chart.to_cap_derivative(w_rt);
        Complex dm = r.gauge_map.derivative(w_rt) * dpsi_w / dpsi_rt;
        return std::norm(dm);
    });
}

}  // namespace suite_detail

// Deterministic property run over the analysis machinery: recentering,
// folding, cap search, growth and comparison lemmas, and the rejected-input
// paths. Items are independent; any failure carries the offending measure.
inline SuiteReport run_machinery_suite(const ExperimentConfig& cfg) {
    using suite_detail::fmt_e;
    const double pi = std::numbers::pi;
    SuiteReport report;
    report.seed = cfg.seed;
    DiskQuadrature& q = suite_detail::quad();
    ConformalMap phi = suite_detail::asym_map();
    DiscreteMeasure area_m =
        pullback_area_measure(phi, DensityField::constant(1.0), q);
    DiscreteMeasure boundary_m =
        pullback_boundary_measure(phi, DensityField::constant(1.0), q);

    auto add = [&report](SuiteItem it) { report.items.push_back(std::move(it)); };

    for (auto [psi, tag] : {std::pair{PsiMap::identity(), std::string("identity")},
                            {PsiMap::bessel_radial(), std::string("bessel")}}) {
        SuiteItem it;
        it.name = "hersch_residual_" + tag;
        auto res = renormalize(area_m, psi);
        it.pass = res.residual <= 1e-10;
        it.detail = "residual=" + fmt_e(res.residual);
        if (!it.pass) it.offender = area_m;
        add(std::move(it));
    }

    {
        SuiteItem it;
        it.name = "hersch_multi_start";
        std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double spread = 0.0;
        for (auto psi : {PsiMap::identity(), PsiMap::bessel_radial()}) {
            Complex first{};
            for (int s = 0; s < 8; ++s) {
                Complex seed = std::polar(0.6 * std::sqrt(u(rng)), 2.0 * pi * u(rng));
                auto res = renormalize(area_m, psi, seed);
                if (s == 0)
                    first = res.xi;
                else
                    spread = std::max(spread, std::abs(res.xi - first));
            }
        }
        it.pass = spread <= 1e-9;
        it.detail = "xi_spread=" + fmt_e(spread);
        if (!it.pass) it.offender = area_m;
        add(std::move(it));
    }

    {
        SuiteItem it;
        it.name = "hersch_shift_oracle";
        double worst = 0.0;
        // The uniform measure is centered, so the recovered parameter must be
        // exactly the inverse shift.
        auto lebesgue =
            pullback_area_measure(ConformalMap::identity(), DensityField::constant(1.0), q);
        auto shifted = pushforward(lebesgue, DiskAutomorphism::recentering({0.3, 0.0}));
        for (auto psi : {PsiMap::identity(), PsiMap::bessel_radial()}) {
            auto res = renormalize(shifted, psi);
            worst = std::max(worst, std::abs(res.xi - Complex(-0.3, 0.0)));
        }
        it.pass = worst <= 1e-9;
        it.detail = "xi_error=" + fmt_e(worst);
        if (!it.pass) it.offender = shifted;
        add(std::move(it));
    }

    {
        SuiteItem it;
        it.name = "fold_mass_exact";
        it.pass = true;
        double worst = 0.0;
        for (double l : {1.0, 2.5, 4.5}) {
            HyperbolicCap cap(l, std::polar(1.0, 0.7 * l));
            auto folded = fold(boundary_m, cap);
            double gap = std::abs(folded.mass() - boundary_m.mass());
            worst = std::max(worst, gap);
            it.pass = it.pass && gap == 0.0;
        }
        it.detail = "mass_gap=" + fmt_e(worst);
        if (!it.pass) it.offender = boundary_m;
        add(std::move(it));
    }

    {
        SuiteItem it;
        it.name = "fold_energy_doubling";
        double worst = 0.0;
        for (double l : {2.0, 4.0}) {
            auto r = rearranged(boundary_m, HyperbolicCap(l, std::polar(1.0, 1.3)),
                                PsiMap::identity());
            double e = suite_detail::sheet_energy(r);
            worst = std::max(worst, std::abs(2.0 * e - 2.0 * pi));
        }
        it.pass = worst <= 1e-8;
        it.detail = "doubling_gap=" + fmt_e(worst);
        if (!it.pass) it.offender = boundary_m;
        add(std::move(it));
    }

    {
        SuiteItem it;
        it.name = "fold_harmonic_margin";
        double min_margin = 1e300;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                double l = 0.8 + 4.6 * i / 3.0;
                HyperbolicCap cap(l, std::polar(1.0, 2.0 * pi * j / 4.0 + 0.3));
                auto r = rearranged(boundary_m, cap, PsiMap::identity());
                for (Complex t : {Complex(1, 0), Complex(0, 1)}) {
                    auto trace = lift_boundary_trace(r, t, 1024);
                    min_margin = std::min(min_margin,
                                          2.0 * pi - harmonic_extension_energy(trace));
                }
            }
        }
        it.pass = min_margin > 0.0;
        it.detail = "min_margin=" + fmt_e(min_margin);
        if (!it.pass) it.offender = boundary_m;
        add(std::move(it));
    }

    {
        SuiteItem it;
        it.name = "cap_search_anisotropy";
        auto centered =
            pushforward(boundary_m, renormalize(boundary_m, PsiMap::identity()).map());
        auto res = find_multiple_cap(centered, PsiMap::identity());
        it.pass = res.converged && res.anisotropy_rel <= 1e-6;
        it.detail = "anisotropy_rel=" + fmt_e(res.anisotropy_rel) +
                    " evaluations=" + std::to_string(res.evaluations);
        if (!it.pass) it.offender = centered;
        add(std::move(it));
    }

    {
        SuiteItem it;
        it.name = "growth_defect";
        auto rep = check_growth(phi, DensityField::constant(1.0));
        auto flat = check_growth(ConformalMap::identity(), DensityField::constant(1.0));
        it.pass = rep.max_defect <= 1e-8 && flat.max_defect <= 1e-8 && flat.equality &&
                  !rep.equality;
        it.detail = "max_defect=" + fmt_e(rep.max_defect) +
                    " flat_equality=" + (flat.equality ? "yes" : "no");
        add(std::move(it));
    }

    {
        SuiteItem it;
        it.name = "radial_comparison";
        auto centered =
            pushforward(area_m, renormalize(area_m, PsiMap::bessel_radial()).map());
        RadialEigenProfile prof;
        auto rep = radial_comparison(
            centered, [&prof](double r) { return prof.f(r) * prof.f(r); });
        it.pass = rep.defect >= -1e-8;
        it.detail = "defect=" + fmt_e(rep.defect);
        if (!it.pass) it.offender = centered;
        add(std::move(it));
    }

    {
        SuiteItem it;
        it.name = "negative_weight_rejected";
        DiscreteMeasure bad;
        bad.push_back({0.3, 0.1}, 1.0, Part::Interior);
        bad.push_back({-0.2, 0.4}, -0.5, Part::Interior);
        bool validate_threw = false, rearrange_threw = false;
        try {
            bad.validate();
        } catch (const Error&) {
            validate_threw = true;
        }
        try {
            rearranged(bad, HyperbolicCap(2.0, {1.0, 0.0}), PsiMap::identity());
        } catch (const Error&) {
            rearrange_threw = true;
        }
        it.pass = validate_threw && rearrange_threw;
        it.detail = std::string("validate=") + (validate_threw ? "rejected" : "ACCEPTED") +
                    " rearranged=" + (rearrange_threw ? "rejected" : "ACCEPTED");
        add(std::move(it));
    }

    {
        SuiteItem it;
        it.name = "seeded_perturbation";
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> u(0.5, 1.5);
        DiscreteMeasure jittered = area_m;
        for (auto& w : jittered.w) w *= u(rng);
        auto res = renormalize(jittered, PsiMap::identity());
        it.pass = res.residual <= 1e-10;
        {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "xi=%.12g%+.12gi residual=%.3e",
                          res.xi.real(), res.xi.imag(), res.residual);
            it.detail = buf;
        }
        if (!it.pass) it.offender = jittered;
        add(std::move(it));
    }

    report.all_pass = true;
    for (auto& it : report.items) report.all_pass = report.all_pass && it.pass;
    return report;
}

// Writes each failing item's measure next to the report for replay. Returns
// the written paths in report order.
inline std::vector<std::string> serialize_suite_failures(const SuiteReport& report,
                                                         const std::string& out_dir) {
    std::vector<std::string> paths;
    for (auto& it : report.items) {
        if (it.pass || !it.offender) continue;
        std::string path = out_dir + "/suite_failed_" + it.name + ".csv";
        write_measure_csv(path, *it.offender);
        paths.push_back(path);
    }
    return paths;
}

}  // namespace spectral_shapes
