// Command-line front end: batch solves, bound audits, sharpness sweeps, and
// the single-shot analysis tools (recentering, folding, cap search).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "spectral_shapes/disk_galerkin.hpp"
#include "spectral_shapes/experiments/audit.hpp"
#include "spectral_shapes/experiments/corpus.hpp"
#include "spectral_shapes/experiments/sharpness.hpp"
#include "spectral_shapes/experiments/suite.hpp"
#include "spectral_shapes/fem/eigensolve.hpp"
#include "spectral_shapes/fem/mesher.hpp"

namespace {

using namespace spectral_shapes;

struct Args {
    std::string command;
    std::string config;
    std::string out = ".";
    std::string measure;
    std::string psi = "id";
    std::string domain;
    std::string cap;
    std::string problem;
    std::optional<uint64_t> seed;
};

int usage(const char* argv0) {
    std::printf(
        "usage: %s <command> [options]\n"
        "\n"
        "commands:\n"
        "  solve         eigenvalues for one domain or a whole corpus\n"
        "  bounds-sweep  audit the spectral inequalities over the corpus\n"
        "  sharpness     degeneration sweep toward the second-eigenvalue limits\n"
        "  hersch        recenter a measure: prints xi and the moment residual\n"
        "  fold-demo     fold a measure over one cap; dumps nu_a, zeta_a, bound\n"
        "  cap-search    find the cap whose folded measure is multiple\n"
        "  suite         deterministic property run over the machinery\n"
        "\n"
        "options:\n"
        "  --config <file>   key=value experiment config (default: built-ins)\n"
        "  --out <dir>       output directory for reports (default: .)\n"
        "  --seed <u64>      seed for the seeded suite items\n"
        "  --measure <csv>   input measure for hersch (re,im,weight,part rows)\n"
        "  --psi id|bessel   moment map variant (default id)\n"
        "  --domain <file>   domain spec file for fold-demo / cap-search\n"
        "  --cap l,p_angle   cap parameters for fold-demo\n"
        "  --problem <p>     neumann|steklov|both where applicable\n",
        argv0);
    return 2;
}

Args parse_args(int argc, char** argv) {
    Args a;
    a.command = argv[1];
    for (int i = 2; i < argc; i += 2) {
        std::string flag = argv[i];
        require(i + 1 < argc, "missing value for option " + flag);
        std::string value = argv[i + 1];
        if (flag == "--config")
            a.config = value;
        else if (flag == "--out")
            a.out = value;
        else if (flag == "--seed")
            a.seed = std::stoull(value);
        else if (flag == "--measure")
            a.measure = value;
        else if (flag == "--psi")
            a.psi = value;
        else if (flag == "--domain")
            a.domain = value;
        else if (flag == "--cap")
            a.cap = value;
        else if (flag == "--problem")
            a.problem = value;
        else
            require(false, "unknown option " + flag);
    }
    return a;
}

ExperimentConfig load_config(const Args& a) {
    KeyValueConfig kv;
    if (!a.config.empty()) kv = KeyValueConfig::parse_file(a.config);
    ExperimentConfig cfg = ExperimentConfig::from_key_values(kv);
    if (a.seed) cfg.seed = *a.seed;
    if (a.out != ".") cfg.out_dir = a.out;
    if (!a.problem.empty()) {
        if (a.problem == "neumann")
            cfg.problem = ExperimentConfig::Problem::Neumann;
        else if (a.problem == "steklov")
            cfg.problem = ExperimentConfig::Problem::Steklov;
        else if (a.problem == "both")
            cfg.problem = ExperimentConfig::Problem::Both;
        else
            require(false, "problem must be neumann, steklov, or both");
    }
    return cfg;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    require(out.good(), "cannot open output file " + path);
    out << content;
    require(out.good(), "failed writing " + path);
}

std::string ensure_out_dir(const std::string& dir) {
    std::filesystem::create_directories(dir);
    return dir;
}

PsiMap parse_psi(const std::string& name) {
    if (name == "id") return PsiMap::identity();
    if (name == "bessel") return PsiMap::bessel_radial();
    require(false, "psi must be id or bessel");
    return PsiMap::identity();
}

// Eigenvalues of one corpus entry for one problem, spectral or FEM depending
// on the domain kind.
std::vector<double> solve_values(const DomainSpec& d, bool steklov, int n_values,
                                 int neumann_degree, int steklov_degree) {
    std::vector<double> out;
    if (d.kind == DomainSpec::Kind::Polymap) {
        Spectrum s = steklov
                         ? steklov_spectrum(*d.map, d.boundary_density, steklov_degree,
                                            solver_quadrature())
                         : neumann_spectrum(*d.map, d.density, neumann_degree,
                                            solver_quadrature());
        for (int k = 0; k < n_values; ++k) out.push_back(s.value(k));
    } else {
        TriMesh mesh = generate_mesh(*d.family, d.mesh_h);
        FemSpectrum s = steklov ? solve_steklov_fem(mesh, n_values)
                                : solve_neumann_fem(mesh, n_values);
        for (int k = 0; k < n_values; ++k) out.push_back(s.value(k));
    }
    return out;
}

int cmd_solve(const Args& a) {
    ExperimentConfig cfg = load_config(a);
    std::vector<DomainSpec> corpus = cfg.corpus;
    if (!a.domain.empty()) corpus = {DomainSpec::from_file(a.domain)};
    const int n_values = 9;
    std::ostringstream csv;
    csv << "domain,problem";
    for (int k = 0; k < n_values; ++k) csv << ",lambda" << k;
    csv << "\n";
    for (auto& d : corpus) {
        std::vector<std::pair<std::string, bool>> jobs;
        if (cfg.problem != ExperimentConfig::Problem::Steklov)
            jobs.push_back({"neumann", false});
        if (cfg.problem != ExperimentConfig::Problem::Neumann)
            jobs.push_back({"steklov", true});
        for (auto& [label, steklov] : jobs) {
            auto values = solve_values(d, steklov, n_values, cfg.neumann_degree,
                                       cfg.steklov_degree);
            csv << d.id << "," << label;
            std::printf("%-24s %-8s", d.id.c_str(), label.c_str());
            for (double v : values) {
                csv << "," << report_detail::fmt(v);
                std::printf(" %10.6g", v);
            }
            csv << "\n";
            std::printf("\n");
        }
    }
    write_file(ensure_out_dir(cfg.out_dir) + "/solve.csv", csv.str());
    return 0;
}

int cmd_bounds(const Args& a) {
    ExperimentConfig cfg = load_config(a);
    BoundsReport report = run_bounds_sweep(cfg);
    std::string dir = ensure_out_dir(cfg.out_dir);
    write_file(dir + "/bounds.csv", report.csv());
    write_file(dir + "/bounds.md", report.markdown());
    for (auto& row : report.rows) {
        if (!row.error.empty()) {
            std::printf("ERROR %-24s %s\n", row.id.c_str(), row.error.c_str());
            continue;
        }
        double min_margin = 1e300;
        for (auto& c : row.checks) min_margin = std::min(min_margin, c.margin);
        std::printf("%s %-24s min_margin=%.6g\n", row.pass ? "ok  " : "FAIL",
                    row.id.c_str(), min_margin);
    }
    if (!report.all_pass) {
        std::printf(
            "bound audit FAILED: every audited inequality is a theorem, so a "
            "violation beyond tolerance signals a solver bug, not a "
            "counterexample. See %s/bounds.md\n",
            dir.c_str());
        return 1;
    }
    std::printf("bound audit passed: reports in %s\n", dir.c_str());
    return 0;
}

int cmd_sharpness(const Args& a) {
    ExperimentConfig cfg = load_config(a);
    SharpnessReport report = run_sharpness(cfg);
    std::string dir = ensure_out_dir(cfg.out_dir);
    write_file(dir + "/sharpness.csv", report.csv());
    write_file(dir + "/sharpness.md", report.markdown());
    for (auto& [name, svg] : sharpness_plots(report)) write_file(dir + "/" + name, svg);
    for (auto& r : report.rows)
        std::printf("eps=%-6g mu2*A=%.6g (%.4f of limit)  sigma2*P=%.6g (%.4f)  "
                    "sigma1=%.3e\n",
                    r.eps, r.passage_mu2_M, r.passage_mu2_M / report.neumann_limit,
                    r.overlap_sigma2_M, r.overlap_sigma2_M / report.steklov_limit,
                    r.passage_sigma1);
    for (auto& w : report.warnings) std::printf("warning: %s\n", w.c_str());
    if (!report.all_pass) {
        std::printf(
            "sharpness sweep exceeded a proven limit: this signals a solver "
            "bug, not a counterexample. See %s/sharpness.md\n",
            dir.c_str());
        return 1;
    }
    std::printf("sharpness sweep done: reports in %s\n", dir.c_str());
    return 0;
}

int cmd_hersch(const Args& a) {
    require(!a.measure.empty(), "hersch: --measure <csv> is required");
    DiscreteMeasure m = read_measure_csv(a.measure);
    auto res = renormalize(m, parse_psi(a.psi));
    std::printf("xi = %.12g %+.12gi\n", res.xi.real(), res.xi.imag());
    std::printf("residual = %.3e\n", res.residual);
    std::printf("iterations = %d\n", res.iterations);
    return res.residual <= 1e-10 ? 0 : 1;
}

int cmd_fold_demo(const Args& a) {
    require(!a.domain.empty(), "fold-demo: --domain <file> is required");
    require(!a.cap.empty(), "fold-demo: --cap l,p_angle is required");
    DomainSpec d = DomainSpec::from_file(a.domain);
    require(d.kind == DomainSpec::Kind::Polymap,
            "fold-demo: the domain must be kind=polymap (a disk measure)");
    auto parts = config_detail::split(a.cap, ',');
    require(parts.size() == 2, "fold-demo: --cap expects 'l,p_angle'");
    double l = config_detail::to_double(parts[0], "cap l");
    double p_angle = config_detail::to_double(parts[1], "cap p_angle");
    HyperbolicCap cap(l, std::polar(1.0, p_angle));

    bool steklov = a.problem.empty() || a.problem == "steklov";
    require(steklov || a.problem == "neumann",
            "fold-demo: --problem must be neumann or steklov");
    const DiskQuadrature& quad = solver_quadrature();
    DiscreteMeasure m = steklov
                            ? pullback_boundary_measure(*d.map, d.boundary_density, quad)
                            : pullback_area_measure(*d.map, d.density, quad);
    PsiMap psi = steklov ? PsiMap::identity() : PsiMap::bessel_radial();

    auto r = rearranged(m, cap, psi);
    FoldedBound bound = folded_bound(r, m.mass());
    std::string dir = ensure_out_dir(a.out);
    write_measure_csv(dir + "/fold_nu_a.csv", r.folded);
    write_measure_csv(dir + "/fold_zeta_a.csv", r.zeta);
    std::printf("folded measure: %s/fold_nu_a.csv\n", dir.c_str());
    std::printf("transplanted measure: %s/fold_zeta_a.csv\n", dir.c_str());
    std::printf("rayleigh quotient bound = %.12g\n", bound.quotient);
    std::printf("bound times mass = %.12g\n", bound.times_mass);
    return 0;
}

int cmd_cap_search(const Args& a) {
    require(!a.domain.empty(), "cap-search: --domain <file> is required");
    require(a.problem == "neumann" || a.problem == "steklov",
            "cap-search: --problem steklov|neumann is required");
    DomainSpec d = DomainSpec::from_file(a.domain);
    require(d.kind == DomainSpec::Kind::Polymap,
            "cap-search: the domain must be kind=polymap (a disk measure)");
    bool steklov = a.problem == "steklov";
    const DiskQuadrature& quad = solver_quadrature();
    DiscreteMeasure m = steklov
                            ? pullback_boundary_measure(*d.map, d.boundary_density, quad)
                            : pullback_area_measure(*d.map, d.density, quad);
    PsiMap psi = steklov ? PsiMap::identity() : PsiMap::bessel_radial();
    auto centered = pushforward(m, renormalize(m, psi).map());
    auto res = find_multiple_cap(centered, psi);
    std::printf("l = %.12g\n", res.l);
    std::printf("p_angle = %.12g\n", std::arg(res.p));
    std::printf("anisotropy_rel = %.3e\n", res.anisotropy_rel);
    std::printf("converged = %s\n", res.converged ? "yes" : "no");
    std::ostringstream csv;
    csv << "l,p_angle,anisotropy_rel\n";
    for (auto& t : res.trace)
        csv << report_detail::fmt(t.l) << "," << report_detail::fmt(t.p_angle) << ","
            << report_detail::fmt(t.anisotropy_rel) << "\n";
    std::string dir = ensure_out_dir(a.out);
    write_file(dir + "/cap_landscape.csv", csv.str());
    std::printf("landscape: %s/cap_landscape.csv\n", dir.c_str());
    return res.converged ? 0 : 1;
}

int cmd_suite(const Args& a) {
    ExperimentConfig cfg = load_config(a);
    SuiteReport report = run_machinery_suite(cfg);
    std::string dir = ensure_out_dir(cfg.out_dir);
    write_file(dir + "/suite.txt", report.text());
    std::fputs(report.text().c_str(), stdout);
    auto paths = serialize_suite_failures(report, dir);
    for (auto& p : paths) std::printf("offending case serialized for replay: %s\n", p.c_str());
    return report.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) return usage(argv[0]);
    std::string command = argv[1];
    try {
        Args a = parse_args(argc, argv);
        if (command == "solve") return cmd_solve(a);
        if (command == "bounds-sweep") return cmd_bounds(a);
        if (command == "sharpness") return cmd_sharpness(a);
        if (command == "hersch") return cmd_hersch(a);
        if (command == "fold-demo") return cmd_fold_demo(a);
        if (command == "cap-search") return cmd_cap_search(a);
        if (command == "suite") return cmd_suite(a);
        std::fprintf(stderr, "unknown command: %s\n", command.c_str());
        return usage(argv[0]);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
