#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "spectral_shapes/measure.hpp"
#include "spectral_shapes/moebius.hpp"
#include "spectral_shapes/quadrature.hpp"
#include "spectral_shapes/recenter.hpp"
#include "spectral_shapes/conformal.hpp"

using namespace spectral_shapes;

namespace {

// Injected by the build: absolute path of the command-line binary.
const std::string kCli = SPECTRAL_SHAPES_CLI_PATH;

struct RunResult {
    int exit_code;
    std::string output;  // stdout and stderr combined
};

std::string work_dir() {
    static std::string dir = [] {
        auto d = std::filesystem::temp_directory_path() / "spectral_shapes_cli";
        std::filesystem::remove_all(d);
        std::filesystem::create_directories(d);
        return d.string();
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    std::string log = work_dir() + "/last_run.log";
    std::string cmd = kCli + " " + args + " > " + log + " 2>&1";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(log);
    std::ostringstream os;
    os << in.rdbuf();
    r.output = os.str();
    return r;
}

std::string write_file(const std::string& name, const std::string& content) {
    std::string path = work_dir() + "/" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("cli without arguments prints usage and fails") {
    auto r = run_cli("");
    REQUIRE(r.exit_code == 2);
    REQUIRE(r.output.find("usage:") != std::string::npos);
    REQUIRE(r.output.find("bounds-sweep") != std::string::npos);
}

TEST_CASE("cli rejects unknown commands and options") {
    auto r = run_cli("frobnicate");
    REQUIRE(r.exit_code == 2);
    REQUIRE(r.output.find("unknown command") != std::string::npos);
    auto r2 = run_cli("suite --wat 1");
    REQUIRE(r2.exit_code == 2);
    REQUIRE(r2.output.find("unknown option") != std::string::npos);
}

TEST_CASE("cli rejects an invalid config with a diagnostic") {
    auto cfg = write_file("bad_eps.cfg", "eps=0.7,0.1\n");
    auto r = run_cli("bounds-sweep --config " + cfg);
    REQUIRE(r.exit_code == 2);
    REQUIRE(r.output.find("error:") != std::string::npos);
    REQUIRE(r.output.find("(0, 0.5]") != std::string::npos);
}

TEST_CASE("suite runs green and its report file is byte-stable") {
    auto a = run_cli("suite --seed 11 --out " + work_dir() + "/suite_a");
    REQUIRE(a.exit_code == 0);
    REQUIRE(a.output.find("Overall: PASS") != std::string::npos);
    auto b = run_cli("suite --seed 11 --out " + work_dir() + "/suite_b");
    REQUIRE(b.exit_code == 0);
    REQUIRE(slurp(work_dir() + "/suite_a/suite.txt") ==
            slurp(work_dir() + "/suite_b/suite.txt"));
}

TEST_CASE("hersch recenters a shifted uniform measure from csv") {
    DiskQuadrature q(12, 48, 256);
    auto lebesgue = pullback_area_measure(ConformalMap::identity(),
                                          DensityField::constant(1.0), q);
    auto shifted = pushforward(lebesgue, DiskAutomorphism::recentering({0.3, 0.0}));
    std::string path = work_dir() + "/shifted.csv";
    write_measure_csv(path, shifted);
    auto r = run_cli("hersch --measure " + path + " --psi id");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.output.find("xi = -0.3") != std::string::npos);
    REQUIRE(r.output.find("residual = ") != std::string::npos);
    auto rb = run_cli("hersch --measure " + path + " --psi bessel");
    REQUIRE(rb.exit_code == 0);
    REQUIRE(rb.output.find("xi = -0.3") != std::string::npos);
}

TEST_CASE("hersch requires a measure and rejects corrupted input") {
    auto r = run_cli("hersch");
    REQUIRE(r.exit_code == 2);
    REQUIRE(r.output.find("--measure") != std::string::npos);
    auto bad = write_file("negative.csv",
                          "re,im,weight,part\n0.1,0.2,0.5,interior\n"
                          "0.3,0.1,-2.0,interior\n");
    auto r2 = run_cli("hersch --measure " + bad);
    REQUIRE(r2.exit_code == 2);
    REQUIRE(r2.output.find("negative") != std::string::npos);
}

TEST_CASE("fold-demo writes both measures and prints the bound") {
    auto dom = write_file("cardioid.cfg", "kind=polymap\ncoeffs=0,0;1,0;0.25,0\n");
    auto out = work_dir() + "/fold";
    auto r = run_cli("fold-demo --domain " + dom + " --cap 2.0,0.7 --out " + out);
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.output.find("rayleigh quotient bound") != std::string::npos);
    auto nu = read_measure_csv(out + "/fold_nu_a.csv");
    auto zeta = read_measure_csv(out + "/fold_zeta_a.csv");
    REQUIRE(nu.size() == zeta.size());
    REQUIRE(std::abs(nu.mass() - zeta.mass()) < 1e-9);
    // Folding the boundary measure keeps every atom on the circle.
    for (size_t i = 0; i < nu.size(); ++i)
        REQUIRE(std::abs(std::abs(nu.z[i]) - 1.0) < 1e-9);
}

TEST_CASE("fold-demo and cap-search reject polygon domains") {
    auto dom = write_file("square.cfg", "kind=polygon\nfamily=square\n");
    auto r = run_cli("fold-demo --domain " + dom + " --cap 2.0,0.0 --out " +
                     work_dir());
    REQUIRE(r.exit_code == 2);
    REQUIRE(r.output.find("polymap") != std::string::npos);
    auto r2 = run_cli("cap-search --domain " + dom + " --problem steklov --out " +
                      work_dir());
    REQUIRE(r2.exit_code == 2);
    REQUIRE(r2.output.find("polymap") != std::string::npos);
}

TEST_CASE("solve writes a csv for a single polymap domain") {
    auto dom = write_file("trefoil.cfg", "kind=polymap\ncoeffs=0,0;1,0;0,0;0.2,0\n");
    auto out = work_dir() + "/solve";
    auto r = run_cli("solve --domain " + dom + " --out " + out);
    REQUIRE(r.exit_code == 0);
    auto csv = slurp(out + "/solve.csv");
    REQUIRE(csv.rfind("domain,problem,lambda0", 0) == 0);
    REQUIRE(csv.find("trefoil,neumann,") != std::string::npos);
    REQUIRE(csv.find("trefoil,steklov,") != std::string::npos);
    // First eigenvalue of each family is the constant mode at zero.
    REQUIRE(csv.find("neumann,0,") != std::string::npos);
    REQUIRE(csv.find("steklov,0,") != std::string::npos);
}

TEST_CASE("bounds-sweep on a small corpus writes reports and passes") {
    auto dom = write_file("tilted.cfg", "kind=polymap\ncoeffs=0,0;1,0;0.1,0.15\n");
    auto cfg = write_file("small.cfg", "corpus=" + dom + "\n");
    auto out = work_dir() + "/bounds";
    auto r = run_cli("bounds-sweep --config " + cfg + " --out " + out);
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.output.find("bound audit passed") != std::string::npos);
    auto csv = slurp(out + "/bounds.csv");
    REQUIRE(csv.find("tilted") != std::string::npos);
    auto md = slurp(out + "/bounds.md");
    REQUIRE(md.find("all bounds hold") != std::string::npos);
    REQUIRE(md.find("solver bug, not a counterexample") != std::string::npos);
}
