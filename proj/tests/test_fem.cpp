#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "spectral_shapes/fem/delaunay.hpp"
#include "spectral_shapes/fem/eigensolve.hpp"
#include "spectral_shapes/fem/mesher.hpp"

using namespace spectral_shapes;

namespace {

constexpr double kZeta = 1.8411837813406593;
constexpr double kPi = std::numbers::pi;

TriMesh small_square(double h = 0.2) { return generate_mesh(DomainFamily::square(), h); }

}  // namespace

TEST_CASE("delaunay triangulation has the empty-circumcircle property") {
    uint64_t state = 77;
    auto rnd = [&]() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return ((state >> 11) * 0x1.0p-53);
    };
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<Complex> pts;
        for (int i = 0; i < 60; ++i) pts.emplace_back(rnd(), rnd());
        auto tris = delaunay_triangulate(pts, 1 + trial);
        REQUIRE(tris.size() >= pts.size());
        std::vector<bool> used(pts.size(), false);
        for (auto& t : tris) {
            Complex a = pts[t[0]], b = pts[t[1]], c = pts[t[2]];
            double area2 =
                (b - a).real() * (c - a).imag() - (b - a).imag() * (c - a).real();
            REQUIRE(area2 > 0.0);
            for (int k : t) used[k] = true;
            // Circumcenter from the perpendicular bisector equations.
            double d = 2.0 * area2;
            double ux = (std::norm(a) * (b - c).imag() + std::norm(b) * (c - a).imag() +
                         std::norm(c) * (a - b).imag()) /
                        d;
            double uy = -(std::norm(a) * (b - c).real() + std::norm(b) * (c - a).real() +
                          std::norm(c) * (a - b).real()) /
                        d;
            Complex cc(ux, uy);
            double r = std::abs(a - cc);
            for (size_t q = 0; q < pts.size(); ++q) {
                if ((int)q == t[0] || (int)q == t[1] || (int)q == t[2]) continue;
                REQUIRE(std::abs(pts[q] - cc) >= r - 1e-7);
            }
        }
        for (bool u : used) REQUIRE(u);
    }
}

TEST_CASE("mesh text roundtrip preserves the triangulation") {
    TriMesh m = small_square();
    std::ostringstream os;
    write_mesh(m, os);
    std::istringstream is(os.str());
    TriMesh r = read_mesh(is);
    REQUIRE(r.vertex.size() == m.vertex.size());
    REQUIRE(r.tri == m.tri);
    REQUIRE(r.boundary == m.boundary);
    for (size_t i = 0; i < m.vertex.size(); ++i)
        REQUIRE(r.vertex[i] == m.vertex[i]);  // 17 digits roundtrip exactly
}

TEST_CASE("malformed mesh text is rejected with a line number") {
    std::istringstream is("v 0 0\nv 1 0\nv 0 1\nt 0 1 zebra\n");
    try {
        read_mesh(is);
        FAIL("expected a parse error");
    } catch (const Error& e) {
        REQUIRE(std::string(e.what()).find("line 4") != std::string::npos);
    }
}

TEST_CASE("validate rejects broken meshes") {
    TriMesh good = small_square();

    TriMesh cw = good;
    std::swap(cw.tri[0][0], cw.tri[0][1]);
    REQUIRE_THROWS_AS(cw.validate(), Error);

    TriMesh oob = good;
    oob.tri[0][2] = static_cast<int>(oob.vertex.size());
    REQUIRE_THROWS_AS(oob.validate(), Error);

    TriMesh hole = good;
    hole.tri.pop_back();  // interior hole breaks the rim bookkeeping
    REQUIRE_THROWS_AS(hole.validate(), Error);

    TriMesh fake = good;
    fake.boundary[0] = {fake.boundary[0][1], fake.boundary[0][0]};
    REQUIRE_THROWS_AS(fake.validate(), Error);
}

TEST_CASE("square mesh at h=0.1 is valid with a few hundred triangles") {
    TriMesh m = generate_mesh(DomainFamily::square(), 0.1);
    m.validate();
    REQUIRE(m.tri.size() >= 120);
    REQUIRE(m.tri.size() <= 450);
    REQUIRE(m.min_angle_deg() >= 20.0);
    REQUIRE(std::abs(m.area() - 1.0) < 1e-12);
    REQUIRE(std::abs(m.perimeter() - 4.0) < 1e-12);
}

TEST_CASE("generated meshes meet the area oracles and angle floor") {
    struct Case {
        DomainFamily fam;
        double h;
        double area_tol;  // absolute, against the closed form
    };
    Case cases[] = {
        {DomainFamily::disk_polygon(256), 0.05, 1e-12},
        {DomainFamily::ellipse(1.4, 0.8, 128), 0.08, 1e-12},
        {DomainFamily::two_disks_passage(0.5, 0.05), 0.08, 1e-6},
        {DomainFamily::two_disks_overlap(0.05), 0.06, 1e-6},
    };
    for (auto& c : cases) {
        INFO(c.fam.label());
        TriMesh m = generate_mesh(c.fam, c.h);
        m.validate();
        REQUIRE(m.min_angle_deg() >= 20.0);
        REQUIRE(std::abs(m.area() - c.fam.area()) < c.area_tol);
        REQUIRE(std::abs(m.perimeter() - c.fam.perimeter()) <
                2e-3 * c.fam.perimeter());
    }
    // The 256-gon area is itself within 1e-3 of the disk area.
    REQUIRE(std::abs(DomainFamily::disk_polygon(256).area() - kPi) < 1e-3);
}

TEST_CASE("boundary edges point along the counterclockwise loop") {
    TriMesh m = generate_mesh(DomainFamily::disk_polygon(64), 0.15);
    for (auto& e : m.boundary) {
        Complex a = m.vertex[e[0]], b = m.vertex[e[1]];
        Complex mid = 0.5 * (a + b);
        Complex outward(-(b - a).imag(), (b - a).real());  // left of travel is inside
        outward = -outward;
        REQUIRE(std::abs(mid + 1e-3 * outward / std::abs(outward)) > std::abs(mid));
    }
}

TEST_CASE("operators integrate area, perimeter, and annihilate constants") {
    TriMesh m = small_square();
    FemOperators ops = assemble_fem(m);
    REQUIRE(std::abs(ops.mass.sum() - m.area()) < 1e-12);
    REQUIRE(std::abs(ops.boundary_mass.sum() - m.perimeter()) < 1e-12);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.vertex.size());
    REQUIRE((ops.stiffness * ones).norm() < 1e-10);
}

TEST_CASE("square Neumann eigenvalues match the analytic spectrum") {
    TriMesh m = generate_mesh(DomainFamily::square(), 0.02);
    FemSpectrum sp = solve_neumann_fem(m, 6);
    REQUIRE(sp.value(0) == 0.0);
    REQUIRE(std::abs(sp.value(1) - kPi * kPi) < 0.01 * kPi * kPi);
    REQUIRE(std::abs(sp.value(2) - kPi * kPi) < 0.01 * kPi * kPi);
    REQUIRE(std::abs(sp.value(3) - 2 * kPi * kPi) < 0.02 * kPi * kPi);
}

TEST_CASE("refinement error in the square fundamental tone decays at order two") {
    double e_coarse =
        solve_neumann_fem(generate_mesh(DomainFamily::square(), 0.08), 2).value(1) -
        kPi * kPi;
    double e_fine =
        solve_neumann_fem(generate_mesh(DomainFamily::square(), 0.04), 2).value(1) -
        kPi * kPi;
    REQUIRE(e_coarse > 0.0);  // consistent-mass P1 converges from above
    REQUIRE(e_fine > 0.0);
    double order = std::log2(e_coarse / e_fine);
    REQUIRE(order > 1.3);
    REQUIRE(order < 3.0);
}

TEST_CASE("disk fundamental tone Richardson-extrapolates to the Bessel value") {
    DomainFamily disk = DomainFamily::disk_polygon(512);
    double mu_c = solve_neumann_fem(generate_mesh(disk, 0.06), 3).value(1);
    double mu_f = solve_neumann_fem(generate_mesh(disk, 0.03), 3).value(1);
    double extrap = (4.0 * mu_f - mu_c) / 3.0;
    REQUIRE(std::abs(extrap - kZeta * kZeta) < 0.005 * kZeta * kZeta);
}

TEST_CASE("disk Steklov spectrum starts with the integer ladder") {
    TriMesh m = generate_mesh(DomainFamily::disk_polygon(512), 0.03);
    FemSpectrum st = solve_steklov_fem(m, 5);
    REQUIRE(st.value(0) == 0.0);
    REQUIRE(std::abs(st.value(1) - 1.0) < 0.01);
    REQUIRE(std::abs(st.value(2) - 1.0) < 0.01);
    REQUIRE(std::abs(st.value(3) - 2.0) < 0.02);
    REQUIRE(std::abs(st.value(4) - 2.0) < 0.02);
}

TEST_CASE("eigenvalue products are invariant under uniform rescaling") {
    TriMesh m = small_square(0.15);
    TriMesh scaled = m;
    for (auto& v : scaled.vertex) v *= 1.7;
    scaled.h *= 1.7;

    FemSpectrum a = solve_neumann_fem(m, 4), b = solve_neumann_fem(scaled, 4);
    for (int k = 1; k < 4; ++k)
        REQUIRE(std::abs(a.value(k) * m.area() - b.value(k) * scaled.area()) <
                1e-8 * a.value(k) * m.area());

    FemSpectrum sa = solve_steklov_fem(m, 4), sb = solve_steklov_fem(scaled, 4);
    for (int k = 1; k < 4; ++k)
        REQUIRE(std::abs(sa.value(k) * m.perimeter() - sb.value(k) * scaled.perimeter()) <
                1e-8 * sa.value(k) * m.perimeter());
}

TEST_CASE("narrowing passage drives the splitting tone down toward the disk tone") {
    double z2 = kZeta * kZeta;
    FemSpectrum wide = solve_neumann_fem(
        generate_mesh(DomainFamily::two_disks_passage(0.5, 0.2), 0.08), 3);
    FemSpectrum thin = solve_neumann_fem(
        generate_mesh(DomainFamily::two_disks_passage(0.5, 0.1), 0.08), 3);
    REQUIRE(thin.value(1) < wide.value(1));
    REQUIRE(wide.value(1) > 0.0);
    REQUIRE(std::abs(thin.value(2) - z2) < std::abs(wide.value(2) - z2) + 1e-12);
    REQUIRE(std::abs(thin.value(2) - z2) < 0.1);
}

TEST_CASE("narrowing passage collapses the Steklov spectrum") {
    FemSpectrum wide = solve_steklov_fem(
        generate_mesh(DomainFamily::two_disks_passage(0.5, 0.2), 0.08), 3);
    FemSpectrum thin = solve_steklov_fem(
        generate_mesh(DomainFamily::two_disks_passage(0.5, 0.1), 0.08), 3);
    REQUIRE(thin.value(1) < wide.value(1));
    REQUIRE(thin.value(1) < 0.05);
}

TEST_CASE("pulled-apart disks approach the second Steklov limit from below") {
    TriMesh m = generate_mesh(DomainFamily::two_disks_overlap(0.05), 0.06);
    FemSpectrum st = solve_steklov_fem(m, 4);
    double prod = st.value(2) * m.perimeter();
    REQUIRE(prod < 4.0 * kPi);
    REQUIRE(prod > 0.9 * 4.0 * kPi);
}

TEST_CASE("boundary spectral products respect the cumulative two-pi-k ceiling") {
    for (auto fam : {DomainFamily::disk_polygon(256), DomainFamily::square()}) {
        INFO(fam.label());
        TriMesh m = generate_mesh(fam, fam.kind == DomainFamily::Kind::Square ? 0.04
                                                                              : 0.05);
        FemSpectrum st = solve_steklov_fem(m, 9);
        double per = m.perimeter();
        for (int k = 1; k <= 8; ++k)
            REQUIRE(st.value(k) * per <= 2.0 * kPi * k * (1.0 + 1e-6));
    }
}

TEST_CASE("square counting function tracks the Weyl law in the bulk") {
    TriMesh m = generate_mesh(DomainFamily::square(), 0.02);
    FemSpectrum sp = solve_neumann_fem(m, 101);
    double area = m.area();
    double mean = 0.0;
    for (int k = 50; k <= 100; ++k) {
        double ratio = sp.value(k) * area / (4.0 * kPi * k);
        INFO("k=" << k << " ratio=" << ratio);
        // Individual ratios sag below 1 by the boundary correction, which
        // decays like 1/sqrt(k); the window mean is what must be tight.
        REQUIRE(ratio > 0.8);
        REQUIRE(ratio < 1.2);
        mean += ratio;
    }
    mean /= 51.0;
    REQUIRE(std::abs(mean - 1.0) < 0.15);
}

TEST_CASE("solver rejects out-of-range requests and broken meshes") {
    TriMesh m = small_square();
    REQUIRE_THROWS_AS(solve_neumann_fem(m, 0), Error);
    REQUIRE_THROWS_AS(solve_neumann_fem(m, static_cast<int>(m.vertex.size())), Error);
    REQUIRE_THROWS_AS(solve_steklov_fem(m, 0), Error);
    TriMesh bad = m;
    std::swap(bad.tri[0][0], bad.tri[0][1]);
    REQUIRE_THROWS_AS(solve_neumann_fem(bad, 2), Error);
    REQUIRE_THROWS_AS(generate_mesh(DomainFamily::square(), 0.0), Error);
    REQUIRE_THROWS_AS(DomainFamily::two_disks_passage(0.5, 0.6), Error);
    REQUIRE_THROWS_AS(DomainFamily::disk_polygon(4), Error);
}
