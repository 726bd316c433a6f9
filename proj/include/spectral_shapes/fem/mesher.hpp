#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "../error.hpp"
#include "delaunay.hpp"
#include "domains.hpp"
#include "mesh.hpp"

namespace spectral_shapes {

namespace mesher_detail {

// Point-in-polygon by ray parity with a half-open crossing rule, so a ray
// through a vertex counts each incident edge once.
struct PolygonTest {
    std::vector<Complex> poly;
    double diam = 0.0;

    explicit PolygonTest(std::vector<Complex> p) : poly(std::move(p)) {
        double lo_x = poly[0].real(), hi_x = lo_x, lo_y = poly[0].imag(), hi_y = lo_y;
        for (auto& z : poly) {
            lo_x = std::min(lo_x, z.real());
            hi_x = std::max(hi_x, z.real());
            lo_y = std::min(lo_y, z.imag());
            hi_y = std::max(hi_y, z.imag());
        }
        diam = std::hypot(hi_x - lo_x, hi_y - lo_y);
    }

    bool inside(Complex p) const {
        bool in = false;
        size_t m = poly.size();
        for (size_t i = 0, j = m - 1; i < m; j = i++) {
            double yi = poly[i].imag(), yj = poly[j].imag();
            if ((yi > p.imag()) != (yj > p.imag())) {
                double x = poly[j].real() + (poly[i].real() - poly[j].real()) *
                                                (p.imag() - yj) / (yi - yj);
                if (p.real() < x) in = !in;
            }
        }
        return in;
    }

    double distance(Complex p) const {
        double d = std::abs(p - poly[0]);
        size_t m = poly.size();
        for (size_t i = 0, j = m - 1; i < m; j = i++)
            d = std::min(d, domain_detail::dist_segment(p, poly[j], poly[i]));
        return d;
    }

    Complex closest(Complex p) const {
        double best = std::abs(p - poly[0]);
        Complex q = poly[0];
        size_t m = poly.size();
        for (size_t i = 0, j = m - 1; i < m; j = i++) {
            Complex a = poly[j], b = poly[i], dd = b - a;
            double n2 = std::norm(dd);
            double t = n2 == 0.0 ? 0.0
                                 : std::clamp(((p - a).real() * dd.real() +
                                               (p - a).imag() * dd.imag()) /
                                                  n2,
                                               0.0, 1.0);
            Complex c = a + t * dd;
            double d = std::abs(p - c);
            if (d < best) {
                best = d;
                q = c;
            }
        }
        return q;
    }

    bool inside_or_on(Complex p) const {
        if (inside(p)) return true;
        return distance(p) <= 1e-9 * (1.0 + diam);
    }
};

// Triangles of the Delaunay set whose centroid and edge midpoints lie in the
// domain; slivers with nonpositive signed area are discarded.
inline std::vector<std::array<int, 3>> filter_triangles(
    const std::vector<std::array<int, 3>>& tris, const std::vector<Complex>& pts,
    const PolygonTest& test) {
    std::vector<std::array<int, 3>> kept;
    for (auto& t : tris) {
        Complex a = pts[t[0]], b = pts[t[1]], c = pts[t[2]];
        double area2 = (b - a).real() * (c - a).imag() - (b - a).imag() * (c - a).real();
        if (area2 <= 0.0) continue;
        Complex centroid = (a + b + c) / 3.0;
        if (!test.inside(centroid)) continue;
        if (!test.inside_or_on(0.5 * (a + b)) || !test.inside_or_on(0.5 * (b + c)) ||
            !test.inside_or_on(0.5 * (c + a)))
            continue;
        kept.push_back(t);
    }
    return kept;
}

inline double lattice_accept(uint64_t ix, uint64_t iy, uint64_t seed) {
    uint64_t v = delaunay_detail::mix(ix * 0x9e3779b97f4a7c15ULL + iy +
                                      seed * 0xbf58476d1ce4e5b9ULL);
    return (v >> 11) * 0x1.0p-53;
}

}  // namespace mesher_detail

// Builds a quality triangulation of the domain: graded boundary polygon with
// pinned vertices, hex-lattice interior seeding thinned to the local density,
// then repulsive edge-spring smoothing with retriangulation until motion
// stalls. Retries with perturbed seeds before giving up.
inline TriMesh generate_mesh(const DomainFamily& family, double h) {
    require(h > 0.0 && std::isfinite(h), "generate_mesh: h must be positive");
    const int max_vertices = 50000;

    std::vector<Complex> boundary = family.boundary_polygon(h);
    mesher_detail::PolygonTest test(boundary);
    int nb = static_cast<int>(boundary.size());
    require(nb <= max_vertices,
            "generate_mesh: boundary alone exceeds the vertex budget, increase h");

    double lo_x = boundary[0].real(), hi_x = lo_x;
    double lo_y = boundary[0].imag(), hi_y = lo_y;
    double s_min = h;
    for (auto& z : boundary) {
        lo_x = std::min(lo_x, z.real());
        hi_x = std::max(hi_x, z.real());
        lo_y = std::min(lo_y, z.imag());
        hi_y = std::max(hi_y, z.imag());
        s_min = std::min(s_min, family.size_at(z, h));
    }
    require(s_min > 1e-6 * (1.0 + test.diam),
            "generate_mesh: feature size too small for this domain, increase h or "
            "relax the family parameters");

    std::string failure = "generate_mesh: could not reach the quality target";
    for (int attempt = 0; attempt < 5; ++attempt) {
        uint64_t seed = 1 + static_cast<uint64_t>(attempt);
        double off_x = s_min * 0.37 * attempt, off_y = s_min * 0.21 * attempt;

        // Hex lattice at the finest spacing, thinned by (s_min / size)^2 to
        // match the graded target density.
        std::vector<Complex> pts = boundary;
        double dy = s_min * std::sqrt(3.0) / 2.0;
        int rows = static_cast<int>((hi_y - lo_y) / dy) + 2;
        int cols = static_cast<int>((hi_x - lo_x) / s_min) + 2;
        for (int r = 0; r <= rows; ++r) {
            double y = lo_y + off_y + r * dy;
            double shift = (r % 2) ? s_min / 2.0 : 0.0;
            for (int c = 0; c <= cols; ++c) {
                double x = lo_x + off_x + c * s_min + shift;
                Complex p(x, y);
                double s = family.size_at(p, h);
                double keep = (s_min / s) * (s_min / s);
                if (mesher_detail::lattice_accept(static_cast<uint64_t>(r),
                                                  static_cast<uint64_t>(c),
                                                  seed) >= keep)
                    continue;
                if (!test.inside(p)) continue;
                if (test.distance(p) < 0.4 * s) continue;
                pts.push_back(p);
            }
        }
        require(static_cast<int>(pts.size()) <= max_vertices,
                "generate_mesh: vertex budget exceeded, increase h");

        // Smoothing loop: retriangulate, then push vertices apart along edges
        // that are shorter than the graded target.
        std::vector<std::array<int, 3>> kept;
        for (int iter = 0; iter < 120; ++iter) {
            auto tris = delaunay_triangulate(pts, seed);
            kept = mesher_detail::filter_triangles(tris, pts, test);
            if (kept.empty()) break;

            std::vector<Complex> force(pts.size(), Complex(0.0, 0.0));
            std::map<std::pair<int, int>, bool> seen;
            for (auto& t : kept)
                for (int e = 0; e < 3; ++e) {
                    int i = t[e], j = t[(e + 1) % 3];
                    auto key = std::minmax(i, j);
                    if (!seen.emplace(key, true).second) continue;
                    Complex d = pts[i] - pts[j];
                    double len = std::abs(d);
                    double want = 1.2 * family.size_at(0.5 * (pts[i] + pts[j]), h);
                    if (len >= want || len == 0.0) continue;
                    Complex f = (want - len) / len * d;
                    force[i] += f;
                    force[j] -= f;
                }

            double worst = 0.0;
            for (int i = nb; i < static_cast<int>(pts.size()); ++i) {
                Complex step = 0.2 * force[i];
                Complex cand = pts[i] + step;
                double s = family.size_at(cand, h);
                if (!test.inside(cand) || test.distance(cand) < 0.3 * s) {
                    Complex q = test.closest(cand);
                    Complex dir = pts[i] - q;
                    double dn = std::abs(dir);
                    Complex proj = dn == 0.0 ? pts[i] : q + dir / dn * (0.3 * s);
                    if (test.inside(proj) && test.distance(proj) >= 0.25 * s)
                        cand = proj;
                    else
                        cand = pts[i];
                }
                worst = std::max(worst, std::abs(cand - pts[i]) /
                                            family.size_at(pts[i], h));
                pts[i] = cand;
            }
            if (worst < 0.02) break;
        }

        // Drop interior points crowding the boundary, retriangulate, and
        // compact to the vertices the kept triangles actually use.
        std::vector<Complex> final_pts(boundary);
        for (int i = nb; i < static_cast<int>(pts.size()); ++i)
            if (test.distance(pts[i]) >= 0.45 * family.size_at(pts[i], h))
                final_pts.push_back(pts[i]);
        auto tris = delaunay_triangulate(final_pts, seed);
        kept = mesher_detail::filter_triangles(tris, final_pts, test);
        if (kept.empty()) {
            failure = "generate_mesh: empty triangulation after filtering";
            continue;
        }

        std::vector<int> remap(final_pts.size(), -1);
        TriMesh mesh;
        mesh.h = h;
        for (auto& t : kept) {
            std::array<int, 3> nt{};
            for (int e = 0; e < 3; ++e) {
                if (remap[t[e]] < 0) {
                    remap[t[e]] = static_cast<int>(mesh.vertex.size());
                    mesh.vertex.push_back(final_pts[t[e]]);
                }
                nt[e] = remap[t[e]];
            }
            mesh.tri.push_back(nt);
        }

        std::map<std::pair<int, int>, int> edge_use;
        for (auto& t : mesh.tri)
            for (int e = 0; e < 3; ++e)
                edge_use[std::minmax(t[e], t[(e + 1) % 3])]++;
        for (auto& t : mesh.tri)
            for (int e = 0; e < 3; ++e) {
                int i = t[e], j = t[(e + 1) % 3];
                if (edge_use[std::minmax(i, j)] == 1)
                    mesh.boundary.push_back({i, j});
            }

        try {
            mesh.validate();
        } catch (const Error& err) {
            failure = std::string("generate_mesh: ") + err.what();
            continue;
        }
        if (static_cast<int>(mesh.vertex.size()) > max_vertices) {
            require(false, "generate_mesh: vertex budget exceeded, increase h");
        }
        double angle = mesh.min_angle_deg();
        if (angle < 20.0) {
            failure = "generate_mesh: min angle " + std::to_string(angle) +
                      " below 20 degrees, refine h or retry";
            continue;
        }
        return mesh;
    }
    require(false, failure + " after 5 attempts, refine h");
    return {};
}

}  // namespace spectral_shapes
