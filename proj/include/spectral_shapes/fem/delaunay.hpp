#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "../error.hpp"
#include "../measure.hpp"

namespace spectral_shapes {

namespace delaunay_detail {

// Deterministic per-index hash, used for the insertion order and for the
// symbolic jitter that breaks cocircular ties.
inline uint64_t mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline long double orient(const std::array<long double, 2>& a,
                          const std::array<long double, 2>& b,
                          const std::array<long double, 2>& c) {
    return (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
}

inline long double incircle(const std::array<long double, 2>& a,
                            const std::array<long double, 2>& b,
                            const std::array<long double, 2>& c,
                            const std::array<long double, 2>& p) {
    long double ax = a[0] - p[0], ay = a[1] - p[1];
    long double bx = b[0] - p[0], by = b[1] - p[1];
    long double cx = c[0] - p[0], cy = c[1] - p[1];
    long double a2 = ax * ax + ay * ay;
    long double b2 = bx * bx + by * by;
    long double c2 = cx * cx + cy * cy;
    return ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) +
           a2 * (bx * cy - by * cx);
}

}  // namespace delaunay_detail

// Incremental Bowyer-Watson triangulation of a planar point set. Input points
// get a deterministic symbolic jitter (relative scale 1e-10) so cocircular
// configurations, such as vertices sampled from one circle, resolve the same
// way on every run; output triangles are counterclockwise triples into the
// original point array and cover the convex hull of the jittered set.
inline std::vector<std::array<int, 3>> delaunay_triangulate(
    const std::vector<Complex>& pts, uint64_t jitter_seed = 1) {
    using namespace delaunay_detail;
    int n = static_cast<int>(pts.size());
    require(n >= 3, "delaunay: need at least 3 points");

    double lo_x = pts[0].real(), hi_x = lo_x, lo_y = pts[0].imag(), hi_y = lo_y;
    for (const auto& p : pts) {
        lo_x = std::min(lo_x, p.real());
        hi_x = std::max(hi_x, p.real());
        lo_y = std::min(lo_y, p.imag());
        hi_y = std::max(hi_y, p.imag());
    }
    double diam = std::max(hi_x - lo_x, hi_y - lo_y);
    require(diam > 0.0, "delaunay: degenerate point set");

    std::vector<std::array<long double, 2>> q(n + 3);
    for (int i = 0; i < n; ++i) {
        uint64_t h1 = mix(jitter_seed * 0x10001ULL + 2 * i);
        uint64_t h2 = mix(jitter_seed * 0x10001ULL + 2 * i + 1);
        long double jx = (static_cast<long double>(h1 >> 11) / 9007199254740992.0L -
                          0.5L) * 2e-10L * diam;
        long double jy = (static_cast<long double>(h2 >> 11) / 9007199254740992.0L -
                          0.5L) * 2e-10L * diam;
        q[i] = {pts[i].real() + jx, pts[i].imag() + jy};
    }
    // Super-triangle far outside the data.
    long double cx = 0.5L * (lo_x + hi_x), cy = 0.5L * (lo_y + hi_y);
    long double R = 20.0L * diam;
    q[n] = {cx - 2.0L * R, cy - R};
    q[n + 1] = {cx + 2.0L * R, cy - R};
    q[n + 2] = {cx, cy + 2.0L * R};

    struct Tri {
        std::array<int, 3> v;
        std::array<int, 3> nb;  // neighbor opposite v[i], or -1
        bool alive = true;
    };
    std::vector<Tri> tris;
    tris.push_back({{n, n + 1, n + 2}, {-1, -1, -1}, true});

    auto contains = [&](int t, const std::array<long double, 2>& p, int& exit_edge) {
        exit_edge = -1;
        for (int i = 0; i < 3; ++i) {
            const auto& a = q[tris[t].v[(i + 1) % 3]];
            const auto& b = q[tris[t].v[(i + 2) % 3]];
            if (orient(a, b, p) < 0.0L) {
                exit_edge = i;
                return false;
            }
        }
        return true;
    };

    auto locate = [&](const std::array<long double, 2>& p, int hint) {
        int t = hint, guard = 0;
        while (true) {
            int e;
            if (contains(t, p, e)) return t;
            int nxt = tris[t].nb[e];
            require(nxt >= 0, "delaunay: walk left the triangulation");
            t = nxt;
            require(++guard < 8 * static_cast<int>(tris.size()) + 64,
                    "delaunay: point location did not terminate");
        }
    };

    // Insertion order: deterministic shuffle for short walks.
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        uint64_t ha = mix(a + 1), hb = mix(b + 1);
        return ha < hb || (ha == hb && a < b);
    });

    std::vector<int> cavity, stack;
    std::vector<int> mark;  // epoch stamps instead of a per-insert reset
    int epoch = 0;
    auto in_cavity = [&](int t) { return t < static_cast<int>(mark.size()) &&
                                         mark[t] == epoch; };
    int hint = 0;
    for (int idx : order) {
        const auto& p = q[idx];
        int t0 = locate(p, hint);
        // Grow the cavity of circumcircles containing p.
        ++epoch;
        mark.resize(tris.size(), 0);
        cavity.clear();
        stack.assign(1, t0);
        mark[t0] = epoch;
        while (!stack.empty()) {
            int t = stack.back();
            stack.pop_back();
            cavity.push_back(t);
            for (int i = 0; i < 3; ++i) {
                int nb = tris[t].nb[i];
                if (nb < 0 || in_cavity(nb)) continue;
                const auto& tv = tris[nb].v;
                if (incircle(q[tv[0]], q[tv[1]], q[tv[2]], p) > 0.0L) {
                    mark[nb] = epoch;
                    stack.push_back(nb);
                }
            }
        }
        // Collect the cavity rim: directed edges (a, b) with the outside
        // triangle across, oriented so p lies to the left.
        struct RimEdge {
            int a, b, outside;
        };
        std::vector<RimEdge> rim;
        for (int t : cavity) {
            for (int i = 0; i < 3; ++i) {
                int nb = tris[t].nb[i];
                if (nb >= 0 && in_cavity(nb)) continue;
                int a = tris[t].v[(i + 1) % 3], b = tris[t].v[(i + 2) % 3];
                rim.push_back({a, b, nb});
            }
        }
        require(rim.size() >= 3, "delaunay: cavity rim collapsed");
        for (int t : cavity) tris[t].alive = false;
        // One new triangle per rim edge; stitch neighbors through endpoint maps.
        std::unordered_map<int, int> by_start, by_end;
        int base = static_cast<int>(tris.size());
        for (size_t r = 0; r < rim.size(); ++r) {
            int id = base + static_cast<int>(r);
            by_start[rim[r].a] = id;
            by_end[rim[r].b] = id;
        }
        for (size_t r = 0; r < rim.size(); ++r) {
            int id = base + static_cast<int>(r);
            Tri nt;
            nt.v = {idx, rim[r].a, rim[r].b};
            nt.nb[0] = rim[r].outside;          // opposite p: across (a, b)
            nt.nb[1] = by_start.at(rim[r].b);   // opposite a: across (p, b)
            nt.nb[2] = by_end.at(rim[r].a);     // opposite b: across (a, p)
            if (rim[r].outside >= 0) {
                Tri& out = tris[rim[r].outside];
                for (int i = 0; i < 3; ++i) {
                    int v1 = out.v[(i + 1) % 3], v2 = out.v[(i + 2) % 3];
                    if ((v1 == rim[r].b && v2 == rim[r].a) ||
                        (v1 == rim[r].a && v2 == rim[r].b))
                        out.nb[i] = id;
                }
            }
            tris.push_back(nt);
        }
        hint = base;
    }

    std::vector<std::array<int, 3>> out;
    for (const auto& t : tris) {
        if (!t.alive) continue;
        if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue;
        std::array<int, 3> v = t.v;
        if (orient(q[v[0]], q[v[1]], q[v[2]]) < 0.0L) std::swap(v[1], v[2]);
        out.push_back(v);
    }
    require(!out.empty(), "delaunay: no triangles survived");
    return out;
}

}  // namespace spectral_shapes
