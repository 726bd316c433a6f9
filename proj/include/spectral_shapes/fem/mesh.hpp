#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "../error.hpp"
#include "../measure.hpp"

namespace spectral_shapes {

// Piecewise-linear triangulation of a simply connected planar domain.
// Triangles are counterclockwise; boundary edges are oriented with the domain
// on their left, so the list traverses the boundary counterclockwise.
struct TriMesh {
    std::vector<Complex> vertex;
    std::vector<std::array<int, 3>> tri;
    std::vector<std::array<int, 2>> boundary;
    double h = 0.0;  // characteristic target edge length

    size_t n_vertices() const { return vertex.size(); }
    size_t n_triangles() const { return tri.size(); }

    double tri_area(size_t t) const {
        Complex a = vertex[tri[t][0]], b = vertex[tri[t][1]], c = vertex[tri[t][2]];
        return 0.5 * ((b.real() - a.real()) * (c.imag() - a.imag()) -
                      (c.real() - a.real()) * (b.imag() - a.imag()));
    }

    double area() const {
        double s = 0.0;
        for (size_t t = 0; t < tri.size(); ++t) s += tri_area(t);
        return s;
    }

    double perimeter() const {
        double s = 0.0;
        for (const auto& e : boundary) s += std::abs(vertex[e[1]] - vertex[e[0]]);
        return s;
    }

    double min_angle_deg() const {
        double worst = 180.0;
        for (const auto& t : tri) {
            for (int i = 0; i < 3; ++i) {
                Complex u = vertex[t[(i + 1) % 3]] - vertex[t[i]];
                Complex v = vertex[t[(i + 2) % 3]] - vertex[t[i]];
                double c = (u.real() * v.real() + u.imag() * v.imag()) /
                           (std::abs(u) * std::abs(v));
                worst = std::min(worst, std::acos(std::clamp(c, -1.0, 1.0)) * 180.0 /
                                            std::numbers::pi);
            }
        }
        return worst;
    }

    // Structural invariants: index ranges, positive areas, interior edges
    // shared by exactly two triangles, the boundary list matching the
    // once-used edges with the triangle's own orientation, a single closed
    // boundary loop, and the Euler relation V - E + F = 1.
    void validate() const {
        require(!vertex.empty() && !tri.empty(), "TriMesh: empty mesh");
        int n = static_cast<int>(vertex.size());
        std::map<std::pair<int, int>, int> edge_use;
        for (size_t t = 0; t < tri.size(); ++t) {
            for (int k : tri[t])
                require(k >= 0 && k < n, "TriMesh: triangle index out of range");
            require(tri_area(t) > 0.0, "TriMesh: triangle not counterclockwise");
            for (int i = 0; i < 3; ++i) {
                int a = tri[t][i], b = tri[t][(i + 1) % 3];
                edge_use[{std::min(a, b), std::max(a, b)}]++;
            }
        }
        for (const auto& [e, cnt] : edge_use)
            require(cnt <= 2, "TriMesh: edge shared by more than two triangles");

        std::map<std::pair<int, int>, int> rim;  // directed once-used edges
        for (const auto& t : tri)
            for (int i = 0; i < 3; ++i) {
                int a = t[i], b = t[(i + 1) % 3];
                if (edge_use[{std::min(a, b), std::max(a, b)}] == 1) rim[{a, b}] = 1;
            }
        require(rim.size() == boundary.size(),
                "TriMesh: boundary list does not match once-used edges");
        std::map<int, int> next;
        for (const auto& e : boundary) {
            require(rim.count({e[0], e[1]}) == 1,
                    "TriMesh: boundary edge missing or misoriented");
            require(next.emplace(e[0], e[1]).second,
                    "TriMesh: boundary vertex with two outgoing edges");
        }
        // Single closed loop through all boundary edges.
        require(!boundary.empty(), "TriMesh: no boundary");
        int start = boundary[0][0], cur = start;
        size_t steps = 0;
        do {
            auto it = next.find(cur);
            require(it != next.end(), "TriMesh: open boundary chain");
            cur = it->second;
            ++steps;
        } while (cur != start && steps <= boundary.size());
        require(cur == start && steps == boundary.size(),
                "TriMesh: boundary is not a single closed loop");

        long long V = n, E = static_cast<long long>(edge_use.size());
        long long F = static_cast<long long>(tri.size());
        require(V - E + F == 1, "TriMesh: Euler relation violated");
    }
};

inline void write_mesh(const TriMesh& m, std::ostream& os) {
    os.precision(17);
    for (const auto& v : m.vertex) os << "v " << v.real() << ' ' << v.imag() << '\n';
    for (const auto& t : m.tri) os << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    for (const auto& b : m.boundary) os << "b " << b[0] << ' ' << b[1] << '\n';
}

inline void write_mesh_file(const TriMesh& m, const std::string& path) {
    std::ofstream os(path);
    require(os.good(), "write_mesh_file: cannot open " + path);
    write_mesh(m, os);
    require(os.good(), "write_mesh_file: write failed for " + path);
}

inline TriMesh read_mesh(std::istream& is) {
    TriMesh m;
    std::string line;
    size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        bool ok = true;
        if (tag == "v") {
            double x, y;
            ok = static_cast<bool>(ls >> x >> y);
            if (ok) m.vertex.push_back({x, y});
        } else if (tag == "t") {
            int a, b, c;
            ok = static_cast<bool>(ls >> a >> b >> c);
            if (ok) m.tri.push_back({a, b, c});
        } else if (tag == "b") {
            int a, b;
            ok = static_cast<bool>(ls >> a >> b);
            if (ok) m.boundary.push_back({a, b});
        } else {
            ok = false;
        }
        require(ok, "read_mesh: malformed line " + std::to_string(lineno));
    }
    m.validate();
    return m;
}

inline TriMesh read_mesh_file(const std::string& path) {
    std::ifstream is(path);
    require(is.good(), "read_mesh_file: cannot open " + path);
    return read_mesh(is);
}

}  // namespace spectral_shapes
