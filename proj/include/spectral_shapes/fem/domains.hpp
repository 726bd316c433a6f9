#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "../error.hpp"
#include "../measure.hpp"

namespace spectral_shapes {

namespace domain_detail {

inline double dist_segment(Complex p, Complex a, Complex b) {
    Complex d = b - a;
    double n2 = std::norm(d);
    if (n2 == 0.0) return std::abs(p - a);
    double t = std::clamp(((p - a).real() * d.real() + (p - a).imag() * d.imag()) / n2,
                          0.0, 1.0);
    return std::abs(p - (a + t * d));
}

inline double dist_rect(Complex p, double hx, double hy) {
    double dx = std::max(std::abs(p.real()) - hx, 0.0);
    double dy = std::max(std::abs(p.imag()) - hy, 0.0);
    return std::hypot(dx, dy);
}

// Subdivides [a, b] with local spacing size(p), appending a and the interior
// points; the endpoint b belongs to the next piece.
template <class SizeFn>
void add_segment(std::vector<Complex>& out, Complex a, Complex b, SizeFn size) {
    out.push_back(a);
    double len = std::abs(b - a);
    const int K = 64;
    double total = 0.0;
    for (int i = 0; i < K; ++i)
        total += (len / K) / size(a + (b - a) * ((i + 0.5) / K));
    int m = std::max(1, static_cast<int>(std::lround(total)));
    if (m == 1) return;
    // Place interior points at equal increments of the size-weighted length.
    double step = total / m, acc = 0.0;
    int placed = 1;
    for (int i = 0; i < K && placed < m; ++i) {
        double inc = (len / K) / size(a + (b - a) * ((i + 0.5) / K));
        while (acc + inc >= placed * step && placed < m) {
            double frac = (placed * step - acc) / inc;
            out.push_back(a + (b - a) * ((i + frac) / K));
            ++placed;
        }
        acc += inc;
    }
}

// Subdivides the arc around c of radius r from angle th0 to th1 (increasing,
// counterclockwise), appending the start point and the interior points. The
// endpoints sit exactly on the circle; interior points are pushed to a
// slightly larger radius chosen so the polyline encloses exactly the area of
// the circular arc, which keeps the meshed area at the closed-form value.
template <class SizeFn>
void add_arc(std::vector<Complex>& out, Complex c, double r, double th0, double th1,
             SizeFn size, bool area_compensate) {
    require(th1 > th0, "add_arc: empty angular range");
    const int K = 256;
    double total = 0.0;
    for (int i = 0; i < K; ++i) {
        double th = th0 + (th1 - th0) * (i + 0.5) / K;
        total += (r * (th1 - th0) / K) / size(c + std::polar(r, th));
    }
    int m = std::max(3, static_cast<int>(std::lround(total)));
    std::vector<double> ang(m + 1);
    ang[0] = th0;
    ang[m] = th1;
    double step = total / m, acc = 0.0;
    int placed = 1;
    for (int i = 0; i < K && placed < m; ++i) {
        double th = th0 + (th1 - th0) * (i + 0.5) / K;
        double inc = (r * (th1 - th0) / K) / size(c + std::polar(r, th));
        while (acc + inc >= placed * step && placed < m) {
            double frac = (placed * step - acc) / inc;
            ang[placed] = th0 + (th1 - th0) * (i + frac) / K;
            ++placed;
        }
        acc += inc;
    }
    double rc = r;
    if (area_compensate) {
        // Fan area about c: 0.5 [r rc sin d_1 + rc^2 sum_mid sin d_i
        // + rc r sin d_m] matched to the sector area 0.5 r^2 (th1 - th0).
        double s_end = std::sin(ang[1] - ang[0]) + std::sin(ang[m] - ang[m - 1]);
        double s_mid = 0.0;
        for (int i = 2; i < m; ++i) s_mid += std::sin(ang[i] - ang[i - 1]);
        double theta = th1 - th0;
        if (s_mid > 0.0) {
            double disc = s_end * s_end + 4.0 * s_mid * theta;
            rc = r * (-s_end + std::sqrt(disc)) / (2.0 * s_mid);
        } else {
            rc = r * theta / s_end;  // single interior point
        }
        require(rc > r * 0.99 && rc < r * 1.5, "add_arc: compensation out of range");
    }
    out.push_back(c + std::polar(r, th0));
    for (int i = 1; i < m; ++i) out.push_back(c + std::polar(rc, ang[i]));
}

}  // namespace domain_detail

// Generators for the polygonal model domains: regular polygon disks,
// polygonal ellipses, the unit square, two unit disks joined by a thin
// rectangular passage, and two overlapping unit disks pulled apart. The two
// composite families model the degeneration families of the sharpness
// experiments; the overlap variant uses center distance 2 - eps, so the neck
// width shrinks with eps and the domain tends to two touching disks.
struct DomainFamily {
    enum class Kind { DiskPolygon, Ellipse, Square, TwoDisksPassage, TwoDisksOverlap };

    Kind kind = Kind::Square;
    int n = 0;            // polygon vertex count (disk and ellipse families)
    double a = 1.0;       // ellipse semi-axes
    double b = 1.0;
    double L = 0.0;       // passage length
    double eps = 0.0;     // passage width / overlap pull-apart parameter

    static DomainFamily disk_polygon(int n) {
        require(n >= 8, "disk_polygon: need at least 8 vertices");
        DomainFamily f;
        f.kind = Kind::DiskPolygon;
        f.n = n;
        return f;
    }
    static DomainFamily ellipse(double a, double b, int n) {
        require(a > 0 && b > 0 && n >= 8, "ellipse: bad parameters");
        DomainFamily f;
        f.kind = Kind::Ellipse;
        f.a = a;
        f.b = b;
        f.n = n;
        return f;
    }
    static DomainFamily square() {
        DomainFamily f;
        f.kind = Kind::Square;
        return f;
    }
    static DomainFamily two_disks_passage(double L, double eps) {
        require(L > 0 && eps > 0 && eps < 0.5, "two_disks_passage: bad parameters");
        DomainFamily f;
        f.kind = Kind::TwoDisksPassage;
        f.L = L;
        f.eps = eps;
        return f;
    }
    static DomainFamily two_disks_overlap(double eps) {
        require(eps > 0 && eps < 1.0, "two_disks_overlap: bad parameters");
        DomainFamily f;
        f.kind = Kind::TwoDisksOverlap;
        f.eps = eps;
        return f;
    }

    std::string label() const {
        auto num = [](double v) {
            std::string s = std::to_string(v);
            s.erase(s.find_last_not_of('0') + 1);
            if (!s.empty() && s.back() == '.') s.pop_back();
            return s;
        };
        switch (kind) {
            case Kind::DiskPolygon: return "disk_polygon_" + std::to_string(n);
            case Kind::Ellipse:
                return "ellipse_" + num(a) + "_" + num(b) + "_" + std::to_string(n);
            case Kind::Square: return "square";
            case Kind::TwoDisksPassage:
                return "two_disks_passage_L" + num(L) + "_eps" + num(eps);
            case Kind::TwoDisksOverlap: return "two_disks_overlap_eps" + num(eps);
        }
        return "unknown";
    }

    // Closed-form area of the model domain (the polygon itself for the
    // polygonal families, the smooth union for the composite families).
    double area() const {
        switch (kind) {
            case Kind::DiskPolygon:
                return 0.5 * n * std::sin(2.0 * std::numbers::pi / n);
            case Kind::Ellipse:
                return 0.5 * n * a * b * std::sin(2.0 * std::numbers::pi / n);
            case Kind::Square: return 1.0;
            case Kind::TwoDisksPassage: {
                double d = passage_center_offset();
                double seg = std::acos(d) - d * (eps / 2.0);
                return L * eps + 2.0 * (std::numbers::pi - seg);
            }
            case Kind::TwoDisksOverlap: {
                double c = 1.0 - eps / 2.0;
                double y0 = std::sqrt(1.0 - c * c);
                return 2.0 * std::numbers::pi - 2.0 * (std::acos(c) - c * y0);
            }
        }
        return 0.0;
    }

    double perimeter() const {
        switch (kind) {
            case Kind::DiskPolygon: return 2.0 * n * std::sin(std::numbers::pi / n);
            case Kind::Ellipse: {
                double s = 0.0;
                for (int j = 0; j < n; ++j)
                    s += std::abs(ellipse_vertex(j + 1) - ellipse_vertex(j));
                return s;
            }
            case Kind::Square: return 4.0;
            case Kind::TwoDisksPassage: {
                double phi = std::asin(eps / 2.0);
                return 2.0 * L + 2.0 * (2.0 * std::numbers::pi - 2.0 * phi);
            }
            case Kind::TwoDisksOverlap:
                return 4.0 * std::numbers::pi - 4.0 * std::acos(1.0 - eps / 2.0);
        }
        return 0.0;
    }

    // Graded target edge length at p for base size h.
    double size_at(Complex p, double h) const {
        switch (kind) {
            case Kind::DiskPolygon: {
                double edge = 2.0 * std::sin(std::numbers::pi / n);
                double sb = std::min(h, edge);
                return std::min(h, sb + 0.35 * std::abs(1.0 - std::abs(p)));
            }
            case Kind::Ellipse: {
                double edge = 0.0;
                for (int j = 0; j < n; ++j)
                    edge = std::max(edge,
                                    std::abs(ellipse_vertex(j + 1) - ellipse_vertex(j)));
                return std::min(h, edge);
            }
            case Kind::Square: return h;
            case Kind::TwoDisksPassage: {
                double hp = passage_size(h);
                double d = domain_detail::dist_rect(p, L / 2.0, eps / 2.0);
                return std::min(h, hp + 0.35 * d);
            }
            case Kind::TwoDisksOverlap: {
                double y0 = std::sqrt(eps - eps * eps / 4.0);
                double d = std::min(std::abs(p - Complex(0.0, y0)),
                                    std::abs(p - Complex(0.0, -y0)));
                return std::min(h, std::max(h / 4.0, 0.35 * d));
            }
        }
        return h;
    }

    // Counterclockwise boundary polygon with graded spacing; for the
    // composite families the arc vertices carry the area compensation.
    std::vector<Complex> boundary_polygon(double h) const {
        require(h > 0.0, "boundary_polygon: h must be positive");
        auto size = [&](Complex p) { return size_at(p, h); };
        std::vector<Complex> out;
        switch (kind) {
            case Kind::DiskPolygon:
                for (int j = 0; j < n; ++j) {
                    double t0 = 2.0 * std::numbers::pi * j / n;
                    double t1 = 2.0 * std::numbers::pi * (j + 1) / n;
                    domain_detail::add_segment(out, std::polar(1.0, t0),
                                               std::polar(1.0, t1), size);
                }
                break;
            case Kind::Ellipse:
                for (int j = 0; j < n; ++j)
                    domain_detail::add_segment(out, ellipse_vertex(j),
                                               ellipse_vertex(j + 1), size);
                break;
            case Kind::Square: {
                Complex c[4] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
                for (int j = 0; j < 4; ++j)
                    domain_detail::add_segment(out, c[j], c[(j + 1) % 4], size);
                break;
            }
            case Kind::TwoDisksPassage: {
                double d = passage_center_offset();
                double phi = std::asin(eps / 2.0);
                Complex cl(-(L / 2.0 + d), 0.0), cr(L / 2.0 + d, 0.0);
                // Top wall right-to-left, left disk, bottom wall, right disk.
                domain_detail::add_segment(out, {L / 2.0, eps / 2.0},
                                           {-L / 2.0, eps / 2.0}, size);
                domain_detail::add_arc(out, cl, 1.0, phi,
                                       2.0 * std::numbers::pi - phi, size, true);
                domain_detail::add_segment(out, {-L / 2.0, -eps / 2.0},
                                           {L / 2.0, -eps / 2.0}, size);
                domain_detail::add_arc(out, cr, 1.0, std::numbers::pi + phi,
                                       3.0 * std::numbers::pi - phi, size, true);
                break;
            }
            case Kind::TwoDisksOverlap: {
                double c = 1.0 - eps / 2.0;
                double alpha = std::acos(c);
                domain_detail::add_arc(out, {c, 0.0}, 1.0,
                                       -(std::numbers::pi - alpha),
                                       std::numbers::pi - alpha, size, true);
                domain_detail::add_arc(out, {-c, 0.0}, 1.0, alpha,
                                       2.0 * std::numbers::pi - alpha, size, true);
                break;
            }
        }
        require(out.size() >= 3, "boundary_polygon: too few vertices");
        return out;
    }

  private:
    Complex ellipse_vertex(int j) const {
        double t = 2.0 * std::numbers::pi * j / n;
        return {a * std::cos(t), b * std::sin(t)};
    }

    double passage_center_offset() const {
        return std::sqrt(1.0 - (eps / 2.0) * (eps / 2.0));
    }

    double passage_size(double h) const { return std::min(h, eps / 3.0); }
};

}  // namespace spectral_shapes
