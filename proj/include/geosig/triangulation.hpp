#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "geosig/sampling.hpp"
#include "geosig/vec.hpp"

namespace geosig {

// Delaunay triangulation of the domain-plane projections, lifted to the
// sampled heights; for curves, the polyline of samples in t-order. The
// Delaunay property is enforced in the domain plane (a height field projects
// bijectively), geometry (mesh, quality) is measured on the lifted simplices.
struct TriangulationComplex {
    SignalKind kind = SignalKind::HeightField2D;
    std::vector<Vec3> vertices; // lifted positions, same order as the sample set
    std::vector<Vec2> proj;     // domain-plane projections ((t, 0) for curves)
    std::vector<std::array<std::size_t, 3>> triangles; // canonical order
    std::vector<std::array<std::size_t, 2>> segments;  // curves
    std::array<double, 2> domain_origin{0, 0};
    std::array<double, 2> domain_extent{1, 1};
    double mesh = 0.0; // sup of lifted simplex diameters
    std::vector<std::vector<Vec2>> voronoi_cells; // filled by voronoi_cells()

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t simplex_count() const {
        return kind == SignalKind::Curve1D ? segments.size() : triangles.size();
    }

    std::size_t edge_count() const {
        if (kind == SignalKind::Curve1D) return segments.size();
        std::map<std::pair<std::size_t, std::size_t>, int> edges;
        for (const auto& t : triangles)
            for (int e = 0; e < 3; ++e) {
                auto a = t[e], b = t[(e + 1) % 3];
                edges[{std::min(a, b), std::max(a, b)}]++;
            }
        return edges.size();
    }
};

namespace detail {

inline double orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
    return cross(b - a, c - a);
}

// > eps: d strictly inside the circumcircle of ccw (a, b, c); values within
// +-eps count as co-circular and do not trigger re-triangulation.
inline double incircle_det(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;
    const double ad = adx * adx + ady * ady;
    const double bd = bdx * bdx + bdy * bdy;
    const double cd = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) +
           ad * (bdx * cdy - bdy * cdx);
}

struct BwTriangle {
    std::array<std::size_t, 3> v;
    bool alive = true;
};

} // namespace detail

inline TriangulationComplex delaunay(const SampleSet& samples) {
    TriangulationComplex cx;
    cx.kind = samples.kind;
    cx.domain_origin = samples.domain_origin;
    cx.domain_extent = samples.domain_extent;
    cx.vertices.reserve(samples.size());
    cx.proj.reserve(samples.size());
    for (const auto& p : samples.points) {
        cx.vertices.push_back(p.position);
        cx.proj.push_back(samples.kind == SignalKind::Curve1D ? Vec2{p.position.x, 0.0}
                                                              : Vec2{p.position.x, p.position.y});
    }

    if (samples.kind == SignalKind::Curve1D) {
        if (samples.size() < 2)
            throw std::invalid_argument("curve triangulation needs at least 2 samples");
        std::vector<std::size_t> order(samples.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return cx.proj[a].x < cx.proj[b].x; });
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            cx.segments.push_back({order[i], order[i + 1]});
            cx.mesh = std::max(cx.mesh, dist(cx.vertices[order[i]], cx.vertices[order[i + 1]]));
        }
        return cx;
    }

    const std::size_t n = samples.size();
    if (n < 3) throw std::invalid_argument("surface triangulation needs at least 3 samples");

    // Bowyer-Watson over a super-triangle; insertion in sample order keeps
    // the construction deterministic.
    Vec2 lo{cx.proj[0]}, hi{cx.proj[0]};
    for (const auto& p : cx.proj) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
    const Vec2 center = (lo + hi) * 0.5;
    const double span = std::max({hi.x - lo.x, hi.y - lo.y, 1e-12});
    const double big = 64.0 * span;
    const double diam = std::hypot(samples.domain_extent[0], samples.domain_extent[1]);
    const double eps = 1e-10 * diam * diam;

    std::vector<Vec2> pts = cx.proj;
    pts.push_back({center.x - big, center.y - 0.7 * big});
    pts.push_back({center.x + big, center.y - 0.7 * big});
    pts.push_back({center.x, center.y + big});

    std::vector<detail::BwTriangle> tris;
    tris.push_back({{n, n + 1, n + 2}, true});

    for (std::size_t ip = 0; ip < n; ++ip) {
        const Vec2 p = pts[ip];
        std::map<std::pair<std::size_t, std::size_t>, int> hull;
        bool found = false;
        for (auto& t : tris) {
            if (!t.alive) continue;
            Vec2 a = pts[t.v[0]], b = pts[t.v[1]], c = pts[t.v[2]];
            std::size_t vb = t.v[1], vc = t.v[2];
            if (detail::orient2d(a, b, c) < 0.0) {
                std::swap(b, c);
                std::swap(vb, vc);
            }
            if (detail::incircle_det(a, b, c, p) > eps) {
                t.alive = false;
                found = true;
                const std::size_t ids[3] = {t.v[0], t.v[1], t.v[2]};
                for (int e = 0; e < 3; ++e) {
                    const auto u = ids[e], w = ids[(e + 1) % 3];
                    hull[{std::min(u, w), std::max(u, w)}]++;
                }
            }
        }
        if (!found) {
            // point fell on/outside all circumcircles within tolerance; find
            // the containing triangle and split it so insertion never drops a
            // sample (can only happen for exactly co-circular configurations)
            for (auto& t : tris) {
                if (!t.alive) continue;
                Vec2 a = pts[t.v[0]], b = pts[t.v[1]], c = pts[t.v[2]];
                const double o = detail::orient2d(a, b, c);
                const double s1 = detail::orient2d(a, b, p) * (o < 0 ? -1 : 1);
                const double s2 = detail::orient2d(b, c, p) * (o < 0 ? -1 : 1);
                const double s3 = detail::orient2d(c, a, p) * (o < 0 ? -1 : 1);
                if (s1 >= 0 && s2 >= 0 && s3 >= 0) {
                    t.alive = false;
                    const std::size_t ids[3] = {t.v[0], t.v[1], t.v[2]};
                    for (int e = 0; e < 3; ++e) {
                        const auto u = ids[e], w = ids[(e + 1) % 3];
                        hull[{std::min(u, w), std::max(u, w)}]++;
                    }
                    break;
                }
            }
        }
        for (const auto& [edge, count] : hull) {
            if (count != 1) continue;
            auto [u, w] = edge;
            if (detail::orient2d(pts[u], pts[w], p) < 0.0) std::swap(u, w);
            tris.push_back({{u, w, ip}, true});
        }
    }

    for (const auto& t : tris) {
        if (!t.alive) continue;
        if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue; // touches super-triangle
        std::array<std::size_t, 3> tri = t.v;
        std::sort(tri.begin(), tri.end());
        cx.triangles.push_back(tri);
    }
    std::sort(cx.triangles.begin(), cx.triangles.end());

    if (cx.triangles.empty())
        throw std::domain_error("degenerate input: projected samples are collinear");

    for (const auto& t : cx.triangles) {
        const Vec3 a = cx.vertices[t[0]], b = cx.vertices[t[1]], c = cx.vertices[t[2]];
        cx.mesh = std::max({cx.mesh, dist(a, b), dist(b, c), dist(a, c)});
    }
    return cx;
}

// --- Voronoi (Dirichlet) cells -------------------------------------------

inline double polygon_area(const std::vector<Vec2>& poly) {
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % poly.size()];
        a += cross(p, q);
    }
    return 0.5 * std::abs(a);
}

namespace detail {

// Sutherland-Hodgman clip of a convex polygon by the half-plane
// dot(x, n) <= c.
inline std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, const Vec2& n, double c) {
    std::vector<Vec2> out;
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % m];
        const double dp = dot(p, n) - c;
        const double dq = dot(q, n) - c;
        if (dp <= 0.0) out.push_back(p);
        if ((dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0)) {
            const double t = dp / (dp - dq);
            out.push_back(p + (q - p) * t);
        }
    }
    return out;
}

} // namespace detail

// Per-vertex Dirichlet cell, clipped to the domain rectangle; the cells tile
// the rectangle. Also cached on the complex.
inline std::vector<std::vector<Vec2>> voronoi_cells(TriangulationComplex& cx, Vec2 rect_min,
                                                    Vec2 rect_max) {
    const std::size_t n = cx.proj.size();
    std::vector<std::vector<Vec2>> cells(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Vec2> poly = {{rect_min.x, rect_min.y},
                                  {rect_max.x, rect_min.y},
                                  {rect_max.x, rect_max.y},
                                  {rect_min.x, rect_max.y}};
        for (std::size_t j = 0; j < n && !poly.empty(); ++j) {
            if (j == i) continue;
            // closer to site i than to site j: dot(x, sj - si) <= (|sj|^2 - |si|^2)/2
            const Vec2 d = cx.proj[j] - cx.proj[i];
            const double c = 0.5 * (norm_sq(cx.proj[j]) - norm_sq(cx.proj[i]));
            poly = detail::clip_halfplane(poly, d, c);
        }
        cells[i] = std::move(poly);
    }
    cx.voronoi_cells = cells;
    return cells;
}

} // namespace geosig
