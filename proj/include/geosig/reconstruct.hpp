#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "geosig/signal.hpp"
#include "geosig/triangulation.hpp"
#include "geosig/vec.hpp"

namespace geosig {

struct out_of_domain : std::domain_error {
    using std::domain_error::domain_error;
};

// Secant-map piecewise-linear approximation: the PL height function that
// agrees with the sampled heights at the vertices and interpolates
// barycentrically over the domain-plane triangles. Point location walks the
// triangulation; queries outside the covered region throw out_of_domain.
class PLApproximation {
public:
    explicit PLApproximation(TriangulationComplex cx) : cx_(std::move(cx)) {
        if (cx_.kind == SignalKind::Curve1D) {
            curve_order_.resize(cx_.vertices.size());
            std::iota(curve_order_.begin(), curve_order_.end(), std::size_t{0});
            std::sort(curve_order_.begin(), curve_order_.end(), [&](std::size_t a, std::size_t b) {
                return cx_.proj[a].x < cx_.proj[b].x;
            });
            return;
        }
        build_adjacency();
    }

    const TriangulationComplex& complex() const { return cx_; }

    // triangle index containing (x, y), or -1; hint accelerates coherent scans
    int locate(double x, double y, int hint = -1) const {
        const Vec2 p{x, y};
        int tri = hint >= 0 && hint < static_cast<int>(cx_.triangles.size()) ? hint : 0;
        const double tol = locate_tol();
        for (std::size_t step = 0; step < 2 * cx_.triangles.size() + 4; ++step) {
            const auto [l, inside, worst] = barycentric(tri, p, tol);
            (void)l;
            if (inside) return tri;
            const int next = neighbors_[tri][worst];
            if (next < 0) break;
            tri = next;
        }
        // tolerance walk failed (rare, near-degenerate); exhaustive fallback
        for (std::size_t t = 0; t < cx_.triangles.size(); ++t)
            if (std::get<1>(barycentric(static_cast<int>(t), p, tol))) return static_cast<int>(t);
        return -1;
    }

    double evaluate(double x, double y) const {
        int hint = -1;
        return evaluate_hint(x, y, hint);
    }

    double evaluate_hint(double x, double y, int& hint) const {
        if (cx_.kind == SignalKind::Curve1D) return evaluate_curve(x);
        const int tri = locate(x, y, hint);
        if (tri < 0)
            throw out_of_domain("query (" + std::to_string(x) + ", " + std::to_string(y) +
                                ") lies outside the triangulated region");
        hint = tri;
        const auto [l, inside, worst] = barycentric(tri, {x, y}, locate_tol());
        (void)inside;
        (void)worst;
        const auto& t = cx_.triangles[tri];
        return l[0] * cx_.vertices[t[0]].z + l[1] * cx_.vertices[t[1]].z +
               l[2] * cx_.vertices[t[2]].z;
    }

    double evaluate_curve(double t) const {
        const auto& ord = curve_order_;
        const double t0 = cx_.proj[ord.front()].x;
        const double t1 = cx_.proj[ord.back()].x;
        const double tol = 1e-12 * std::max(std::abs(t0), std::abs(t1)) + 1e-300;
        if (t < t0 - tol || t > t1 + tol)
            throw out_of_domain("query t = " + std::to_string(t) + " outside [" +
                                std::to_string(t0) + ", " + std::to_string(t1) + "]");
        const double tc = std::clamp(t, t0, t1);
        auto it = std::upper_bound(ord.begin(), ord.end(), tc, [&](double val, std::size_t i) {
            return val < cx_.proj[i].x;
        });
        const std::size_t hi = std::min<std::size_t>(it - ord.begin(), ord.size() - 1);
        const std::size_t lo = hi == 0 ? 0 : hi - 1;
        const double ta = cx_.proj[ord[lo]].x, tb = cx_.proj[ord[hi]].x;
        const double fa = cx_.vertices[ord[lo]].y, fb = cx_.vertices[ord[hi]].y;
        if (tb == ta) return fa;
        const double w = (tc - ta) / (tb - ta);
        return fa + w * (fb - fa);
    }

    // gradient of the PL sheet over one triangle (constant per simplex)
    Vec2 gradient(std::size_t tri) const {
        const auto& t = cx_.triangles[tri];
        const Vec2 a = cx_.proj[t[0]], b = cx_.proj[t[1]], c = cx_.proj[t[2]];
        const double za = cx_.vertices[t[0]].z, zb = cx_.vertices[t[1]].z,
                     zc = cx_.vertices[t[2]].z;
        const Vec2 e1 = b - a, e2 = c - a;
        const double det = cross(e1, e2);
        const double g1 = zb - za, g2 = zc - za;
        return {(g1 * e2.y - g2 * e1.y) / det, (g2 * e1.x - g1 * e2.x) / det};
    }

    Vec2 barycenter(std::size_t tri) const {
        const auto& t = cx_.triangles[tri];
        return (cx_.proj[t[0]] + cx_.proj[t[1]] + cx_.proj[t[2]]) / 3.0;
    }

private:
    TriangulationComplex cx_;
    std::vector<std::array<int, 3>> neighbors_;
    std::vector<std::size_t> curve_order_;

    double locate_tol() const {
        return 1e-10 * std::max(cx_.domain_extent[0], cx_.domain_extent[1]);
    }

    void build_adjacency() {
        neighbors_.assign(cx_.triangles.size(), {-1, -1, -1});
        std::map<std::pair<std::size_t, std::size_t>, std::pair<int, int>> edge_owner;
        for (std::size_t ti = 0; ti < cx_.triangles.size(); ++ti) {
            const auto& t = cx_.triangles[ti];
            for (int e = 0; e < 3; ++e) {
                // edge e is opposite vertex e: it joins the other two vertices
                const std::size_t u = t[(e + 1) % 3], w = t[(e + 2) % 3];
                const auto key = std::make_pair(std::min(u, w), std::max(u, w));
                auto it = edge_owner.find(key);
                if (it == edge_owner.end()) {
                    edge_owner[key] = {static_cast<int>(ti), e};
                } else {
                    neighbors_[ti][e] = it->second.first;
                    neighbors_[it->second.first][it->second.second] = static_cast<int>(ti);
                }
            }
        }
    }

    // barycentric coordinates; inside means all lambdas >= -tol (scaled);
    // worst is the most negative coordinate (the edge to cross when walking)
    std::tuple<std::array<double, 3>, bool, int> barycentric(int tri, const Vec2& p,
                                                             double tol) const {
        const auto& t = cx_.triangles[tri];
        const Vec2 a = cx_.proj[t[0]], b = cx_.proj[t[1]], c = cx_.proj[t[2]];
        const double det = cross(b - a, c - a);
        std::array<double, 3> l{};
        if (det == 0.0) return {l, false, 0};
        l[0] = cross(b - p, c - p) / det;
        l[1] = cross(c - p, a - p) / det;
        l[2] = cross(a - p, b - p) / det;
        int worst = 0;
        for (int i = 1; i < 3; ++i)
            if (l[i] < l[worst]) worst = i;
        const double reltol = tol / std::sqrt(std::abs(det)) + 1e-12;
        return {l, l[worst] >= -reltol, worst};
    }
};

inline PLApproximation secant_reconstruct(const GeometricSignal& signal,
                                          const TriangulationComplex& cx) {
    if (signal.kind != cx.kind)
        throw std::invalid_argument("secant_reconstruct: signal and complex kinds differ");
    return PLApproximation(cx);
}

} // namespace geosig
