#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "geosig/triangulation.hpp"
#include "geosig/vec.hpp"

namespace geosig {

// Fatness and radius metrics of one simplex, measured on the lifted geometry.
// fatness_rr = r/R is at most 1/2 for triangles, with equality exactly for
// the equilateral one. fatness_voldiam is the min over faces of
// Vol(face)/diam^dim(face); vertices count as 1 by convention, edges are
// identically 1, so for triangles it reduces to min(1, area/diam^2).
struct SimplexQuality {
    std::size_t index = 0;
    double in_radius = 0.0;
    double circum_radius = 0.0;
    double fatness_rr = 0.0;
    double fatness_voldiam = 0.0;
    double min_dihedral = 0.0; // min internal angle for triangles, radians
    bool degenerate = false;
};

struct QualityReport {
    std::vector<SimplexQuality> per_simplex;
    double complex_fatness = 0.0; // min fatness_rr over simplices
    std::size_t degenerate_count = 0;
};

inline SimplexQuality triangle_quality(const Vec3& pa, const Vec3& pb, const Vec3& pc) {
    SimplexQuality q;
    const double a = dist(pb, pc);
    const double b = dist(pa, pc);
    const double c = dist(pa, pb);
    const double diam = std::max({a, b, c});
    const double area = 0.5 * norm(cross(pb - pa, pc - pa));
    const double perimeter = a + b + c;

    if (area <= 1e-14 * diam * diam || diam == 0.0) {
        q.degenerate = true;
        q.in_radius = 0.0;
        q.circum_radius = 0.5 * diam; // limiting circle through the far endpoints
        q.fatness_rr = 0.0;
        q.fatness_voldiam = 0.0;
        q.min_dihedral = 0.0;
        return q;
    }

    q.in_radius = 2.0 * area / perimeter;
    q.circum_radius = a * b * c / (4.0 * area);
    q.fatness_rr = q.in_radius / q.circum_radius;
    q.fatness_voldiam = std::min(1.0, area / (diam * diam));

    const auto angle = [](double opp, double s1, double s2) {
        const double cosv = std::clamp((s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2), -1.0, 1.0);
        return std::acos(cosv);
    };
    q.min_dihedral = std::min({angle(a, b, c), angle(b, a, c), angle(c, a, b)});
    return q;
}

inline QualityReport quality(const TriangulationComplex& cx) {
    QualityReport rep;
    if (cx.kind == SignalKind::Curve1D) {
        // Segments: in/circum spheres coincide and Vol/diam = 1.
        for (std::size_t i = 0; i < cx.segments.size(); ++i) {
            SimplexQuality q;
            q.index = i;
            const double len = dist(cx.vertices[cx.segments[i][0]], cx.vertices[cx.segments[i][1]]);
            q.in_radius = q.circum_radius = 0.5 * len;
            q.fatness_rr = 1.0;
            q.fatness_voldiam = 1.0;
            q.min_dihedral = std::numbers::pi;
            q.degenerate = len == 0.0;
            rep.per_simplex.push_back(q);
        }
    } else {
        for (std::size_t i = 0; i < cx.triangles.size(); ++i) {
            const auto& t = cx.triangles[i];
            SimplexQuality q = triangle_quality(cx.vertices[t[0]], cx.vertices[t[1]],
                                                cx.vertices[t[2]]);
            q.index = i;
            rep.per_simplex.push_back(q);
        }
    }
    rep.complex_fatness = std::numeric_limits<double>::infinity();
    for (const auto& q : rep.per_simplex) {
        rep.complex_fatness = std::min(rep.complex_fatness, q.fatness_rr);
        if (q.degenerate) rep.degenerate_count++;
    }
    if (rep.per_simplex.empty()) rep.complex_fatness = 0.0;
    return rep;
}

// Empirical counterpart of the dimension-only equivalence constants between
// the dihedral-angle, r/R and Vol/diam fatness measures: the extreme ratios
// across a complex, which stay bounded away from 0 and infinity together.
struct FatnessEquivalenceReport {
    double max_angle_over_rr = 0.0;
    double max_rr_over_angle = 0.0;
    double max_voldiam_over_rr = 0.0;
    double max_rr_over_voldiam = 0.0;
    std::size_t skipped_degenerate = 0;
    bool all_bounded = true;
};

inline FatnessEquivalenceReport fatness_equivalence_check(
    const std::vector<SimplexQuality>& list) {
    if (list.empty()) throw std::invalid_argument("fatness_equivalence_check: empty quality list");
    FatnessEquivalenceReport rep;
    for (const auto& q : list) {
        if (q.degenerate || q.fatness_rr <= 0.0 || q.min_dihedral <= 0.0 ||
            q.fatness_voldiam <= 0.0) {
            rep.skipped_degenerate++;
            continue;
        }
        rep.max_angle_over_rr = std::max(rep.max_angle_over_rr, q.min_dihedral / q.fatness_rr);
        rep.max_rr_over_angle = std::max(rep.max_rr_over_angle, q.fatness_rr / q.min_dihedral);
        rep.max_voldiam_over_rr = std::max(rep.max_voldiam_over_rr,
                                           q.fatness_voldiam / q.fatness_rr);
        rep.max_rr_over_voldiam = std::max(rep.max_rr_over_voldiam,
                                           q.fatness_rr / q.fatness_voldiam);
    }
    rep.all_bounded = std::isfinite(rep.max_angle_over_rr) && std::isfinite(rep.max_rr_over_angle) &&
                      std::isfinite(rep.max_voldiam_over_rr) &&
                      std::isfinite(rep.max_rr_over_voldiam);
    return rep;
}

} // namespace geosig
