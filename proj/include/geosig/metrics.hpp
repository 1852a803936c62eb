#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "geosig/curvature.hpp"
#include "geosig/hausdorff.hpp"
#include "geosig/reconstruct.hpp"
#include "geosig/rng.hpp"
#include "geosig/signal.hpp"

namespace geosig {

// Intrinsic-distance oracle: shortest paths on the 8-neighbour graph of the
// surface grid with ambient chord lengths as edge weights. Overestimates
// geodesics by a bounded factor (<~ 8% on a fine grid), which is adequate for
// checking the [3/4, 5/3] bracket.
class GridGeodesics {
public:
    explicit GridGeodesics(const GeometricSignal& signal) : signal_(&signal) {}

    std::vector<double> distances_from(std::size_t src) const {
        const auto& s = *signal_;
        const std::size_t n = s.size();
        std::vector<double> out(n, std::numeric_limits<double>::infinity());
        using Item = std::pair<double, std::size_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        out[src] = 0.0;
        heap.push({0.0, src});
        const std::ptrdiff_t nx = static_cast<std::ptrdiff_t>(s.nx());
        const std::ptrdiff_t ny = static_cast<std::ptrdiff_t>(s.ny());
        while (!heap.empty()) {
            auto [d, u] = heap.top();
            heap.pop();
            if (d > out[u]) continue;
            const auto gi = s.grid_index(u);
            const Vec3 pu = s.ambient_flat(u);
            const std::ptrdiff_t ux = static_cast<std::ptrdiff_t>(gi[0]);
            const std::ptrdiff_t uy = static_cast<std::ptrdiff_t>(gi[1]);
            for (std::ptrdiff_t oy = -1; oy <= 1; ++oy)
                for (std::ptrdiff_t ox = -1; ox <= 1; ++ox) {
                    if (ox == 0 && oy == 0) continue;
                    const std::ptrdiff_t vx = ux + ox, vy = uy + oy;
                    if (vx < 0 || vx >= nx || vy < 0 || vy >= ny) continue;
                    const std::size_t v =
                        static_cast<std::size_t>(vy) * s.nx() + static_cast<std::size_t>(vx);
                    const double nd = d + dist(pu, s.ambient_flat(v));
                    if (nd < out[v]) {
                        out[v] = nd;
                        heap.push({nd, v});
                    }
                }
        }
        return out;
    }

private:
    const GeometricSignal* signal_;
};

struct DistortionStats {
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    double mean = 0.0;
    std::size_t count = 0;

    void add(double r) {
        min = std::min(min, r);
        max = std::max(max, r);
        mean += (r - mean) / static_cast<double>(++count);
    }
};

struct OffendingPair {
    Vec2 p, q;
    double d_intrinsic = 0.0;
    double d_euclidean = 0.0;
    double ratio = 0.0;
};

struct MetricReport {
    double hausdorff = 0.0;       // between dense samplings of f and L
    DistortionStats interior;     // d_eucl(PL images)/d_M(originals)
    DistortionStats boundary;
    std::size_t bound_violation_count = 0; // interior pairs outside [3/4, 5/3]
    double boundary_slack = 0.0;  // max additive excursion on boundary pairs
    double max_pointwise_gap = 0.0; // sup |f - L| over the grid
    double max_gradient_gap = 0.0;  // per simplex, vs interpolated grid gradient
    std::vector<OffendingPair> violations;
    std::size_t pairs_evaluated = 0;
    std::size_t boundary_pairs = 0;
    double mesh = 0.0;
};

namespace detail {

// FD gradient of the signal, bilinearly interpolated at a domain point.
struct GridGradient {
    std::vector<double> gx, gy;
    const GeometricSignal* s;

    explicit GridGradient(const GeometricSignal& signal) : s(&signal) {
        const std::size_t nx = signal.nx(), ny = signal.ny();
        gx.resize(signal.size());
        gy.resize(signal.size(), 0.0);
        for (std::size_t iy = 0; iy < ny; ++iy)
            for (std::size_t ix = 0; ix < nx; ++ix) {
                gx[iy * nx + ix] = fd::d1(signal.values, ix, nx, 1, iy * nx, signal.dx());
                if (signal.kind == SignalKind::HeightField2D)
                    gy[iy * nx + ix] = fd::d1(signal.values, iy, ny, nx, ix, signal.dy());
            }
    }

    Vec2 at(double x, double y) const {
        const double fx = std::clamp((x - s->domain_origin[0]) / s->dx(), 0.0,
                                     static_cast<double>(s->nx() - 1));
        const double fy = s->kind == SignalKind::Curve1D
                              ? 0.0
                              : std::clamp((y - s->domain_origin[1]) / s->dy(), 0.0,
                                           static_cast<double>(s->ny() - 1));
        const std::size_t ix = std::min(static_cast<std::size_t>(fx), s->nx() - 2);
        const std::size_t iy =
            s->kind == SignalKind::Curve1D ? 0 : std::min(static_cast<std::size_t>(fy), s->ny() - 2);
        const double wx = fx - static_cast<double>(ix);
        const double wy = s->kind == SignalKind::Curve1D ? 0.0 : fy - static_cast<double>(iy);
        const auto lerp2 = [&](const std::vector<double>& g) {
            if (s->kind == SignalKind::Curve1D)
                return (1 - wx) * g[ix] + wx * g[ix + 1];
            const std::size_t nx = s->nx();
            const double a = (1 - wx) * g[iy * nx + ix] + wx * g[iy * nx + ix + 1];
            const double b = (1 - wx) * g[(iy + 1) * nx + ix] + wx * g[(iy + 1) * nx + ix + 1];
            return (1 - wy) * a + wy * b;
        };
        return {lerp2(gx), s->kind == SignalKind::Curve1D ? 0.0 : lerp2(gy)};
    }
};

// Sup |f - L| over the grid and the worst per-simplex gradient gap.
inline void pointwise_gaps(const GeometricSignal& signal, const PLApproximation& pl,
                           double& max_gap, double& max_grad_gap, Vec2* worst_point = nullptr,
                           std::size_t* worst_simplex = nullptr) {
    max_gap = 0.0;
    max_grad_gap = 0.0;
    int hint = 0;
    for (std::size_t iy = 0; iy < signal.ny(); ++iy)
        for (std::size_t ix = 0; ix < signal.nx(); ++ix) {
            double lv;
            try {
                lv = signal.kind == SignalKind::Curve1D
                         ? pl.evaluate_curve(signal.x_at(ix))
                         : pl.evaluate_hint(signal.x_at(ix), signal.y_at(iy), hint);
            } catch (const out_of_domain&) {
                continue; // grid point outside the covered region
            }
            const double gap = std::abs(signal.value_at(ix, iy) - lv);
            if (gap > max_gap) {
                max_gap = gap;
                if (worst_point) *worst_point = {signal.x_at(ix), signal.y_at(iy)};
            }
        }

    GridGradient grad(signal);
    if (signal.kind == SignalKind::HeightField2D) {
        const auto& cx = pl.complex();
        for (std::size_t t = 0; t < cx.triangles.size(); ++t) {
            const Vec2 bc = pl.barycenter(t);
            const Vec2 g = grad.at(bc.x, bc.y);
            const Vec2 pg = pl.gradient(t);
            const double gg = norm(g - pg);
            if (gg > max_grad_gap) {
                max_grad_gap = gg;
                if (worst_simplex) *worst_simplex = t;
            }
        }
    } else {
        // per segment: slope of the PL piece vs interpolated f'
        const auto& cx = pl.complex();
        for (std::size_t i = 0; i < cx.segments.size(); ++i) {
            const auto& seg = cx.segments[i];
            const double ta = cx.proj[seg[0]].x, tb = cx.proj[seg[1]].x;
            if (tb == ta) continue;
            const double slope = (cx.vertices[seg[1]].y - cx.vertices[seg[0]].y) / (tb - ta);
            const double fp = grad.at(0.5 * (ta + tb), 0.0).x;
            const double gg = std::abs(slope - fp);
            if (gg > max_grad_gap) {
                max_grad_gap = gg;
                if (worst_simplex) *worst_simplex = i;
            }
        }
    }
}

inline std::vector<Vec3> surface_cloud_strided(const GeometricSignal& signal, std::size_t stride) {
    std::vector<Vec3> pts;
    for (std::size_t iy = 0; iy < signal.ny(); iy += stride)
        for (std::size_t ix = 0; ix < signal.nx(); ix += stride)
            pts.push_back(signal.ambient(ix, iy));
    return pts;
}

inline std::vector<Vec3> pl_cloud_strided(const GeometricSignal& signal,
                                          const PLApproximation& pl, std::size_t stride) {
    std::vector<Vec3> pts;
    int hint = 0;
    for (std::size_t iy = 0; iy < signal.ny(); iy += stride)
        for (std::size_t ix = 0; ix < signal.nx(); ix += stride) {
            try {
                if (signal.kind == SignalKind::Curve1D) {
                    pts.push_back({signal.x_at(ix), pl.evaluate_curve(signal.x_at(ix)), 0.0});
                } else {
                    const double lv = pl.evaluate_hint(signal.x_at(ix), signal.y_at(iy), hint);
                    pts.push_back({signal.x_at(ix), signal.y_at(iy), lv});
                }
            } catch (const out_of_domain&) {
            }
        }
    return pts;
}

} // namespace detail

// Empirical check of the bi-Lipschitz metric bounds: sampled point pairs,
// intrinsic distance from grid Dijkstra, Euclidean distance between the PL
// images. Pairs closer than 2 * mesh are skipped (quantisation noise); pairs
// touching the boundary strip of width mesh are reported separately with an
// additive slack instead of counting as violations.
inline MetricReport metric_distortion(const GeometricSignal& signal, const PLApproximation& pl,
                                      std::size_t pair_budget = 2000, std::uint64_t seed = 42) {
    signal.validate();
    MetricReport rep;
    rep.mesh = pl.complex().mesh;

    detail::pointwise_gaps(signal, pl, rep.max_pointwise_gap, rep.max_gradient_gap);

    const std::size_t stride =
        std::max<std::size_t>(1, (std::max(signal.nx(), signal.ny()) + 89) / 90);
    rep.hausdorff = hausdorff_distance(detail::surface_cloud_strided(signal, stride),
                                       detail::pl_cloud_strided(signal, pl, stride));

    const double margin = rep.mesh;
    const auto is_interior = [&](std::size_t flat) {
        const auto gi = signal.grid_index(flat);
        const double x = signal.x_at(gi[0]);
        const double x0 = signal.domain_origin[0], x1 = x0 + signal.domain_extent[0];
        if (signal.kind == SignalKind::Curve1D) return x - x0 >= margin && x1 - x >= margin;
        const double y = signal.y_at(gi[1]);
        const double y0 = signal.domain_origin[1], y1 = y0 + signal.domain_extent[1];
        return x - x0 >= margin && x1 - x >= margin && y - y0 >= margin && y1 - y >= margin;
    };

    GridGeodesics geod(signal);
    SplitMix64 rng(mix_seed(seed, 7));
    const std::size_t targets_per_source = 40;
    const std::size_t n_sources =
        std::max<std::size_t>(1, (pair_budget + targets_per_source - 1) / targets_per_source);

    int hint = 0;
    const auto pl_image = [&](std::size_t flat) {
        const auto gi = signal.grid_index(flat);
        if (signal.kind == SignalKind::Curve1D) {
            const double t = signal.x_at(gi[0]);
            return Vec3{t, pl.evaluate_curve(t), 0.0};
        }
        const double x = signal.x_at(gi[0]), y = signal.y_at(gi[1]);
        return Vec3{x, y, pl.evaluate_hint(x, y, hint)};
    };

    for (std::size_t si = 0; si < n_sources && rep.pairs_evaluated < pair_budget; ++si) {
        const std::size_t src = rng.next_index(signal.size());
        const auto dists = geod.distances_from(src);
        Vec3 src_img;
        try {
            src_img = pl_image(src);
        } catch (const out_of_domain&) {
            continue;
        }
        const bool src_interior = is_interior(src);
        std::size_t accepted = 0, attempts = 0;
        while (accepted < targets_per_source && attempts < 20 * targets_per_source &&
               rep.pairs_evaluated < pair_budget) {
            ++attempts;
            const std::size_t dst = rng.next_index(signal.size());
            if (dst == src) continue;
            const double dm = dists[dst];
            if (!(dm >= 2.0 * rep.mesh) || !std::isfinite(dm)) continue;
            Vec3 dst_img;
            try {
                dst_img = pl_image(dst);
            } catch (const out_of_domain&) {
                continue;
            }
            const double de = dist(src_img, dst_img);
            const double ratio = de / dm;
            ++accepted;
            ++rep.pairs_evaluated;
            const bool interior = src_interior && is_interior(dst);
            if (interior) {
                rep.interior.add(ratio);
                if (ratio < 0.75 || ratio > 5.0 / 3.0) {
                    ++rep.bound_violation_count;
                    const auto g1 = signal.grid_index(src), g2 = signal.grid_index(dst);
                    rep.violations.push_back({{signal.x_at(g1[0]), signal.y_at(g1[1])},
                                              {signal.x_at(g2[0]), signal.y_at(g2[1])},
                                              dm,
                                              de,
                                              ratio});
                }
            } else {
                rep.boundary.add(ratio);
                ++rep.boundary_pairs;
                const double slack =
                    std::max({0.0, 0.75 * dm - de, de - (5.0 / 3.0) * dm});
                rep.boundary_slack = std::max(rep.boundary_slack, slack);
            }
        }
    }
    return rep;
}

// Munkres delta-approximation conditions: (ii) pointwise gap strictly below
// delta on the grid; (iii) in star-local form, per-simplex gradient gap at
// the barycenter at most delta.
struct DeltaReport {
    bool pass = false;
    bool pointwise_pass = false;
    bool gradient_pass = false;
    double max_pointwise_gap = 0.0;
    double max_gradient_gap = 0.0;
    Vec2 worst_point{};
    std::size_t worst_simplex = 0;
    double delta = 0.0;
};

inline DeltaReport delta_approximation_check(const GeometricSignal& signal,
                                             const PLApproximation& pl, double delta) {
    if (delta < 0.0) throw std::invalid_argument("delta must be non-negative");
    DeltaReport rep;
    rep.delta = delta;
    detail::pointwise_gaps(signal, pl, rep.max_pointwise_gap, rep.max_gradient_gap,
                           &rep.worst_point, &rep.worst_simplex);
    rep.pointwise_pass = rep.max_pointwise_gap < delta;
    rep.gradient_pass = rep.max_gradient_gap <= delta;
    rep.pass = rep.pointwise_pass && rep.gradient_pass;
    return rep;
}

} // namespace geosig
