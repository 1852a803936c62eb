#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "geosig/curvature.hpp"
#include "geosig/rng.hpp"
#include "geosig/signal.hpp"
#include "geosig/vec.hpp"

namespace geosig {

struct SamplePoint {
    Vec3 position;            // ambient (R^2 with z = 0 for curves)
    std::size_t domain_index; // flat grid index
    double local_eta;
    double local_curvature;   // k(p)
};

// Maximal point set under the density condition d(a1, a2) >= eta. With
// varying radii the condition is symmetrised to min(eta(a1), eta(a2)).
struct SampleSet {
    std::vector<SamplePoint> points;
    double rho = 0.0;         // eta(p)/omega(p); 0 for uniform runs
    double uniform_eta = 0.0; // > 0 for uniform runs
    bool is_maximal = false;
    std::uint64_t seed = 0;
    SignalKind kind = SignalKind::HeightField2D;
    std::array<double, 2> domain_origin{0, 0};
    std::array<double, 2> domain_extent{1, 1};

    std::size_t size() const { return points.size(); }

    double min_eta() const {
        double m = points.empty() ? 0.0 : points.front().local_eta;
        for (const auto& p : points) m = std::min(m, p.local_eta);
        return m;
    }
};

namespace detail {

inline std::vector<std::size_t> candidate_order(const GeometricSignal& signal,
                                                std::uint64_t seed) {
    std::vector<std::size_t> order(signal.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    SplitMix64 rng(mix_seed(seed, 0));
    seeded_shuffle(order, rng);
    if (signal.boundary != BoundaryKind::Bordered) return order;

    // Bordered signals: corners first, then the boundary grid points, then
    // the interior (each group in shuffled order, all under the same
    // separation test). Sampling the boundary before the interior keeps the
    // boundary polyline dense, so the triangulation covers the domain with
    // simplex diameters that scale with eta instead of hull-spanning slivers
    // (the construction for bordered manifolds triangulates the boundary
    // first and extends inward).
    std::vector<std::size_t> corners;
    if (signal.kind == SignalKind::Curve1D) {
        corners = {0, signal.nx() - 1};
    } else {
        const std::size_t nx = signal.nx(), ny = signal.ny();
        corners = {0, nx - 1, (ny - 1) * nx, (ny - 1) * nx + nx - 1};
    }
    std::vector<std::size_t> result = corners;
    result.reserve(signal.size());
    for (int phase = 0; phase < 2; ++phase)
        for (std::size_t idx : order) {
            const auto gi = signal.grid_index(idx);
            const bool border = signal.on_domain_border(gi[0], gi[1]);
            if ((phase == 0) != border) continue;
            if (border && std::find(corners.begin(), corners.end(), idx) != corners.end())
                continue;
            result.push_back(idx);
        }
    return result;
}

inline SampleSet greedy_maximal(const GeometricSignal& signal, const CurvatureField& curv,
                                const std::vector<double>& eta, std::uint64_t seed) {
    SampleSet set;
    set.seed = seed;
    set.kind = signal.kind;
    set.domain_origin = signal.domain_origin;
    set.domain_extent = signal.domain_extent;

    for (std::size_t idx : candidate_order(signal, seed)) {
        const Vec3 pos = signal.ambient_flat(idx);
        const double eq = eta[idx];
        bool ok = true;
        for (const auto& a : set.points) {
            if (dist(pos, a.position) < std::min(eq, a.local_eta)) {
                ok = false;
                break;
            }
        }
        if (ok) set.points.push_back({pos, idx, eq, curv.max_abs[idx]});
    }
    set.is_maximal = true;
    return set;
}

} // namespace detail

inline SampleSet sample_uniform(const GeometricSignal& signal, const CurvatureField& curv,
                                double eta, std::uint64_t seed = 42) {
    signal.validate();
    if (signal.size() != curv.max_abs.size())
        throw std::invalid_argument("curvature field does not match signal grid");
    const double omega_m = curv.min_omega();
    if (!(eta > 0.0) || eta >= omega_m)
        throw std::invalid_argument("uniform sampling requires 0 < eta < omega_M = " +
                                    std::to_string(omega_m));
    std::vector<double> etas(signal.size(), eta);
    SampleSet set = detail::greedy_maximal(signal, curv, etas, seed);
    set.uniform_eta = eta;
    return set;
}

inline SampleSet sample_adaptive(const GeometricSignal& signal, const CurvatureField& curv,
                                 double rho, std::uint64_t seed = 42) {
    signal.validate();
    if (signal.size() != curv.max_abs.size())
        throw std::invalid_argument("curvature field does not match signal grid");
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0, 1)");
    std::vector<double> etas(signal.size());
    for (std::size_t i = 0; i < etas.size(); ++i) etas[i] = rho * curv.osculatory[i];
    SampleSet set = detail::greedy_maximal(signal, curv, etas, seed);
    set.rho = rho;
    return set;
}

// Exhaustive invariant checks (used by tests and the CLI's verify path).
inline bool verify_separation(const SampleSet& set) {
    for (std::size_t i = 0; i < set.points.size(); ++i)
        for (std::size_t j = i + 1; j < set.points.size(); ++j) {
            const double d = dist(set.points[i].position, set.points[j].position);
            if (d < std::min(set.points[i].local_eta, set.points[j].local_eta) - 1e-12)
                return false;
        }
    return true;
}

inline bool verify_maximality(const SampleSet& set, const GeometricSignal& signal) {
    for (std::size_t idx = 0; idx < signal.size(); ++idx) {
        const Vec3 q = signal.ambient_flat(idx);
        bool covered = false;
        for (const auto& a : set.points) {
            if (dist(q, a.position) < a.local_eta + 1e-12) {
                covered = true;
                break;
            }
        }
        if (!covered) return false;
    }
    return true;
}

// Curvature-rate bandwidth of a 1-D signal and uniform-vs-adaptive counts at
// a matched rho. For curves the bandwidth is the curvature rate k_M / 2; flat
// signals fall back to the omega_max-driven uniform radius.
struct ComparisonReport {
    double w_geo = 0.0;       // k_M / 2
    double nyquist_rate = 0.0; // 2 * w_geo
    double uniform_eta = 0.0; // rho * omega_M
    double rho = 0.0;
    std::size_t uniform_count = 0;
    std::size_t adaptive_count = 0;
};

inline ComparisonReport nyquist_compare(const GeometricSignal& signal, const CurvatureField& curv,
                                        double rho, std::uint64_t seed = 42) {
    if (signal.kind != SignalKind::Curve1D)
        throw std::invalid_argument("nyquist_compare expects a 1-D signal");
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0, 1)");
    ComparisonReport rep;
    rep.rho = rho;
    rep.w_geo = 0.5 * curv.global_k0;
    rep.nyquist_rate = curv.global_k0;
    rep.uniform_eta = rho * curv.min_omega();
    rep.uniform_count = sample_uniform(signal, curv, rep.uniform_eta, seed).size();
    rep.adaptive_count = sample_adaptive(signal, curv, rho, seed).size();
    return rep;
}

} // namespace geosig
