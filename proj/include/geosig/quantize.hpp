#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "geosig/curvature.hpp"
#include "geosig/rng.hpp"
#include "geosig/signal.hpp"
#include "geosig/vec.hpp"

namespace geosig {

// Points on Graph(f) with per-point measure weights (area or length element
// times the grid cell size). For 1-D data stored as (v, 0, 0).
struct WeightedCloud {
    std::vector<Vec3> points;
    std::vector<double> weights;
    int ambient_dim = 3;

    std::size_t size() const { return points.size(); }

    double total_weight() const {
        return std::accumulate(weights.begin(), weights.end(), 0.0);
    }
};

namespace detail {

inline GeometricSignal resample(const GeometricSignal& s, std::size_t res) {
    GeometricSignal out = s;
    out.grid_shape = {res, s.kind == SignalKind::Curve1D ? 1 : res};
    out.values.assign(out.size(), 0.0);
    for (std::size_t iy = 0; iy < out.ny(); ++iy)
        for (std::size_t ix = 0; ix < out.nx(); ++ix) {
            const double fx = static_cast<double>(ix) * static_cast<double>(s.nx() - 1) /
                              static_cast<double>(out.nx() - 1);
            const std::size_t jx = std::min(static_cast<std::size_t>(fx), s.nx() - 2);
            const double wx = fx - static_cast<double>(jx);
            if (s.kind == SignalKind::Curve1D) {
                out.value_at(ix) = (1 - wx) * s.value_at(jx) + wx * s.value_at(jx + 1);
                continue;
            }
            const double fy = static_cast<double>(iy) * static_cast<double>(s.ny() - 1) /
                              static_cast<double>(out.ny() - 1);
            const std::size_t jy = std::min(static_cast<std::size_t>(fy), s.ny() - 2);
            const double wy = fy - static_cast<double>(jy);
            out.value_at(ix, iy) = (1 - wx) * (1 - wy) * s.value_at(jx, jy) +
                                   wx * (1 - wy) * s.value_at(jx + 1, jy) +
                                   (1 - wx) * wy * s.value_at(jx, jy + 1) +
                                   wx * wy * s.value_at(jx + 1, jy + 1);
        }
    return out;
}

} // namespace detail

// Dense weighted sampling of the graph; weights are trapezoidal cell sizes
// times the metric area/length element, so the total weight estimates the
// surface area (curve length). resolution == 0 keeps the native grid.
inline WeightedCloud surface_point_cloud(const GeometricSignal& signal_in,
                                         std::size_t resolution = 0) {
    const GeometricSignal signal =
        resolution >= 3 ? detail::resample(signal_in, resolution) : signal_in;
    signal.validate();
    WeightedCloud cloud;
    cloud.ambient_dim = signal.ambient_dim();
    const auto border_factor = [](std::size_t i, std::size_t n) {
        return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    };

    if (signal.kind == SignalKind::Curve1D) {
        const double dt = signal.dx();
        for (std::size_t i = 0; i < signal.nx(); ++i) {
            const double f1 = fd::d1(signal.values, i, signal.nx(), 1, 0, dt);
            cloud.points.push_back(signal.ambient(i));
            cloud.weights.push_back(dt * border_factor(i, signal.nx()) * length_element(f1));
        }
        return cloud;
    }

    const double cell = signal.dx() * signal.dy();
    detail::SurfaceDerivs d(signal);
    for (std::size_t iy = 0; iy < signal.ny(); ++iy)
        for (std::size_t ix = 0; ix < signal.nx(); ++ix) {
            const std::size_t f = iy * signal.nx() + ix;
            cloud.points.push_back(signal.ambient(ix, iy));
            cloud.weights.push_back(cell * border_factor(ix, signal.nx()) *
                                    border_factor(iy, signal.ny()) *
                                    area_element(d.hx[f], d.hy[f]));
        }
    return cloud;
}

enum class DistortionPower { Squared, Linear };

// Quantizer decision vectors plus the induced partition of the cloud.
struct Codebook {
    std::vector<Vec3> centers;
    int norm_dim = 3; // the N in the 1/N per-dimension normalisation
    std::vector<std::size_t> assignment;
    std::vector<std::size_t> cell_count;
    std::vector<double> cell_volume; // sum of member weights
};

inline void assign_nearest(const WeightedCloud& cloud, Codebook& cb) {
    if (cb.centers.empty()) throw std::invalid_argument("empty codebook");
    cb.assignment.resize(cloud.size());
    cb.cell_count.assign(cb.centers.size(), 0);
    cb.cell_volume.assign(cb.centers.size(), 0.0);
    for (std::size_t j = 0; j < cloud.size(); ++j) {
        std::size_t best = 0;
        double bd = dist_sq(cloud.points[j], cb.centers[0]);
        for (std::size_t i = 1; i < cb.centers.size(); ++i) {
            const double d = dist_sq(cloud.points[j], cb.centers[i]);
            if (d < bd) { // strict: ties keep the lowest center index
                bd = d;
                best = i;
            }
        }
        cb.assignment[j] = best;
        cb.cell_count[best]++;
        cb.cell_volume[best] += cloud.weights[j];
    }
}

namespace detail {

inline double pointwise_distortion(const Vec3& x, const Vec3& c, DistortionPower p) {
    return p == DistortionPower::Squared ? dist_sq(x, c) : dist(x, c);
}

} // namespace detail

// Average (squared, by default) error per dimension, normalising by the
// total cloud volume.
inline double mse_per_dimension(const WeightedCloud& cloud, const Codebook& cb,
                                DistortionPower power = DistortionPower::Squared) {
    if (cloud.size() == 0) throw std::invalid_argument("empty cloud");
    if (cb.assignment.size() != cloud.size())
        throw std::invalid_argument("codebook not assigned to this cloud");
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < cloud.size(); ++j) {
        num += cloud.weights[j] *
               detail::pointwise_distortion(cloud.points[j], cb.centers[cb.assignment[j]], power);
        den += cloud.weights[j];
    }
    return num / den / static_cast<double>(cb.norm_dim);
}

// Same quantity accumulated cell by cell, normalising by the sum of cell
// volumes; agrees with mse_per_dimension up to rounding because the cells
// partition the cloud.
inline double mse_per_dimension_cellwise(const WeightedCloud& cloud, const Codebook& cb,
                                         DistortionPower power = DistortionPower::Squared) {
    if (cloud.size() == 0) throw std::invalid_argument("empty cloud");
    std::vector<double> cell_num(cb.centers.size(), 0.0);
    for (std::size_t j = 0; j < cloud.size(); ++j)
        cell_num[cb.assignment[j]] +=
            cloud.weights[j] *
            detail::pointwise_distortion(cloud.points[j], cb.centers[cb.assignment[j]], power);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < cb.centers.size(); ++i) {
        num += cell_num[i];
        den += cb.cell_volume[i];
    }
    return num / den / static_cast<double>(cb.norm_dim);
}

// Quantizer quality functional: mean per-cell distortion over the mean cell
// volume raised to 1 + 2/N (exponent overridable), with the large-N
// simplification reported alongside. Empty cells are excluded from the mean
// volume and counted.
struct QuantizerQuality {
    double q = 0.0;
    double q_rough = 0.0;
    std::size_t empty_cells = 0;
    double volume_exponent = 0.0;
};

inline QuantizerQuality quantizer_quality(const WeightedCloud& cloud, const Codebook& cb,
                                          DistortionPower power = DistortionPower::Squared,
                                          double volume_exponent = 0.0) {
    if (cb.centers.empty()) throw std::invalid_argument("empty codebook");
    QuantizerQuality out;
    const double n_dim = static_cast<double>(cb.norm_dim);
    out.volume_exponent = volume_exponent > 0.0 ? volume_exponent : 1.0 + 2.0 / n_dim;

    double num = 0.0, wsum = 0.0, vol = 0.0;
    std::size_t occupied = 0;
    for (std::size_t j = 0; j < cloud.size(); ++j) {
        num += cloud.weights[j] *
               detail::pointwise_distortion(cloud.points[j], cb.centers[cb.assignment[j]], power);
        wsum += cloud.weights[j];
    }
    for (std::size_t i = 0; i < cb.centers.size(); ++i) {
        if (cb.cell_count[i] == 0) continue;
        vol += cb.cell_volume[i];
        ++occupied;
    }
    out.empty_cells = cb.centers.size() - occupied;
    if (occupied == 0) throw std::domain_error("all quantizer cells are empty");

    const double m = static_cast<double>(occupied);
    const double mean_distortion = num / wsum;
    const double mean_volume = vol / m;
    out.q = (mean_distortion / m) / std::pow(mean_volume, out.volume_exponent) / n_dim;
    out.q_rough = mean_distortion / vol / n_dim;
    return out;
}

struct QuantizerReport {
    double e_per_dim = 0.0;
    double q_value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> distortion_history; // E after each assignment step
};

// Lloyd iteration with weighted centroid updates. Deterministic: seeded
// initial draw, ties to the lowest index, empty cells re-seeded at the point
// of largest current distortion.
inline Codebook lloyd_minimize(const WeightedCloud& cloud, std::size_t m, std::uint64_t seed,
                               QuantizerReport* report = nullptr,
                               DistortionPower power = DistortionPower::Squared) {
    if (m == 0) throw std::invalid_argument("codebook size must be >= 1");
    if (m > cloud.size())
        throw std::invalid_argument("codebook size exceeds cloud size");

    Codebook cb;
    cb.norm_dim = cloud.ambient_dim;
    std::vector<std::size_t> idx(cloud.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    SplitMix64 rng(mix_seed(seed, 11));
    seeded_shuffle(idx, rng);
    for (std::size_t i = 0; i < m; ++i) cb.centers.push_back(cloud.points[idx[i]]);

    QuantizerReport local;
    QuantizerReport& rep = report ? *report : local;
    rep.distortion_history.clear();

    double prev_q = std::numeric_limits<double>::infinity();
    const std::size_t max_iters = 100;
    for (std::size_t it = 0; it < max_iters; ++it) {
        assign_nearest(cloud, cb);

        // repair empty cells before measuring anything
        bool repaired = false;
        for (std::size_t i = 0; i < cb.centers.size(); ++i) {
            if (cb.cell_count[i] != 0) continue;
            std::size_t worst = 0;
            double worst_d = -1.0;
            for (std::size_t j = 0; j < cloud.size(); ++j) {
                const double d = detail::pointwise_distortion(
                    cloud.points[j], cb.centers[cb.assignment[j]], power);
                if (d > worst_d && cb.cell_count[cb.assignment[j]] > 1) {
                    worst_d = d;
                    worst = j;
                }
            }
            cb.cell_count[cb.assignment[worst]]--;
            cb.cell_volume[cb.assignment[worst]] -= cloud.weights[worst];
            cb.centers[i] = cloud.points[worst];
            cb.assignment[worst] = i;
            cb.cell_count[i] = 1;
            cb.cell_volume[i] = cloud.weights[worst];
            repaired = true;
        }
        if (repaired) assign_nearest(cloud, cb);

        rep.distortion_history.push_back(mse_per_dimension(cloud, cb, power));
        const double q = quantizer_quality(cloud, cb, power).q;
        rep.iterations = it + 1;
        if (std::isfinite(prev_q) && prev_q > 0.0 &&
            (prev_q - q) / prev_q < 1e-6) {
            rep.converged = true;
            break;
        }
        prev_q = q;

        // centroid update (optimal for squared distortion)
        std::vector<Vec3> sums(cb.centers.size(), Vec3{});
        std::vector<double> wsums(cb.centers.size(), 0.0);
        for (std::size_t j = 0; j < cloud.size(); ++j) {
            sums[cb.assignment[j]] += cloud.points[j] * cloud.weights[j];
            wsums[cb.assignment[j]] += cloud.weights[j];
        }
        for (std::size_t i = 0; i < cb.centers.size(); ++i)
            if (wsums[i] > 0.0) cb.centers[i] = sums[i] / wsums[i];
    }

    assign_nearest(cloud, cb);
    rep.e_per_dim = mse_per_dimension(cloud, cb, power);
    rep.q_value = quantizer_quality(cloud, cb, power).q;
    return cb;
}

// Per-dimension error of scalar-quantising the scan-order height sequence
// (m levels, N = 1) versus vector-quantising the embedded point cloud
// (m centers, N = ambient dimension).
struct ZadorReport {
    double e_scalar = 0.0;
    double e_vector = 0.0;
    double ratio = 0.0; // e_vector / e_scalar
    bool ratio_defined = false;
    std::size_t m = 0;
    std::size_t scalar_points = 0;
    std::size_t vector_points = 0;
};

inline ZadorReport zador_dimension_experiment(const GeometricSignal& signal, std::size_t m,
                                              std::uint64_t seed = 42) {
    if (signal.kind != SignalKind::HeightField2D)
        throw std::invalid_argument("zador_dimension_experiment expects a height field");
    ZadorReport rep;
    rep.m = m;

    WeightedCloud scan;
    scan.ambient_dim = 1;
    for (double v : signal.values) {
        scan.points.push_back({v, 0.0, 0.0});
        scan.weights.push_back(1.0);
    }
    QuantizerReport sr;
    lloyd_minimize(scan, m, mix_seed(seed, 1), &sr);
    rep.e_scalar = sr.e_per_dim;
    rep.scalar_points = scan.size();

    const WeightedCloud cloud = surface_point_cloud(signal);
    QuantizerReport vr;
    lloyd_minimize(cloud, m, mix_seed(seed, 2), &vr);
    rep.e_vector = vr.e_per_dim;
    rep.vector_points = cloud.size();

    rep.ratio_defined = rep.e_scalar > 0.0;
    rep.ratio = rep.ratio_defined ? rep.e_vector / rep.e_scalar : 0.0;
    return rep;
}

} // namespace geosig
