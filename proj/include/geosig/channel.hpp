#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "geosig/curvature.hpp"
#include "geosig/quantize.hpp"
#include "geosig/rng.hpp"
#include "geosig/sampling.hpp"
#include "geosig/signal.hpp"
#include "geosig/triangulation.hpp"
#include "geosig/vec.hpp"

namespace geosig {

// Tubular neighbourhood model: normal offsets up to tube_radius keep a
// unique nearest-point projection. The radius sits a safety factor below the
// smallest osculatory radius of the field.
struct TubeModel {
    double sigma = 0.0;       // design noise std per coordinate
    double tube_radius = 0.0; // <= safety * min omega(p)
    double min_omega = 0.0;
    std::vector<Vec3> normals; // unit normals at the sample points
};

inline TubeModel build_tube(const GeometricSignal& signal, const CurvatureField& curv,
                            const SampleSet& samples, double safety = 0.9) {
    if (signal.size() != curv.osculatory.size())
        throw std::invalid_argument("curvature field does not match signal grid");
    TubeModel tube;
    tube.min_omega = curv.min_omega();
    tube.tube_radius = safety * tube.min_omega;

    if (signal.kind == SignalKind::Curve1D) {
        for (const auto& p : samples.points) {
            const double f1 = fd::d1(signal.values, p.domain_index, signal.nx(), 1, 0, signal.dx());
            tube.normals.push_back(normalized(Vec3{-f1, 1.0, 0.0}));
        }
        return tube;
    }
    detail::SurfaceDerivs d(signal);
    for (const auto& p : samples.points)
        tube.normals.push_back(surface_normal(d.hx[p.domain_index], d.hy[p.domain_index]));
    return tube;
}

struct WilsonInterval {
    double lo = 0.0;
    double hi = 0.0;
};

inline WilsonInterval wilson_interval(std::size_t errors, std::size_t trials, double z = 1.959964) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct DecodeReport {
    std::size_t trials = 0;
    std::size_t errors = 0;
    double error_rate = 0.0;
    WilsonInterval wilson;
    double off_tube_fraction = 0.0; // |normal offset| > tube_radius
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::string rng = "splitmix64";
};

// Monte Carlo symbol-error simulation: per trial, a uniformly chosen sample
// is perturbed by i.i.d. Gaussian noise per ambient coordinate and decoded
// to the nearest sample. Each trial draws from its own (seed, index) stream,
// so the result is independent of evaluation order.
inline DecodeReport simulate_decode(const TubeModel& tube, const SampleSet& samples, double sigma,
                                    std::size_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (samples.size() == 0) throw std::invalid_argument("empty sample set");
    if (sigma < 0.0) throw std::invalid_argument("sigma must be non-negative");
    const bool curve = samples.kind == SignalKind::Curve1D;

    DecodeReport rep;
    rep.trials = trials;
    rep.sigma = sigma;
    rep.seed = seed;
    std::size_t off_tube = 0;

    for (std::size_t t = 0; t < trials; ++t) {
        SplitMix64 rng(mix_seed(seed, t));
        const std::size_t truth = rng.next_index(samples.size());
        Vec3 noise{rng.next_gaussian() * sigma, rng.next_gaussian() * sigma,
                   curve ? 0.0 : rng.next_gaussian() * sigma};
        const Vec3 received = samples.points[truth].position + noise;

        if (std::abs(dot(noise, tube.normals[truth])) > tube.tube_radius) ++off_tube;

        std::size_t best = 0;
        double bd = dist_sq(received, samples.points[0].position);
        for (std::size_t i = 1; i < samples.size(); ++i) {
            const double d = dist_sq(received, samples.points[i].position);
            if (d < bd) {
                bd = d;
                best = i;
            }
        }
        if (best != truth) ++rep.errors;
    }
    rep.error_rate = static_cast<double>(rep.errors) / static_cast<double>(trials);
    rep.wilson = wilson_interval(rep.errors, trials);
    rep.off_tube_fraction = static_cast<double>(off_tube) / static_cast<double>(trials);
    return rep;
}

inline double rate_of_code(std::size_t n_codepoints, double vol) {
    if (!(vol > 0.0)) throw std::invalid_argument("rate_of_code: volume must be positive");
    return std::log2(static_cast<double>(n_codepoints)) / vol;
}

inline double shannon_capacity(double P, double sigma, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("shannon_capacity: T must be positive");
    if (sigma == 0.0) return std::numeric_limits<double>::infinity();
    return std::log2(1.0 + P / (sigma * sigma)) / T;
}

// Classical sampling-sum energy of a 1-D signal at Nyquist rate 2W:
// E = (1/2W) * sum_k f(k/2W)^2 over the samples inside the domain.
inline double signal_energy_nyquist(const GeometricSignal& signal, double w) {
    if (signal.kind != SignalKind::Curve1D)
        throw std::invalid_argument("signal_energy_nyquist expects a 1-D signal");
    if (!(w > 0.0)) throw std::invalid_argument("bandwidth W must be positive");
    const double step = 1.0 / (2.0 * w);
    const double t0 = signal.domain_origin[0];
    const double t1 = t0 + signal.domain_extent[0];
    double e = 0.0;
    const auto interp = [&](double t) {
        const double fx = (t - t0) / signal.dx();
        const std::size_t i = std::min(static_cast<std::size_t>(std::max(fx, 0.0)),
                                       signal.nx() - 2);
        const double wl = fx - static_cast<double>(i);
        return (1.0 - wl) * signal.value_at(i) + wl * signal.value_at(i + 1);
    };
    const long k0 = static_cast<long>(std::ceil(t0 / step - 1e-12));
    for (long k = k0; static_cast<double>(k) * step <= t1 + 1e-12; ++k) {
        const double t = static_cast<double>(k) * step;
        const double f = interp(std::clamp(t, t0, t1));
        e += f * f;
    }
    return e * step;
}

struct CodeMetrics {
    double P = 0.0;       // average power: mean of f^2 over the domain window
    double R = 0.0;       // log2(N) / Vol(M)
    double C = 0.0;       // log2(N) / (N1 * mean simplex volume)
    double W = 0.0;       // 1/k_M, capped at omega_max for flat signals
    double energy = 0.0;  // L2 energy (Nyquist sum for curves, quadrature else)
    double C0 = 0.0;      // Shannon capacity (1/T) log2(1 + P/sigma^2)
    bool c0_infinite = false;
    double vol_manifold = 0.0;
    double vol_domain = 0.0;
    std::size_t n_codepoints = 0;
    std::size_t n_simplices = 0;
    double mean_simplex_volume = 0.0;
    double sigma = 0.0;
    double window_T = 0.0;
};

namespace detail {

inline double trapezoid_mean_square(const GeometricSignal& s, double t_begin, double t_end) {
    // trapezoid quadrature of f^2 over [t_begin, t_end] divided by its length
    const double dt = s.dx();
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < s.nx(); ++i) {
        const double a = s.x_at(i), b = s.x_at(i + 1);
        const double lo = std::max(a, t_begin), hi = std::min(b, t_end);
        if (hi <= lo) continue;
        const auto sq = [&](double t) {
            const double w = (t - a) / dt;
            const double f = (1.0 - w) * s.value_at(i) + w * s.value_at(i + 1);
            return f * f;
        };
        integral += 0.5 * (sq(lo) + sq(hi)) * (hi - lo);
    }
    return integral / (t_end - t_begin);
}

inline double lifted_simplex_volume(const TriangulationComplex& cx, std::size_t i) {
    if (cx.kind == SignalKind::Curve1D) {
        const auto& s = cx.segments[i];
        return dist(cx.vertices[s[0]], cx.vertices[s[1]]);
    }
    const auto& t = cx.triangles[i];
    return 0.5 * norm(cross(cx.vertices[t[1]] - cx.vertices[t[0]],
                            cx.vertices[t[2]] - cx.vertices[t[0]]));
}

} // namespace detail

inline CodeMetrics code_metrics(const GeometricSignal& signal, const SampleSet& samples,
                                const TriangulationComplex& cx, const CurvatureField& curv,
                                double sigma, double window_T = 0.0) {
    signal.validate();
    if (sigma < 0.0) throw std::invalid_argument("sigma must be non-negative");
    CodeMetrics m;
    m.sigma = sigma;
    m.n_codepoints = samples.size();
    m.n_simplices = cx.simplex_count();

    // domain and manifold volumes by grid quadrature
    const WeightedCloud cloud = surface_point_cloud(signal);
    m.vol_manifold = cloud.total_weight();
    m.vol_domain = signal.kind == SignalKind::Curve1D
                       ? signal.domain_extent[0]
                       : signal.domain_extent[0] * signal.domain_extent[1];

    if (signal.kind == SignalKind::Curve1D) {
        const double t0 = signal.domain_origin[0];
        const double span = signal.domain_extent[0];
        const double T = window_T > 0.0 ? std::min(window_T, span) : span;
        m.window_T = T;
        m.P = detail::trapezoid_mean_square(signal, t0, t0 + T);
    } else {
        m.window_T = window_T > 0.0 ? window_T : 1.0;
        double num = 0.0, den = 0.0;
        const auto bf = [](std::size_t i, std::size_t n) {
            return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        };
        for (std::size_t iy = 0; iy < signal.ny(); ++iy)
            for (std::size_t ix = 0; ix < signal.nx(); ++ix) {
                const double w = bf(ix, signal.nx()) * bf(iy, signal.ny());
                const double f = signal.value_at(ix, iy);
                num += w * f * f;
                den += w;
            }
        m.P = num / den;
    }

    m.R = rate_of_code(m.n_codepoints, m.vol_manifold);

    double vol_sum = 0.0;
    for (std::size_t i = 0; i < m.n_simplices; ++i)
        vol_sum += detail::lifted_simplex_volume(cx, i);
    m.mean_simplex_volume = m.n_simplices ? vol_sum / static_cast<double>(m.n_simplices) : 0.0;
    m.C = m.n_simplices && vol_sum > 0.0
              ? std::log2(static_cast<double>(m.n_codepoints)) / vol_sum
              : 0.0;

    m.W = curv.global_k0 > 1.0 / curv.omega_max ? 1.0 / curv.global_k0 : curv.omega_max;

    if (signal.kind == SignalKind::Curve1D) {
        m.energy = signal_energy_nyquist(signal, m.W);
    } else {
        // L2 norm squared over the domain
        m.energy = m.P * m.vol_domain;
    }

    m.c0_infinite = sigma == 0.0;
    m.C0 = shannon_capacity(m.P, sigma, m.window_T > 0.0 ? m.window_T : 1.0);
    return m;
}

// One point of the capacity-vs-refinement curve.
struct CapacityPoint {
    std::size_t n_vertices = 0;
    std::size_t n_simplices = 0;
    double mean_simplex_volume = 0.0;
    double total_volume = 0.0;
    double capacity = 0.0; // log2(N) / (N1 * Vol(lambda))
    double rho = 0.0;
};

inline CapacityPoint capacity_point(const GeometricSignal& signal, double rho, double omega_max,
                                    std::uint64_t seed) {
    const CurvatureField curv =
        estimate_curvature(signal, omega_max > 0.0 ? omega_max : default_omega_max(signal));
    const SampleSet set = sample_adaptive(signal, curv, rho, seed);
    const TriangulationComplex cx = delaunay(set);
    CapacityPoint pt;
    pt.rho = rho;
    pt.n_vertices = cx.vertex_count();
    pt.n_simplices = cx.simplex_count();
    for (std::size_t i = 0; i < pt.n_simplices; ++i)
        pt.total_volume += detail::lifted_simplex_volume(cx, i);
    pt.mean_simplex_volume =
        pt.n_simplices ? pt.total_volume / static_cast<double>(pt.n_simplices) : 0.0;
    pt.capacity = pt.total_volume > 0.0
                      ? std::log2(static_cast<double>(pt.n_vertices)) / pt.total_volume
                      : 0.0;
    return pt;
}

// Capacity curve across a family of signals (refinement levels or growing
// extents). rhos.size() must equal signals.size().
inline std::vector<CapacityPoint> capacity_growth_curve(
    const std::vector<GeometricSignal>& signals, const std::vector<double>& rhos,
    double omega_max = 0.0, std::uint64_t seed = 42) {
    if (signals.size() != rhos.size())
        throw std::invalid_argument("capacity_growth_curve: one rho per signal");
    std::vector<CapacityPoint> pts;
    for (std::size_t i = 0; i < signals.size(); ++i)
        pts.push_back(capacity_point(signals[i], rhos[i], omega_max, seed));
    return pts;
}

struct CodeSummary {
    double mu = 0.0;     // min squared inter-codepoint distance (or 1/min k)
    double energy = 0.0;
};

inline double nominal_coding_gain(const CodeSummary& c1, const CodeSummary& c2) {
    if (!(c1.mu > 0.0) || !(c2.mu > 0.0) || !(c1.energy > 0.0) || !(c2.energy > 0.0))
        throw std::invalid_argument("nominal_coding_gain: mu and energy must be positive");
    return 10.0 * std::log10((c1.mu / c1.energy) / (c2.mu / c2.energy));
}

inline double min_squared_center_distance(const SampleSet& samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("need at least two code points");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (std::size_t j = i + 1; j < samples.size(); ++j)
            best = std::min(best, dist_sq(samples.points[i].position, samples.points[j].position));
    return best;
}

// mu = 1/min k for geometric codes of bounded curvature; flat fields fall
// back to omega_max (the same cap the osculatory radius uses).
inline double mu_from_curvature(const CurvatureField& curv) {
    double min_k = std::numeric_limits<double>::infinity();
    for (double k : curv.max_abs) min_k = std::min(min_k, k);
    if (min_k <= 1.0 / curv.omega_max) return curv.omega_max;
    return 1.0 / min_k;
}

} // namespace geosig
