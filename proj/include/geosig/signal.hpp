#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "geosig/vec.hpp"

namespace geosig {

enum class SignalKind { Curve1D, HeightField2D };
enum class BoundaryKind { Bordered, PeriodicClamp };

// Discrete representation of Graph(f): a sampled curve in R^2 or a height
// field in R^3 over a rectangular domain grid.
struct GeometricSignal {
    SignalKind kind = SignalKind::HeightField2D;
    BoundaryKind boundary = BoundaryKind::Bordered;
    std::array<double, 2> domain_origin{0.0, 0.0};
    std::array<double, 2> domain_extent{1.0, 1.0}; // extent[1] unused for curves
    std::array<std::size_t, 2> grid_shape{0, 1};   // {nx, ny}; ny == 1 for curves
    std::vector<double> values;                    // row-major: values[iy*nx + ix]

    std::size_t nx() const { return grid_shape[0]; }
    std::size_t ny() const { return kind == SignalKind::Curve1D ? 1 : grid_shape[1]; }
    std::size_t size() const { return nx() * ny(); }

    double dx() const { return domain_extent[0] / static_cast<double>(nx() - 1); }
    double dy() const {
        return kind == SignalKind::Curve1D ? 0.0
                                           : domain_extent[1] / static_cast<double>(ny() - 1);
    }

    double x_at(std::size_t ix) const { return domain_origin[0] + dx() * static_cast<double>(ix); }
    double y_at(std::size_t iy) const { return domain_origin[1] + dy() * static_cast<double>(iy); }

    double value_at(std::size_t ix, std::size_t iy = 0) const { return values[iy * nx() + ix]; }
    double& value_at(std::size_t ix, std::size_t iy = 0) { return values[iy * nx() + ix]; }

    std::size_t flat_index(std::size_t ix, std::size_t iy) const { return iy * nx() + ix; }
    std::array<std::size_t, 2> grid_index(std::size_t flat) const {
        return {flat % nx(), flat / nx()};
    }

    // ambient position of a grid point: (t, f) for curves, (x, y, h) for surfaces
    Vec3 ambient(std::size_t ix, std::size_t iy = 0) const {
        if (kind == SignalKind::Curve1D) return {x_at(ix), value_at(ix), 0.0};
        return {x_at(ix), y_at(iy), value_at(ix, iy)};
    }
    Vec3 ambient_flat(std::size_t flat) const {
        const auto gi = grid_index(flat);
        return ambient(gi[0], gi[1]);
    }

    int ambient_dim() const { return kind == SignalKind::Curve1D ? 2 : 3; }

    double domain_diameter() const {
        if (kind == SignalKind::Curve1D) return domain_extent[0];
        return std::hypot(domain_extent[0], domain_extent[1]);
    }

    bool on_domain_border(std::size_t ix, std::size_t iy) const {
        if (kind == SignalKind::Curve1D) return ix == 0 || ix + 1 == nx();
        return ix == 0 || ix + 1 == nx() || iy == 0 || iy + 1 == ny();
    }

    void validate() const {
        const std::size_t axes = kind == SignalKind::Curve1D ? 1 : 2;
        for (std::size_t a = 0; a < axes; ++a) {
            if (grid_shape[a] < 3)
                throw std::invalid_argument("signal grid_shape must be >= 3 per axis");
            if (!(domain_extent[a] > 0.0))
                throw std::invalid_argument("signal domain_extent must be positive");
        }
        if (values.size() != size())
            throw std::invalid_argument("signal value count does not match grid shape");
        for (double v : values)
            if (!std::isfinite(v)) throw std::invalid_argument("signal contains non-finite values");
    }
};

// Named analytic test signal (or ingested raster data) with parameters.
struct SignalSpec {
    std::string name;
    std::map<std::string, double> params;
    std::array<std::size_t, 2> grid_shape{0, 0}; // 0 = builtin default
    std::string input_path;                      // for "pgm" / "csv"

    double param(const std::string& key, double fallback) const {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    }
};

namespace detail {

inline GeometricSignal make_grid(SignalKind kind, std::array<double, 2> origin,
                                 std::array<double, 2> extent, std::array<std::size_t, 2> shape) {
    GeometricSignal s;
    s.kind = kind;
    s.domain_origin = origin;
    s.domain_extent = extent;
    s.grid_shape = kind == SignalKind::Curve1D ? std::array<std::size_t, 2>{shape[0], 1} : shape;
    s.values.assign(s.size(), 0.0);
    return s;
}

template <class F>
inline void fill_surface(GeometricSignal& s, F&& f) {
    for (std::size_t iy = 0; iy < s.ny(); ++iy)
        for (std::size_t ix = 0; ix < s.nx(); ++ix) {
            const double v = f(s.x_at(ix), s.y_at(iy));
            if (!std::isfinite(v))
                throw std::domain_error("signal builder produced a non-finite value at (" +
                                        std::to_string(s.x_at(ix)) + ", " +
                                        std::to_string(s.y_at(iy)) + ")");
            s.value_at(ix, iy) = v;
        }
}

template <class F>
inline void fill_curve(GeometricSignal& s, F&& f) {
    for (std::size_t ix = 0; ix < s.nx(); ++ix) {
        const double v = f(s.x_at(ix));
        if (!std::isfinite(v))
            throw std::domain_error("signal builder produced a non-finite value at t = " +
                                    std::to_string(s.x_at(ix)));
        s.value_at(ix) = v;
    }
}

} // namespace detail

// Builtin analytic signals. Surfaces: plane, sphere-cap, cylinder-cap,
// gaussian-bump. Curves: sine, chirp, line. The sphere-cap is defined over
// the square inscribed in its disk so every grid value stays real; ditto the
// cylinder-cap via half_width < radius.
inline GeometricSignal build_signal(const SignalSpec& spec) {
    using detail::make_grid;
    const auto shape_or = [&](std::size_t dx, std::size_t dy) {
        return std::array<std::size_t, 2>{spec.grid_shape[0] ? spec.grid_shape[0] : dx,
                                          spec.grid_shape[1] ? spec.grid_shape[1] : dy};
    };

    if (spec.name == "plane") {
        const double extent = spec.param("extent", 1.0);
        const double origin = spec.param("origin", 0.0);
        const double height = spec.param("height", 0.0);
        if (!(extent > 0.0)) throw std::invalid_argument("plane: extent must be positive");
        auto s = make_grid(SignalKind::HeightField2D, {origin, origin}, {extent, extent},
                           shape_or(33, 33));
        detail::fill_surface(s, [&](double, double) { return height; });
        s.validate();
        return s;
    }
    if (spec.name == "sphere-cap") {
        const double r = spec.param("radius", 2.0);
        const double disk = spec.param("disk_radius", std::min(1.0, 0.5 * r));
        if (!(r > 0.0)) throw std::invalid_argument("sphere-cap: radius must be positive");
        if (!(disk > 0.0 && disk < r))
            throw std::invalid_argument("sphere-cap: disk_radius must lie in (0, radius)");
        const double half = disk / std::sqrt(2.0); // inscribed square of the disk
        auto s = make_grid(SignalKind::HeightField2D, {-half, -half}, {2 * half, 2 * half},
                           shape_or(65, 65));
        detail::fill_surface(
            s, [&](double x, double y) { return std::sqrt(r * r - x * x - y * y); });
        s.validate();
        return s;
    }
    if (spec.name == "cylinder-cap") {
        const double r = spec.param("radius", 1.0);
        const double half = spec.param("half_width", 0.7 * r);
        const double len = spec.param("length", 2.0 * half);
        if (!(r > 0.0)) throw std::invalid_argument("cylinder-cap: radius must be positive");
        if (!(half > 0.0 && half < r))
            throw std::invalid_argument("cylinder-cap: half_width must lie in (0, radius)");
        if (!(len > 0.0)) throw std::invalid_argument("cylinder-cap: length must be positive");
        auto s = make_grid(SignalKind::HeightField2D, {-half, -0.5 * len}, {2 * half, len},
                           shape_or(65, 65));
        detail::fill_surface(s, [&](double x, double) { return std::sqrt(r * r - x * x); });
        s.validate();
        return s;
    }
    if (spec.name == "gaussian-bump") {
        const double amp = spec.param("amplitude", 1.0);
        const double sigma = spec.param("sigma", 0.3);
        const double extent = spec.param("extent", 2.0);
        if (!(sigma > 0.0)) throw std::invalid_argument("gaussian-bump: sigma must be positive");
        if (!(extent > 0.0)) throw std::invalid_argument("gaussian-bump: extent must be positive");
        auto s = make_grid(SignalKind::HeightField2D, {-0.5 * extent, -0.5 * extent},
                           {extent, extent}, shape_or(49, 49));
        detail::fill_surface(s, [&](double x, double y) {
            return amp * std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
        });
        s.validate();
        return s;
    }
    if (spec.name == "sine") {
        const double amp = spec.param("amplitude", 1.0);
        const double freq = spec.param("frequency", 1.0);
        const double phase = spec.param("phase", 0.0);
        const double t0 = spec.param("t0", 0.0);
        const double t1 = spec.param("t1", 2.0 * std::numbers::pi);
        if (!(t1 > t0)) throw std::invalid_argument("sine: need t1 > t0");
        auto s = make_grid(SignalKind::Curve1D, {t0, 0.0}, {t1 - t0, 0.0}, shape_or(257, 1));
        detail::fill_curve(s, [&](double t) { return amp * std::sin(freq * t + phase); });
        s.validate();
        return s;
    }
    if (spec.name == "chirp") {
        const double rate = spec.param("rate", 1.0);
        const double t0 = spec.param("t0", 0.0);
        const double t1 = spec.param("t1", 4.0);
        if (!(t1 > t0)) throw std::invalid_argument("chirp: need t1 > t0");
        auto s = make_grid(SignalKind::Curve1D, {t0, 0.0}, {t1 - t0, 0.0}, shape_or(513, 1));
        detail::fill_curve(s, [&](double t) { return std::sin(rate * t * t); });
        s.validate();
        return s;
    }
    if (spec.name == "line") {
        const double slope = spec.param("slope", 0.0);
        const double intercept = spec.param("intercept", 0.0);
        const double t0 = spec.param("t0", 0.0);
        const double t1 = spec.param("t1", 1.0);
        if (!(t1 > t0)) throw std::invalid_argument("line: need t1 > t0");
        auto s = make_grid(SignalKind::Curve1D, {t0, 0.0}, {t1 - t0, 0.0}, shape_or(257, 1));
        detail::fill_curve(s, [&](double t) { return slope * t + intercept; });
        s.validate();
        return s;
    }
    throw std::invalid_argument("unknown builtin signal '" + spec.name + "'");
}

} // namespace geosig
