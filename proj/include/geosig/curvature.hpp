#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "geosig/signal.hpp"
#include "geosig/vec.hpp"

namespace geosig {

// Per-point principal curvatures of Graph(f), the pointwise maximum
// k(p) = max_i |k_i|, and the osculatory radius omega(p) = 1/k(p) capped at
// omega_max so flat regions keep a finite sampling radius.
struct CurvatureField {
    std::array<std::size_t, 2> grid_shape{0, 1};
    std::vector<std::array<double, 2>> principal; // signed (k1, k2); k2 == 0 for curves
    std::vector<double> max_abs;                  // k(p)
    std::vector<double> osculatory;               // omega(p) > 0
    double omega_max = 0.0;
    double global_k0 = 0.0; // sup over the grid of k(p)

    double min_omega() const {
        double m = omega_max;
        for (double w : osculatory) m = std::min(m, w);
        return m;
    }
};

// Default flat-region cap: half the domain diameter.
inline double default_omega_max(const GeometricSignal& signal) {
    return 0.5 * signal.domain_diameter();
}

namespace fd {

// Second-order first derivative along one axis of a row-major grid.
// (n >= 3; one-sided three-point stencils at the ends are also O(h^2).)
inline double d1(const std::vector<double>& v, std::size_t i, std::size_t n, std::size_t stride,
                 std::size_t base, double h) {
    const auto at = [&](std::size_t k) { return v[base + k * stride]; };
    if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
    if (i + 1 == n) return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
    return (at(i + 1) - at(i - 1)) / (2.0 * h);
}

// Second derivative: central in the interior, one-sided four-point (O(h^2))
// at the ends, falling back to the three-point stencil when n == 3.
inline double d2(const std::vector<double>& v, std::size_t i, std::size_t n, std::size_t stride,
                 std::size_t base, double h) {
    const auto at = [&](std::size_t k) { return v[base + k * stride]; };
    const double h2 = h * h;
    if (i == 0) {
        if (n >= 4) return (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / h2;
        return (at(0) - 2.0 * at(1) + at(2)) / h2;
    }
    if (i + 1 == n) {
        if (n >= 4) return (2.0 * at(n - 1) - 5.0 * at(n - 2) + 4.0 * at(n - 3) - at(n - 4)) / h2;
        return (at(n - 1) - 2.0 * at(n - 2) + at(n - 3)) / h2;
    }
    return (at(i + 1) - 2.0 * at(i) + at(i - 1)) / h2;
}

} // namespace fd

struct MongeDerivs {
    double hx = 0, hy = 0, hxx = 0, hyy = 0, hxy = 0;
};

namespace detail {

// hxy is the y-derivative of the hx field; computing hx everywhere first
// keeps the mixed stencil symmetric at borders.
struct SurfaceDerivs {
    std::vector<double> hx, hy, hxx, hyy, hxy;

    explicit SurfaceDerivs(const GeometricSignal& s) {
        const std::size_t nx = s.nx(), ny = s.ny();
        const double dx = s.dx(), dy = s.dy();
        hx.resize(s.size());
        hy.resize(s.size());
        hxx.resize(s.size());
        hyy.resize(s.size());
        hxy.resize(s.size());
        for (std::size_t iy = 0; iy < ny; ++iy)
            for (std::size_t ix = 0; ix < nx; ++ix) {
                const std::size_t f = iy * nx + ix;
                hx[f] = fd::d1(s.values, ix, nx, 1, iy * nx, dx);
                hy[f] = fd::d1(s.values, iy, ny, nx, ix, dy);
                hxx[f] = fd::d2(s.values, ix, nx, 1, iy * nx, dx);
                hyy[f] = fd::d2(s.values, iy, ny, nx, ix, dy);
            }
        for (std::size_t iy = 0; iy < ny; ++iy)
            for (std::size_t ix = 0; ix < nx; ++ix)
                hxy[iy * nx + ix] = fd::d1(hx, iy, ny, nx, ix, dy);
    }
};

} // namespace detail

inline MongeDerivs monge_derivs(const GeometricSignal& s, std::size_t ix, std::size_t iy) {
    if (s.kind == SignalKind::Curve1D)
        return {fd::d1(s.values, ix, s.nx(), 1, 0, s.dx()), 0.0,
                fd::d2(s.values, ix, s.nx(), 1, 0, s.dx()), 0.0, 0.0};
    detail::SurfaceDerivs d(s); // convenience path; estimate_curvature batches instead
    const std::size_t f = iy * s.nx() + ix;
    return {d.hx[f], d.hy[f], d.hxx[f], d.hyy[f], d.hxy[f]};
}

// Unit normal of the Monge patch (x, y, h(x, y)); for curves the in-plane
// normal (-f', 1)/|.| with z = 0.
inline Vec3 surface_normal(double hx, double hy) {
    return normalized(Vec3{-hx, -hy, 1.0});
}

// Principal curvatures as eigenvalues of the shape operator S = I^{-1} II of
// the Monge patch. Returned signed, largest first by absolute value.
inline std::array<double, 2> principal_curvatures(const MongeDerivs& d) {
    const double E = 1.0 + d.hx * d.hx;
    const double F = d.hx * d.hy;
    const double G = 1.0 + d.hy * d.hy;
    const double w = std::sqrt(1.0 + d.hx * d.hx + d.hy * d.hy);
    const double L = d.hxx / w;
    const double M = d.hxy / w;
    const double N = d.hyy / w;
    const double den = E * G - F * F;
    const double s00 = (G * L - F * M) / den;
    const double s01 = (G * M - F * N) / den;
    const double s10 = (E * M - F * L) / den;
    const double s11 = (E * N - F * M) / den;
    const double tr = s00 + s11;
    const double det = s00 * s11 - s01 * s10;
    const double disc = std::sqrt(std::max(0.25 * tr * tr - det, 0.0));
    double k1 = 0.5 * tr + disc;
    double k2 = 0.5 * tr - disc;
    if (std::abs(k2) > std::abs(k1)) std::swap(k1, k2);
    return {k1, k2};
}

inline double curve_curvature(double f1, double f2) {
    const double g = 1.0 + f1 * f1;
    return f2 / (g * std::sqrt(g));
}

inline CurvatureField estimate_curvature(const GeometricSignal& signal, double omega_max) {
    signal.validate();
    if (!(omega_max > 0.0)) throw std::invalid_argument("omega_max must be positive");

    CurvatureField field;
    field.grid_shape = {signal.nx(), signal.ny()};
    field.omega_max = omega_max;
    field.principal.resize(signal.size());
    field.max_abs.resize(signal.size());
    field.osculatory.resize(signal.size());

    if (signal.kind == SignalKind::Curve1D) {
        const std::size_t n = signal.nx();
        const double h = signal.dx();
        for (std::size_t i = 0; i < n; ++i) {
            const double f1 = fd::d1(signal.values, i, n, 1, 0, h);
            const double f2 = fd::d2(signal.values, i, n, 1, 0, h);
            field.principal[i] = {curve_curvature(f1, f2), 0.0};
        }
    } else {
        detail::SurfaceDerivs d(signal);
        for (std::size_t f = 0; f < signal.size(); ++f)
            field.principal[f] =
                principal_curvatures({d.hx[f], d.hy[f], d.hxx[f], d.hyy[f], d.hxy[f]});
    }

    for (std::size_t f = 0; f < signal.size(); ++f) {
        const double k = std::max(std::abs(field.principal[f][0]), std::abs(field.principal[f][1]));
        field.max_abs[f] = k;
        field.osculatory[f] = k > 1.0 / omega_max ? 1.0 / k : omega_max;
        field.global_k0 = std::max(field.global_k0, k);
    }
    return field;
}

// Local area (length) element of the graph, for quadrature weights.
inline double area_element(double hx, double hy) { return std::sqrt(1.0 + hx * hx + hy * hy); }
inline double length_element(double f1) { return std::sqrt(1.0 + f1 * f1); }

} // namespace geosig
