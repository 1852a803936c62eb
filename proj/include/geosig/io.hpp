#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "geosig/quality.hpp"
#include "geosig/sampling.hpp"
#include "geosig/signal.hpp"
#include "geosig/triangulation.hpp"

namespace geosig {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed file content; carries the byte offset of the failure.
struct parse_error : std::runtime_error {
    std::size_t offset;
    parse_error(const std::string& msg, std::size_t off)
        : std::runtime_error(msg + " (at byte offset " + std::to_string(off) + ")"),
          offset(off) {}
};

// shortest round-trippable decimal representation
inline std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw io_error("write to '" + path + "' failed");
}

// --- PGM ------------------------------------------------------------------

struct PgmImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::uint16_t maxval = 255;
    std::vector<std::uint16_t> pixels; // row-major, row 0 first
};

namespace detail {

struct PgmCursor {
    const std::string& data;
    std::size_t pos = 0;

    void skip_space_and_comments() {
        while (pos < data.size()) {
            const char c = data[pos];
            if (c == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                ++pos;
            } else {
                break;
            }
        }
    }

    unsigned long next_uint(const char* what) {
        skip_space_and_comments();
        if (pos >= data.size()) throw parse_error(std::string("unexpected end of PGM while reading ") + what, pos);
        if (data[pos] < '0' || data[pos] > '9')
            throw parse_error(std::string("expected digit for ") + what, pos);
        unsigned long v = 0;
        while (pos < data.size() && data[pos] >= '0' && data[pos] <= '9') {
            v = v * 10 + static_cast<unsigned long>(data[pos] - '0');
            if (v > 1000000000UL) throw parse_error(std::string("value out of range for ") + what, pos);
            ++pos;
        }
        return v;
    }
};

} // namespace detail

inline PgmImage parse_pgm(const std::string& data) {
    if (data.size() < 2 || data[0] != 'P' || (data[1] != '2' && data[1] != '5'))
        throw parse_error("invalid PGM magic, expected P2 or P5", 0);
    const bool binary = data[1] == '5';
    detail::PgmCursor cur{data, 2};

    PgmImage img;
    img.width = cur.next_uint("width");
    img.height = cur.next_uint("height");
    const unsigned long maxval = cur.next_uint("maxval");
    if (img.width == 0 || img.height == 0)
        throw parse_error("PGM dimensions must be positive", cur.pos);
    if (maxval == 0 || maxval > 65535)
        throw parse_error("PGM maxval must lie in [1, 65535]", cur.pos);
    img.maxval = static_cast<std::uint16_t>(maxval);

    const std::size_t count = img.width * img.height;
    img.pixels.reserve(count);

    if (binary) {
        if (cur.pos >= data.size() ||
            !(data[cur.pos] == ' ' || data[cur.pos] == '\t' || data[cur.pos] == '\n' ||
              data[cur.pos] == '\r'))
            throw parse_error("expected single whitespace before P5 raster", cur.pos);
        ++cur.pos;
        const std::size_t bytes_per = maxval > 255 ? 2 : 1;
        if (data.size() - cur.pos < count * bytes_per)
            throw parse_error("P5 raster truncated", data.size());
        for (std::size_t i = 0; i < count; ++i) {
            std::uint16_t v;
            if (bytes_per == 1) {
                v = static_cast<std::uint8_t>(data[cur.pos + i]);
            } else {
                v = static_cast<std::uint16_t>(
                    (static_cast<std::uint8_t>(data[cur.pos + 2 * i]) << 8) |
                    static_cast<std::uint8_t>(data[cur.pos + 2 * i + 1]));
            }
            if (v > img.maxval)
                throw parse_error("pixel value exceeds maxval", cur.pos + i * bytes_per);
            img.pixels.push_back(v);
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t at = cur.pos;
            const unsigned long v = cur.next_uint("pixel");
            if (v > maxval) throw parse_error("pixel value exceeds maxval", at);
            img.pixels.push_back(static_cast<std::uint16_t>(v));
        }
    }
    return img;
}

inline PgmImage read_pgm(const std::string& path) { return parse_pgm(read_file(path)); }

// Gray level g maps to height g/maxval * height_scale. The longer image side
// spans [0, 1] in the domain; pixel rows become increasing y.
inline GeometricSignal signal_from_pgm(const PgmImage& img, double height_scale = 1.0) {
    if (img.width < 3 || img.height < 3)
        throw std::invalid_argument("PGM raster needs at least 3 pixels per side");
    GeometricSignal s;
    s.kind = SignalKind::HeightField2D;
    const double longest = static_cast<double>(std::max(img.width, img.height) - 1);
    s.domain_origin = {0.0, 0.0};
    s.domain_extent = {static_cast<double>(img.width - 1) / longest,
                       static_cast<double>(img.height - 1) / longest};
    s.grid_shape = {img.width, img.height};
    s.values.resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        s.values[i] = static_cast<double>(img.pixels[i]) / static_cast<double>(img.maxval) *
                      height_scale;
    s.validate();
    return s;
}

// --- two-column CSV curves --------------------------------------------------

// (t, f(t)) rows with strictly increasing t, resampled to a uniform grid by
// linear interpolation. grid_n == 0 keeps the row count.
inline GeometricSignal signal_from_curve_csv(const std::string& data, std::size_t grid_n = 0) {
    std::vector<double> ts, fs;
    std::istringstream in(data);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        for (char& c : line)
            if (c == ',' || c == ';' || c == '\t') c = ' ';
        std::istringstream row(line);
        double t, f;
        if (!(row >> t >> f))
            throw std::invalid_argument("CSV line " + std::to_string(line_no) +
                                        ": expected two numeric columns");
        if (!ts.empty() && !(t > ts.back()))
            throw std::invalid_argument("CSV line " + std::to_string(line_no) +
                                        ": t values must be strictly increasing");
        ts.push_back(t);
        fs.push_back(f);
    }
    if (ts.size() < 3) throw std::invalid_argument("CSV curve needs at least 3 rows");
    const std::size_t n = grid_n >= 3 ? grid_n : ts.size();

    GeometricSignal s;
    s.kind = SignalKind::Curve1D;
    s.domain_origin = {ts.front(), 0.0};
    s.domain_extent = {ts.back() - ts.front(), 0.0};
    s.grid_shape = {n, 1};
    s.values.resize(n);
    std::size_t seg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = ts.front() + s.domain_extent[0] * static_cast<double>(i) /
                                          static_cast<double>(n - 1);
        while (seg + 2 < ts.size() && ts[seg + 1] < t) ++seg;
        const double w = (t - ts[seg]) / (ts[seg + 1] - ts[seg]);
        s.values[i] = fs[seg] + std::clamp(w, 0.0, 1.0) * (fs[seg + 1] - fs[seg]);
    }
    s.validate();
    return s;
}

// --- writers ----------------------------------------------------------------

inline std::string samples_to_csv(const SampleSet& set) {
    std::ostringstream out;
    out << "index,x,y,z,eta,k\n";
    for (std::size_t i = 0; i < set.points.size(); ++i) {
        const auto& p = set.points[i];
        out << i << ',' << fmt_double(p.position.x) << ',' << fmt_double(p.position.y) << ','
            << fmt_double(p.position.z) << ',' << fmt_double(p.local_eta) << ','
            << fmt_double(p.local_curvature) << '\n';
    }
    return out.str();
}

// Wavefront OBJ of the lifted triangulation (1-based indices); curves emit
// polyline 'l' records.
inline std::string complex_to_obj(const TriangulationComplex& cx) {
    std::ostringstream out;
    for (const auto& v : cx.vertices)
        out << "v " << fmt_double(v.x) << ' ' << fmt_double(v.y) << ' ' << fmt_double(v.z) << '\n';
    if (cx.kind == SignalKind::Curve1D) {
        for (const auto& s : cx.segments) out << "l " << s[0] + 1 << ' ' << s[1] + 1 << '\n';
        return out.str();
    }
    for (const auto& t : cx.triangles) {
        // orient counter-clockwise in the domain plane
        std::size_t a = t[0], b = t[1], c = t[2];
        if (detail::orient2d(cx.proj[a], cx.proj[b], cx.proj[c]) < 0.0) std::swap(b, c);
        out << "f " << a + 1 << ' ' << b + 1 << ' ' << c + 1 << '\n';
    }
    return out.str();
}

inline std::string quality_to_csv(const QualityReport& rep) {
    std::ostringstream out;
    out << "simplex,r,R,phi_rr,phi_voldiam,min_angle,degenerate\n";
    for (const auto& q : rep.per_simplex)
        out << q.index << ',' << fmt_double(q.in_radius) << ',' << fmt_double(q.circum_radius)
            << ',' << fmt_double(q.fatness_rr) << ',' << fmt_double(q.fatness_voldiam) << ','
            << fmt_double(q.min_dihedral) << ',' << (q.degenerate ? 1 : 0) << '\n';
    return out.str();
}

// --- hashing (manifest reproducibility) -------------------------------------

inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace geosig
