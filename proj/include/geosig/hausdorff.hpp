#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "geosig/vec.hpp"

namespace geosig {

namespace detail {

// Directed sup-min distance. A point whose running minimum drops below the
// current supremum can no longer raise it, so the inner loop bails early.
inline double directed_hausdorff(const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
    double sup = 0.0;
    for (const auto& a : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& b : to) {
            const double d = dist_sq(a, b);
            if (d < best) {
                best = d;
                if (best <= sup) break;
            }
        }
        if (best > sup) sup = best;
    }
    return std::sqrt(sup);
}

} // namespace detail

inline double hausdorff_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("hausdorff_distance: sets must be nonempty");
    return std::max(detail::directed_hausdorff(a, b), detail::directed_hausdorff(b, a));
}

} // namespace geosig
