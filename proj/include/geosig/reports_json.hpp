#pragma once

// JSON views of the report structs (nlohmann::json). Kept separate from the
// core headers so library users without the vendored json.hpp can skip it.

#include <json.hpp>

#include "geosig/channel.hpp"
#include "geosig/metrics.hpp"
#include "geosig/quantize.hpp"
#include "geosig/sampling.hpp"
#include "geosig/triangulation.hpp"

namespace geosig {

using json = nlohmann::json;

inline json to_json(const SampleSet& set) {
    json j;
    j["count"] = set.size();
    j["rho"] = set.rho;
    j["uniform_eta"] = set.uniform_eta;
    j["is_maximal"] = set.is_maximal;
    j["seed"] = set.seed;
    j["min_eta"] = set.min_eta();
    return j;
}

inline json to_json(const ComparisonReport& rep) {
    json j;
    j["w_geo"] = rep.w_geo;
    j["nyquist_rate"] = rep.nyquist_rate;
    j["uniform_eta"] = rep.uniform_eta;
    j["rho"] = rep.rho;
    j["uniform_count"] = rep.uniform_count;
    j["adaptive_count"] = rep.adaptive_count;
    return j;
}

inline json triangulation_summary(const TriangulationComplex& cx, const QualityReport& q) {
    json j;
    j["vertices"] = cx.vertex_count();
    j["edges"] = cx.edge_count();
    j["simplices"] = cx.simplex_count();
    j["mesh"] = cx.mesh;
    j["complex_fatness"] = q.complex_fatness;
    j["degenerate_simplices"] = q.degenerate_count;
    return j;
}

inline json stats_json(const DistortionStats& s) {
    json j;
    j["count"] = s.count;
    if (s.count > 0) {
        j["min"] = s.min;
        j["max"] = s.max;
        j["mean"] = s.mean;
    }
    return j;
}

inline json to_json(const MetricReport& rep) {
    json j;
    j["hausdorff"] = rep.hausdorff;
    j["interior"] = stats_json(rep.interior);
    j["boundary"] = stats_json(rep.boundary);
    j["bound_violation_count"] = rep.bound_violation_count;
    j["boundary_slack"] = rep.boundary_slack;
    j["max_pointwise_gap"] = rep.max_pointwise_gap;
    j["max_gradient_gap"] = rep.max_gradient_gap;
    j["pairs_evaluated"] = rep.pairs_evaluated;
    j["boundary_pairs"] = rep.boundary_pairs;
    j["mesh"] = rep.mesh;
    return j;
}

inline json to_json(const QuantizerReport& rep) {
    json j;
    j["e_per_dim"] = rep.e_per_dim;
    j["q_value"] = rep.q_value;
    j["iterations"] = rep.iterations;
    j["converged"] = rep.converged;
    return j;
}

inline json to_json(const ZadorReport& rep) {
    json j;
    j["m"] = rep.m;
    j["e_scalar"] = rep.e_scalar;
    j["e_vector"] = rep.e_vector;
    if (rep.ratio_defined)
        j["ratio"] = rep.ratio;
    else
        j["ratio"] = nullptr;
    j["scalar_points"] = rep.scalar_points;
    j["vector_points"] = rep.vector_points;
    return j;
}

inline json to_json(const DecodeReport& rep) {
    json j;
    j["trials"] = rep.trials;
    j["errors"] = rep.errors;
    j["error_rate"] = rep.error_rate;
    j["wilson_lo"] = rep.wilson.lo;
    j["wilson_hi"] = rep.wilson.hi;
    j["off_tube_fraction"] = rep.off_tube_fraction;
    j["sigma"] = rep.sigma;
    j["seed"] = rep.seed;
    j["rng"] = rep.rng;
    return j;
}

inline json to_json(const CodeMetrics& m) {
    json j;
    j["P"] = m.P;
    j["R"] = m.R;
    j["C"] = m.C;
    j["W"] = m.W;
    j["energy"] = m.energy;
    if (m.c0_infinite)
        j["C0"] = nullptr;
    else
        j["C0"] = m.C0;
    j["c0_infinite"] = m.c0_infinite;
    j["vol_manifold"] = m.vol_manifold;
    j["vol_domain"] = m.vol_domain;
    j["n_codepoints"] = m.n_codepoints;
    j["n_simplices"] = m.n_simplices;
    j["mean_simplex_volume"] = m.mean_simplex_volume;
    j["sigma"] = m.sigma;
    j["window_T"] = m.window_T;
    return j;
}

inline json to_json(const std::vector<CapacityPoint>& pts) {
    json arr = json::array();
    for (const auto& p : pts) {
        json j;
        j["rho"] = p.rho;
        j["n_vertices"] = p.n_vertices;
        j["n_simplices"] = p.n_simplices;
        j["mean_simplex_volume"] = p.mean_simplex_volume;
        j["total_volume"] = p.total_volume;
        j["capacity"] = p.capacity;
        arr.push_back(j);
    }
    return arr;
}

} // namespace geosig
