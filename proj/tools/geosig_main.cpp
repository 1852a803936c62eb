// geosig: curvature-adaptive sampling, triangulation, PL reconstruction,
// vector quantization and Gaussian-channel experiments on geometric signals.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geosig/geosig.hpp"
#include "geosig/reports_json.hpp"

namespace fs = std::filesystem;
using geosig::json;

namespace {

struct RunConfig {
    std::string builtin;
    std::string input;
    std::map<std::string, double> params;
    std::vector<std::size_t> grid;
    double rho = 0.0;
    double eta = 0.0;
    double omega_max = 0.0; // 0 = half the domain diameter
    std::uint64_t seed = 42;
    std::vector<double> sigma; // absolute noise std devs; empty = defaults
    std::size_t m = 16;
    std::size_t trials = 100000;
    std::size_t pair_budget = 2000;
    double height_scale = 1.0;
    std::size_t resolution = 0;
    double window_T = 0.0;
    std::string out = "geosig-out";
    bool write_csv = true;
    bool write_obj = true;
    bool write_json = true;
};

const std::set<std::string> kConfigKeys = {
    "builtin", "input",     "params",       "grid",        "rho",
    "eta",     "omega_max", "seed",         "sigma",       "m",
    "trials",  "pair_budget", "height_scale", "resolution", "window_T",
    "out",     "write_csv", "write_obj",    "write_json"};

void apply_config_file(RunConfig& cfg, const std::string& path) {
    json j;
    try {
        j = json::parse(geosig::read_file(path));
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config file '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");
    for (const auto& [key, val] : j.items()) {
        if (!kConfigKeys.count(key))
            throw std::invalid_argument("unknown config key '" + key + "'");
        if (key == "builtin") cfg.builtin = val.get<std::string>();
        else if (key == "input") cfg.input = val.get<std::string>();
        else if (key == "params") {
            if (!val.is_object()) throw std::invalid_argument("config 'params' must be an object");
            for (const auto& [k, v] : val.items()) cfg.params[k] = v.get<double>();
        } else if (key == "grid") cfg.grid = val.get<std::vector<std::size_t>>();
        else if (key == "rho") cfg.rho = val.get<double>();
        else if (key == "eta") cfg.eta = val.get<double>();
        else if (key == "omega_max") cfg.omega_max = val.get<double>();
        else if (key == "seed") cfg.seed = val.get<std::uint64_t>();
        else if (key == "sigma") cfg.sigma = val.get<std::vector<double>>();
        else if (key == "m") cfg.m = val.get<std::size_t>();
        else if (key == "trials") cfg.trials = val.get<std::size_t>();
        else if (key == "pair_budget") cfg.pair_budget = val.get<std::size_t>();
        else if (key == "height_scale") cfg.height_scale = val.get<double>();
        else if (key == "resolution") cfg.resolution = val.get<std::size_t>();
        else if (key == "window_T") cfg.window_T = val.get<double>();
        else if (key == "out") cfg.out = val.get<std::string>();
        else if (key == "write_csv") cfg.write_csv = val.get<bool>();
        else if (key == "write_obj") cfg.write_obj = val.get<bool>();
        else if (key == "write_json") cfg.write_json = val.get<bool>();
    }
}

json config_echo(const RunConfig& cfg) {
    json j;
    j["builtin"] = cfg.builtin;
    j["input"] = cfg.input;
    j["params"] = cfg.params;
    j["grid"] = cfg.grid;
    j["rho"] = cfg.rho;
    j["eta"] = cfg.eta;
    j["omega_max"] = cfg.omega_max;
    j["seed"] = cfg.seed;
    j["sigma"] = cfg.sigma;
    j["m"] = cfg.m;
    j["trials"] = cfg.trials;
    j["pair_budget"] = cfg.pair_budget;
    j["height_scale"] = cfg.height_scale;
    j["resolution"] = cfg.resolution;
    j["window_T"] = cfg.window_T;
    j["out"] = cfg.out;
    j["write_csv"] = cfg.write_csv;
    j["write_obj"] = cfg.write_obj;
    j["write_json"] = cfg.write_json;
    return j;
}

geosig::GeometricSignal load_signal(const RunConfig& cfg) {
    if (!cfg.input.empty()) {
        if (!fs::exists(cfg.input))
            throw geosig::io_error("input file '" + cfg.input + "' does not exist");
        const std::string data = geosig::read_file(cfg.input);
        if (data.size() >= 2 && data[0] == 'P' && (data[1] == '2' || data[1] == '5'))
            return geosig::signal_from_pgm(geosig::parse_pgm(data), cfg.height_scale);
        return geosig::signal_from_curve_csv(data, cfg.resolution);
    }
    geosig::SignalSpec spec;
    spec.name = cfg.builtin.empty() ? "sphere-cap" : cfg.builtin;
    spec.params = cfg.params;
    if (cfg.grid.size() == 1) spec.grid_shape = {cfg.grid[0], cfg.grid[0]};
    if (cfg.grid.size() >= 2) spec.grid_shape = {cfg.grid[0], cfg.grid[1]};
    return geosig::build_signal(spec);
}

// One fully-run stage pipeline; each subcommand picks the outputs it needs.
struct Stages {
    geosig::GeometricSignal signal;
    geosig::CurvatureField curv;
    geosig::SampleSet samples;
    geosig::TriangulationComplex complex;
    double omega_max = 0.0;
};

Stages run_sampling(const RunConfig& cfg) {
    Stages st{load_signal(cfg), {}, {}, {}, 0.0};
    st.omega_max = cfg.omega_max > 0.0 ? cfg.omega_max : geosig::default_omega_max(st.signal);
    st.curv = geosig::estimate_curvature(st.signal, st.omega_max);
    if (cfg.eta > 0.0)
        st.samples = geosig::sample_uniform(st.signal, st.curv, cfg.eta, cfg.seed);
    else
        st.samples = geosig::sample_adaptive(st.signal, st.curv,
                                             cfg.rho > 0.0 ? cfg.rho : 0.5, cfg.seed);
    return st;
}

struct OutputSink {
    fs::path dir;
    std::vector<std::pair<std::string, std::string>> written; // name -> content

    explicit OutputSink(const std::string& out) : dir(out) {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw geosig::io_error("cannot create output directory '" + out + "'");
    }

    void emit(const std::string& name, const std::string& content) {
        geosig::write_file((dir / name).string(), content);
        written.push_back({name, content});
    }

    void emit_json(const std::string& name, const json& j) { emit(name, j.dump(2) + "\n"); }

    json manifest(const RunConfig& cfg) const {
        json outputs = json::array();
        for (const auto& [name, content] : written) {
            json o;
            o["path"] = name;
            o["bytes"] = content.size();
            o["fnv1a64"] = geosig::hex64(geosig::fnv1a64(content));
            outputs.push_back(o);
        }
        json j;
        j["config"] = config_echo(cfg);
        j["seed"] = cfg.seed;
        j["outputs"] = outputs;
        return j;
    }
};

void stage_sample(const RunConfig& cfg, const Stages& st, OutputSink& sink) {
    if (cfg.write_csv) sink.emit("samples.csv", geosig::samples_to_csv(st.samples));
    if (cfg.write_json) {
        json j = geosig::to_json(st.samples);
        j["omega_max"] = st.omega_max;
        j["global_k0"] = st.curv.global_k0;
        if (st.signal.kind == geosig::SignalKind::Curve1D) {
            const double rho = st.samples.rho > 0.0 ? st.samples.rho : 0.5;
            j["nyquist"] = geosig::to_json(
                geosig::nyquist_compare(st.signal, st.curv, rho, cfg.seed));
        }
        sink.emit_json("sample_summary.json", j);
    }
}

void stage_triangulate(const RunConfig& cfg, Stages& st, OutputSink& sink) {
    st.complex = geosig::delaunay(st.samples);
    const auto q = geosig::quality(st.complex);
    if (st.signal.kind == geosig::SignalKind::HeightField2D) {
        geosig::voronoi_cells(st.complex,
                              {st.signal.domain_origin[0], st.signal.domain_origin[1]},
                              {st.signal.domain_origin[0] + st.signal.domain_extent[0],
                               st.signal.domain_origin[1] + st.signal.domain_extent[1]});
    }
    if (cfg.write_obj) sink.emit("mesh.obj", geosig::complex_to_obj(st.complex));
    if (cfg.write_csv) sink.emit("quality.csv", geosig::quality_to_csv(q));
    if (cfg.write_json) {
        json j = geosig::triangulation_summary(st.complex, q);
        const auto eq = geosig::fatness_equivalence_check(q.per_simplex);
        j["fatness_equivalence"] = {{"max_angle_over_rr", eq.max_angle_over_rr},
                                    {"max_rr_over_angle", eq.max_rr_over_angle},
                                    {"max_voldiam_over_rr", eq.max_voldiam_over_rr},
                                    {"max_rr_over_voldiam", eq.max_rr_over_voldiam},
                                    {"all_bounded", eq.all_bounded}};
        double cell_area = 0.0;
        for (const auto& cell : st.complex.voronoi_cells) cell_area += geosig::polygon_area(cell);
        j["voronoi_cell_area_sum"] = cell_area;
        sink.emit_json("triangulation_summary.json", j);
    }
}

void stage_reconstruct(const RunConfig& cfg, Stages& st, OutputSink& sink) {
    const auto pl = geosig::secant_reconstruct(st.signal, st.complex);
    const auto rep = geosig::metric_distortion(st.signal, pl, cfg.pair_budget, cfg.seed);
    if (cfg.write_json) sink.emit_json("metric_report.json", geosig::to_json(rep));
    if (cfg.write_csv) {
        std::ostringstream out;
        out << "px,py,qx,qy,d_intrinsic,d_euclidean,ratio\n";
        for (const auto& v : rep.violations)
            out << geosig::fmt_double(v.p.x) << ',' << geosig::fmt_double(v.p.y) << ','
                << geosig::fmt_double(v.q.x) << ',' << geosig::fmt_double(v.q.y) << ','
                << geosig::fmt_double(v.d_intrinsic) << ',' << geosig::fmt_double(v.d_euclidean)
                << ',' << geosig::fmt_double(v.ratio) << '\n';
        sink.emit("violations.csv", out.str());
    }
}

void stage_quantize(const RunConfig& cfg, const Stages& st, OutputSink& sink) {
    const auto cloud = geosig::surface_point_cloud(st.signal, cfg.resolution);
    geosig::QuantizerReport rep;
    const auto cb = geosig::lloyd_minimize(cloud, cfg.m, cfg.seed, &rep);
    if (cfg.write_csv) {
        std::vector<double> cell_distortion(cb.centers.size(), 0.0);
        for (std::size_t j = 0; j < cloud.size(); ++j)
            cell_distortion[cb.assignment[j]] +=
                cloud.weights[j] * geosig::dist_sq(cloud.points[j], cb.centers[cb.assignment[j]]);
        std::ostringstream out;
        out << "center,x,y,z,count,volume,distortion\n";
        for (std::size_t i = 0; i < cb.centers.size(); ++i)
            out << i << ',' << geosig::fmt_double(cb.centers[i].x) << ','
                << geosig::fmt_double(cb.centers[i].y) << ','
                << geosig::fmt_double(cb.centers[i].z) << ',' << cb.cell_count[i] << ','
                << geosig::fmt_double(cb.cell_volume[i]) << ','
                << geosig::fmt_double(cell_distortion[i]) << '\n';
        sink.emit("codebook.csv", out.str());
    }
    if (cfg.write_json) {
        json j = geosig::to_json(rep);
        const auto qq = geosig::quantizer_quality(cloud, cb);
        j["q_rough"] = qq.q_rough;
        j["empty_cells"] = qq.empty_cells;
        j["volume_exponent"] = qq.volume_exponent;
        j["total_weight"] = cloud.total_weight();
        j["distortion_power"] = "squared"; // literal Eq. uses first power; see README
        sink.emit_json("quantizer_report.json", j);
        if (st.signal.kind == geosig::SignalKind::HeightField2D)
            sink.emit_json("zador_report.json",
                           geosig::to_json(geosig::zador_dimension_experiment(
                               st.signal, cfg.m, cfg.seed)));
    }
}

void stage_channel(const RunConfig& cfg, const Stages& st, OutputSink& sink) {
    const auto tube = geosig::build_tube(st.signal, st.curv, st.samples);
    std::vector<double> sigmas = cfg.sigma;
    if (sigmas.empty()) {
        const double me = st.samples.min_eta();
        sigmas = {0.01 * me, 0.05 * me, 0.2 * me};
    }
    json runs = json::array();
    std::ostringstream curve;
    curve << "sigma,error_rate,wilson_lo,wilson_hi,off_tube_fraction\n";
    for (double s : sigmas) {
        const auto rep = geosig::simulate_decode(tube, st.samples, s, cfg.trials, cfg.seed);
        runs.push_back(geosig::to_json(rep));
        curve << geosig::fmt_double(s) << ',' << geosig::fmt_double(rep.error_rate) << ','
              << geosig::fmt_double(rep.wilson.lo) << ',' << geosig::fmt_double(rep.wilson.hi)
              << ',' << geosig::fmt_double(rep.off_tube_fraction) << '\n';
    }
    if (cfg.write_json) {
        json j;
        j["tube_radius"] = tube.tube_radius;
        j["min_omega"] = tube.min_omega;
        j["rng"] = "splitmix64";
        j["runs"] = runs;
        sink.emit_json("channel_report.json", j);
    }
    if (cfg.write_csv) sink.emit("error_curve.csv", curve.str());
}

void stage_metrics(const RunConfig& cfg, const Stages& st, OutputSink& sink) {
    const double sigma = cfg.sigma.empty() ? 0.05 * st.samples.min_eta() : cfg.sigma.front();
    const auto m =
        geosig::code_metrics(st.signal, st.samples, st.complex, st.curv, sigma, cfg.window_T);
    if (cfg.write_json) sink.emit_json("code_metrics.json", geosig::to_json(m));
}

int dispatch(const std::string& cmd, const RunConfig& cfg) {
    OutputSink sink(cfg.out);
    Stages st = run_sampling(cfg);
    const auto need_triangulation = [&] {
        if (st.complex.vertex_count() == 0) {
            // reuse stage_triangulate with a throwaway sink when its files
            // are not part of this subcommand's contract
            OutputSink tmp(cfg.out);
            RunConfig quiet = cfg;
            quiet.write_csv = quiet.write_json = quiet.write_obj = false;
            stage_triangulate(quiet, st, tmp);
        }
    };

    if (cmd == "sample") {
        stage_sample(cfg, st, sink);
    } else if (cmd == "triangulate") {
        stage_triangulate(cfg, st, sink);
    } else if (cmd == "reconstruct") {
        need_triangulation();
        if (cfg.write_obj) sink.emit("mesh.obj", geosig::complex_to_obj(st.complex));
        stage_reconstruct(cfg, st, sink);
    } else if (cmd == "quantize") {
        stage_quantize(cfg, st, sink);
    } else if (cmd == "channel") {
        stage_channel(cfg, st, sink);
    } else if (cmd == "metrics") {
        need_triangulation();
        stage_metrics(cfg, st, sink);
    } else if (cmd == "pipeline") {
        stage_sample(cfg, st, sink);
        stage_triangulate(cfg, st, sink);
        stage_reconstruct(cfg, st, sink);
        stage_quantize(cfg, st, sink);
        stage_channel(cfg, st, sink);
        stage_metrics(cfg, st, sink);
        sink.emit_json("manifest.json", sink.manifest(cfg));
    } else {
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"geosig: geometric-signal sampling, reconstruction and coding toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    std::vector<std::string> param_kv;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file; flags override it");
        sub->add_option("--builtin", cfg.builtin,
                        "builtin signal: plane, sphere-cap, cylinder-cap, gaussian-bump, sine, "
                        "chirp, line [config: builtin]");
        sub->add_option("--input", cfg.input, "input PGM image or two-column CSV curve "
                                              "[config: input]");
        sub->add_option("--param", param_kv,
                        "builtin parameter as name=value, repeatable [config: params]");
        sub->add_option("--r,--radius", cfg.params["radius"],
                        "shorthand for --param radius= [config: params.radius]");
        sub->add_option("--grid", cfg.grid, "grid points per axis (1 or 2 values) [config: grid]");
        sub->add_option("--rho", cfg.rho,
                        "adaptive sampling ratio eta(p)/omega(p), in (0,1) [config: rho]");
        sub->add_option("--eta", cfg.eta, "uniform sampling radius (overrides rho) [config: eta]");
        sub->add_option("--omega-max", cfg.omega_max,
                        "osculatory radius cap for flat regions; 0 = half the domain diameter "
                        "[config: omega_max]");
        sub->add_option("--seed", cfg.seed, "root RNG seed [config: seed]");
        sub->add_option("--sigma", cfg.sigma,
                        "channel noise std dev(s); empty = {0.01,0.05,0.2}*min_eta "
                        "[config: sigma]");
        sub->add_option("--m", cfg.m, "codebook size for quantization [config: m]");
        sub->add_option("--trials", cfg.trials, "Monte Carlo trials [config: trials]");
        sub->add_option("--pair-budget", cfg.pair_budget,
                        "point pairs for metric distortion [config: pair_budget]");
        sub->add_option("--height-scale", cfg.height_scale,
                        "height per full gray level for PGM input [config: height_scale]");
        sub->add_option("--resolution", cfg.resolution,
                        "resample grid for point clouds / CSV input; 0 = native "
                        "[config: resolution]");
        sub->add_option("--window-T", cfg.window_T,
                        "time window for power and capacity [config: window_T]");
        sub->add_option("--out", cfg.out, "output directory [config: out]");
        sub->add_flag("!--no-csv", cfg.write_csv, "skip CSV outputs [config: write_csv]");
        sub->add_flag("!--no-obj", cfg.write_obj, "skip OBJ outputs [config: write_obj]");
        sub->add_flag("!--no-json", cfg.write_json, "skip JSON outputs [config: write_json]");
    };

    for (const char* name : {"sample", "triangulate", "reconstruct", "quantize", "channel",
                             "metrics", "pipeline"}) {
        auto* sub = app.add_subcommand(
            name, std::string(name) + " stage (sample -> triangulate -> reconstruct -> "
                                      "quantize -> channel -> metrics)");
        add_common(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (!config_path.empty()) {
            RunConfig from_file;
            apply_config_file(from_file, config_path);
            // flags already parsed into cfg win over file values
            RunConfig merged = from_file;
            CLI::App* sub = app.get_subcommands().front();
            const auto used = [&](const std::string& flag) {
                return sub->count(flag) > 0;
            };
            if (used("--builtin")) merged.builtin = cfg.builtin;
            if (used("--input")) merged.input = cfg.input;
            if (used("--grid")) merged.grid = cfg.grid;
            if (used("--rho")) merged.rho = cfg.rho;
            if (used("--eta")) merged.eta = cfg.eta;
            if (used("--omega-max")) merged.omega_max = cfg.omega_max;
            if (used("--seed")) merged.seed = cfg.seed;
            if (used("--sigma")) merged.sigma = cfg.sigma;
            if (used("--m")) merged.m = cfg.m;
            if (used("--trials")) merged.trials = cfg.trials;
            if (used("--pair-budget")) merged.pair_budget = cfg.pair_budget;
            if (used("--height-scale")) merged.height_scale = cfg.height_scale;
            if (used("--resolution")) merged.resolution = cfg.resolution;
            if (used("--window-T")) merged.window_T = cfg.window_T;
            if (used("--out")) merged.out = cfg.out;
            if (used("--no-csv")) merged.write_csv = cfg.write_csv;
            if (used("--no-obj")) merged.write_obj = cfg.write_obj;
            if (used("--no-json")) merged.write_json = cfg.write_json;
            if (used("--r") || used("--radius")) merged.params["radius"] = cfg.params["radius"];
            for (const auto& kv : param_kv) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument("--param expects name=value, got '" + kv + "'");
                merged.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
            }
            cfg = merged;
        } else {
            CLI::App* sub = app.get_subcommands().front();
            if (sub->count("--r") == 0 && sub->count("--radius") == 0) cfg.params.erase("radius");
            for (const auto& kv : param_kv) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument("--param expects name=value, got '" + kv + "'");
                cfg.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
            }
        }
        return dispatch(app.get_subcommands().front()->get_name(), cfg);
    } catch (const geosig::io_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const geosig::parse_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
