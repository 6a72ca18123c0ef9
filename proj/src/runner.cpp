#include "topoid/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "topoid/analysis.hpp"
#include "topoid/covariance.hpp"
#include "topoid/diffusion.hpp"
#include "topoid/evaluation.hpp"
#include "topoid/io.hpp"
#include "topoid/online.hpp"
#include "topoid/solver.hpp"

namespace topoid {

using json = nlohmann::ordered_json;

namespace {

json config_object(const ExperimentConfig& c) {
    json changes = json::array();
    for (const auto& ch : c.changes) {
        changes.push_back({{"after_step", ch.after_step}, {"fraction", ch.fraction}, {"seed", ch.seed}});
    }
    return json{
        {"graph", c.graph},
        {"signals", c.signals},
        {"estimate", c.estimate},
        {"index_base", c.index_base},
        {"mode", c.mode},
        {"mu", c.mu},
        {"mu_scaling", c.mu_scaling},
        {"step_policy", c.step_policy},
        {"rel_tol", c.rel_tol},
        {"max_iters", c.max_iters},
        {"accelerated", c.accelerated},
        {"cov", c.cov},
        {"warmup", c.warmup},
        {"init_scale", c.init_scale},
        {"minibatch", c.minibatch},
        {"iters_per_step", c.iters_per_step},
        {"known_edges", c.known_edges},
        {"threshold", c.threshold},
        {"filter", c.filter},
        {"filter_order", c.filter_order},
        {"samples", c.samples},
        {"seed", c.seed},
        {"changes", changes},
        {"checkpoints", c.checkpoints},
        {"certify", c.certify},
        {"out", c.out},
    };
}

template <typename T>
void read_field(const json& j, const char* key, T& target) {
    if (!j.contains(key)) return;
    try {
        target = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Configuration, std::string("config field '") + key + "': " + e.what());
    }
}

}  // namespace

std::string ExperimentConfig::to_json() const { return config_object(*this).dump(2) + "\n"; }

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Configuration, std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::Configuration, "config must be a JSON object");
    static const char* known[] = {"graph",      "signals",     "estimate",       "index_base", "mode",
                                  "mu",         "mu_scaling",  "step_policy",    "rel_tol",    "max_iters",
                                  "accelerated", "cov",        "warmup",         "init_scale", "minibatch",
                                  "iters_per_step", "known_edges", "threshold",  "filter",     "filter_order",
                                  "samples",    "seed",        "changes",        "checkpoints", "certify",
                                  "out"};
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || item.key() == k;
        if (!ok) throw Error(ErrorCode::Configuration, "unknown config field '" + item.key() + "'");
    }
    ExperimentConfig c;
    read_field(j, "graph", c.graph);
    read_field(j, "signals", c.signals);
    read_field(j, "estimate", c.estimate);
    read_field(j, "index_base", c.index_base);
    read_field(j, "mode", c.mode);
    read_field(j, "mu", c.mu);
    read_field(j, "mu_scaling", c.mu_scaling);
    read_field(j, "step_policy", c.step_policy);
    read_field(j, "rel_tol", c.rel_tol);
    read_field(j, "max_iters", c.max_iters);
    read_field(j, "accelerated", c.accelerated);
    read_field(j, "cov", c.cov);
    read_field(j, "warmup", c.warmup);
    read_field(j, "init_scale", c.init_scale);
    read_field(j, "minibatch", c.minibatch);
    read_field(j, "iters_per_step", c.iters_per_step);
    read_field(j, "known_edges", c.known_edges);
    read_field(j, "threshold", c.threshold);
    read_field(j, "filter", c.filter);
    read_field(j, "filter_order", c.filter_order);
    read_field(j, "samples", c.samples);
    read_field(j, "seed", c.seed);
    read_field(j, "checkpoints", c.checkpoints);
    read_field(j, "certify", c.certify);
    read_field(j, "out", c.out);
    if (j.contains("changes")) {
        if (!j["changes"].is_array()) throw Error(ErrorCode::Configuration, "config field 'changes' must be an array");
        for (const auto& ch : j["changes"]) {
            ChangeSpec spec;
            read_field(ch, "after_step", spec.after_step);
            read_field(ch, "fraction", spec.fraction);
            read_field(ch, "seed", spec.seed);
            c.changes.push_back(spec);
        }
    }
    return c;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) { return a.to_json() == b.to_json(); }

void ExperimentConfig::check() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorCode::Configuration, msg); };
    if (index_base != 0 && index_base != 1) fail("index_base must be 0 or 1");
    if (mode != "batch" && mode != "online") fail("mode must be 'batch' or 'online'");
    if (!(mu > 0.0) || !std::isfinite(mu)) fail("mu must be positive");
    if (mu_scaling != "absolute" && mu_scaling != "lambda_max") fail("mu_scaling must be 'absolute' or 'lambda_max'");
    parse_step_policy(step_policy);
    parse_covariance_mode(cov);
    parse_threshold(threshold);
    if (!(rel_tol > 0.0)) fail("rel_tol must be positive");
    if (max_iters < 1) fail("max_iters must be >= 1");
    if (warmup < 0) fail("warmup must be >= 0");
    if (!(init_scale > 0.0)) fail("init_scale must be positive");
    if (minibatch < 1) fail("minibatch must be >= 1");
    if (iters_per_step < 1) fail("iters_per_step must be >= 1");
    if (filter.empty() && filter_order < 1) fail("filter_order must be >= 1");
    if (samples < 1) fail("samples must be >= 1");
    for (const auto& ch : changes) {
        if (ch.after_step < 1) fail("change after_step must be >= 1");
        if (!(ch.fraction > 0.0 && ch.fraction < 1.0)) fail("change fraction must lie in (0, 1)");
    }
    for (auto t : checkpoints)
        if (t < 1) fail("checkpoints must be >= 1");
}

std::vector<std::int64_t> parse_checkpoints(const std::string& text) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string item;
    auto num = [&](const std::string& s) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || s.empty() || v < 1) {
            throw Error(ErrorCode::Configuration, "bad checkpoint '" + s + "' (steps start at 1)");
        }
        return static_cast<std::int64_t>(v);
    };
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto c1 = item.find(':');
        if (c1 == std::string::npos) {
            out.push_back(num(item));
            continue;
        }
        const auto c2 = item.find(':', c1 + 1);
        const std::int64_t a = num(item.substr(0, c1));
        const std::int64_t b = num(item.substr(c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1));
        const std::int64_t step = c2 == std::string::npos ? 1 : num(item.substr(c2 + 1));
        if (step < 1 || b < a) throw Error(ErrorCode::Configuration, "bad checkpoint range '" + item + "'");
        for (std::int64_t t = a; t <= b; t += step) out.push_back(t);
    }
    return out;
}

GroundTruthGraph load_graph(const std::string& spec, int index_base) {
    if (spec.empty()) throw Error(ErrorCode::Configuration, "no graph given");
    if (spec == "builtin:karate") return karate_club();
    if (spec.rfind("er:", 0) == 0) {
        std::vector<std::string> parts;
        std::stringstream ss(spec.substr(3));
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() < 2 || parts.size() > 3) throw Error(ErrorCode::Configuration, "graph spec er:N:DEGREE[:SEED]");
        try {
            return erdos_renyi(std::stoi(parts[0]), std::stod(parts[1]),
                               parts.size() == 3 ? std::stoull(parts[2]) : 0ULL);
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::Configuration, "bad graph spec '" + spec + "'");
        }
    }
    return read_edge_list(spec, index_base);
}

namespace {

namespace fs = std::filesystem;

struct Artifacts {
    fs::path dir;
    std::map<std::string, std::string> inputs;   // path -> hash
    std::map<std::string, std::string> outputs;  // file name -> hash

    explicit Artifacts(const std::string& out) : dir(out) {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw Error(ErrorCode::Io, "cannot create output directory '" + out + "': " + ec.message());
    }

    void input(const std::string& path) {
        if (path.empty() || path.rfind("builtin:", 0) == 0 || path.rfind("er:", 0) == 0 ||
            path.rfind("random:", 0) == 0) {
            return;
        }
        inputs[path] = content_hash(read_file(path));
    }

    void write(const std::string& name, const std::string& content) {
        write_file_atomic((dir / name).string(), content);
        outputs[name] = content_hash(content);
    }

    void manifest(const std::string& command, const ExperimentConfig& config, const json& extra) {
        json m;
        m["artifact_version"] = kArtifactVersion;
        m["command"] = command;
        m["config"] = config_object(config);
        m["derived_seeds"] = {{"filter", config.seed},
                              {"signals", config.seed + 1},
                              {"known_edges", config.seed + 2},
                              {"solver_start", config.seed + 3},
                              {"warmup", config.seed + 4}};
        m["inputs"] = inputs;
        m["outputs"] = outputs;
        for (const auto& item : extra.items()) m[item.key()] = item.value();
        write_file_atomic((dir / "manifest.json").string(), m.dump(2) + "\n");
    }
};

FilterSpec filter_of(const ExperimentConfig& c) {
    if (!c.filter.empty()) {
        FilterSpec spec{c.filter};
        spec.check();
        return spec;
    }
    return FilterSpec::random_uniform(c.filter_order, c.seed);
}

EdgeConstraints known_of(const ExperimentConfig& c, const GroundTruthGraph* truth, int n) {
    EdgeConstraints known;
    if (c.known_edges.rfind("random:", 0) == 0) {
        if (truth == nullptr) throw Error(ErrorCode::Configuration, "random known edges need a ground-truth graph");
        int k = 0;
        try {
            k = std::stoi(c.known_edges.substr(7));
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::Configuration, "bad known-edges spec '" + c.known_edges + "'");
        }
        known = sample_known_edges(*truth, k, c.seed + 2);
    } else if (!c.known_edges.empty()) {
        known = read_constraints(c.known_edges, c.index_base);
    }
    if (known.max_index() >= n) throw Error(ErrorCode::Dimension, "known edge index exceeds the node count");
    return known;
}

json edges_json(const EdgeConstraints& known, int base) {
    json out = json::array();
    for (const auto& [e, v] : known) out.push_back({e.i + base, e.j + base, v});
    return out;
}

json metrics_json(const RecoveryMetrics& m) {
    return {{"precision", m.precision},     {"recall", m.recall},
            {"f_measure", m.f_measure},     {"threshold", m.threshold},
            {"true_edges", m.true_edges},   {"estimated_edges", m.estimated_edges},
            {"correct_edges", m.correct_edges}};
}

SolverConfig solver_of(const ExperimentConfig& c, double lambda_max) {
    SolverConfig s;
    s.mu = c.mu_scaling == "lambda_max" ? c.mu / (lambda_max * lambda_max) : c.mu;
    if (!(s.mu > 0.0) || !std::isfinite(s.mu)) {
        throw Error(ErrorCode::Configuration, "mu scaling failed: covariance has no positive eigenvalue");
    }
    s.step = parse_step_policy(c.step_policy);
    s.rel_tol = c.rel_tol;
    s.max_iters = c.max_iters;
    s.accelerated = c.accelerated;
    s.init_seed = c.seed + 3;
    s.check();
    return s;
}

std::optional<GroundTruthGraph> optional_truth(const ExperimentConfig& c) {
    if (c.graph.empty()) return std::nullopt;
    return load_graph(c.graph, c.index_base);
}

std::string edge_list_text(const Gso& s, int base) {
    std::ostringstream out;
    out << "# estimate, " << s.n() << " nodes, index base " << base << "\n";
    write_edge_list(out, edges_of(s), base);
    return out.str();
}

}  // namespace

std::string cmd_generate(const ExperimentConfig& config) {
    config.check();
    const GroundTruthGraph truth = load_graph(config.graph, config.index_base);
    const FilterSpec spec = filter_of(config);
    if (config.samples > std::numeric_limits<int>::max()) throw Error(ErrorCode::Configuration, "samples too large");
    const SignalBatch batch = generate(truth.gso(), spec, static_cast<int>(config.samples), config.seed + 1);

    Artifacts art(config.out);
    art.input(config.graph);
    std::ostringstream csv;
    write_signals(csv, batch.rows, true);
    art.write("signals.csv", csv.str());
    std::ostringstream edges;
    edges << "# ground truth, " << truth.n() << " nodes, index base " << config.index_base << "\n";
    write_edge_list(edges, truth.edges(), config.index_base);
    art.write("truth.edges", edges.str());

    json report{{"command", "generate"},
                {"nodes", truth.n()},
                {"edges", truth.edge_count()},
                {"samples", batch.count()},
                {"filter", spec.coeffs}};
    art.write("report.json", report.dump(2) + "\n");
    art.manifest("generate", config, json::object());
    return report.dump(2);
}

std::string cmd_infer_batch(const ExperimentConfig& config) {
    config.check();
    if (config.signals.empty()) throw Error(ErrorCode::Configuration, "infer-batch needs a signal file");
    const Matrix rows = read_signals(config.signals);
    const auto truth = optional_truth(config);
    const int n = static_cast<int>(rows.cols());
    if (truth && truth->n() != n) throw Error(ErrorCode::Dimension, "graph size differs from the signal width");
    const EdgeConstraints known = known_of(config, truth ? &*truth : nullptr, n);
    const Matrix cov = sample_covariance(rows);
    const CommutatorPenalty penalty(cov, 1.0);
    const SolverConfig solver = solver_of(config, penalty.lambda_max());

    const auto start = std::chrono::steady_clock::now();
    const SolveResult result = batch_solve(cov, solver, known);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const ObjectiveValue parts = objective(result.estimate, cov, solver.mu);

    Artifacts art(config.out);
    art.input(config.signals);
    art.input(config.graph);
    art.input(config.known_edges);
    art.write("estimate.edges", edge_list_text(result.estimate, config.index_base));

    json report{{"command", "infer-batch"},
                {"nodes", n},
                {"samples", rows.rows()},
                {"mu", solver.mu},
                {"step", result.step},
                {"iterations", result.iterations},
                {"converged", result.converged},
                {"objective", {{"total", parts.total}, {"smooth", parts.smooth}, {"l1", parts.l1}}},
                {"objective_trajectory", result.objective},
                {"known_edges", edges_json(known, config.index_base)},
                {"warnings", result.warnings},
                {"seconds", seconds}};
    if (truth) report["metrics"] = metrics_json(f_measure(result.estimate, *truth, parse_threshold(config.threshold)));
    art.write("report.json", report.dump(2) + "\n");
    art.manifest("infer-batch", config, json::object());
    return report.dump(2);
}

std::string cmd_infer_online(const ExperimentConfig& config) {
    config.check();
    std::optional<GroundTruthGraph> truth = optional_truth(config);
    const FilterSpec spec = filter_of(config);
    std::unique_ptr<SignalStream> stream;
    std::optional<Matrix> warmup;
    EdgeConstraints known;
    int n = 0;
    if (!config.signals.empty()) {
        Matrix rows = read_signals(config.signals);
        n = static_cast<int>(rows.cols());
        if (truth && truth->n() != n) throw Error(ErrorCode::Dimension, "graph size differs from the signal width");
        if (!config.changes.empty()) throw Error(ErrorCode::Configuration, "topology changes need a generated stream");
        if (config.warmup > 0) {
            if (config.warmup >= rows.rows()) throw Error(ErrorCode::Configuration, "warmup consumes every signal");
            warmup = rows.topRows(config.warmup);
            rows = Matrix(rows.bottomRows(rows.rows() - config.warmup));
        }
        known = known_of(config, truth ? &*truth : nullptr, n);
        stream = std::make_unique<BatchStream>(std::move(rows), truth);
    } else {
        if (!truth) throw Error(ErrorCode::Configuration, "infer-online needs a signal file or a graph to simulate");
        n = truth->n();
        known = known_of(config, &*truth, n);
        if (config.warmup > 0) warmup = generate(truth->gso(), spec, config.warmup, config.seed + 4).rows;
        std::vector<TopologyChange> changes;
        for (const auto& ch : config.changes) changes.push_back({ch.after_step, ch.fraction, ch.seed});
        // Known edges are protected from rewiring so their values stay valid.
        stream = std::make_unique<DiffusionStream>(*truth, spec, config.seed + 1, config.samples, changes, known);
    }

    const CovarianceMode mode = parse_covariance_mode(config.cov);
    CovEstimator estimator = warmup ? CovEstimator::from_warmup(*warmup, mode)
                                    : CovEstimator::from_scale(n, config.init_scale, mode);
    OnlineConfig online;
    online.solver = solver_of(config, estimator.lambda_max());
    online.minibatch = config.minibatch;
    online.iters_per_step = config.iters_per_step;
    OnlineState state = OnlineState::start(std::move(estimator), online, known);

    Artifacts art(config.out);
    art.input(config.signals);
    art.input(config.graph);
    art.input(config.known_edges);

    // Incremental copy of the trace; replaced by trace.csv when the run ends.
    const fs::path partial = art.dir / "trace.csv.partial";
    std::ofstream live(partial, std::ios::trunc);
    if (!live) throw Error(ErrorCode::Io, "cannot write '" + partial.string() + "'");
    write_trace_header(live);

    RunOptions options;
    options.checkpoints = config.checkpoints;
    options.reference = online.solver;
    options.certify = config.certify;
    options.compute_bound = config.certify && !config.checkpoints.empty();
    options.threshold = parse_threshold(config.threshold);
    std::int64_t written = 0;
    options.on_record = [&](const StepRecord& r) {
        write_trace_row(live, r);
        if (++written % 100 == 0) live.flush();
    };
    const auto start = std::chrono::steady_clock::now();
    const RunTrace trace = run_stream(*stream, state, options);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    live.close();

    std::ostringstream csv;
    write_trace_header(csv);
    for (const auto& r : trace.records) write_trace_row(csv, r);
    art.write("trace.csv", csv.str());
    std::error_code ec;
    fs::remove(partial, ec);
    art.write("estimate.edges", edge_list_text(state.iterate, config.index_base));

    json checkpoints = json::array();
    for (const auto& cp : trace.checkpoints) {
        json item{{"t", cp.t},
                  {"optimum_objective", cp.optimum_objective},
                  {"objective", trace.records[cp.t - 1].objective},
                  {"tracking_error", cp.tracking_error},
                  {"solver_iterations", cp.solver_iterations},
                  {"solver_converged", cp.solver_converged}};
        if (cp.m) item["m"] = *cp.m;
        if (cp.sigma_min) item["sigma_min"] = *cp.sigma_min;
        if (trace.records[cp.t - 1].bound) item["bound"] = *trace.records[cp.t - 1].bound;
        checkpoints.push_back(item);
    }
    json report{{"command", "infer-online"},
                {"nodes", n},
                {"steps", trace.records.size()},
                {"mu", online.solver.mu},
                {"known_edges", edges_json(known, config.index_base)},
                {"final_objective", trace.records.empty() ? 0.0 : trace.records.back().objective_after},
                {"checkpoints", checkpoints},
                {"seconds", seconds}};
    if (!trace.checkpoints.empty()) {
        std::optional<std::int64_t> change;
        if (!config.changes.empty()) change = config.changes.front().after_step;
        const TrajectorySummary s = trajectory_compare(trace, change);
        json summary{{"mean_gap", s.mean_gap}, {"max_gap", s.max_gap}, {"max_gap_step", s.max_gap_step}};
        if (s.pre_change_mean) summary["pre_change_mean"] = *s.pre_change_mean;
        if (s.post_change_peak) summary["post_change_peak"] = *s.post_change_peak;
        summary["recovery_steps"] = s.recovery_steps ? json(*s.recovery_steps) : json(nullptr);
        report["trajectory"] = summary;
    }
    if (const GroundTruthGraph* current = stream->truth(); current != nullptr && current->edge_count() > 0) {
        report["metrics"] = metrics_json(f_measure(state.iterate, *current, options.threshold));
    }
    art.write("report.json", report.dump(2) + "\n");
    art.manifest("infer-online", config, json::object());
    return report.dump(2);
}

std::string cmd_analyze(const ExperimentConfig& config) {
    config.check();
    std::optional<GroundTruthGraph> truth;
    Matrix cov;
    std::string source;
    std::vector<std::string> notes;
    if (!config.signals.empty()) {
        cov = sample_covariance(read_signals(config.signals));
        source = "sample";
        if (!config.graph.empty()) truth = load_graph(config.graph, config.index_base);
    } else {
        truth = load_graph(config.graph, config.index_base);
        const FilterSpec spec = filter_of(config);
        cov = ensemble_covariance(truth->gso(), spec);
        source = "ensemble";
        const Vector response = frequency_response(truth->gso(), spec);
        const double scale = std::max(1.0, response.cwiseAbs().maxCoeff());
        if (response.cwiseAbs().minCoeff() <= 1e-10 * scale) {
            notes.push_back("filter frequency response vanishes at a graph eigenvalue");
        }
    }
    const int n = static_cast<int>(cov.rows());
    if (truth && truth->n() != n) throw Error(ErrorCode::Dimension, "graph size differs from the covariance");
    const EdgeConstraints known = known_of(config, truth ? &*truth : nullptr, n);

    const CommutatorPenalty probe(cov, 1.0);
    if (probe.degenerate()) notes.push_back("degenerate covariance: a multiple of the identity commutes with every S");

    const Matrix v = eigenvectors(cov);
    const FeasibilityReport feas = feasibility(v, known);
    json report{{"command", "analyze"},
                {"covariance", source},
                {"nodes", n},
                {"lambda_max", probe.lambda_max()},
                {"known_edges", edges_json(known, config.index_base)},
                {"feasibility",
                 {{"rank_wd", feas.rank_wd},
                  {"k", feas.k},
                  {"rank_wmu", feas.rank_wmu},
                  {"singleton", feas.singleton},
                  {"notes", feas.notes}}}};
    if (n <= 200) {
        const SolverConfig solver = solver_of(config, probe.lambda_max());
        const ConvexityCertificate cert = strong_convexity(cov, solver.mu);
        report["convexity"] = {{"mu", solver.mu},
                               {"full_rank", cert.full_rank},
                               {"sigma_min", cert.sigma_min},
                               {"min_eigengap_sq", cert.min_gap},
                               {"m", cert.m},
                               {"m_literal", cert.m_literal},
                               {"lipschitz", probe.lipschitz() * solver.mu},
                               {"method", cert.method},
                               {"notes", cert.notes}};
    } else {
        notes.push_back("strong-convexity certificate skipped for N > 200");
    }
    report["notes"] = notes;

    Artifacts art(config.out);
    art.input(config.signals);
    art.input(config.graph);
    art.input(config.known_edges);
    art.write("analysis.json", report.dump(2) + "\n");
    art.manifest("analyze", config, json::object());
    return report.dump(2);
}

std::string cmd_eval(const ExperimentConfig& config) {
    config.check();
    if (config.estimate.empty()) throw Error(ErrorCode::Configuration, "eval needs an estimate edge list");
    const GroundTruthGraph truth = load_graph(config.graph, config.index_base);
    const GroundTruthGraph est = read_edge_list(config.estimate, config.index_base, truth.n());
    const RecoveryMetrics m = f_measure(est.gso(), truth, parse_threshold(config.threshold));
    json report{{"command", "eval"}, {"metrics", metrics_json(m)}};

    Artifacts art(config.out);
    art.input(config.estimate);
    art.input(config.graph);
    art.write("metrics.json", report.dump(2) + "\n");
    art.manifest("eval", config, json::object());
    return report.dump(2);
}

}  // namespace topoid
