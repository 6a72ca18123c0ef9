#ifndef TOPOID_RUNNER_HPP
#define TOPOID_RUNNER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "topoid/graph_model.hpp"

namespace topoid {

inline constexpr const char* kArtifactVersion = "topoid 1.0.0";

struct ChangeSpec {
    std::int64_t after_step = 0;
    double fraction = 0.1;
    std::uint64_t seed = 0;
};

/**
 * Everything one experiment needs. Sub-seeds derive from `seed`:
 * filter coefficients seed, signals seed + 1, random known edges seed + 2,
 * solver start seed + 3, warmup signals seed + 4.
 *
 * `graph` is an edge-list path, `builtin:karate`, or `er:N:DEGREE[:SEED]`.
 * `mu_scaling` is "absolute" or "lambda_max" (mu / lambda_max(C)^2 at the
 * initial covariance).
 */
struct ExperimentConfig {
    std::string graph;
    std::string signals;
    std::string estimate;  ///< eval input
    int index_base = 0;
    std::string mode = "batch";

    double mu = 1.0;
    std::string mu_scaling = "absolute";
    std::string step_policy = "lipschitz";
    double rel_tol = 1e-8;
    int max_iters = 10000;
    bool accelerated = false;

    std::string cov = "infinite";
    int warmup = 0;  ///< signals folded in before step 1; 0 uses init_scale * I
    double init_scale = 1.0;
    int minibatch = 1;
    int iters_per_step = 1;

    std::string known_edges;  ///< path, "random:K", or empty
    std::string threshold = "rel:0.1";

    std::vector<double> filter;  ///< explicit taps; empty draws filter_order taps uniformly
    int filter_order = 3;
    std::int64_t samples = 1000;  ///< T for generate, stream length for generated online runs
    std::uint64_t seed = 0;

    std::vector<ChangeSpec> changes;
    std::vector<std::int64_t> checkpoints;
    /// Certify strong convexity at checkpoints and fill the trace bound column.
    bool certify = false;
    std::string out = "out";

    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);
    void check() const;
};

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

/// Parses "1,10,100" (and ranges "a:b:step").
std::vector<std::int64_t> parse_checkpoints(const std::string& text);

/// Subcommand entry points; each writes into config.out and returns the report JSON text.
std::string cmd_generate(const ExperimentConfig& config);
std::string cmd_infer_batch(const ExperimentConfig& config);
std::string cmd_infer_online(const ExperimentConfig& config);
std::string cmd_analyze(const ExperimentConfig& config);
std::string cmd_eval(const ExperimentConfig& config);

/// Graph named by an ExperimentConfig::graph string.
GroundTruthGraph load_graph(const std::string& spec, int index_base);

}  // namespace topoid

#endif  // TOPOID_RUNNER_HPP
