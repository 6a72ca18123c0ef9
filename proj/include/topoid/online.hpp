#ifndef TOPOID_ONLINE_HPP
#define TOPOID_ONLINE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "topoid/covariance.hpp"
#include "topoid/diffusion.hpp"
#include "topoid/evaluation.hpp"
#include "topoid/solver.hpp"
#include "topoid/trace.hpp"

namespace topoid {

struct OnlineConfig {
    SolverConfig solver;
    int iters_per_step = 1;  ///< PG iterations per arriving minibatch
    int minibatch = 1;       ///< signals folded into the covariance per step

    void check() const;
};

/// Tracker state between steps. The iterate is admissible after the first step.
struct OnlineState {
    CovEstimator estimator;
    Gso iterate;
    std::int64_t t = 0;
    OnlineConfig config;
    EdgeConstraints constraints;

    /// Default start point: init_sparse_random(n, solver.init_density, solver.init_seed).
    static OnlineState start(CovEstimator estimator, OnlineConfig config, EdgeConstraints constraints,
                             std::optional<Gso> s0 = std::nullopt);
};

/**
 * Folds the rows of `signals` into the covariance, refreshes gamma_t from the
 * new lambda_max, then applies iters_per_step PG iterations.
 */
StepRecord online_step_inplace(OnlineState& state, const Matrix& signals);
OnlineState online_step(OnlineState state, const Matrix& signals, StepRecord* record = nullptr);

/// Source of per-step minibatches.
class SignalStream {
public:
    virtual ~SignalStream() = default;
    virtual int dimension() const = 0;
    /// Signals for step `step` (1-based); nullopt ends the stream.
    virtual std::optional<Matrix> next(std::int64_t step, int count) = 0;
    /// Current reference graph, when known.
    virtual const GroundTruthGraph* truth() const { return nullptr; }
    /// Bumped on each topology change.
    virtual int truth_version() const { return 0; }
};

/// Replays the rows of a stored batch; the last minibatch may be short.
class BatchStream : public SignalStream {
public:
    explicit BatchStream(Matrix rows, std::optional<GroundTruthGraph> truth = std::nullopt);
    int dimension() const override { return static_cast<int>(rows_.cols()); }
    std::optional<Matrix> next(std::int64_t step, int count) override;
    const GroundTruthGraph* truth() const override { return truth_ ? &*truth_ : nullptr; }

private:
    Matrix rows_;
    Eigen::Index cursor_ = 0;
    std::optional<GroundTruthGraph> truth_;
};

/// Rewire `fraction` of the edges once step `after_step` has been processed.
struct TopologyChange {
    std::int64_t after_step = 0;
    double fraction = 0.1;
    std::uint64_t seed = 0;
};

/**
 * Filtered white noise on a (possibly changing) graph. After each scheduled
 * change the filter H is rebuilt on the rewired graph with the same taps.
 */
class DiffusionStream : public SignalStream {
public:
    DiffusionStream(GroundTruthGraph graph, FilterSpec filter, std::uint64_t seed, std::int64_t steps,
                    std::vector<TopologyChange> changes = {}, EdgeConstraints protected_edges = {});
    int dimension() const override { return graph_.n(); }
    std::optional<Matrix> next(std::int64_t step, int count) override;
    const GroundTruthGraph* truth() const override { return &graph_; }
    int truth_version() const override { return version_; }

private:
    GroundTruthGraph graph_;
    FilterSpec filter_;
    DiffusionSource source_;
    std::int64_t steps_;
    std::vector<TopologyChange> changes_;
    EdgeConstraints protected_;
    int version_ = 0;
};

struct RunOptions {
    /// Steps (1-based) at which a batch reference solve is run.
    std::vector<std::int64_t> checkpoints;
    bool checkpoint_every_step = false;
    /// Reference solver; mu is overridden with the tracker's mu.
    SolverConfig reference;
    /// Certify strong convexity at checkpoints.
    bool certify = false;
    /// Measure sup |g_{t+1} - g_t| between consecutive checkpoints.
    bool measure_delta = false;
    /// Fill StepRecord::bound from the tracking bound after the run.
    bool compute_bound = false;
    Threshold threshold;
    std::int64_t max_steps = -1;
    std::function<void(const StepRecord&)> on_record;
};

/// Folds online steps over the stream; see RunOptions for the checkpoint work.
RunTrace run_stream(SignalStream& source, OnlineState& state, const RunOptions& options);

/**
 * Moves ceil(fraction |E|) uniformly chosen edges (never those in `protected_edges`)
 * to uniformly chosen non-edges, keeping the weight multiset.
 */
GroundTruthGraph rewire(const GroundTruthGraph& graph, double fraction, std::uint64_t seed,
                        const EdgeConstraints& protected_edges = {});

}  // namespace topoid

#endif  // TOPOID_ONLINE_HPP
