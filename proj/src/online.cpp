#include "topoid/online.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "topoid/analysis.hpp"

namespace topoid {

void OnlineConfig::check() const {
    solver.check();
    if (iters_per_step < 1) throw Error(ErrorCode::Configuration, "online: iters_per_step must be >= 1");
    if (minibatch < 1) throw Error(ErrorCode::Configuration, "online: minibatch must be >= 1");
}

OnlineState OnlineState::start(CovEstimator estimator, OnlineConfig config, EdgeConstraints constraints,
                               std::optional<Gso> s0) {
    config.check();
    const int n = estimator.n();
    if (constraints.max_index() >= n) throw Error(ErrorCode::Dimension, "online: known edge outside the graph");
    if (s0 && s0->n() != n) throw Error(ErrorCode::Dimension, "online: s0 dimension differs from covariance");
    Gso start = s0 ? *s0 : init_sparse_random(n, config.solver.init_density, config.solver.init_seed);
    return OnlineState{std::move(estimator), std::move(start), 0, config, std::move(constraints)};
}

namespace {

struct PreparedStep {
    CommutatorPenalty penalty;
    double gamma;
    StepRecord record;
};

PreparedStep prepare(OnlineState& state, const Matrix& signals) {
    if (signals.cols() != state.estimator.n()) {
        throw Error(ErrorCode::Dimension, "online_step: signal dimension differs from the graph size");
    }
    if (signals.rows() < 1) throw Error(ErrorCode::Parameter, "online_step: no signals");
    state.estimator.update_batch(signals);
    const double lmax = state.estimator.lambda_max();
    CommutatorPenalty penalty(state.estimator.current(), state.config.solver.mu, lmax);
    const double gamma = resolve_step(state.config.solver.step, penalty.lipschitz());
    StepRecord rec;
    rec.t = state.t + 1;
    rec.gamma = gamma;
    rec.lambda_max = lmax;
    rec.lipschitz = penalty.lipschitz();
    rec.iters = state.config.iters_per_step;
    rec.objective = objective(state.iterate.matrix(), penalty).total;
    rec.iterate_norm = state.iterate.matrix().norm();
    if (!std::isfinite(rec.objective)) throw Error(ErrorCode::NonFinite, "online_step: non-finite objective");
    return PreparedStep{std::move(penalty), gamma, rec};
}

void finish(OnlineState& state, PreparedStep& step) {
    for (int k = 0; k < state.config.iters_per_step; ++k) {
        state.iterate = pg_step(state.iterate, step.penalty, step.gamma, state.constraints);
    }
    step.record.objective_after = objective(state.iterate.matrix(), step.penalty).total;
    if (!std::isfinite(step.record.objective_after)) {
        throw Error(ErrorCode::NonFinite, "online_step: non-finite objective");
    }
    state.t += 1;
}

}  // namespace

StepRecord online_step_inplace(OnlineState& state, const Matrix& signals) {
    PreparedStep step = prepare(state, signals);
    finish(state, step);
    return step.record;
}

OnlineState online_step(OnlineState state, const Matrix& signals, StepRecord* record) {
    StepRecord rec = online_step_inplace(state, signals);
    if (record != nullptr) *record = rec;
    return state;
}

BatchStream::BatchStream(Matrix rows, std::optional<GroundTruthGraph> truth)
    : rows_(std::move(rows)), truth_(std::move(truth)) {
    if (truth_ && truth_->n() != rows_.cols()) {
        throw Error(ErrorCode::Dimension, "BatchStream: ground truth size differs from signal width");
    }
}

std::optional<Matrix> BatchStream::next(std::int64_t, int count) {
    if (cursor_ >= rows_.rows()) return std::nullopt;
    const Eigen::Index take = std::min<Eigen::Index>(count, rows_.rows() - cursor_);
    Matrix out = rows_.middleRows(cursor_, take);
    cursor_ += take;
    return out;
}

DiffusionStream::DiffusionStream(GroundTruthGraph graph, FilterSpec filter, std::uint64_t seed, std::int64_t steps,
                                 std::vector<TopologyChange> changes, EdgeConstraints protected_edges)
    : graph_(std::move(graph)),
      filter_(std::move(filter)),
      source_(build_filter(graph_.gso(), filter_), seed),
      steps_(steps),
      changes_(std::move(changes)),
      protected_(std::move(protected_edges)) {
    std::sort(changes_.begin(), changes_.end(),
              [](const TopologyChange& a, const TopologyChange& b) { return a.after_step < b.after_step; });
}

std::optional<Matrix> DiffusionStream::next(std::int64_t step, int count) {
    if (steps_ >= 0 && step > steps_) return std::nullopt;
    for (const auto& change : changes_) {
        if (change.after_step + 1 == step) {
            graph_ = rewire(graph_, change.fraction, change.seed, protected_);
            source_.set_filter(build_filter(graph_.gso(), filter_));
            ++version_;
        }
    }
    return source_.next_batch(count);
}

namespace {

bool is_checkpoint(const RunOptions& options, const std::set<std::int64_t>& marks, std::int64_t t) {
    return options.checkpoint_every_step || marks.count(t) > 0;
}

}  // namespace

RunTrace run_stream(SignalStream& source, OnlineState& state, const RunOptions& options) {
    state.config.check();
    if (source.dimension() != state.estimator.n()) {
        throw Error(ErrorCode::Dimension, "run_stream: stream dimension differs from the tracker");
    }
    SolverConfig reference = options.reference;
    reference.mu = state.config.solver.mu;
    reference.check();

    std::set<std::int64_t> marks(options.checkpoints.begin(), options.checkpoints.end());
    if (options.compute_bound) marks.insert(1);  // the bound needs ||S_0 - S*_0||

    RunTrace trace;
    trace.n = state.estimator.n();
    trace.mu = state.config.solver.mu;
    trace.step_policy = state.config.solver.step;
    trace.initial_iterate = state.iterate;

    std::optional<Matrix> previous_optimum;
    std::optional<Matrix> previous_cov;
    std::int64_t previous_checkpoint = -1;

    while (options.max_steps < 0 || state.t < options.max_steps) {
        const std::int64_t step_no = state.t + 1;
        auto batch = source.next(step_no, state.config.minibatch);
        if (!batch || batch->rows() == 0) break;
        PreparedStep step = prepare(state, *batch);
        step.record.truth_version = source.truth_version();
        if (const GroundTruthGraph* truth = source.truth(); truth != nullptr && truth->edge_count() > 0) {
            step.record.f_measure = f_measure(state.iterate, *truth, options.threshold).f_measure;
        }

        if (is_checkpoint(options, marks, step_no)) {
            CheckpointRecord cp;
            cp.t = step_no;
            const std::optional<Gso> warm =
                previous_optimum ? std::optional<Gso>(Gso(*previous_optimum)) : std::optional<Gso>(state.iterate);
            const SolveResult ref = batch_solve(step.penalty, reference, state.constraints, warm);
            cp.optimum = ref.estimate.matrix();
            cp.optimum_objective = ref.objective.back();
            cp.solver_iterations = ref.iterations;
            cp.solver_converged = ref.converged;
            cp.tracking_error = (state.iterate.matrix() - cp.optimum).norm();
            if (options.certify) {
                const auto cert = strong_convexity(step.penalty.cov(), trace.mu);
                cp.m = cert.m;
                cp.sigma_min = cert.sigma_min;
                cp.full_rank = cert.full_rank;
            }
            if (options.measure_delta && previous_cov && previous_checkpoint == step_no - 1) {
                trace.checkpoints.back().delta_unit = smooth_variation(*previous_cov, step.penalty.cov(), trace.mu);
            }
            step.record.optimum_objective = cp.optimum_objective;
            step.record.tracking_error = cp.tracking_error;
            previous_optimum = cp.optimum;
            if (options.measure_delta) previous_cov = step.penalty.cov();
            previous_checkpoint = step_no;
            trace.checkpoints.push_back(std::move(cp));
        }

        finish(state, step);
        trace.records.push_back(step.record);
        if (options.on_record) options.on_record(trace.records.back());
    }
    trace.final_iterate = state.iterate;

    if (options.compute_bound && !trace.checkpoints.empty() && trace.checkpoints.front().t == 1) {
        const BoundInputs inputs = assemble_bound_inputs(trace);
        const TrackingBound bound = tracking_bound(inputs, trace.checkpoints.front().tracking_error);
        for (std::size_t k = 0; k < trace.records.size(); ++k) trace.records[k].bound = bound.recursion[k];
    }
    return trace;
}

GroundTruthGraph rewire(const GroundTruthGraph& graph, double fraction, std::uint64_t seed,
                        const EdgeConstraints& protected_edges) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw Error(ErrorCode::Parameter, "rewire: fraction must lie in (0, 1)");
    const auto& edges = graph.edges();
    if (edges.empty()) throw Error(ErrorCode::Data, "rewire: graph has no edges");
    // Guard against representation error, e.g. 0.1 * 10 = 1.0000000000000002.
    const auto count = static_cast<std::size_t>(std::ceil(fraction * double(edges.size()) - 1e-9));

    std::vector<std::size_t> removable;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        if (!protected_edges.contains(edges[k].edge.i, edges[k].edge.j)) removable.push_back(k);
    }
    std::vector<Edge> non_edges;
    for (int i = 0; i < graph.n(); ++i)
        for (int j = i + 1; j < graph.n(); ++j)
            if (!graph.has_edge(i, j)) non_edges.emplace_back(i, j);
    if (count > removable.size()) throw Error(ErrorCode::Data, "rewire: not enough unprotected edges to remove");
    if (count > non_edges.size()) throw Error(ErrorCode::Data, "rewire: not enough non-edges to add");

    Rng rng(seed);
    // Partial Fisher-Yates draws without replacement.
    for (std::size_t k = 0; k < count; ++k) {
        std::swap(removable[k], removable[k + rng.below(removable.size() - k)]);
        std::swap(non_edges[k], non_edges[k + rng.below(non_edges.size() - k)]);
    }
    std::vector<bool> removed(edges.size(), false);
    std::vector<WeightedEdge> out;
    std::vector<double> freed;
    for (std::size_t k = 0; k < count; ++k) {
        removed[removable[k]] = true;
        freed.push_back(edges[removable[k]].weight);
    }
    for (std::size_t k = 0; k < edges.size(); ++k)
        if (!removed[k]) out.push_back(edges[k]);
    for (std::size_t k = 0; k < count; ++k) out.push_back({non_edges[k], freed[k]});
    return GroundTruthGraph::from_edges(graph.n(), out);
}

}  // namespace topoid
