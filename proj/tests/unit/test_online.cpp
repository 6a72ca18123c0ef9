#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "topoid/covariance.hpp"
#include "topoid/diffusion.hpp"
#include "topoid/online.hpp"

using namespace topoid;

namespace {

struct Instance {
    GroundTruthGraph graph;
    FilterSpec filter;
    EdgeConstraints known;
    Matrix rows;
};

Instance small_instance(int n, std::int64_t samples, std::uint64_t seed) {
    Instance in{erdos_renyi(n, 3.0, seed), FilterSpec::random_uniform(3, seed + 1), {}, {}};
    in.known = sample_known_edges(in.graph, 2, seed + 2);
    in.rows = generate(in.graph.gso(), in.filter, samples, seed + 3).rows;
    return in;
}

OnlineConfig config_for(const Matrix& cov, double mu_scaled, int iters = 1) {
    OnlineConfig cfg;
    cfg.solver.mu = mu_scaled / std::pow(lambda_max(cov), 2);
    cfg.iters_per_step = iters;
    return cfg;
}

SolverConfig reference_solver() {
    SolverConfig ref;
    ref.max_iters = 100000;
    ref.rel_tol = 1e-13;
    ref.accelerated = true;
    return ref;
}

}  // namespace

TEST_CASE("online configuration validation") {
    OnlineConfig cfg;
    cfg.iters_per_step = 0;
    CHECK_THROWS_AS(cfg.check(), Error);
    cfg = OnlineConfig{};
    cfg.minibatch = 0;
    CHECK_THROWS_AS(cfg.check(), Error);
    CHECK_THROWS_AS(OnlineState::start(CovEstimator::from_scale(3, 1.0), OnlineConfig{}, {}, Gso(4)), Error);
}

TEST_CASE("two online steps unroll into covariance updates and PG steps") {
    const auto in = small_instance(8, 2, 1);
    OnlineConfig cfg;
    cfg.solver.mu = 0.7;
    const Gso s0 = init_sparse_random(8, 0.2, 9);
    auto state = OnlineState::start(CovEstimator::from_scale(8, 1.0), cfg, in.known, s0);

    // Manual oracle: explicit running average and explicit PG steps.
    Matrix cov = Matrix::Zero(8, 8);
    Gso manual = s0;
    for (int t = 0; t < 2; ++t) {
        const Vector y = in.rows.row(t).transpose();
        cov = (double(t) * cov + y * y.transpose()) / double(t + 1);
        const StepRecord rec = online_step_inplace(state, in.rows.row(t));
        CHECK(rec.t == t + 1);
        CHECK((state.estimator.current() - cov).norm() <= 1e-14 * cov.norm());
        manual = pg_step(manual, cov, cfg.solver, in.known);
        CHECK((state.iterate.matrix() - manual.matrix()).norm() <= 1e-9 * std::max(1.0, manual.matrix().norm()));
    }
    CHECK(state.t == 2);
}

TEST_CASE("online_step returns a new state and leaves the input untouched") {
    const auto in = small_instance(6, 3, 2);
    OnlineConfig cfg;
    cfg.solver.mu = 1.0;
    const auto s = OnlineState::start(CovEstimator::from_scale(6, 1.0), cfg, in.known);
    StepRecord rec;
    const auto next = online_step(s, in.rows.topRows(3), &rec);
    CHECK(s.t == 0);
    CHECK(next.t == 1);
    CHECK(next.estimator.count() == 3);
    CHECK(rec.t == 1);
    CHECK(rec.gamma * rec.lipschitz == doctest::Approx(1.0));
}

TEST_CASE("empty source yields an empty trace") {
    OnlineConfig cfg;
    auto state = OnlineState::start(CovEstimator::from_scale(5, 1.0), cfg, {});
    const Gso start = state.iterate;
    BatchStream empty(Matrix(0, 5));
    const RunTrace trace = run_stream(empty, state, RunOptions{});
    CHECK(trace.records.empty());
    CHECK(trace.final_iterate.matrix() == start.matrix());
    CHECK(state.t == 0);
}

TEST_CASE("batch stream replays rows and shortens the last minibatch") {
    Rng rng(3);
    BatchStream s(testing::random_matrix(7, 3, rng));
    CHECK(s.next(1, 3)->rows() == 3);
    CHECK(s.next(2, 3)->rows() == 3);
    CHECK(s.next(3, 3)->rows() == 1);
    CHECK_FALSE(s.next(4, 3).has_value());
}

TEST_CASE("iterates stay admissible and the step stays below 1/M") {
    const auto in = small_instance(12, 400, 4);
    const Matrix truth_cov = ensemble_covariance(in.graph.gso(), in.filter);
    OnlineConfig cfg = config_for(truth_cov, 1e3);
    cfg.minibatch = 2;
    auto state = OnlineState::start(CovEstimator::from_warmup(in.rows.topRows(20)), cfg, in.known);
    for (Eigen::Index r = 20; r + 2 <= in.rows.rows(); r += 2) {
        const StepRecord rec = online_step_inplace(state, in.rows.middleRows(r, 2));
        REQUIRE(rec.gamma * rec.lipschitz <= 1.0 + 1e-12);
        REQUIRE(std::isfinite(rec.objective));
        REQUIRE(validate(state.iterate).empty());
        REQUIRE(matches_constraints(state.iterate, in.known));
    }
}

TEST_CASE("more iterations per step track the optimum more closely") {
    const auto in = small_instance(10, 600, 5);
    const Matrix truth_cov = ensemble_covariance(in.graph.gso(), in.filter);
    double error[2] = {0, 0};
    const int iters[2] = {1, 10};
    for (int k = 0; k < 2; ++k) {
        auto state = OnlineState::start(CovEstimator::from_warmup(in.rows.topRows(100)),
                                        config_for(truth_cov, 1e3, iters[k]), in.known);
        BatchStream stream(in.rows.bottomRows(500));
        RunOptions opt;
        opt.checkpoints = {500};
        opt.reference = reference_solver();
        const RunTrace trace = run_stream(stream, state, opt);
        REQUIRE(trace.checkpoints.size() == 1);
        CHECK(trace.checkpoints[0].t == 500);
        error[k] = trace.checkpoints[0].tracking_error;
    }
    CHECK(error[1] < error[0]);
}

TEST_CASE("objective gap shrinks on a stationary stream") {
    const auto in = small_instance(10, 1100, 6);
    const Matrix truth_cov = ensemble_covariance(in.graph.gso(), in.filter);
    auto state = OnlineState::start(CovEstimator::from_warmup(in.rows.topRows(100)), config_for(truth_cov, 1e3),
                                    in.known);
    BatchStream stream(in.rows.bottomRows(1000));
    RunOptions opt;
    for (std::int64_t t = 10; t <= 1000; t += 10) opt.checkpoints.push_back(t);
    opt.reference = reference_solver();
    const RunTrace trace = run_stream(stream, state, opt);
    REQUIRE(trace.checkpoints.size() == 100);

    // Mean F_t(S_t) - F_t(S*_t) over windows of 100 steps.
    std::vector<double> window_mean(10, 0.0);
    for (const auto& cp : trace.checkpoints) {
        const auto& rec = trace.records[std::size_t(cp.t - 1)];
        window_mean[std::size_t((cp.t - 1) / 100)] += (rec.objective - cp.optimum_objective) / 10.0;
    }
    CHECK(window_mean.back() < window_mean.front());
    int decreases = 0;
    for (std::size_t w = 1; w < window_mean.size(); ++w) decreases += window_mean[w] < window_mean[w - 1] ? 1 : 0;
    CHECK(decreases >= 6);
}

TEST_CASE("draining the tracker reproduces the batch solution") {
    const auto in = small_instance(8, 300, 7);
    const Matrix truth_cov = ensemble_covariance(in.graph.gso(), in.filter);
    const OnlineConfig cfg = config_for(truth_cov, 1e3);
    auto state = OnlineState::start(CovEstimator::from_scale(8, 1.0), cfg, in.known);
    BatchStream stream(in.rows);
    run_stream(stream, state, RunOptions{});
    REQUIRE(state.t == 300);

    const Matrix cov = state.estimator.current();
    CHECK((cov - sample_covariance(in.rows)).norm() <= 1e-12 * cov.norm());

    // Drain: plain PG iterations on the final covariance until the iterate settles.
    const CommutatorPenalty pen(cov, cfg.solver.mu);
    const double gamma = 1.0 / pen.lipschitz();
    Gso s = state.iterate;
    for (int k = 0; k < 2000000; ++k) {
        Gso next = pg_step(s, pen, gamma, in.known);
        const double moved = (next.matrix() - s.matrix()).norm();
        s = std::move(next);
        if (moved <= 1e-13) break;
    }
    const double f = objective(s.matrix(), pen).total;
    SolverConfig batch = reference_solver();
    batch.mu = cfg.solver.mu;
    batch.max_iters = 2000000;
    batch.rel_tol = 1e-15;
    batch.iterate_tol = 1e-13;
    const auto ref = batch_solve(cov, batch, in.known);
    const double fb = ref.objective.back();
    CHECK(std::abs(f - fb) <= 1e-8 * std::max(1.0, fb));
}

TEST_CASE("diffusion stream applies topology changes after the scheduled step") {
    const auto g = erdos_renyi(15, 4.0, 8);
    const auto known = sample_known_edges(g, 2, 9);
    DiffusionStream stream(g, FilterSpec{{1.0, 0.3}}, 10, 30, {TopologyChange{20, 0.2, 11}}, known);
    OnlineConfig cfg;
    cfg.solver.mu = 0.01;
    auto state = OnlineState::start(CovEstimator::from_scale(15, 1.0), cfg, known);
    RunOptions opt;
    const RunTrace trace = run_stream(stream, state, opt);
    REQUIRE(trace.records.size() == 30);
    CHECK(trace.records[19].truth_version == 0);
    CHECK(trace.records[20].truth_version == 1);
    CHECK(trace.records[0].f_measure.has_value());
    for (const auto& [e, v] : known) CHECK(stream.truth()->has_edge(e.i, e.j));
    CHECK(stream.truth()->edge_count() == g.edge_count());
    CHECK(stream.truth()->gso().matrix() != g.gso().matrix());
}

TEST_CASE("max_steps and record callback") {
    const auto in = small_instance(6, 50, 12);
    auto state = OnlineState::start(CovEstimator::from_scale(6, 1.0), OnlineConfig{}, in.known);
    BatchStream stream(in.rows);
    RunOptions opt;
    opt.max_steps = 20;
    int seen = 0;
    opt.on_record = [&](const StepRecord& r) { CHECK(r.t == ++seen); };
    const RunTrace trace = run_stream(stream, state, opt);
    CHECK(trace.records.size() == 20);
    CHECK(seen == 20);
}
