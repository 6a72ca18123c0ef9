#include <doctest.h>

#include <numeric>

#include "helpers.hpp"
#include "topoid/evaluation.hpp"
#include "topoid/io.hpp"

using namespace topoid;

namespace {

GroundTruthGraph square() {
    return GroundTruthGraph::from_edges(5, {{Edge(0, 1), 1.0}, {Edge(1, 2), 1.0}, {Edge(2, 3), 1.0}, {Edge(3, 0), 1.0}});
}

Gso from_edges(int n, const std::vector<Edge>& edges, double w = 1.0) {
    Matrix m = Matrix::Zero(n, n);
    for (const auto& e : edges) m(e.i, e.j) = m(e.j, e.i) = w;
    return Gso(std::move(m));
}

Gso permuted(const Gso& s, const std::vector<int>& perm) {
    const int n = s.n();
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(perm[std::size_t(i)], perm[std::size_t(j)]) = s(i, j);
    return Gso(std::move(m));
}

RunTrace trace_with_gaps(const std::vector<double>& gaps, std::int64_t stride) {
    RunTrace trace;
    trace.n = 2;
    const std::int64_t steps = stride * std::int64_t(gaps.size());
    for (std::int64_t t = 1; t <= steps; ++t) {
        StepRecord r;
        r.t = t;
        r.objective = 10.0;
        trace.records.push_back(r);
    }
    for (std::size_t k = 0; k < gaps.size(); ++k) {
        CheckpointRecord cp;
        cp.t = stride * std::int64_t(k + 1);
        cp.optimum_objective = 10.0 - gaps[k];
        trace.checkpoints.push_back(cp);
    }
    return trace;
}

}  // namespace

TEST_CASE("exact estimate scores one") {
    const auto g = square();
    const auto m = f_measure(g.gso(), g, Threshold::absolute(0.5));
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.f_measure == 1.0);
    CHECK(m.true_edges == 4);
    CHECK(m.estimated_edges == 4);
}

TEST_CASE("empty estimate scores zero") {
    const auto m = f_measure(Gso(5), square(), Threshold::relative(0.1));
    CHECK(m.precision == 0.0);
    CHECK(m.recall == 0.0);
    CHECK(m.f_measure == 0.0);
    CHECK(m.threshold == doctest::Approx(1e-4));
}

TEST_CASE("half the edges correct") {
    const Gso est = from_edges(5, {Edge(0, 1), Edge(1, 2), Edge(0, 4), Edge(2, 4)});
    const auto m = f_measure(est, square(), 0.5);
    CHECK(m.correct_edges == 2);
    CHECK(m.precision == 0.5);
    CHECK(m.recall == 0.5);
    CHECK(m.f_measure == 0.5);
}

TEST_CASE("f-measure is the harmonic mean") {
    const Gso est = from_edges(5, {Edge(0, 1), Edge(0, 4)});
    const auto m = f_measure(est, square(), 0.5);
    CHECK(m.precision == 0.5);
    CHECK(m.recall == 0.25);
    CHECK(m.f_measure == doctest::Approx(2 * 0.5 * 0.25 / 0.75));
}

TEST_CASE("evaluation errors") {
    CHECK_THROWS_AS(f_measure(Gso(3), GroundTruthGraph::from_edges(3, {}), 0.1), Error);
    CHECK_THROWS_AS(f_measure(Gso(4), square(), 0.1), Error);
}

TEST_CASE("relative threshold scales with the largest entry") {
    Matrix m = Matrix::Zero(5, 5);
    m(0, 1) = m(1, 0) = 10.0;
    m(1, 2) = m(2, 1) = 0.5;
    m(2, 3) = m(3, 2) = 2.0;
    const Gso est(m);
    CHECK(Threshold::relative(0.1).resolve(est) == doctest::Approx(1.0));
    const auto metrics = f_measure(est, square(), Threshold::relative(0.1));
    CHECK(metrics.estimated_edges == 2);
    CHECK(Threshold::absolute(0.3).resolve(est) == 0.3);
}

TEST_CASE("threshold parsing") {
    CHECK(parse_threshold("rel:0.2").kind == Threshold::Kind::Relative);
    CHECK(parse_threshold("abs:0.05").value == 0.05);
    CHECK(format_threshold(parse_threshold("rel:0.1")) == "rel:0.1");
    CHECK(format_threshold(parse_threshold("abs:2")) == "abs:2");
    CHECK_THROWS_AS(parse_threshold("0.1"), Error);
    CHECK_THROWS_AS(parse_threshold("abs:-1"), Error);
    CHECK_THROWS_AS(parse_threshold("max:0.1"), Error);
}

TEST_CASE("f-measure is invariant under a consistent relabeling") {
    Rng rng(1);
    const auto g = karate_club();
    const Matrix noisy = g.gso().matrix() * 0.8 + 0.3 * testing::random_admissible(34, rng);
    const Gso est(noisy);
    std::vector<int> perm(34);
    std::iota(perm.begin(), perm.end(), 0);
    for (int k = 33; k > 0; --k) std::swap(perm[std::size_t(k)], perm[rng.below(std::uint64_t(k + 1))]);
    const auto g2 = GroundTruthGraph::from_gso(permuted(g.gso(), perm));
    const auto a = f_measure(est, g, Threshold::absolute(0.5));
    const auto b = f_measure(permuted(est, perm), g2, Threshold::absolute(0.5));
    CHECK(a.precision == b.precision);
    CHECK(a.recall == b.recall);
    CHECK(a.f_measure == b.f_measure);
}

TEST_CASE("f-measure does not increase once the threshold passes the weakest true positive") {
    Rng rng(2);
    for (int trial = 0; trial < 5; ++trial) {
        const auto g = erdos_renyi(20, 3.0, trial);
        // True edges carry weights in [0.5, 1.5); spurious ones stay below 0.3.
        Matrix m = Matrix::Zero(20, 20);
        for (const auto& e : g.edges()) m(e.edge.i, e.edge.j) = m(e.edge.j, e.edge.i) = 0.5 + rng.uniform01();
        for (int k = 0; k < 15; ++k) {
            const int i = int(rng.below(20)), j = int(rng.below(20));
            if (i != j && m(i, j) == 0.0) m(i, j) = m(j, i) = 0.3 * rng.uniform01();
        }
        const Gso est(m);
        double previous = 2.0;
        for (double thr = 0.5; thr <= 1.6; thr += 0.05) {
            const double f = f_measure(est, g, thr).f_measure;
            CHECK(f <= previous);
            previous = f;
        }
    }
}

TEST_CASE("trajectory with zero gaps") {
    const auto s = trajectory_compare(trace_with_gaps({0, 0, 0, 0}, 5));
    CHECK(s.steps.size() == 4);
    CHECK(s.mean_gap == 0.0);
    CHECK(s.max_gap == 0.0);
    CHECK_FALSE(s.pre_change_mean.has_value());
}

TEST_CASE("trajectory spike and recovery") {
    // Checkpoints every 10 steps; change after step 40.
    const auto trace = trace_with_gaps({1, 1, 1, 1, 6, 4, 2, 1.2, 1}, 10);
    const auto s = trajectory_compare(trace, 40, 4, 1.5);
    CHECK(*s.pre_change_mean == doctest::Approx(1.0));
    CHECK(*s.post_change_peak == doctest::Approx(6.0));
    CHECK(s.max_gap_step == 50);
    REQUIRE(s.recovery_steps.has_value());
    CHECK(*s.recovery_steps == 40);  // gap 1.2 at step 80

    const auto never = trajectory_compare(trace_with_gaps({1, 1, 5, 5}, 10), 20, 2, 1.5);
    CHECK_FALSE(never.recovery_steps.has_value());
}

TEST_CASE("trajectory errors") {
    RunTrace empty;
    CHECK_THROWS_AS(trajectory_compare(empty), Error);
    CHECK_THROWS_AS(trajectory_compare(trace_with_gaps({1, 2}, 3), 1), Error);
}
