#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "topoid/covariance.hpp"
#include "topoid/diffusion.hpp"
#include "topoid/solver.hpp"

using namespace topoid;

namespace {

Matrix p3_cov() { return ensemble_covariance(path_graph(3), FilterSpec{{1.0, 0.5}}); }

// Reference smooth term, written out without the library.
double smooth_term(const Matrix& s, const Matrix& c, double mu) {
    const Matrix r = s * c - c * s;
    return 0.5 * mu * r.squaredNorm();
}

// Prox subproblem objective ||X||_1 + (1/2 alpha)||X - M||_F^2.
double prox_objective(const Matrix& x, const Matrix& m, double alpha) {
    return x.cwiseAbs().sum() + (x - m).squaredNorm() / (2.0 * alpha);
}

Matrix sym3(double a, double b, double c) {
    Matrix x = Matrix::Zero(3, 3);
    x(0, 1) = x(1, 0) = a;
    x(0, 2) = x(2, 0) = b;
    x(1, 2) = x(2, 1) = c;
    return x;
}

EdgeConstraints omega(int i, int j, double v = 1.0) {
    EdgeConstraints c;
    c.add(i, j, v);
    return c;
}

}  // namespace

TEST_CASE("objective examples") {
    const Matrix c = p3_cov();
    const auto zero = objective(Gso(3), c, 2.0);
    CHECK(zero.total == 0.0);
    CHECK(zero.smooth == 0.0);
    CHECK(zero.l1 == 0.0);

    Rng rng(1);
    const Gso s(testing::random_admissible(5, rng));
    const auto id = objective(s, Matrix::Identity(5, 5), 3.0);
    CHECK(id.smooth == doctest::Approx(0.0));
    CHECK(id.total == doctest::Approx(s.matrix().cwiseAbs().sum()));

    const auto p3 = objective(path_graph(3), c, 10.0);
    CHECK(std::abs(p3.smooth) < 1e-20);
    CHECK(p3.total == doctest::Approx(4.0));
    CHECK(p3.total == p3.l1 + p3.smooth);
}

TEST_CASE("objective matches a direct evaluation") {
    Rng rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + trial % 5;
        const Matrix s = testing::random_admissible(n, rng);
        const Matrix c = testing::random_covariance(n, rng);
        const double mu = 0.5 + trial;
        const auto f = objective(Gso(s), c, mu);
        CHECK(f.smooth == doctest::Approx(smooth_term(s, c, mu)).epsilon(1e-12));
        CHECK(f.l1 == doctest::Approx(s.cwiseAbs().sum()).epsilon(1e-14));
    }
}

TEST_CASE("gradient examples") {
    Rng rng(3);
    const Gso s(testing::random_admissible(4, rng));
    CHECK(gradient(s, Matrix::Identity(4, 4), 2.0).norm() == 0.0);
    CHECK(gradient(path_graph(3), p3_cov(), 5.0).norm() <= 1e-9);
}

TEST_CASE("gradient matches central finite differences") {
    Rng rng(4);
    const double h = 1e-6;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + trial % 6;
        const Matrix s = testing::random_symmetric(n, rng);
        const Matrix c = testing::random_covariance(n, rng);
        const double mu = 0.1 + rng.uniform01() * 5.0;
        const Matrix grad = CommutatorPenalty(c, mu).gradient_dense(s);
        Matrix fd(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                Matrix plus = s, minus = s;
                plus(i, j) += h;
                minus(i, j) -= h;
                fd(i, j) = (smooth_term(plus, c, mu) - smooth_term(minus, c, mu)) / (2.0 * h);
            }
        }
        CHECK((grad - fd).norm() / fd.norm() < 1e-5);
    }
}

TEST_CASE("gradient is symmetric and both routes agree") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + trial;
        const Matrix c = testing::random_covariance(n, rng);
        const CommutatorPenalty pen(c, 1.7);
        const Matrix dense_s = testing::random_admissible(n, rng);
        const Matrix sparse_s = init_sparse_random(n, 0.1, trial).matrix();
        for (const Matrix* s : {&dense_s, &sparse_s}) {
            const Matrix g = pen.gradient(*s);
            CHECK((g - g.transpose()).norm() <= 1e-10 * std::max(1.0, g.norm()));
            const Matrix gd = pen.gradient_dense(*s);
            const Matrix gs = pen.gradient_sparse(*s);
            CHECK((gd - gs).norm() <= 1e-10 * std::max(1.0, gd.norm()));
        }
    }
}

TEST_CASE("lipschitz constant examples") {
    CHECK(lipschitz_constant(Matrix::Identity(3, 3), 1.0) == doctest::Approx(4.0));
    Matrix d = Matrix::Zero(2, 2);
    d.diagonal() << 3, 1;
    CHECK(lipschitz_constant(d, 0.5) == doctest::Approx(18.0));
    CHECK(lipschitz_constant(p3_cov(), 1.0) == doctest::Approx(33.97).epsilon(1e-3));
}

TEST_CASE("lipschitz constant bounds the gradient change") {
    Rng rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix c = testing::random_covariance(6, rng);
        const CommutatorPenalty pen(c, 2.0);
        const Matrix a = testing::random_symmetric(6, rng);
        const Matrix b = testing::random_symmetric(6, rng);
        CHECK((pen.gradient(a) - pen.gradient(b)).norm() <= pen.lipschitz() * (a - b).norm() * (1 + 1e-12));
    }
}

TEST_CASE("prox entrywise examples") {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 1) = m(1, 0) = 0.5;
    m(0, 2) = m(2, 0) = 0.1;
    m(1, 2) = m(2, 1) = -5.0;
    m(1, 1) = 7.0;
    const Gso out = prox(m, 0.2, omega(1, 2));
    CHECK(out(0, 1) == doctest::Approx(0.3));
    CHECK(out(1, 0) == doctest::Approx(0.3));
    CHECK(out(0, 2) == 0.0);
    CHECK(out(1, 1) == 0.0);
    CHECK(out(1, 2) == 1.0);
    CHECK(out(2, 1) == 1.0);
    CHECK_THROWS_AS(prox(m, 0.0, {}), Error);
}

TEST_CASE("prox symmetrizes asymmetric input with a warning") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 0.6;
    WarningCapture cap;
    const Gso out = prox(m, 0.1, {});
    CHECK(cap.contains("not symmetric"));
    CHECK(out(0, 1) == doctest::Approx(0.7));
    CHECK(out(1, 0) == out(0, 1));
}

TEST_CASE("prox agrees with a grid-search minimizer on 3x3") {
    Rng rng(7);
    for (int trial = 0; trial < 4; ++trial) {
        const Matrix m = testing::random_symmetric(3, rng);
        const double alpha = 0.1 + 0.3 * rng.uniform01();
        const Gso p = prox(m, alpha, {});

        // Coarse pass over the admissible cube, then a fine pass near the best point.
        double best = std::numeric_limits<double>::infinity();
        double ba = 0, bb = 0, bc = 0;
        for (int i = 0; i <= 150; ++i)
            for (int j = 0; j <= 150; ++j)
                for (int k = 0; k <= 150; ++k) {
                    const double a = 0.02 * i, b = 0.02 * j, c = 0.02 * k;
                    const double f = prox_objective(sym3(a, b, c), m, alpha);
                    if (f < best) best = f, ba = a, bb = b, bc = c;
                }
        const double ca = ba, cb = bb, cc = bc;
        for (int i = -30; i <= 30; ++i)
            for (int j = -30; j <= 30; ++j)
                for (int k = -30; k <= 30; ++k) {
                    const double a = ca + 0.001 * i, b = cb + 0.001 * j, c = cc + 0.001 * k;
                    if (a < 0 || b < 0 || c < 0) continue;
                    const double f = prox_objective(sym3(a, b, c), m, alpha);
                    if (f < best) best = f, ba = a, bb = b, bc = c;
                }
        CHECK(std::abs(p(0, 1) - ba) <= 2e-3);
        CHECK(std::abs(p(0, 2) - bb) <= 2e-3);
        CHECK(std::abs(p(1, 2) - bc) <= 2e-3);
    }
}

TEST_CASE("prox output beats random admissible perturbations") {
    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 4 + trial % 3;
        const Matrix m = 2.0 * testing::random_symmetric(n, rng);
        const double alpha = 0.05 + rng.uniform01();
        const EdgeConstraints known = omega(0, 1, 0.7);
        const Gso p = prox(m, alpha, known);
        const double fp = prox_objective(p.matrix(), m, alpha);
        for (int k = 0; k < 1000; ++k) {
            Matrix x = p.matrix();
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    if (known.contains(i, j)) continue;
                    x(i, j) = x(j, i) = std::max(0.0, x(i, j) + 0.1 * rng.normal());
                }
            REQUIRE(fp <= prox_objective(x, m, alpha) + 1e-12);
        }
    }
}

TEST_CASE("step policies") {
    CHECK(resolve_step(StepPolicy::lipschitz(), 4.0) == 0.25);
    CHECK(resolve_step(StepPolicy::optimal_strongly_convex(1.0), 3.0) == 0.5);
    CHECK(resolve_step(StepPolicy::fixed(0.4), 4.0) == 0.4);
    CHECK_THROWS_AS(resolve_step(StepPolicy::fixed(0.5), 4.0), Error);
    CHECK_THROWS_AS(resolve_step(StepPolicy::optimal_strongly_convex(5.0), 4.0), Error);
    for (const char* text : {"lipschitz", "optimal_sc=0.25", "fixed=0.001"}) {
        CHECK(format_step_policy(parse_step_policy(text)) == text);
    }
    CHECK_THROWS_AS(parse_step_policy("fast"), Error);
}

TEST_CASE("pg_step examples") {
    Rng rng(9);
    const Matrix s = testing::random_admissible(4, rng);
    SolverConfig cfg;
    cfg.mu = 1.0;
    const Gso shrunk = pg_step(Gso(s), Matrix::Identity(4, 4), cfg, {});
    CHECK((shrunk.matrix() - prox(s, 0.25, {}).matrix()).norm() == 0.0);

    const Matrix c = testing::random_covariance(4, rng);
    const Gso one = pg_step(Gso(4), c, cfg, omega(0, 1));
    Matrix expect = Matrix::Zero(4, 4);
    expect(0, 1) = expect(1, 0) = 1.0;
    CHECK(one.matrix() == expect);

    cfg.step = StepPolicy::fixed(1.0);  // far above 2/M for this covariance
    CHECK_THROWS_AS(pg_step(Gso(s), c, cfg, {}), Error);
    try {
        pg_step(Gso(s), c, cfg, {});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Configuration);
    }
}

TEST_CASE("solver configuration validation") {
    SolverConfig cfg;
    cfg.mu = 0.0;
    CHECK_THROWS_AS(cfg.check(), Error);
    cfg = SolverConfig{};
    cfg.max_iters = 0;
    CHECK_THROWS_AS(cfg.check(), Error);
    cfg = SolverConfig{};
    cfg.rel_tol = 0.0;
    CHECK_THROWS_AS(cfg.check(), Error);
}

TEST_CASE("identity covariance gives the l1 minimizer at once") {
    WarningCapture cap;
    SolverConfig cfg;
    const auto res = batch_solve(Matrix::Identity(5, 5), cfg, {});
    CHECK(res.estimate.matrix().norm() == 0.0);
    CHECK(res.iterations == 1);
    CHECK(res.converged);
    CHECK(cap.contains("degenerate"));
    CHECK(cap.contains("no known edges"));
}

TEST_CASE("path graph recovery agrees with a projected-gradient oracle") {
    const Matrix c = p3_cov();
    const double mu = 100.0;

    // Oracle: with s01 = 1 fixed the free variables are s02, s12 >= 0 and the
    // objective is smooth on that orthant (the l1 term is 2 s02 + 2 s12 + 2).
    auto f = [&](double a, double b) { return 2.0 * (1.0 + a + b) + smooth_term(sym3(1.0, a, b), c, mu); };
    double a = 0.5, b = 0.5;
    const double eta = 1e-4;
    for (int it = 0; it < 200000; ++it) {
        const double h = 1e-7;
        const double ga = (f(a + h, b) - f(a - h, b)) / (2 * h);
        const double gb = (f(a, b + h) - f(a, b - h)) / (2 * h);
        a = std::max(0.0, a - eta * ga);
        b = std::max(0.0, b - eta * gb);
    }
    REQUIRE(a < 0.1);
    REQUIRE(b > 0.1);

    SolverConfig cfg;
    cfg.mu = mu;
    cfg.max_iters = 200000;
    cfg.rel_tol = 1e-14;
    cfg.accelerated = true;
    const auto res = batch_solve(c, cfg, omega(0, 1));
    const auto edges = support(res.estimate, 0.1);
    REQUIRE(edges.size() == 2);
    CHECK(edges[0] == Edge(0, 1));
    CHECK(edges[1] == Edge(1, 2));
    CHECK(res.estimate(0, 2) == doctest::Approx(a).epsilon(1e-3).scale(1.0));
    CHECK(res.estimate(1, 2) == doctest::Approx(b).epsilon(1e-3).scale(1.0));
}

TEST_CASE("plain and accelerated runs descend and stay admissible") {
    Rng rng(10);
    for (bool accelerated : {false, true}) {
        for (int trial = 0; trial < 3; ++trial) {
            const int n = 6 + 2 * trial;
            const Matrix c = testing::random_covariance(n, rng);
            SolverConfig cfg;
            cfg.mu = 5.0;
            cfg.max_iters = 3000;
            cfg.accelerated = accelerated;
            cfg.init_seed = trial;
            const EdgeConstraints known = omega(0, 1, 0.8);
            const auto res = batch_solve(c, cfg, known);
            REQUIRE(res.objective.size() == std::size_t(res.iterations + 1));
            // S_0 need not satisfy the known edges, so descent is checked from S_1 on.
            for (std::size_t k = 1; k < res.objective.size(); ++k) {
                REQUIRE(std::isfinite(res.objective[k]));
                if (k >= 2) REQUIRE(res.objective[k] <= res.objective[k - 1] + 1e-10);
            }
            CHECK(validate(res.estimate).empty());
            CHECK(matches_constraints(res.estimate, known));
        }
    }
}

TEST_CASE("every plain iterate is admissible and matches the constraints") {
    Rng rng(11);
    const Matrix c = testing::random_covariance(7, rng);
    const CommutatorPenalty pen(c, 3.0);
    const double gamma = 1.0 / pen.lipschitz();
    EdgeConstraints known = omega(2, 5, 1.5);
    known.add(0, 6, 0.0);
    Gso s = init_sparse_random(7, 0.3, 4);
    double previous = objective(s.matrix(), pen).total;
    for (int k = 0; k < 200; ++k) {
        s = pg_step(s, pen, gamma, known);
        REQUIRE(validate(s).empty());
        REQUIRE(matches_constraints(s, known));
        const double now = objective(s.matrix(), pen).total;
        if (k > 0) REQUIRE(now <= previous + 1e-10);
        previous = now;
    }
}

TEST_CASE("converged solution is a fixed point") {
    Rng rng(12);
    const Matrix c = testing::random_covariance(6, rng);
    SolverConfig cfg;
    cfg.mu = 2.0;
    cfg.max_iters = 100000;
    cfg.rel_tol = 1e-15;
    cfg.iterate_tol = 1e-12;
    const auto res = batch_solve(c, cfg, omega(0, 1));
    REQUIRE(res.converged);
    const Gso again = pg_step(res.estimate, c, cfg, omega(0, 1));
    CHECK((again.matrix() - res.estimate.matrix()).norm() <= 1e-8);
}

TEST_CASE("larger mu shrinks the commutator residual") {
    const auto g = erdos_renyi(10, 3.0, 2);
    const auto batch = generate(g.gso(), FilterSpec{{1.0, 0.6, 0.2}}, 2000, 3);
    const Matrix c = sample_covariance(batch.rows);
    const double scale = std::pow(lambda_max(c), 2);
    EdgeConstraints known;
    known.add(g.edges()[0].edge.i, g.edges()[0].edge.j, g.edges()[0].weight);
    double previous = std::numeric_limits<double>::infinity();
    // Below mu' = 100 the l1 term wins and only the known edge survives.
    for (double mu : {1e2, 1e3, 1e4}) {
        SolverConfig cfg;
        cfg.mu = mu / scale;
        cfg.max_iters = 200000;
        cfg.rel_tol = 1e-14;
        cfg.accelerated = true;
        const auto res = batch_solve(c, cfg, known);
        const Matrix& s = res.estimate.matrix();
        const double residual = (s * c - c * s).norm();
        CHECK(residual < previous);
        previous = residual;
    }
}
