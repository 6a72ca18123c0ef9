#include "topoid/solver.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "topoid/covariance.hpp"

namespace topoid {

namespace {

struct Evaluation {
    double smooth = 0.0;
    Matrix grad;
};

bool exactly_symmetric(const Matrix& s) { return asymmetry(s) == 0.0; }

double l1_norm(const Matrix& s) { return s.cwiseAbs().sum(); }

// One commutator product serves both the value and the gradient.
Evaluation evaluate(const CommutatorPenalty& p, const Matrix& s) {
    Evaluation out;
    const Matrix& c = p.cov();
    if (exactly_symmetric(s)) {
        const Eigen::Index nnz = (s.array() != 0.0).count();
        if (nnz <= s.rows()) {
            out.grad = p.gradient_sparse(s);
            Matrix sc = Matrix::Zero(s.rows(), s.cols());
            for (Eigen::Index j = 0; j < s.cols(); ++j) {
                for (Eigen::Index i = 0; i < s.rows(); ++i) {
                    if (s(i, j) != 0.0) sc.row(i) += s(i, j) * c.row(j);
                }
            }
            const Matrix r = sc - sc.transpose();
            out.smooth = 0.5 * p.mu() * r.squaredNorm();
            return out;
        }
        const Matrix sc = s * c;
        const Matrix r = sc - sc.transpose();
        const Matrix rc = r * c;
        out.smooth = 0.5 * p.mu() * r.squaredNorm();
        // R is antisymmetric, so C R = -(R C)^T.
        out.grad = p.mu() * (rc + rc.transpose());
        return out;
    }
    const Matrix r = s * c - c * s;
    out.smooth = 0.5 * p.mu() * r.squaredNorm();
    out.grad = p.mu() * (r * c - c * r);
    return out;
}

void check_dims(const Matrix& s, const Matrix& c) {
    if (s.rows() != s.cols() || c.rows() != c.cols() || s.rows() != c.rows()) {
        throw Error(ErrorCode::Dimension, "dimension mismatch between iterate and covariance");
    }
}

void check_finite(double v, const char* where) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, std::string(where) + ": non-finite objective value");
}

}  // namespace

std::string format_step_policy(const StepPolicy& policy) {
    switch (policy.kind) {
        case StepKind::Lipschitz: return "lipschitz";
        case StepKind::OptimalStrongly: return "optimal_sc=" + format_double(policy.value);
        case StepKind::Fixed: return "fixed=" + format_double(policy.value);
    }
    return "lipschitz";
}

StepPolicy parse_step_policy(const std::string& text) {
    if (text == "lipschitz") return StepPolicy::lipschitz();
    const auto eq = text.find('=');
    if (eq != std::string::npos) {
        const std::string key = text.substr(0, eq);
        const std::string val = text.substr(eq + 1);
        char* end = nullptr;
        const double x = std::strtod(val.c_str(), &end);
        const bool ok = end != val.c_str() && *end == '\0' && x > 0.0 && std::isfinite(x);
        if (ok && key == "fixed") return StepPolicy::fixed(x);
        if (ok && key == "optimal_sc") return StepPolicy::optimal_strongly_convex(x);
    }
    throw Error(ErrorCode::Parameter, "step policy: expected lipschitz, optimal_sc=M or fixed=GAMMA, got '" + text + "'");
}

void SolverConfig::check() const {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw Error(ErrorCode::Configuration, "solver: mu must be positive");
    if (max_iters < 1) throw Error(ErrorCode::Configuration, "solver: max_iters must be >= 1");
    if (!(rel_tol > 0.0)) throw Error(ErrorCode::Configuration, "solver: rel_tol must be positive");
    if (iterate_tol < 0.0) throw Error(ErrorCode::Configuration, "solver: iterate_tol must be >= 0");
    if (!(init_density > 0.0) || init_density > 1.0) {
        throw Error(ErrorCode::Configuration, "solver: init_density must lie in (0, 1]");
    }
    if (step.kind != StepKind::Lipschitz && !(step.value > 0.0)) {
        throw Error(ErrorCode::Configuration, "solver: step policy parameter must be positive");
    }
}

CommutatorPenalty::CommutatorPenalty(const Matrix& cov, double mu, std::optional<double> lambda_max_value)
    : cov_(cov), mu_(mu) {
    if (cov.rows() != cov.cols()) throw Error(ErrorCode::Dimension, "covariance must be square");
    if (!(mu > 0.0)) throw Error(ErrorCode::Configuration, "mu must be positive");
    if (asymmetry(cov_) > 1e-12 * std::max(1.0, cov_.cwiseAbs().maxCoeff())) {
        warn("covariance is not symmetric; symmetrizing");
        cov_ = symmetrized(cov_);
    }
    cov_sq_ = cov_ * cov_;
    lambda_max_ = lambda_max_value ? *lambda_max_value : topoid::lambda_max(cov_);
}

bool CommutatorPenalty::degenerate() const {
    const Eigen::Index n = cov_.rows();
    if (n == 0) return true;
    const double d = cov_.diagonal().mean();
    const double scale = std::max(std::abs(d), cov_.cwiseAbs().maxCoeff());
    if (scale == 0.0) return true;
    return (cov_ - d * Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-14 * scale;
}

double CommutatorPenalty::value(const Matrix& s) const {
    check_dims(s, cov_);
    return 0.5 * mu_ * (s * cov_ - cov_ * s).squaredNorm();
}

Matrix CommutatorPenalty::gradient(const Matrix& s) const {
    check_dims(s, cov_);
    return evaluate(*this, s).grad;
}

Matrix CommutatorPenalty::gradient_dense(const Matrix& s) const {
    check_dims(s, cov_);
    const Matrix r = s * cov_ - cov_ * s;
    return mu_ * (r * cov_ - cov_ * r);
}

Matrix CommutatorPenalty::gradient_sparse(const Matrix& s) const {
    check_dims(s, cov_);
    const Eigen::Index n = s.rows();
    Matrix csc = Matrix::Zero(n, n);
    Matrix s_csq = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double w = s(i, j);
            if (w == 0.0) continue;
            // C S C = sum_ij S_ij c_i c_j^T and (S C^2)_i. = sum_j S_ij (C^2)_j.
            csc.noalias() += w * cov_.col(i) * cov_.row(j);
            s_csq.row(i) += w * cov_sq_.row(j);
        }
    }
    return mu_ * (s_csq + s_csq.transpose() - 2.0 * csc);
}

ObjectiveValue objective(const Matrix& s, const CommutatorPenalty& penalty) {
    check_dims(s, penalty.cov());
    ObjectiveValue v;
    v.l1 = l1_norm(s);
    v.smooth = penalty.value(s);
    v.total = v.l1 + v.smooth;
    return v;
}

ObjectiveValue objective(const Gso& s, const Matrix& cov, double mu) {
    check_dims(s.matrix(), cov);
    ObjectiveValue v;
    v.l1 = l1_norm(s.matrix());
    v.smooth = 0.5 * mu * (s.matrix() * cov - cov * s.matrix()).squaredNorm();
    v.total = v.l1 + v.smooth;
    return v;
}

Matrix gradient(const Gso& s, const Matrix& cov, double mu) {
    check_dims(s.matrix(), cov);
    return CommutatorPenalty(cov, mu).gradient(s.matrix());
}

double lipschitz_constant(const Matrix& cov, double mu) {
    const double lmax = lambda_max(cov);
    return 4.0 * mu * lmax * lmax;
}

Gso prox(const Matrix& m_in, double alpha, const EdgeConstraints& constraints) {
    if (m_in.rows() != m_in.cols()) throw Error(ErrorCode::Dimension, "prox: matrix must be square");
    if (!(alpha > 0.0)) throw Error(ErrorCode::Parameter, "prox: alpha must be positive");
    if (constraints.max_index() >= m_in.rows()) {
        throw Error(ErrorCode::Dimension, "prox: known edge refers to a vertex outside the matrix");
    }
    const Matrix* m = &m_in;
    Matrix sym;
    if (asymmetry(m_in) > 1e-12) {
        warn("prox: input is not symmetric; symmetrizing");
        sym = symmetrized(m_in);
        m = &sym;
    }
    const Eigen::Index n = m->rows();
    Matrix z(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        z(j, j) = 0.0;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            // Read the upper triangle only so the output is exactly symmetric
            // even when the input carries sub-tolerance asymmetry.
            const double v = std::max(0.0, (*m)(j, i) - alpha);
            z(i, j) = v;
            z(j, i) = v;
        }
    }
    for (const auto& [e, s] : constraints) {
        z(e.i, e.j) = s;
        z(e.j, e.i) = s;
    }
    return Gso(std::move(z));
}

double resolve_step(const StepPolicy& policy, double lipschitz) {
    if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) {
        throw Error(ErrorCode::Configuration, "step size: Lipschitz constant must be positive and finite");
    }
    double gamma = 0.0;
    switch (policy.kind) {
        case StepKind::Lipschitz: gamma = 1.0 / lipschitz; break;
        case StepKind::OptimalStrongly:
            if (!(policy.value > 0.0) || policy.value > lipschitz) {
                throw Error(ErrorCode::Configuration, "step size: strong-convexity constant must lie in (0, M]");
            }
            gamma = 2.0 / (policy.value + lipschitz);
            break;
        case StepKind::Fixed: gamma = policy.value; break;
    }
    if (!(gamma > 0.0) || gamma * lipschitz >= 2.0) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "step size: gamma = %.6g violates gamma < 2/M = %.6g", gamma, 2.0 / lipschitz);
        throw Error(ErrorCode::Configuration, buf);
    }
    return gamma;
}

Gso pg_step(const Gso& s, const CommutatorPenalty& penalty, double gamma, const EdgeConstraints& constraints) {
    check_dims(s.matrix(), penalty.cov());
    return prox(s.matrix() - gamma * penalty.gradient(s.matrix()), gamma, constraints);
}

Gso pg_step(const Gso& s, const Matrix& cov, const SolverConfig& config, const EdgeConstraints& constraints) {
    config.check();
    const CommutatorPenalty penalty(cov, config.mu);
    const double gamma = resolve_step(config.step, penalty.lipschitz());
    return pg_step(s, penalty, gamma, constraints);
}

SolveResult batch_solve(const Matrix& cov, const SolverConfig& config, const EdgeConstraints& constraints,
                        const std::optional<Gso>& s0) {
    config.check();
    return batch_solve(CommutatorPenalty(cov, config.mu), config, constraints, s0);
}

SolveResult batch_solve(const CommutatorPenalty& penalty, const SolverConfig& config,
                        const EdgeConstraints& constraints, const std::optional<Gso>& s0) {
    config.check();
    if (penalty.mu() != config.mu) throw Error(ErrorCode::Configuration, "batch_solve: penalty mu differs from config");
    const int n = penalty.n();
    if (s0 && s0->n() != n) throw Error(ErrorCode::Dimension, "batch_solve: s0 dimension differs from covariance");
    if (constraints.max_index() >= n) throw Error(ErrorCode::Dimension, "batch_solve: known edge outside the graph");

    WarningCapture capture(/*forward=*/true);
    SolveResult result;
    Gso x = s0 ? *s0 : init_sparse_random(n, config.init_density, config.init_seed);

    if (constraints.empty()) {
        warn("batch_solve: no known edges; S = 0 minimizes the objective and is returned up to solver tolerance");
    }

    if (penalty.degenerate()) {
        // g vanishes identically: the l1 minimizer over the admissible set is
        // the Ω-clamped zero matrix, i.e. the prox with an unbounded threshold.
        warn("batch_solve: degenerate covariance (multiple of the identity); the problem is uninformative");
        result.objective.push_back(objective(x.matrix(), penalty).total);
        result.estimate = prox(x.matrix(), std::numeric_limits<double>::infinity(), constraints);
        result.objective.push_back(objective(result.estimate.matrix(), penalty).total);
        result.iterations = 1;
        result.converged = true;
        result.step = penalty.lipschitz() > 0.0 ? 1.0 / penalty.lipschitz() : 0.0;
        result.warnings = capture.messages();
        return result;
    }

    const double gamma = resolve_step(config.step, penalty.lipschitz());
    result.step = gamma;

    Evaluation ex = evaluate(penalty, x.matrix());
    double fx = l1_norm(x.matrix()) + ex.smooth;
    check_finite(fx, "batch_solve");
    result.objective.push_back(fx);

    Gso x_prev = x;
    int momentum_k = 1;
    for (int k = 0; k < config.max_iters; ++k) {
        Gso next;
        Evaluation en;
        double fn;
        if (config.accelerated && k > 0 && momentum_k > 1) {
            const double beta = double(momentum_k - 1) / double(momentum_k + 2);
            const Matrix y = x.matrix() + beta * (x.matrix() - x_prev.matrix());
            const Evaluation ey = evaluate(penalty, y);
            next = prox(y - gamma * ey.grad, gamma, constraints);
            en = evaluate(penalty, next.matrix());
            fn = l1_norm(next.matrix()) + en.smooth;
            if (!(fn <= fx)) {
                // Function-value restart: fall back to a plain step from x.
                next = prox(x.matrix() - gamma * ex.grad, gamma, constraints);
                en = evaluate(penalty, next.matrix());
                fn = l1_norm(next.matrix()) + en.smooth;
                momentum_k = 1;
            }
        } else {
            next = prox(x.matrix() - gamma * ex.grad, gamma, constraints);
            en = evaluate(penalty, next.matrix());
            fn = l1_norm(next.matrix()) + en.smooth;
        }
        ++momentum_k;
        check_finite(fn, "batch_solve");
        const double change = (next.matrix() - x.matrix()).norm();
        x_prev = std::move(x);
        x = std::move(next);
        ex = std::move(en);
        fx = fn;
        result.objective.push_back(fx);
        result.iterations = k + 1;

        const std::size_t len = result.objective.size();
        if (len > 5) {
            const double old = result.objective[len - 6];
            const bool objective_flat = std::abs(fx - old) / std::max(1.0, old) < config.rel_tol;
            const bool iterate_flat = config.iterate_tol <= 0.0 || change <= config.iterate_tol;
            if (objective_flat && iterate_flat) {
                result.converged = true;
                break;
            }
        }
    }
    result.estimate = std::move(x);
    result.warnings = capture.messages();
    return result;
}

}  // namespace topoid
