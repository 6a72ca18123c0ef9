#ifndef TOPOID_SOLVER_HPP
#define TOPOID_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "topoid/graph_model.hpp"

namespace topoid {

enum class StepKind {
    Lipschitz,        ///< gamma = 1 / M, M = 4 mu lambda_max(C)^2
    OptimalStrongly,  ///< gamma = 2 / (m + M) for a supplied strong-convexity constant m
    Fixed,            ///< user gamma, must satisfy gamma < 2 / M when used
};

struct StepPolicy {
    StepKind kind = StepKind::Lipschitz;
    double value = 0.0;  ///< gamma for Fixed, m for OptimalStrongly

    static StepPolicy lipschitz() { return {}; }
    static StepPolicy optimal_strongly_convex(double m) { return {StepKind::OptimalStrongly, m}; }
    static StepPolicy fixed(double gamma) { return {StepKind::Fixed, gamma}; }
};

std::string format_step_policy(const StepPolicy& policy);
/// "lipschitz", "optimal_sc=M_CONST" or "fixed=GAMMA".
StepPolicy parse_step_policy(const std::string& text);

struct SolverConfig {
    double mu = 1.0;
    StepPolicy step;
    int max_iters = 10000;
    /// Stop when |F_k - F_{k-5}| / max(1, F_{k-5}) < rel_tol.
    double rel_tol = 1e-8;
    /// When positive, additionally require ||S_{k+1} - S_k||_F <= iterate_tol.
    double iterate_tol = 0.0;
    bool accelerated = false;
    /// Start-point parameters when no s0 is given.
    double init_density = 0.1;
    std::uint64_t init_seed = 0;

    void check() const;
};

struct ObjectiveValue {
    double total = 0.0;
    double smooth = 0.0;  ///< (mu / 2) ||S C - C S||_F^2
    double l1 = 0.0;      ///< entrywise sum |S_ij|
};

/**
 * The smooth term g(S) = (mu/2)||S C - C S||_F^2 for a fixed covariance.
 * Caches C^2 for the sparse gradient path and lambda_max(C) for step sizes.
 */
class CommutatorPenalty {
public:
    CommutatorPenalty(const Matrix& cov, double mu, std::optional<double> lambda_max = std::nullopt);

    int n() const { return static_cast<int>(cov_.rows()); }
    double mu() const { return mu_; }
    const Matrix& cov() const { return cov_; }
    double lambda_max() const { return lambda_max_; }
    /// M = 4 mu lambda_max^2.
    double lipschitz() const { return 4.0 * mu_ * lambda_max_ * lambda_max_; }
    /// True when C is a multiple of the identity (every S commutes).
    bool degenerate() const;

    double value(const Matrix& s) const;
    Matrix gradient(const Matrix& s) const;

    /// Dense route: R = S C - C S, grad = mu (R C - C R).
    Matrix gradient_dense(const Matrix& s) const;
    /**
     * Sparse route for symmetric S: grad = mu (S C^2 + C^2 S - 2 C S C), with
     * C S C accumulated from the nonzero pattern of S in O(nnz(S) N^2).
     */
    Matrix gradient_sparse(const Matrix& s) const;

private:
    Matrix cov_;
    Matrix cov_sq_;
    double mu_;
    double lambda_max_;
};

ObjectiveValue objective(const Gso& s, const Matrix& cov, double mu);
ObjectiveValue objective(const Matrix& s, const CommutatorPenalty& penalty);

Matrix gradient(const Gso& s, const Matrix& cov, double mu);

/// M = 4 mu lambda_max(C)^2.
double lipschitz_constant(const Matrix& cov, double mu);

/**
 * Proximal map of alpha ||.||_1 over the admissible set: zero diagonal,
 * Ω entries clamped to their known values, non-negative soft-threshold
 * elsewhere. Asymmetric input (beyond 1e-12) is symmetrized first with a warning.
 */
Gso prox(const Matrix& m, double alpha, const EdgeConstraints& constraints);

/// Resolves the policy against M; throws Configuration when gamma >= 2 / M.
double resolve_step(const StepPolicy& policy, double lipschitz);

/// One proximal-gradient update with an explicit step.
Gso pg_step(const Gso& s, const CommutatorPenalty& penalty, double gamma, const EdgeConstraints& constraints);
/// One proximal-gradient update with the step taken from config.step.
Gso pg_step(const Gso& s, const Matrix& cov, const SolverConfig& config, const EdgeConstraints& constraints);

struct SolveResult {
    Gso estimate;
    std::vector<double> objective;  ///< F(S_k), k = 0 .. iterations
    int iterations = 0;
    bool converged = false;
    double step = 0.0;
    std::vector<std::string> warnings;
};

/**
 * Batch proximal-gradient solve of min_{S admissible} ||S||_1 + g(S).
 * With config.accelerated, uses momentum (k - 1)/(k + 2) and restarts with
 * a plain step whenever the objective would increase, so the recorded
 * trajectory is non-increasing for gamma <= 1/M in both modes.
 */
SolveResult batch_solve(const Matrix& cov, const SolverConfig& config, const EdgeConstraints& constraints,
                        const std::optional<Gso>& s0 = std::nullopt);
SolveResult batch_solve(const CommutatorPenalty& penalty, const SolverConfig& config,
                        const EdgeConstraints& constraints, const std::optional<Gso>& s0 = std::nullopt);

}  // namespace topoid

#endif  // TOPOID_SOLVER_HPP
