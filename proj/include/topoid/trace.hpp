#ifndef TOPOID_TRACE_HPP
#define TOPOID_TRACE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "topoid/solver.hpp"

namespace topoid {

/**
 * One processed online step. With tau = t - 1, `objective` is F_tau(S_tau):
 * the objective of the freshly updated covariance at the iterate entering
 * the step. `objective_after` is F_tau(S_{tau+1}).
 */
struct StepRecord {
    std::int64_t t = 0;
    double objective = 0.0;
    double objective_after = 0.0;
    double gamma = 0.0;
    double lambda_max = 0.0;
    double lipschitz = 0.0;
    int iters = 1;
    int truth_version = 0;
    double iterate_norm = 0.0;  ///< ||S_tau||_F
    std::optional<double> optimum_objective;
    std::optional<double> tracking_error;
    std::optional<double> bound;
    std::optional<double> f_measure;
};

/// Batch reference solution at a checkpoint step.
struct CheckpointRecord {
    std::int64_t t = 0;  ///< step number, matches StepRecord::t
    Matrix optimum;      ///< S*_tau
    double optimum_objective = 0.0;
    double tracking_error = 0.0;  ///< ||S_tau - S*_tau||_F
    int solver_iterations = 0;
    bool solver_converged = false;
    std::optional<double> m;  ///< certified strong-convexity constant
    std::optional<double> sigma_min;
    std::optional<bool> full_rank;
    /// sup_{||S||_F <= 1} |g_{tau+1}(S) - g_tau(S)|, when step t + 1 is also a checkpoint.
    std::optional<double> delta_unit;
};

struct RunTrace {
    int n = 0;
    double mu = 0.0;
    StepPolicy step_policy;
    std::vector<StepRecord> records;
    std::vector<CheckpointRecord> checkpoints;
    Gso initial_iterate;
    Gso final_iterate;
};

}  // namespace topoid

#endif  // TOPOID_TRACE_HPP
