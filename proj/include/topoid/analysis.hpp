#ifndef TOPOID_ANALYSIS_HPP
#define TOPOID_ANALYSIS_HPP

#include <optional>
#include <string>
#include <vector>

#include "topoid/graph_model.hpp"
#include "topoid/trace.hpp"

namespace topoid {

/// Column-wise Kronecker product V ⊙ V (N^2 x N); column k is v_k ⊗ v_k.
Matrix khatri_rao_self(const Matrix& v);

/**
 * Rows of V ⊙ V indexed by the diagonal of vec(S): W_D = V ∘ V (entrywise
 * square), built directly without forming the N^2 x N product.
 * Warns when V is not orthonormal to 1e-8.
 */
Matrix diagonal_rows(const Matrix& v);

/// Rows of V ⊙ V for the known entries: row (i, j) is V.row(i) ∘ V.row(j).
Matrix known_rows(const Matrix& v, const EdgeConstraints& constraints);

/// Numerical rank with threshold rank_tol * max(sigma_max, reference).
int numerical_rank(const Matrix& a, double rank_tol, double reference = 0.0);

struct FeasibilityReport {
    int n = 0;
    int rank_wd = 0;
    int k = 0;          ///< N - rank(W_D): dimension of the eigenvalue kernel
    Matrix kernel;      ///< U, N x k orthonormal basis of ker(W_D)
    int rank_wmu = 0;   ///< rank(W_Ω U)
    bool singleton = false;
    Vector wd_singular_values;
    std::vector<std::string> notes;
};

/// Eigenvalue-parameterization test for uniqueness of the admissible commuting GSO.
FeasibilityReport feasibility(const Matrix& v, const EdgeConstraints& constraints, double rank_tol = 1e-8);

/// Eigenvectors (columns, ascending eigenvalues) of a symmetric matrix.
Matrix eigenvectors(const Matrix& sym);

enum class ConvexityMethod {
    Auto,        ///< Projection for N <= 40, secular otherwise
    Projection,  ///< dense restriction of Psi^T Psi to the hollow symmetric subspace
    Secular,     ///< O(N^4) bisection on the eliminated diagonal (needs invertible V ∘ V)
};

struct ConvexityCertificate {
    bool full_rank = false;
    /// Smallest singular value of Psi restricted to off-diagonal coordinates.
    double sigma_min = 0.0;
    /// Smallest squared eigen-gap min_{a != b} (lambda_a - lambda_b)^2, the
    /// antisymmetric part of the spectrum.
    double min_gap = 0.0;
    /// Constant used by the bounds: mu * sigma_min^2.
    double m = 0.0;
    /// sigma_min itself, reported alongside m.
    double m_literal = 0.0;
    double rank_threshold = 0.0;
    std::string method;
    std::vector<std::string> notes;
};

/**
 * Certifies strong convexity of g(S) = (mu/2)||S C - C S||_F^2 over hollow
 * matrices. Works in the eigenbasis of C, where Psi^T Psi is diagonal with
 * entries (lambda_a - lambda_b)^2, and handles the zero-diagonal restriction
 * by projecting out the diagonal coordinates of V Y V^T. Psi (N^2 x N^2) is
 * never formed.
 */
ConvexityCertificate strong_convexity(const Matrix& cov, double mu, double rank_tol = 1e-8,
                                      ConvexityMethod method = ConvexityMethod::Auto);

/// Psi = C ⊗ I - I ⊗ C, dense. Test and small-N use only.
Matrix commutator_operator(const Matrix& cov);

/// Per-step quantities of the tracking and regret bounds.
struct BoundStep {
    double m = 0.0;       ///< strong-convexity constant of g_t
    double M = 0.0;       ///< Lipschitz constant of grad g_t
    double gamma = 0.0;
    int iters = 1;        ///< PG iterations taken at this step
    double nu = 0.0;      ///< ||S*_{t+1} - S*_t||_F
    bool nu_measured = false;
    bool m_measured = false;

    /// max{|1 - gamma m|, |1 - gamma M|}.
    double contraction() const;
};

struct BoundInputs {
    std::vector<BoundStep> steps;
};

struct TrackingBound {
    /// bound[t] bounds ||S_t - S*_t||_F, t = 0 .. steps.size(); bound[0] = s0_err.
    std::vector<double> recursion;
    /// Geometric-series relaxation; nullopt where max L >= 1.
    std::vector<std::optional<double>> simplified;
};

/**
 * Evaluates e_{t+1} <= L_t^{i_t} e_t + nu_t as a recursion (equal to the
 * product form, without under/overflow) and the simplified bound
 * (L_hat)^t e_0 + nu_hat / (1 - L_hat).
 */
TrackingBound tracking_bound(const BoundInputs& inputs, double s0_err);

/**
 * Per-step bound inputs from a trace. nu_tau is measured when both tau and
 * tau + 1 are checkpoints. Elsewhere the largest nu seen so far is carried
 * forward, where a checkpoint followed by a gap contributes the distance to
 * the next checkpoint optimum divided by the gap length. m is carried as
 * the smallest certified value so far.
 */
BoundInputs assemble_bound_inputs(const RunTrace& trace);

/// sup_{||S||_F <= 1} |g_b(S) - g_a(S)| = (mu/2) ||Psi_b^T Psi_b - Psi_a^T Psi_a||_2, by power iteration.
double smooth_variation(const Matrix& cov_a, const Matrix& cov_b, double mu);

struct RegretReport {
    int steps = 0;
    double measured_average_regret = 0.0;
    double bound = 0.0;             ///< right side with per-step sums
    double bound_simplified = 0.0;  ///< right side with rho_hat, delta_hat
    double radius = 0.0;            ///< ball radius R used for delta
    double rho_hat = 0.0;
    double delta_hat = 0.0;
    double initial_distance = 0.0;  ///< ||S_0 - mean S*||_F
    double objective_drop = 0.0;    ///< F_0(S_0) - F_{t-1}(S_t)
    double sum_delta = 0.0;
    double sum_rho_terms = 0.0;
    bool holds = false;
};

/**
 * Evaluates the dynamic-regret bound for a run that used gamma = 1/M at every
 * step with one PG iteration per step. delta is the sup of |g_{t+1} - g_t| over
 * the Frobenius ball of radius radius_factor * max_t ||S_t||_F.
 * Throws Configuration when the trace used other steps or M_t > M.
 */
RegretReport regret_bound(const RunTrace& trace, double lipschitz_bound, double radius_factor = 2.0);

}  // namespace topoid

#endif  // TOPOID_ANALYSIS_HPP
