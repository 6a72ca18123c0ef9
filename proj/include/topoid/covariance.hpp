#ifndef TOPOID_COVARIANCE_HPP
#define TOPOID_COVARIANCE_HPP

#include <deque>
#include <optional>
#include <string>
#include <variant>

#include "topoid/diffusion.hpp"

namespace topoid {

struct InfiniteMemory {};

/// C_t = beta * C_{t-1} + (1 - beta) * y y^T.
struct Ewma {
    double beta = 0.99;
};

/// Average of the last W outer products.
struct SlidingWindow {
    int width = 1;
};

using CovarianceMode = std::variant<InfiniteMemory, Ewma, SlidingWindow>;

/// Parses "infinite", "ewma=BETA" or "window=W".
CovarianceMode parse_covariance_mode(const std::string& text);
std::string format_covariance_mode(const CovarianceMode& mode);

/**
 * Streaming estimate of E[y y^T].
 *
 * Infinite memory follows the rank-one recursion
 *   C_t = ((t - 1) C_{t-1} + y_t y_t^T) / t,
 * where t counts every sample seen, warm-up included. Window mode keeps the
 * last W signals and refreshes the running sum from the buffer every W
 * updates so subtraction error cannot accumulate.
 */
class CovEstimator {
public:
    /// Warm-up average of the batch rows; count starts at the batch size.
    static CovEstimator from_warmup(const Matrix& warmup, CovarianceMode mode = InfiniteMemory{});
    /// scale * I with count 0.
    static CovEstimator from_scale(int n, double scale, CovarianceMode mode = InfiniteMemory{});
    /// Dispatches on which of warmup / scale is present; exactly one must be.
    static CovEstimator init(int n, const std::optional<Matrix>& warmup, std::optional<double> scale,
                             CovarianceMode mode = InfiniteMemory{});

    void update(const Vector& y);
    /// Folds every row of `signals` through update(), in order.
    void update_batch(const Matrix& signals);

    int n() const { return static_cast<int>(current_.rows()); }
    const Matrix& current() const { return current_; }
    std::int64_t count() const { return count_; }
    const CovarianceMode& mode() const { return mode_; }
    std::size_t buffered() const { return buffer_.size(); }

    /// Largest eigenvalue of current(), warm-started from the previous call.
    double lambda_max() const;

private:
    CovEstimator(Matrix initial, std::int64_t count, CovarianceMode mode);
    void resymmetrize();

    CovarianceMode mode_;
    Matrix current_;
    std::int64_t count_ = 0;
    // Window mode only.
    std::deque<Vector> buffer_;
    Matrix window_sum_;
    int updates_since_refresh_ = 0;
    mutable Vector top_vector_;
};

/**
 * Largest eigenvalue of a symmetric PSD matrix to ~1e-10 relative accuracy.
 * Runs power iteration (optionally from `start`, which is overwritten with
 * the final iterate); falls back to a full symmetric eigensolve when the
 * iteration stalls and n <= 512.
 */
double lambda_max(const Matrix& c, Vector* start = nullptr);

}  // namespace topoid

#endif  // TOPOID_COVARIANCE_HPP
