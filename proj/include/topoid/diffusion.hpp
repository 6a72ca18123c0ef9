#ifndef TOPOID_DIFFUSION_HPP
#define TOPOID_DIFFUSION_HPP

#include <cstdint>
#include <vector>

#include "topoid/graph_model.hpp"

namespace topoid {

/// Polynomial graph filter H = sum_l coeffs[l] * S^l.
struct FilterSpec {
    std::vector<double> coeffs;

    int order() const { return static_cast<int>(coeffs.size()); }

    /// Throws ErrorCode::Parameter when empty, all-zero or non-finite.
    void check() const;

    /// `taps` coefficients drawn uniform on [0, 1).
    static FilterSpec random_uniform(int taps, std::uint64_t seed);
};

/// T x N observations, one signal per row.
struct SignalBatch {
    Matrix rows;
    std::uint64_t seed = 0;

    Eigen::Index count() const { return rows.rows(); }
    Eigen::Index dimension() const { return rows.cols(); }
};

/// Horner evaluation of the filter polynomial. Warns when the order exceeds N.
Matrix build_filter(const Gso& gso, const FilterSpec& spec);

/// C_y = H^2 for white unit-variance input.
Matrix ensemble_covariance(const Gso& gso, const FilterSpec& spec);

/// Frequency response sum_l h_l lambda_i^l at each GSO eigenvalue (ascending).
Vector frequency_response(const Gso& gso, const FilterSpec& spec);

/**
 * Streaming source of filtered white noise y = H x, x ~ N(0, I).
 *
 * Inputs come from Rng::normal (Marsaglia polar over mt19937_64), drawn
 * x_0..x_{N-1} in order for each signal, so a given seed yields the same
 * signals regardless of how they are batched. The filter can be swapped
 * mid-stream (topology changes) without disturbing the input sequence.
 */
class DiffusionSource {
public:
    DiffusionSource(Matrix filter, std::uint64_t seed);

    int dimension() const { return static_cast<int>(filter_.rows()); }
    const Matrix& filter() const { return filter_; }
    void set_filter(Matrix filter);

    Vector next();
    Matrix next_batch(int count);

private:
    Matrix filter_;
    Rng rng_;
    Vector input_;
};

/// t_count signals from a fresh DiffusionSource.
SignalBatch generate(const Gso& gso, const FilterSpec& spec, int t_count, std::uint64_t seed);

/// (1/T) sum_t y_t y_t^T over the rows of `signals`.
Matrix sample_covariance(const Matrix& signals);

}  // namespace topoid

#endif  // TOPOID_DIFFUSION_HPP
