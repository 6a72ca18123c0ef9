#include "topoid/diffusion.hpp"

#include <cmath>

namespace topoid {

void FilterSpec::check() const {
    if (coeffs.empty()) throw Error(ErrorCode::Parameter, "FilterSpec: at least one tap required");
    bool nonzero = false;
    for (double h : coeffs) {
        if (!std::isfinite(h)) throw Error(ErrorCode::Parameter, "FilterSpec: non-finite coefficient");
        nonzero = nonzero || h != 0.0;
    }
    if (!nonzero) throw Error(ErrorCode::Parameter, "FilterSpec: all coefficients are zero");
}

FilterSpec FilterSpec::random_uniform(int taps, std::uint64_t seed) {
    if (taps < 1) throw Error(ErrorCode::Parameter, "FilterSpec: taps must be >= 1");
    Rng rng(seed);
    FilterSpec spec;
    for (int l = 0; l < taps; ++l) spec.coeffs.push_back(rng.uniform01());
    return spec;
}

Matrix build_filter(const Gso& gso, const FilterSpec& spec) {
    spec.check();
    const int n = gso.n();
    if (spec.order() > n) {
        warn("build_filter: filter order " + std::to_string(spec.order()) + " exceeds N = " +
             std::to_string(n) + "; higher taps are redundant by Cayley-Hamilton");
    }
    const Matrix& s = gso.matrix();
    Matrix h = spec.coeffs.back() * Matrix::Identity(n, n);
    for (int l = spec.order() - 2; l >= 0; --l) {
        h = h * s;
        h.diagonal().array() += spec.coeffs[l];
    }
    return symmetrized(h);
}

Matrix ensemble_covariance(const Gso& gso, const FilterSpec& spec) {
    const Matrix h = build_filter(gso, spec);
    return symmetrized(h * h);
}

Vector frequency_response(const Gso& gso, const FilterSpec& spec) {
    spec.check();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(gso.matrix()), Eigen::EigenvaluesOnly);
    const Vector& lambda = eig.eigenvalues();
    Vector out = Vector::Constant(lambda.size(), spec.coeffs.back());
    for (int l = spec.order() - 2; l >= 0; --l) {
        out = out.cwiseProduct(lambda);
        out.array() += spec.coeffs[l];
    }
    return out;
}

DiffusionSource::DiffusionSource(Matrix filter, std::uint64_t seed) : rng_(seed) { set_filter(std::move(filter)); }

void DiffusionSource::set_filter(Matrix filter) {
    if (filter.rows() != filter.cols()) throw Error(ErrorCode::Dimension, "DiffusionSource: filter must be square");
    if (filter_.size() != 0 && filter.rows() != filter_.rows()) {
        throw Error(ErrorCode::Dimension, "DiffusionSource: filter dimension cannot change mid-stream");
    }
    filter_ = std::move(filter);
    input_.resize(filter_.rows());
}

Vector DiffusionSource::next() {
    for (Eigen::Index k = 0; k < input_.size(); ++k) input_(k) = rng_.normal();
    return filter_ * input_;
}

Matrix DiffusionSource::next_batch(int count) {
    Matrix out(count, filter_.rows());
    for (int t = 0; t < count; ++t) out.row(t) = next().transpose();
    return out;
}

SignalBatch generate(const Gso& gso, const FilterSpec& spec, int t_count, std::uint64_t seed) {
    if (t_count < 1) throw Error(ErrorCode::Parameter, "generate: t_count must be >= 1");
    DiffusionSource source(build_filter(gso, spec), seed);
    return SignalBatch{source.next_batch(t_count), seed};
}

Matrix sample_covariance(const Matrix& signals) {
    if (signals.rows() == 0) throw Error(ErrorCode::Parameter, "sample_covariance: no signals");
    return symmetrized(signals.transpose() * signals / static_cast<double>(signals.rows()));
}

}  // namespace topoid
