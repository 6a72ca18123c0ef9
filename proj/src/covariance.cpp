#include "topoid/covariance.hpp"

#include <cmath>
#include <cstdlib>

namespace topoid {

namespace {
constexpr double kDriftTolerance = 1e-12;
}

CovarianceMode parse_covariance_mode(const std::string& text) {
    if (text == "infinite") return InfiniteMemory{};
    const auto eq = text.find('=');
    if (eq != std::string::npos) {
        const std::string key = text.substr(0, eq);
        const std::string val = text.substr(eq + 1);
        char* end = nullptr;
        if (key == "ewma") {
            const double beta = std::strtod(val.c_str(), &end);
            if (end == val.c_str() || *end != '\0' || !(beta > 0.0 && beta < 1.0)) {
                throw Error(ErrorCode::Parameter, "covariance mode: ewma beta must lie in (0, 1)");
            }
            return Ewma{beta};
        }
        if (key == "window") {
            const long w = std::strtol(val.c_str(), &end, 10);
            if (end == val.c_str() || *end != '\0' || w < 1) {
                throw Error(ErrorCode::Parameter, "covariance mode: window width must be >= 1");
            }
            return SlidingWindow{static_cast<int>(w)};
        }
    }
    throw Error(ErrorCode::Parameter, "covariance mode: expected infinite, ewma=BETA or window=W, got '" + text + "'");
}

std::string format_covariance_mode(const CovarianceMode& mode) {
    if (std::holds_alternative<Ewma>(mode)) {
        return "ewma=" + format_double(std::get<Ewma>(mode).beta);
    }
    if (std::holds_alternative<SlidingWindow>(mode)) {
        return "window=" + std::to_string(std::get<SlidingWindow>(mode).width);
    }
    return "infinite";
}

CovEstimator::CovEstimator(Matrix initial, std::int64_t count, CovarianceMode mode)
    : mode_(mode), current_(std::move(initial)), count_(count) {
    if (const auto* e = std::get_if<Ewma>(&mode_); e && !(e->beta > 0.0 && e->beta < 1.0)) {
        throw Error(ErrorCode::Parameter, "CovEstimator: ewma beta must lie in (0, 1)");
    }
    if (const auto* w = std::get_if<SlidingWindow>(&mode_); w && w->width < 1) {
        throw Error(ErrorCode::Parameter, "CovEstimator: window width must be >= 1");
    }
    window_sum_ = Matrix::Zero(current_.rows(), current_.cols());
}

CovEstimator CovEstimator::from_warmup(const Matrix& warmup, CovarianceMode mode) {
    if (warmup.rows() == 0 || warmup.cols() == 0) {
        throw Error(ErrorCode::Parameter, "CovEstimator: empty warm-up batch");
    }
    CovEstimator est(sample_covariance(warmup), warmup.rows(), mode);
    if (const auto* w = std::get_if<SlidingWindow>(&est.mode_)) {
        const Eigen::Index first = std::max<Eigen::Index>(0, warmup.rows() - w->width);
        for (Eigen::Index t = first; t < warmup.rows(); ++t) {
            est.buffer_.push_back(warmup.row(t).transpose());
            est.window_sum_ += est.buffer_.back() * est.buffer_.back().transpose();
        }
        if (first > 0) {
            // The window only remembers its last W signals.
            est.current_ = est.window_sum_ / static_cast<double>(est.buffer_.size());
            est.resymmetrize();
        }
    }
    return est;
}

CovEstimator CovEstimator::from_scale(int n, double scale, CovarianceMode mode) {
    if (n < 1) throw Error(ErrorCode::Parameter, "CovEstimator: n must be >= 1");
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw Error(ErrorCode::Parameter, "CovEstimator: scale must be positive and finite");
    }
    return CovEstimator(scale * Matrix::Identity(n, n), 0, mode);
}

CovEstimator CovEstimator::init(int n, const std::optional<Matrix>& warmup, std::optional<double> scale,
                                CovarianceMode mode) {
    const bool has_warmup = warmup.has_value() && warmup->rows() > 0;
    if (has_warmup && scale.has_value()) {
        throw Error(ErrorCode::Parameter, "CovEstimator: provide either a warm-up batch or a scale, not both");
    }
    if (has_warmup) {
        if (warmup->cols() != n) throw Error(ErrorCode::Dimension, "CovEstimator: warm-up width differs from n");
        return from_warmup(*warmup, mode);
    }
    if (scale.has_value()) return from_scale(n, *scale, mode);
    throw Error(ErrorCode::Parameter, "CovEstimator: empty warm-up and no scale");
}

void CovEstimator::update(const Vector& y) {
    if (y.size() != current_.rows()) {
        throw Error(ErrorCode::Dimension, "CovEstimator::update: signal length " + std::to_string(y.size()) +
                                              " differs from n = " + std::to_string(current_.rows()));
    }
    const std::int64_t t = count_ + 1;
    if (std::holds_alternative<InfiniteMemory>(mode_)) {
        const double w = 1.0 / static_cast<double>(t);
        current_ *= static_cast<double>(t - 1) * w;
        current_.noalias() += w * (y * y.transpose());
    } else if (const auto* e = std::get_if<Ewma>(&mode_)) {
        current_ *= e->beta;
        current_.noalias() += (1.0 - e->beta) * (y * y.transpose());
    } else {
        const int width = std::get<SlidingWindow>(mode_).width;
        buffer_.push_back(y);
        window_sum_.noalias() += y * y.transpose();
        if (static_cast<int>(buffer_.size()) > width) {
            window_sum_.noalias() -= buffer_.front() * buffer_.front().transpose();
            buffer_.pop_front();
        }
        if (++updates_since_refresh_ >= width) {
            window_sum_.setZero();
            for (const auto& v : buffer_) window_sum_.noalias() += v * v.transpose();
            updates_since_refresh_ = 0;
        }
        current_ = window_sum_ / static_cast<double>(buffer_.size());
    }
    count_ = t;
    resymmetrize();
}

void CovEstimator::update_batch(const Matrix& signals) {
    for (Eigen::Index r = 0; r < signals.rows(); ++r) update(signals.row(r).transpose());
}

void CovEstimator::resymmetrize() {
    if (asymmetry(current_) > kDriftTolerance) current_ = symmetrized(current_);
}

double CovEstimator::lambda_max() const {
    if (top_vector_.size() != current_.rows()) top_vector_.resize(0);
    return topoid::lambda_max(current_, &top_vector_);
}

double lambda_max(const Matrix& c, Vector* start) {
    const Eigen::Index n = c.rows();
    if (n == 0) return 0.0;
    if (c.cols() != n) throw Error(ErrorCode::Dimension, "lambda_max: matrix must be square");

    Vector v;
    if (start != nullptr && start->size() == n && start->norm() > 0.0) {
        v = start->normalized();
    } else {
        // Deterministic, generic start: unlikely to be orthogonal to the top eigenvector.
        v.resize(n);
        for (Eigen::Index k = 0; k < n; ++k) v(k) = 1.0 + 0.5 * std::sin(1.0 + 0.7 * double(k));
        v.normalize();
    }

    // Power iteration; accept once the eigen-residual certifies the Rayleigh
    // quotient. For symmetric C, |rho - lambda| <= ||Cv - rho v|| and the
    // residual shrinks with the spectral gap.
    const int max_iters = 3000;
    double rho = 0.0;
    bool converged = false;
    Vector w(n);
    for (int it = 0; it < max_iters; ++it) {
        w.noalias() = c * v;
        rho = v.dot(w);
        const double wn = w.norm();
        if (wn == 0.0) {
            rho = 0.0;
            converged = true;
            break;
        }
        const double residual = (w - rho * v).norm();
        v = w / wn;
        if (residual <= 1e-10 * std::abs(rho)) {
            converged = true;
            break;
        }
    }
    if (!converged && n <= 512) {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(c);
        rho = eig.eigenvalues()(n - 1);
        v = eig.eigenvectors().col(n - 1);
    }
    if (start != nullptr) *start = v;
    return rho;
}

}  // namespace topoid
