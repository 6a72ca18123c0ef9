#ifndef TOPOID_TESTS_HELPERS_HPP
#define TOPOID_TESTS_HELPERS_HPP

#include <cmath>
#include <cstdint>

#include "topoid/common.hpp"
#include "topoid/graph_model.hpp"

namespace testing {

using topoid::Matrix;
using topoid::Vector;

inline Matrix random_matrix(int rows, int cols, topoid::Rng& rng) {
    Matrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = rng.normal();
    return m;
}

inline Matrix random_symmetric(int n, topoid::Rng& rng) {
    Matrix m = random_matrix(n, n, rng);
    return 0.5 * (m + m.transpose());
}

/// Symmetric, hollow, non-negative with entries uniform on [0, 1).
inline Matrix random_admissible(int n, topoid::Rng& rng) {
    Matrix s = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) s(i, j) = s(j, i) = rng.uniform01();
    return s;
}

/// Q diag(eigs) Q^T with Haar-like Q from a QR of a Gaussian matrix.
inline Matrix covariance_with_spectrum(const Vector& eigs, topoid::Rng& rng) {
    const int n = static_cast<int>(eigs.size());
    Eigen::HouseholderQR<Matrix> qr(random_matrix(n, n, rng));
    const Matrix q = qr.householderQ();
    Matrix c = q * eigs.asDiagonal() * q.transpose();
    return 0.5 * (c + c.transpose());
}

/// Wishart-type PSD covariance (distinct eigenvalues almost surely).
inline Matrix random_covariance(int n, topoid::Rng& rng) {
    Matrix g = random_matrix(n, n + 3, rng);
    Matrix c = g * g.transpose() / double(n + 3);
    return 0.5 * (c + c.transpose());
}

/// Reference eigenvalues, ascending.
inline Vector eigenvalues(const Matrix& sym) { return Eigen::SelfAdjointEigenSolver<Matrix>(sym).eigenvalues(); }

}  // namespace testing

#endif  // TOPOID_TESTS_HELPERS_HPP
