#include "topoid/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

namespace topoid {

namespace {

Vector singular_values(const Matrix& a) {
    if (a.size() == 0) return Vector();
    if (std::min(a.rows(), a.cols()) <= 200) return Eigen::JacobiSVD<Matrix>(a).singularValues();
    return Eigen::BDCSVD<Matrix>(a).singularValues();
}

void check_orthonormal(const Matrix& v) {
    if (v.rows() != v.cols()) throw Error(ErrorCode::Dimension, "eigenvector matrix must be square");
    const Eigen::Index n = v.cols();
    if (n == 0) return;
    const double err = (v.transpose() * v - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (err > 1e-8) warn("eigenvector matrix is not orthonormal (max deviation " + std::to_string(err) + ")");
}

// Pair index p(a, b), a < b, in row-major upper-triangle order.
struct PairIndex {
    std::vector<int> a, b;
    explicit PairIndex(int n) {
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                a.push_back(i);
                b.push_back(j);
            }
        }
    }
    std::size_t size() const { return a.size(); }
};

}  // namespace

Matrix khatri_rao_self(const Matrix& v) {
    check_orthonormal(v);
    const Eigen::Index n = v.rows();
    Matrix w(n * n, v.cols());
    for (Eigen::Index k = 0; k < v.cols(); ++k) {
        for (Eigen::Index j = 0; j < n; ++j) {
            // Column-major vec: entry (i, j) of S sits at row j * N + i.
            w.col(k).segment(j * n, n) = v(j, k) * v.col(k);
        }
    }
    return w;
}

Matrix diagonal_rows(const Matrix& v) {
    check_orthonormal(v);
    return v.cwiseProduct(v);
}

Matrix known_rows(const Matrix& v, const EdgeConstraints& constraints) {
    if (constraints.max_index() >= v.rows()) {
        throw Error(ErrorCode::Dimension, "known edge refers to a vertex outside the eigenvector matrix");
    }
    Matrix w(static_cast<Eigen::Index>(constraints.size()), v.cols());
    Eigen::Index r = 0;
    for (const auto& [e, value] : constraints) {
        w.row(r++) = v.row(e.i).cwiseProduct(v.row(e.j));
    }
    return w;
}

int numerical_rank(const Matrix& a, double rank_tol, double reference) {
    if (a.size() == 0) return 0;
    const Vector sv = singular_values(a);
    const double scale = std::max(sv.size() ? sv(0) : 0.0, reference);
    if (scale == 0.0) return 0;
    return static_cast<int>((sv.array() > rank_tol * scale).count());
}

Matrix eigenvectors(const Matrix& sym) {
    if (sym.rows() != sym.cols()) throw Error(ErrorCode::Dimension, "eigenvectors: matrix must be square");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(sym));
    return eig.eigenvectors();
}

FeasibilityReport feasibility(const Matrix& v, const EdgeConstraints& constraints, double rank_tol) {
    if (!(rank_tol > 0.0)) throw Error(ErrorCode::Parameter, "feasibility: rank_tol must be positive");
    FeasibilityReport rep;
    rep.n = static_cast<int>(v.rows());
    const Matrix wd = diagonal_rows(v);
    const Eigen::Index n = wd.rows();

    Matrix right;
    if (n <= 200) {
        Eigen::JacobiSVD<Matrix> svd(wd, Eigen::ComputeFullV);
        rep.wd_singular_values = svd.singularValues();
        right = svd.matrixV();
    } else {
        Eigen::BDCSVD<Matrix> svd(wd, Eigen::ComputeFullV);
        rep.wd_singular_values = svd.singularValues();
        right = svd.matrixV();
    }
    const double smax = n > 0 ? rep.wd_singular_values(0) : 0.0;
    rep.rank_wd = smax > 0.0 ? static_cast<int>((rep.wd_singular_values.array() > rank_tol * smax).count()) : 0;
    rep.k = rep.n - rep.rank_wd;
    rep.kernel = right.rightCols(rep.k);

    if (rep.k == 0) {
        rep.singleton = true;
        rep.notes.push_back("W_D has full rank: only S = 0 is hollow and commuting");
        return rep;
    }
    if (constraints.empty()) {
        rep.rank_wmu = 0;
        rep.singleton = false;
        rep.notes.push_back("no known edges: the feasible set has dimension k = " + std::to_string(rep.k));
        return rep;
    }
    const Matrix wmu = known_rows(v, constraints) * rep.kernel;
    rep.rank_wmu = numerical_rank(wmu, rank_tol, smax);
    rep.singleton = rep.rank_wmu == rep.k;
    if (!rep.singleton && static_cast<int>(constraints.size()) < rep.k) {
        rep.notes.push_back("fewer known edges than kernel dimension");
    }
    return rep;
}

Matrix commutator_operator(const Matrix& cov) {
    const Eigen::Index n = cov.rows();
    Matrix psi = Matrix::Zero(n * n, n * n);
    // vec(X C) = (C ⊗ I) vec(X), vec(C X) = (I ⊗ C) vec(X) for symmetric C.
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            psi.block(a * n, b * n, n, n).diagonal().array() += cov(a, b);
        }
        psi.block(a * n, a * n, n, n) -= cov;
    }
    return psi;
}

namespace {

double min_squared_gap(const Vector& lambda) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 1; i < lambda.size(); ++i) {
        const double d = lambda(i) - lambda(i - 1);
        best = std::min(best, d * d);
    }
    return best;
}

// Smallest eigenvalue of Psi^T Psi on hollow symmetric matrices, via an
// orthonormal basis of {(y_d, u) : W_D y_d + B u = 0} in eigen-coordinates.
double hollow_symmetric_min_projection(const Matrix& v, const Vector& lambda) {
    const int n = static_cast<int>(v.rows());
    const PairIndex pairs(n);
    const Eigen::Index p = static_cast<Eigen::Index>(pairs.size());
    Matrix at(n + p, n);  // constraint matrix, transposed
    at.topRows(n) = v.cwiseProduct(v).transpose();
    const double r2 = std::sqrt(2.0);
    for (Eigen::Index q = 0; q < p; ++q) {
        at.row(n + q) = r2 * v.col(pairs.a[q]).cwiseProduct(v.col(pairs.b[q])).transpose();
    }
    Eigen::HouseholderQR<Matrix> qr(at);
    const Matrix q_full = qr.householderQ();
    const Matrix null_basis = q_full.rightCols(p);
    Vector weight(p);
    for (Eigen::Index q = 0; q < p; ++q) weight(q) = std::abs(lambda(pairs.a[q]) - lambda(pairs.b[q]));
    const Matrix scaled = weight.asDiagonal() * null_basis.bottomRows(p);
    const Matrix gram = scaled.transpose() * scaled;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    return std::max(0.0, eig.eigenvalues()(0));
}

// Same quantity by eliminating the diagonal coordinates (needs invertible
// W_D): the smallest theta with I - theta G (Lambda - theta)^{-1} G^T singular.
double hollow_symmetric_min_secular(const Matrix& v, const Vector& lambda, double gap_sq) {
    const int n = static_cast<int>(v.rows());
    const PairIndex pairs(n);
    const Eigen::Index p = static_cast<Eigen::Index>(pairs.size());
    const Matrix wd = v.cwiseProduct(v);
    Matrix b(n, p);
    const double r2 = std::sqrt(2.0);
    for (Eigen::Index q = 0; q < p; ++q) b.col(q) = r2 * v.col(pairs.a[q]).cwiseProduct(v.col(pairs.b[q]));
    const Matrix g = wd.partialPivLu().solve(b);
    Vector lam_p(p);
    for (Eigen::Index q = 0; q < p; ++q) {
        const double d = lambda(pairs.a[q]) - lambda(pairs.b[q]);
        lam_p(q) = d * d;
    }
    auto indicator = [&](double theta) {
        const Vector w = (lam_p.array() - theta).inverse().matrix();
        Matrix k = Matrix::Identity(n, n);
        k.noalias() -= theta * (g * w.asDiagonal() * g.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(k), Eigen::EigenvaluesOnly);
        return eig.eigenvalues()(0);
    };
    double lo = 0.0;
    double hi = gap_sq;
    if (indicator(hi * (1.0 - 1e-12)) > 0.0) return gap_sq;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (indicator(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

}  // namespace

ConvexityCertificate strong_convexity(const Matrix& cov, double mu, double rank_tol, ConvexityMethod method) {
    if (cov.rows() != cov.cols()) throw Error(ErrorCode::Dimension, "strong_convexity: covariance must be square");
    if (!(mu > 0.0)) throw Error(ErrorCode::Parameter, "strong_convexity: mu must be positive");
    ConvexityCertificate cert;
    const Eigen::Index n = cov.rows();
    if (n < 2) {
        cert.method = "trivial";
        cert.notes.push_back("N < 2: no off-diagonal coordinates");
        return cert;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(cov));
    const Vector& lambda = eig.eigenvalues();
    const Matrix& v = eig.eigenvectors();
    const double spread = lambda(n - 1) - lambda(0);  // sigma_max of Psi
    cert.rank_threshold = rank_tol * spread;
    cert.min_gap = min_squared_gap(lambda);

    if (spread == 0.0) {
        cert.method = "eigen-gap";
        cert.notes.push_back("covariance is a multiple of the identity: Psi = 0");
        return cert;
    }

    if (method == ConvexityMethod::Auto) method = n <= 40 ? ConvexityMethod::Projection : ConvexityMethod::Secular;
    double sym_min = 0.0;
    if (method == ConvexityMethod::Projection) {
        cert.method = "projection";
        sym_min = hollow_symmetric_min_projection(v, lambda);
    } else {
        cert.method = "secular";
        const int wd_rank = numerical_rank(v.cwiseProduct(v), rank_tol);
        if (wd_rank < n || std::sqrt(cert.min_gap) <= cert.rank_threshold) {
            cert.notes.push_back(wd_rank < n ? "V o V is singular: a hollow matrix commutes with C"
                                             : "repeated eigenvalues");
            sym_min = 0.0;
        } else {
            sym_min = hollow_symmetric_min_secular(v, lambda, cert.min_gap);
        }
    }
    cert.sigma_min = std::sqrt(std::min(sym_min, cert.min_gap));
    cert.full_rank = cert.sigma_min > cert.rank_threshold;
    cert.m = cert.full_rank ? mu * cert.sigma_min * cert.sigma_min : 0.0;
    cert.m_literal = cert.sigma_min;
    return cert;
}

double BoundStep::contraction() const {
    return std::max(std::abs(1.0 - gamma * m), std::abs(1.0 - gamma * M));
}

TrackingBound tracking_bound(const BoundInputs& inputs, double s0_err) {
    if (!(s0_err >= 0.0) || !std::isfinite(s0_err)) {
        throw Error(ErrorCode::Parameter, "tracking_bound: initial error must be finite and >= 0");
    }
    TrackingBound out;
    out.recursion.push_back(s0_err);
    out.simplified.push_back(s0_err);
    double l_hat = 0.0;
    double nu_hat = 0.0;
    for (std::size_t t = 0; t < inputs.steps.size(); ++t) {
        const BoundStep& st = inputs.steps[t];
        if (!(st.M > 0.0) || !(st.gamma > 0.0) || st.m < 0.0 || st.nu < 0.0 || st.iters < 1 ||
            !std::isfinite(st.M) || !std::isfinite(st.nu)) {
            throw Error(ErrorCode::Parameter, "tracking_bound: invalid inputs at step " + std::to_string(t));
        }
        const double l = std::pow(st.contraction(), st.iters);
        out.recursion.push_back(l * out.recursion.back() + st.nu);
        l_hat = std::max(l_hat, l);
        nu_hat = std::max(nu_hat, st.nu);
        if (l_hat < 1.0) {
            const double steps = static_cast<double>(t + 1);
            out.simplified.push_back(std::pow(l_hat, steps) * s0_err + nu_hat / (1.0 - l_hat));
        } else {
            out.simplified.push_back(std::nullopt);
        }
    }
    return out;
}

BoundInputs assemble_bound_inputs(const RunTrace& trace) {
    BoundInputs in;
    const auto& recs = trace.records;
    in.steps.resize(recs.size());
    // Map step number -> checkpoint.
    std::vector<const CheckpointRecord*> at(recs.size(), nullptr);
    for (const auto& cp : trace.checkpoints) {
        if (cp.t >= 1 && static_cast<std::size_t>(cp.t) <= recs.size()) at[cp.t - 1] = &cp;
    }
    double nu_carry = 0.0;
    double m_carry = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < recs.size(); ++k) {
        BoundStep& st = in.steps[k];
        st.M = recs[k].lipschitz;
        st.gamma = recs[k].gamma;
        st.iters = recs[k].iters;
        if (at[k] != nullptr && at[k]->m) {
            st.m = *at[k]->m;
            st.m_measured = true;
            m_carry = std::min(m_carry, st.m);
        } else {
            st.m = std::isfinite(m_carry) ? m_carry : 0.0;
        }
        if (at[k] != nullptr) {
            if (k + 1 < recs.size() && at[k + 1] != nullptr) {
                st.nu = (at[k + 1]->optimum - at[k]->optimum).norm();
                st.nu_measured = true;
                nu_carry = std::max(nu_carry, st.nu);
            } else {
                // Interval average to the next checkpoint, folded into the running max.
                for (std::size_t q = k + 1; q < recs.size(); ++q) {
                    if (at[q] != nullptr) {
                        nu_carry = std::max(nu_carry, (at[q]->optimum - at[k]->optimum).norm() / double(q - k));
                        break;
                    }
                }
                st.nu = nu_carry;
            }
        } else {
            st.nu = nu_carry;
        }
    }
    return in;
}

namespace {

// Psi^T Psi applied to X: [[X, C], C] with [X, C] = X C - C X.
Matrix psi_squared(const Matrix& x, const Matrix& c) {
    const Matrix r = x * c - c * x;
    return r * c - c * r;
}

}  // namespace

double smooth_variation(const Matrix& cov_a, const Matrix& cov_b, double mu) {
    if (cov_a.rows() != cov_b.rows() || cov_a.cols() != cov_b.cols()) {
        throw Error(ErrorCode::Dimension, "smooth_variation: covariance shapes differ");
    }
    const Eigen::Index n = cov_a.rows();
    if (n == 0) return 0.0;
    // Power iteration on the symmetric operator X -> Psi_b^2 X - Psi_a^2 X.
    Matrix x(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) x(i, j) = 1.0 + 0.37 * std::sin(1.0 + 1.3 * double(i) + 2.1 * double(j));
    x /= x.norm();
    double est = 0.0;
    for (int it = 0; it < 500; ++it) {
        Matrix y = psi_squared(x, cov_b) - psi_squared(x, cov_a);
        const double norm = y.norm();
        if (norm == 0.0) return 0.0;
        // Rayleigh magnitude of the operator's dominant eigenpair.
        const double next = norm;
        x = y / norm;
        if (std::abs(next - est) <= 1e-10 * next) {
            est = next;
            break;
        }
        est = next;
    }
    return 0.5 * mu * est;
}

RegretReport regret_bound(const RunTrace& trace, double lipschitz_bound, double radius_factor) {
    if (trace.records.empty()) throw Error(ErrorCode::Parameter, "regret_bound: empty trace");
    if (trace.checkpoints.empty()) throw Error(ErrorCode::Parameter, "regret_bound: trace has no checkpoints");
    if (!(lipschitz_bound > 0.0) || !(radius_factor > 0.0)) {
        throw Error(ErrorCode::Parameter, "regret_bound: M and radius factor must be positive");
    }
    const double gamma = 1.0 / lipschitz_bound;
    for (const auto& r : trace.records) {
        if (std::abs(r.gamma - gamma) > 1e-12 * gamma) {
            throw Error(ErrorCode::Configuration,
                        "regret_bound: trace mixes step sizes; the bound needs gamma = 1/M at every step");
        }
        if (r.lipschitz > lipschitz_bound * (1.0 + 1e-12)) {
            throw Error(ErrorCode::Configuration, "regret_bound: M_t exceeds the supplied bound M at step " +
                                                      std::to_string(r.t));
        }
        if (r.iters != 1) throw Error(ErrorCode::Configuration, "regret_bound: requires one PG iteration per step");
    }

    const auto& recs = trace.records;
    const std::size_t t = recs.size();
    const double n = static_cast<double>(trace.n);
    const double big_m = lipschitz_bound;
    RegretReport rep;
    rep.steps = static_cast<int>(t);

    std::vector<const CheckpointRecord*> at(t, nullptr);
    for (const auto& cp : trace.checkpoints) {
        if (cp.t >= 1 && static_cast<std::size_t>(cp.t) <= t) at[cp.t - 1] = &cp;
    }

    // Mean optimum over the checkpoints (every step when checkpoints are dense).
    Matrix mean = Matrix::Zero(trace.n, trace.n);
    double regret_sum = 0.0;
    int counted = 0;
    for (std::size_t k = 0; k < t; ++k) {
        if (at[k] == nullptr) continue;
        mean += at[k]->optimum;
        regret_sum += recs[k].objective - at[k]->optimum_objective;
        ++counted;
    }
    if (counted == 0) throw Error(ErrorCode::Parameter, "regret_bound: no checkpoint falls inside the trace");
    mean /= double(counted);
    rep.measured_average_regret = regret_sum / double(counted);

    double max_norm = 0.0;
    for (const auto& r : recs) max_norm = std::max(max_norm, r.iterate_norm);
    max_norm = std::max(max_norm, trace.final_iterate.matrix().norm());
    rep.radius = radius_factor * max_norm;
    const double r2 = rep.radius * rep.radius;

    // Per-step rho and delta, carrying the last measured value between checkpoints.
    const CheckpointRecord* current = nullptr;
    double delta_carry = 0.0;
    for (std::size_t k = 0; k < t; ++k) {
        if (at[k] != nullptr) current = at[k];
        if (current == nullptr) current = &trace.checkpoints.front();
        const double rho = (mean - current->optimum).norm();
        rep.rho_hat = std::max(rep.rho_hat, rho);
        rep.sum_rho_terms += rho * (n + 0.5 * big_m * rho);
        if (k + 1 < t) {
            if (at[k] != nullptr && at[k]->delta_unit) delta_carry = std::max(delta_carry, *at[k]->delta_unit * r2);
            rep.sum_delta += delta_carry;
            rep.delta_hat = std::max(rep.delta_hat, delta_carry);
        }
    }

    rep.initial_distance = (trace.initial_iterate.matrix() - mean).norm();
    rep.objective_drop = recs.front().objective - recs.back().objective_after;
    const double td = static_cast<double>(t);
    const double head = 0.5 * big_m * rep.initial_distance * rep.initial_distance;
    rep.bound = head / td + (rep.objective_drop + rep.sum_delta + rep.sum_rho_terms) / td;
    rep.bound_simplified = (head + rep.objective_drop) / td + 0.5 * big_m * rep.rho_hat * rep.rho_hat +
                           n * rep.rho_hat + rep.delta_hat;
    rep.holds = rep.measured_average_regret <= rep.bound;
    return rep;
}

}  // namespace topoid
