#pragma once

#include "gpeq/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

namespace gpeq {

/// Symmetric positive-definite covariance matrix R(n) together with its lower
/// Cholesky factor and log-determinant. Immutable after construction.
template <typename Scalar>
class Gram {
public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    /// Factors `entries + jitter * I`. Throws ContractError for non-square or
    /// asymmetric input and SingularGram when a pivot is non-positive or
    /// vanishes relative to the diagonal scale.
    explicit Gram(Matrix entries, Scalar jitter = Scalar(0));

    [[nodiscard]] std::size_t n() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    [[nodiscard]] const Matrix& entries() const noexcept { return entries_; }
    [[nodiscard]] const Matrix& chol() const noexcept { return chol_; }
    [[nodiscard]] Scalar log_det() const noexcept { return log_det_; }

    /// L^{-1} rhs.
    template <typename Derived>
    [[nodiscard]] Matrix whiten(const Eigen::MatrixBase<Derived>& rhs) const {
        return chol_.template triangularView<Eigen::Lower>().solve(rhs);
    }

    /// R(n)^{-1} rhs by forward and back substitution.
    template <typename Derived>
    [[nodiscard]] Matrix solve(const Eigen::MatrixBase<Derived>& rhs) const {
        Matrix tmp = whiten(rhs);
        chol_.template triangularView<Eigen::Lower>().transpose().solveInPlace(tmp);
        return tmp;
    }

    /// Gram of c * R(n); the factor scales by sqrt(c).
    [[nodiscard]] Gram scaled(Scalar c) const;

private:
    Gram() = default;

    Matrix entries_;
    Matrix chol_;
    Scalar log_det_{0};
};

using GramMatrix = Gram<double>;

namespace detail {

// Unblocked left-looking factorization, used only to locate the failing pivot.
template <typename Scalar>
std::size_t first_bad_pivot(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a, Scalar floor) {
    const Eigen::Index n = a.rows();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> l = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        Scalar pivot = a(j, j) - l.row(j).head(j).squaredNorm();
        if (!(pivot > floor)) return static_cast<std::size_t>(j);
        l(j, j) = std::sqrt(pivot);
        for (Eigen::Index i = j + 1; i < n; ++i)
            l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
    }
    return static_cast<std::size_t>(n);
}

}  // namespace detail

template <typename Scalar>
Gram<Scalar>::Gram(Matrix entries, Scalar jitter) : entries_(std::move(entries)) {
    using std::abs;
    if (entries_.rows() != entries_.cols()) throw ContractError("gram: matrix is not square");
    if (entries_.rows() == 0) throw ContractError("gram: empty matrix");
    if (!entries_.allFinite()) throw ContractError("gram: non-finite entries");
    if (jitter < Scalar(0)) throw ContractError("gram: jitter must be nonnegative");

    const Scalar scale = entries_.cwiseAbs().maxCoeff();
    const Scalar asym = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
    if (asym > Scalar(1e-12) * scale) throw ContractError("gram: matrix is not symmetric");

    if (jitter > Scalar(0)) entries_.diagonal().array() += jitter;

    const Scalar max_diag = entries_.diagonal().cwiseAbs().maxCoeff();
    const Scalar floor = static_cast<Scalar>(entries_.rows()) * std::numeric_limits<Scalar>::epsilon() * max_diag;

    Eigen::LLT<Matrix> llt(entries_);
    bool ok = llt.info() == Eigen::Success;
    if (ok) {
        chol_ = llt.matrixL();
        const auto diag = chol_.diagonal();
        for (Eigen::Index i = 0; i < diag.size(); ++i) {
            if (!(diag(i) * diag(i) > floor)) {
                ok = false;
                break;
            }
        }
    }
    if (!ok) {
        const std::size_t pivot = std::min(detail::first_bad_pivot<Scalar>(entries_, floor), n() - 1);
        throw SingularGram(pivot, "gram: Cholesky factorization failed at pivot " + std::to_string(pivot));
    }
    log_det_ = Scalar(2) * chol_.diagonal().array().log().sum();
}

template <typename Scalar>
Gram<Scalar> Gram<Scalar>::scaled(Scalar c) const {
    if (!(c > Scalar(0))) throw ContractError("gram: scale must be positive");
    Gram out;
    out.entries_ = c * entries_;
    out.chol_ = std::sqrt(c) * chol_;
    out.log_det_ = log_det_ + static_cast<Scalar>(entries_.rows()) * std::log(c);
    return out;
}

}  // namespace gpeq
