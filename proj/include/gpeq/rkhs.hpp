#pragma once

// Finite-design RKHS computations. On a design T_n the RKHS of R restricted
// to T_n is R^n with inner product <v, w> = v^T R(n)^{-1} w; all solves go
// through the cached Cholesky factor.

#include "gpeq/design.hpp"
#include "gpeq/errors.hpp"
#include "gpeq/gram.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <string>

namespace gpeq {

/// Values (f(t_1), ..., f(t_n)) of a function on a design.
struct FiniteFunction {
    FiniteFunction(Design d, Eigen::VectorXd v) : design(std::move(d)), values(std::move(v)) {
        if (static_cast<std::size_t>(values.size()) != design.size())
            throw ContractError("finite function: value count does not match design size");
    }

    Design design;
    Eigen::VectorXd values;
};

namespace detail {

template <typename Scalar, typename Derived>
void require_length(const Gram<Scalar>& g, const Eigen::MatrixBase<Derived>& v, const char* what) {
    if (static_cast<std::size_t>(v.size()) != g.n())
        throw ContractError(std::string(what) + ": vector length " + std::to_string(v.size()) +
                            " does not match Gram size " + std::to_string(g.n()));
}

}  // namespace detail

/// v^T R(n)^{-1} w, evaluated as (L^{-1} v) . (L^{-1} w) so that it is exactly symmetric.
template <typename Scalar, typename DerivedV, typename DerivedW>
[[nodiscard]] Scalar rkhs_inner(const Gram<Scalar>& g, const Eigen::MatrixBase<DerivedV>& v,
                                const Eigen::MatrixBase<DerivedW>& w) {
    detail::require_length(g, v, "rkhs_inner");
    detail::require_length(g, w, "rkhs_inner");
    const auto lv = g.whiten(v);
    const auto lw = g.whiten(w);
    return lv.col(0).dot(lw.col(0));
}

template <typename Scalar, typename Derived>
[[nodiscard]] Scalar rkhs_norm(const Gram<Scalar>& g, const Eigen::MatrixBase<Derived>& f) {
    detail::require_length(g, f, "rkhs_norm");
    return g.whiten(f).norm();
}

template <typename Scalar>
[[nodiscard]] Scalar rkhs_norm(const Gram<Scalar>& g, const FiniteFunction& f) {
    return rkhs_norm(g, f.values.template cast<Scalar>());
}

/// |<f, R(., t_i)> - f(t_i)|, the residual of the reproducing identity at t_i.
template <typename Scalar, typename Derived>
[[nodiscard]] Scalar reproducing_check(const Gram<Scalar>& g, const Eigen::MatrixBase<Derived>& f, std::size_t i) {
    detail::require_length(g, f, "reproducing_check");
    if (i >= g.n()) throw ContractError("reproducing_check: index out of range");
    const auto column = g.entries().col(static_cast<Eigen::Index>(i));
    using std::abs;
    return abs(rkhs_inner(g, f, column) - f(static_cast<Eigen::Index>(i)));
}

template <typename Scalar>
[[nodiscard]] Scalar reproducing_check(const Gram<Scalar>& g, const FiniteFunction& f, std::size_t i) {
    return reproducing_check(g, f.values.template cast<Scalar>(), i);
}

/// Squared norm of the restriction of R_2 - R_1 to T_n x T_n in the RKHS of
/// R_1 (x) R_1: trace(R_1^{-1} D R_1^{-1} D^T). Computed as ||L^{-1} D L^{-T}||_F^2.
template <typename Scalar, typename Derived>
[[nodiscard]] Scalar tensor_norm_finite(const Gram<Scalar>& g1, const Eigen::MatrixBase<Derived>& diff) {
    if (static_cast<std::size_t>(diff.rows()) != g1.n() || static_cast<std::size_t>(diff.cols()) != g1.n())
        throw ContractError("tensor_norm_finite: difference matrix has the wrong shape");
    using std::abs;
    const Scalar scale = diff.cwiseAbs().maxCoeff();
    if ((diff - diff.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-10) * (Scalar(1) + scale))
        throw ContractError("tensor_norm_finite: difference matrix is not symmetric");

    const auto left = g1.whiten(diff);                          // L^{-1} D
    const auto both = g1.whiten(left.transpose());              // L^{-1} (L^{-1} D)^T = L^{-1} D^T L^{-T}
    return both.squaredNorm();
}

}  // namespace gpeq
