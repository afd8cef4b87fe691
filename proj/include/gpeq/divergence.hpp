#pragma once

#include "gpeq/design.hpp"
#include "gpeq/errors.hpp"
#include "gpeq/gram.hpp"
#include "gpeq/kernels.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

namespace gpeq {

/// log density of N(0, R(n)) at y.
template <typename Scalar, typename Derived>
[[nodiscard]] Scalar gaussian_logpdf(const Gram<Scalar>& g, const Eigen::MatrixBase<Derived>& y) {
    if (static_cast<std::size_t>(y.size()) != g.n())
        throw ContractError("gaussian_logpdf: data length does not match Gram size");
    const Scalar quad = g.whiten(y).squaredNorm();
    const auto n = static_cast<Scalar>(g.n());
    return Scalar(-0.5) * quad - Scalar(0.5) * g.log_det() -
           Scalar(0.5) * n * std::log(Scalar(2) * std::numbers::pi_v<Scalar>);
}

/// J-divergence between N(0, R_1(n)) and N(0, R_2(n)):
///   J = (tr(R_1 R_2^{-1}) + tr(R_2 R_1^{-1})) / 2 - n,
/// with tr(R_1 R_2^{-1}) = ||L_2^{-1} L_1||_F^2.
template <typename Scalar>
[[nodiscard]] Scalar j_divergence(const Gram<Scalar>& g1, const Gram<Scalar>& g2) {
    if (g1.n() != g2.n()) throw ContractError("j_divergence: Gram sizes differ");
    const Scalar t12 = g2.whiten(g1.chol()).squaredNorm();
    const Scalar t21 = g1.whiten(g2.chol()).squaredNorm();
    return Scalar(0.5) * (t12 + t21) - static_cast<Scalar>(g1.n());
}

/// J(n) along nested designs.
struct DivergenceTrace {
    std::vector<std::size_t> sizes;
    std::vector<double> values;
    /// Least-squares slope of J against n over the last half of the trace.
    double slope_estimate = 0.0;
};

/// Least-squares slope over entries [size/2, size) of the first `count` points
/// (at least the last two). Used for the per-row CSV column and the trace summary.
[[nodiscard]] double trailing_slope(const std::vector<std::size_t>& sizes, const std::vector<double>& values,
                                    std::size_t count);

/// Throws ContractError unless every design is a strict prefix-extension of the previous one.
void require_nested(const std::vector<Design>& designs);

[[nodiscard]] DivergenceTrace j_divergence_trace(const CovarianceKernel& k1, const CovarianceKernel& k2,
                                                 const std::vector<Design>& designs, double jitter = 0.0);

enum class DichotomyLabel { EquivalenceIndicated, OrthogonalityIndicated, Inconclusive };

[[nodiscard]] std::string to_string(DichotomyLabel label);

struct DichotomyVerdict {
    DichotomyLabel label = DichotomyLabel::Inconclusive;
    double statistic = 0.0;
    std::string rationale;
};

/// Thresholds of the deterministic dichotomy rule.
struct DichotomyRule {
    double orthogonal_ratio = 1.5;
    double equivalent_ratio = 1.05;
    double equivalent_slope_fraction = 0.05;
    double absolute_slack = 1e-9;
};

/// Heuristic reading of a finite trace. With r = J(n_last) / J(n_half), where
/// n_half is the recorded size nearest n_last / 2:
///   r >= 1.5                                          -> OrthogonalityIndicated
///   r <= 1.05 and slope * n_last <= 0.05 J(n_last) + 1e-9 -> EquivalenceIndicated
///   otherwise                                         -> Inconclusive
/// 0/0 counts as r = 1. Requires at least four trace points.
[[nodiscard]] DichotomyVerdict dichotomy_diagnostic(const DivergenceTrace& trace, const DichotomyRule& rule = {});

}  // namespace gpeq
