#pragma once

// Test-only reference computations. Everything here goes through explicit
// inverses, determinants or eigensolves, never through gpeq::Gram.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

namespace gpeq::testing {

inline Eigen::MatrixXd random_spd(std::mt19937_64& rng, int n, double ridge = 0.5) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
    Eigen::MatrixXd spd = a * a.transpose() / n + ridge * Eigen::MatrixXd::Identity(n, n);
    return 0.5 * (spd + spd.transpose());
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = normal(rng);
    return v;
}

/// KL(N(0, r1) || N(0, r2)) = (tr(r2^{-1} r1) - n + log det r2 - log det r1) / 2.
inline double kl_divergence(const Eigen::MatrixXd& r1, const Eigen::MatrixXd& r2) {
    const Eigen::FullPivLU<Eigen::MatrixXd> lu1(r1);
    const Eigen::FullPivLU<Eigen::MatrixXd> lu2(r2);
    const double tr = (lu2.inverse() * r1).trace();
    const double n = static_cast<double>(r1.rows());
    return 0.5 * (tr - n + std::log(lu2.determinant()) - std::log(lu1.determinant()));
}

/// Symmetrized KL, with the log-determinants left in (they cancel).
inline double j_divergence_oracle(const Eigen::MatrixXd& r1, const Eigen::MatrixXd& r2) {
    return kl_divergence(r1, r2) + kl_divergence(r2, r1);
}

inline double logpdf_oracle(const Eigen::MatrixXd& r, const Eigen::VectorXd& y) {
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(r);
    const double n = static_cast<double>(r.rows());
    return -0.5 * y.dot(lu.inverse() * y) - 0.5 * std::log(lu.determinant()) -
           0.5 * n * std::log(2.0 * std::numbers::pi);
}

inline double tensor_norm_oracle(const Eigen::MatrixXd& r1, const Eigen::MatrixXd& d) {
    const Eigen::MatrixXd inv = Eigen::FullPivLU<Eigen::MatrixXd>(r1).inverse();
    return (inv * d * inv * d.transpose()).trace();
}

/// Legendre polynomial by Bonnet's recurrence on unnormalized values.
inline double legendre(int k, double x) {
    if (k == 0) return 1.0;
    double p0 = 1.0;
    double p1 = x;
    for (int j = 1; j < k; ++j) {
        const double p2 = ((2.0 * j + 1.0) * x * p1 - j * p0) / (j + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

/// Unnormalized Gegenbauer C_k^lambda by the textbook recurrence.
inline double gegenbauer(int k, double lambda, double x) {
    if (k == 0) return 1.0;
    double c0 = 1.0;
    double c1 = 2.0 * lambda * x;
    for (int j = 1; j < k; ++j) {
        const double c2 = (2.0 * (j + lambda) * x * c1 - (j + 2.0 * lambda - 1.0) * c0) / (j + 1.0);
        c0 = c1;
        c1 = c2;
    }
    return c1;
}

inline Eigen::VectorXd random_unit_vector(std::mt19937_64& rng, int d) {
    Eigen::VectorXd v = random_vector(rng, d);
    return v / v.norm();
}

}  // namespace gpeq::testing
