#pragma once

#include "gpeq/design.hpp"
#include "gpeq/kernels.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace gpeq {

/// Box Theta = [lower, upper] in R^p with lower < upper componentwise.
class ParamSpace {
public:
    ParamSpace(Eigen::VectorXd lower, Eigen::VectorXd upper);

    [[nodiscard]] std::size_t dims() const noexcept { return static_cast<std::size_t>(lower_.size()); }
    [[nodiscard]] const Eigen::VectorXd& lower() const noexcept { return lower_; }
    [[nodiscard]] const Eigen::VectorXd& upper() const noexcept { return upper_; }
    [[nodiscard]] bool contains(const Eigen::VectorXd& theta) const;

private:
    Eigen::VectorXd lower_;
    Eigen::VectorXd upper_;
};

using KernelFamily = std::function<CovarianceKernel(const Eigen::VectorXd&)>;

/// theta = (sigma, beta) -> sigma^2 exp(-beta |s - t|).
[[nodiscard]] KernelFamily exponential_family();

/// theta = (c) -> c * base.
[[nodiscard]] KernelFamily scale_family(CovarianceKernel base);

struct LikelihoodProblem {
    LikelihoodProblem(KernelFamily f, Design d, Eigen::VectorXd y);

    KernelFamily family;
    Design design;
    Eigen::VectorXd data;
};

/// Returned by neg_log_likelihood when R(n) at theta cannot be factored.
inline constexpr double kPenalizedValue = 1e100;

[[nodiscard]] inline bool is_penalized(double value) noexcept { return value >= kPenalizedValue; }

/// -log p_theta(y). A singular Gram gives kPenalizedValue instead of throwing.
[[nodiscard]] double neg_log_likelihood(const LikelihoodProblem& problem, const Eigen::VectorXd& theta);

/// Map from the box to the unconstrained coordinates the simplex moves in.
///   Log:     theta_i = exp(log lo + (log hi - log lo) * sigmoid(u_i))   (requires lo > 0)
///   Natural: theta_i = lo + (hi - lo) * sigmoid(u_i)
enum class Coordinates { Log, Natural };

struct OptimizerConfig {
    std::size_t starts = 5;         ///< box center plus (starts - 1) Halton points
    double tol_x = 1e-6;            ///< stop when the simplex size in u-space falls below this
    std::size_t max_evals = 2000;   ///< per start
    double initial_step = 0.5;      ///< simplex edge in u-space
    Coordinates coordinates = Coordinates::Log;
    std::uint64_t seed = 0;         ///< offsets the Halton sequence
    std::vector<Eigen::VectorXd> extra_starts;  ///< additional starting points in theta-space
};

struct MLEResult {
    Eigen::VectorXd theta_hat;
    double loglik = 0.0;
    std::size_t evaluations = 0;
    std::size_t starts = 0;
};

/// Multistart Nelder-Mead over the reparameterized box. The returned point is
/// the best one evaluated across all starts. Throws OptimizationFailed when
/// every start ends at a penalized value.
[[nodiscard]] MLEResult fit_mle(const LikelihoodProblem& problem, const ParamSpace& space,
                                const OptimizerConfig& config = {});

struct ExperimentConfig {
    std::vector<std::size_t> n_grid{50, 100, 200, 400};
    std::size_t replicates = 50;
    std::uint64_t seed = 7;
    double sigma0 = 1.0;
    double beta0 = 1.0;
    double domain_lower = 0.0;
    double domain_upper = 1.0;
    Eigen::VectorXd box_lower = Eigen::Vector2d(0.05, 0.05);
    Eigen::VectorXd box_upper = Eigen::Vector2d(20.0, 20.0);
    OptimizerConfig optimizer{};
};

struct ConsistencyReport {
    std::vector<std::size_t> n_grid;
    std::vector<double> rmse_sigma2;
    std::vector<double> rmse_beta;
    std::vector<double> rmse_microergodic;   ///< of sigma^2 beta
    std::vector<std::size_t> failed_replicates;
    std::size_t replicates = 0;
    std::uint64_t seed = 0;
};

/// For each n: simulate replicates under the exponential kernel on the n-point
/// equispaced grid of the domain, fit (sigma, beta) by ML, and report RMSEs of
/// sigma^2, beta and sigma^2 beta against the truth. Failed fits are excluded
/// and counted. Replicate r at grid size n uses sub-seed (seed, n, r).
[[nodiscard]] ConsistencyReport microergodic_experiment(const ExperimentConfig& config);

}  // namespace gpeq
