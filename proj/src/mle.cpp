#include "gpeq/mle.hpp"

#include "gpeq/divergence.hpp"
#include "gpeq/errors.hpp"
#include "gpeq/parallel.hpp"
#include "gpeq/sampler.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>

namespace gpeq {

ParamSpace::ParamSpace(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() == 0 || lower_.size() != upper_.size())
        throw ContractError("param space: bounds must be nonempty and of equal length");
    if (!lower_.allFinite() || !upper_.allFinite() || !(lower_.array() < upper_.array()).all())
        throw ContractError("param space: need finite lower < upper in every coordinate");
}

bool ParamSpace::contains(const Eigen::VectorXd& theta) const {
    return theta.size() == lower_.size() && (theta.array() >= lower_.array()).all() &&
           (theta.array() <= upper_.array()).all();
}

KernelFamily exponential_family() {
    return [](const Eigen::VectorXd& theta) -> CovarianceKernel {
        if (theta.size() != 2) throw ContractError("exponential family: theta must be (sigma, beta)");
        return ExponentialKernel{theta(0), theta(1)};
    };
}

KernelFamily scale_family(CovarianceKernel base) {
    return [base = std::move(base)](const Eigen::VectorXd& theta) -> CovarianceKernel {
        if (theta.size() != 1) throw ContractError("scale family: theta must have one component");
        return scaled_kernel(base, theta(0));
    };
}

LikelihoodProblem::LikelihoodProblem(KernelFamily f, Design d, Eigen::VectorXd y)
    : family(std::move(f)), design(std::move(d)), data(std::move(y)) {
    if (!family) throw ContractError("likelihood problem: empty kernel family");
    if (static_cast<std::size_t>(data.size()) != design.size())
        throw ContractError("likelihood problem: data length does not match design size");
}

double neg_log_likelihood(const LikelihoodProblem& problem, const Eigen::VectorXd& theta) {
    const CovarianceKernel kernel = problem.family(theta);
    try {
        return -gaussian_logpdf(gram(kernel, problem.design), problem.data);
    } catch (const SingularGram&) {
        return kPenalizedValue;
    }
}

namespace {

double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }

double logit(double f) { return std::log(f / (1.0 - f)); }

class BoxMap {
public:
    BoxMap(const ParamSpace& space, Coordinates coordinates) : space_(space), coordinates_(coordinates) {
        if (coordinates_ == Coordinates::Log && !(space_.lower().array() > 0.0).all())
            throw ContractError("fit_mle: log coordinates need a positive lower bound");
    }

    [[nodiscard]] Eigen::VectorXd to_theta(const Eigen::VectorXd& u) const {
        Eigen::VectorXd theta(u.size());
        for (Eigen::Index i = 0; i < u.size(); ++i) {
            const double f = sigmoid(u(i));
            const double lo = space_.lower()(i);
            const double hi = space_.upper()(i);
            theta(i) = coordinates_ == Coordinates::Log ? std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * f)
                                                        : lo + (hi - lo) * f;
            theta(i) = std::clamp(theta(i), lo, hi);
        }
        return theta;
    }

    /// Fraction along each box edge (0 = lower, 1 = upper) in the map's coordinates.
    [[nodiscard]] Eigen::VectorXd fraction(const Eigen::VectorXd& theta) const {
        Eigen::VectorXd f(theta.size());
        for (Eigen::Index i = 0; i < theta.size(); ++i) {
            const double lo = space_.lower()(i);
            const double hi = space_.upper()(i);
            f(i) = coordinates_ == Coordinates::Log ? (std::log(theta(i)) - std::log(lo)) / (std::log(hi) - std::log(lo))
                                                    : (theta(i) - lo) / (hi - lo);
        }
        return f;
    }

    [[nodiscard]] Eigen::VectorXd to_u(const Eigen::VectorXd& theta) const {
        Eigen::VectorXd f = fraction(theta);
        static constexpr double edge = 1e-9;
        return f.unaryExpr([](double x) { return logit(std::clamp(x, edge, 1.0 - edge)); });
    }

private:
    const ParamSpace& space_;
    Coordinates coordinates_;
};

double radical_inverse(std::size_t index, std::size_t base) {
    double value = 0.0;
    double inv = 1.0 / static_cast<double>(base);
    double factor = inv;
    while (index > 0) {
        value += static_cast<double>(index % base) * factor;
        index /= base;
        factor *= inv;
    }
    return value;
}

constexpr std::array<std::size_t, 12> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

struct Objective {
    const LikelihoodProblem* problem;
    const BoxMap* map;
    std::size_t evaluations = 0;
    double best_value = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_theta;
};

double objective_callback(const gsl_vector* x, void* params) {
    auto* obj = static_cast<Objective*>(params);
    Eigen::VectorXd u(static_cast<Eigen::Index>(x->size));
    for (std::size_t i = 0; i < x->size; ++i) u(static_cast<Eigen::Index>(i)) = gsl_vector_get(x, i);
    const Eigen::VectorXd theta = obj->map->to_theta(u);
    const double value = neg_log_likelihood(*obj->problem, theta);
    ++obj->evaluations;
    if (value < obj->best_value) {
        obj->best_value = value;
        obj->best_theta = theta;
    }
    return value;
}

struct GslVectorDeleter {
    void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct GslMinimizerDeleter {
    void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};

// One Nelder-Mead run from u0; best point is tracked in `obj`.
void run_simplex(Objective& obj, const Eigen::VectorXd& u0, const OptimizerConfig& config) {
    const auto p = static_cast<std::size_t>(u0.size());
    std::unique_ptr<gsl_vector, GslVectorDeleter> start(gsl_vector_alloc(p));
    std::unique_ptr<gsl_vector, GslVectorDeleter> step(gsl_vector_alloc(p));
    for (std::size_t i = 0; i < p; ++i) gsl_vector_set(start.get(), i, u0(static_cast<Eigen::Index>(i)));
    gsl_vector_set_all(step.get(), config.initial_step);

    gsl_multimin_function fn{&objective_callback, p, &obj};
    std::unique_ptr<gsl_multimin_fminimizer, GslMinimizerDeleter> minimizer(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, p));
    const std::size_t budget_end = obj.evaluations + config.max_evals;
    if (gsl_multimin_fminimizer_set(minimizer.get(), &fn, start.get(), step.get()) != GSL_SUCCESS) return;
    while (obj.evaluations < budget_end) {
        if (gsl_multimin_fminimizer_iterate(minimizer.get()) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(minimizer.get()), config.tol_x) == GSL_SUCCESS) break;
    }
}

}  // namespace

MLEResult fit_mle(const LikelihoodProblem& problem, const ParamSpace& space, const OptimizerConfig& config) {
    if (config.starts == 0 && config.extra_starts.empty()) throw ContractError("fit_mle: no starting points");
    if (!(config.tol_x > 0.0) || config.max_evals == 0) throw ContractError("fit_mle: invalid optimizer settings");
    if (space.dims() > kPrimes.size()) throw ContractError("fit_mle: too many parameters for the Halton starts");
    static const bool handler_off = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)handler_off;

    const BoxMap map(space, config.coordinates);
    const auto p = static_cast<Eigen::Index>(space.dims());

    std::vector<Eigen::VectorXd> starts;
    if (config.starts > 0) starts.push_back(Eigen::VectorXd::Zero(p));
    for (std::size_t j = 1; j < config.starts; ++j) {
        Eigen::VectorXd u(p);
        for (Eigen::Index i = 0; i < p; ++i)
            u(i) = logit(radical_inverse(config.seed + j, kPrimes[static_cast<std::size_t>(i)]));
        starts.push_back(u);
    }
    for (const auto& theta : config.extra_starts) {
        if (!space.contains(theta)) throw ContractError("fit_mle: extra start outside the box");
        starts.push_back(map.to_u(theta));
    }

    Objective obj{&problem, &map, 0, std::numeric_limits<double>::infinity(), {}};
    for (const auto& u0 : starts) run_simplex(obj, u0, config);
    // extra starts are also evaluated exactly, so they are dominated by the result
    for (const auto& theta : config.extra_starts) {
        const double value = neg_log_likelihood(problem, theta);
        ++obj.evaluations;
        if (value < obj.best_value) {
            obj.best_value = value;
            obj.best_theta = theta;
        }
    }

    if (!std::isfinite(obj.best_value) || is_penalized(obj.best_value))
        throw OptimizationFailed("fit_mle: every start ended at a singular covariance");

    MLEResult result;
    result.theta_hat = obj.best_theta;
    result.loglik = -obj.best_value;
    result.evaluations = obj.evaluations;
    result.starts = starts.size();
    return result;
}

ConsistencyReport microergodic_experiment(const ExperimentConfig& config) {
    if (config.n_grid.empty()) throw ContractError("experiment: empty n_grid");
    for (std::size_t i = 1; i < config.n_grid.size(); ++i)
        if (config.n_grid[i] <= config.n_grid[i - 1]) throw ContractError("experiment: n_grid must be increasing");
    if (config.replicates < 20) throw ContractError("experiment: need at least 20 replicates");
    if (!(config.sigma0 > 0.0) || !(config.beta0 > 0.0)) throw ContractError("experiment: sigma0, beta0 must be positive");
    const ParamSpace space(config.box_lower, config.box_upper);
    if (space.dims() != 2) throw ContractError("experiment: box must be two-dimensional (sigma, beta)");

    const double sigma2_true = config.sigma0 * config.sigma0;
    const double micro_true = sigma2_true * config.beta0;
    const CovarianceKernel truth = ExponentialKernel{config.sigma0, config.beta0};

    ConsistencyReport report;
    report.n_grid = config.n_grid;
    report.replicates = config.replicates;
    report.seed = config.seed;

    for (const std::size_t n : config.n_grid) {
        const Design design = interval_grid(n, config.domain_lower, config.domain_upper);
        const GramMatrix g = gram(truth, design);
        const std::uint64_t level_seed = config.seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(n));
        const SampleBatch batch = sample_paths(g, config.replicates, level_seed);

        std::vector<Eigen::VectorXd> estimates(config.replicates);
        std::vector<char> failed(config.replicates, 0);
        parallel_for(config.replicates, [&](std::size_t r) {
            const LikelihoodProblem problem(exponential_family(), design,
                                            batch.samples.row(static_cast<Eigen::Index>(r)).transpose());
            try {
                estimates[r] = fit_mle(problem, space, config.optimizer).theta_hat;
            } catch (const OptimizationFailed&) {
                failed[r] = 1;
            }
        });

        double se_sigma2 = 0.0;
        double se_beta = 0.0;
        double se_micro = 0.0;
        std::size_t ok = 0;
        std::size_t n_failed = 0;
        for (std::size_t r = 0; r < config.replicates; ++r) {
            if (failed[r] != 0) {
                ++n_failed;
                continue;
            }
            const double s2 = estimates[r](0) * estimates[r](0);
            const double b = estimates[r](1);
            se_sigma2 += (s2 - sigma2_true) * (s2 - sigma2_true);
            se_beta += (b - config.beta0) * (b - config.beta0);
            se_micro += (s2 * b - micro_true) * (s2 * b - micro_true);
            ++ok;
        }
        const double denom = ok > 0 ? static_cast<double>(ok) : std::numeric_limits<double>::quiet_NaN();
        report.rmse_sigma2.push_back(std::sqrt(se_sigma2 / denom));
        report.rmse_beta.push_back(std::sqrt(se_beta / denom));
        report.rmse_microergodic.push_back(std::sqrt(se_micro / denom));
        report.failed_replicates.push_back(n_failed);
    }
    return report;
}

}  // namespace gpeq
