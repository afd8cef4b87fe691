#pragma once

#include "gpeq/design.hpp"
#include "gpeq/gram.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace gpeq {

/// Degree-wise coefficients a(0..K) of an isotropic kernel on S^{d-1}
///   R(s,t) = sum_k a(k) h(k) G_k(<s,t>).
/// The list is the whole spectrum: a(k) = 0 for k > K.
class SchoenbergSpectrum {
public:
    SchoenbergSpectrum(int d, std::vector<double> coeffs);

    [[nodiscard]] int sphere_dim() const noexcept { return d_; }
    [[nodiscard]] const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    /// Truncation order K (coeffs().size() - 1).
    [[nodiscard]] int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    /// a(k), zero beyond the truncation order.
    [[nodiscard]] double coeff(int k) const noexcept;
    [[nodiscard]] std::size_t positive_count() const noexcept;
    /// sum_k h(k) a(k) = R(t,t).
    [[nodiscard]] double trace_value() const;
    /// h(K) a(K), the last term of trace_value(); a crude tail diagnostic.
    [[nodiscard]] double last_term_magnitude() const;
    /// Spectrum with every coefficient multiplied by c > 0.
    [[nodiscard]] SchoenbergSpectrum scaled(double c) const;

private:
    int d_;
    std::vector<double> coeffs_;
};

/// sigma^2 min(s, t) on [0, inf).
struct BrownianKernel {
    double sigma;
};

/// sigma^2 exp(-beta |s - t|), |.| the Euclidean distance.
struct ExponentialKernel {
    double sigma;
    double beta;
};

struct SchoenbergKernel {
    SchoenbergSpectrum spectrum;
};

using CovarianceKernel = std::variant<BrownianKernel, ExponentialKernel, SchoenbergKernel>;

/// Throws ContractError for non-positive sigma/beta.
void validate(const CovarianceKernel& kernel);

[[nodiscard]] std::string variant_name(const CovarianceKernel& kernel);

/// Brownian needs Euclidean(1), exponential any Euclidean(d), Schoenberg Sphere(d).
[[nodiscard]] bool accepts(const CovarianceKernel& kernel, const Geometry& geometry);

/// R(s, t). Throws ContractError when the points do not match the kernel geometry.
[[nodiscard]] double eval_kernel(const CovarianceKernel& kernel, const Point& s, const Point& t);

/// Kernel with its variance multiplied by c > 0.
[[nodiscard]] CovarianceKernel scaled_kernel(const CovarianceKernel& kernel, double c);

/// Dense R(n) on the design. Rows are filled independently, so the result is
/// identical for any thread count.
[[nodiscard]] Eigen::MatrixXd gram_entries(const CovarianceKernel& kernel, const Design& design);

/// Factored R(n). `jitter` (default 0) is added to the diagonal; a singular
/// matrix throws SingularGram.
[[nodiscard]] GramMatrix gram(const CovarianceKernel& kernel, const Design& design, double jitter = 0.0);

}  // namespace gpeq
