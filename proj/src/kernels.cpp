#include "gpeq/kernels.hpp"

#include "gpeq/errors.hpp"
#include "gpeq/parallel.hpp"
#include "gpeq/special.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gpeq {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

SchoenbergSpectrum::SchoenbergSpectrum(int d, std::vector<double> coeffs) : d_(d), coeffs_(std::move(coeffs)) {
    if (d_ < 3) throw ContractError("schoenberg spectrum: sphere dimension d must be >= 3");
    if (coeffs_.empty()) throw ContractError("schoenberg spectrum: empty coefficient list");
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (!std::isfinite(coeffs_[k]) || coeffs_[k] < 0.0)
            throw ContractError("schoenberg spectrum: coefficient a(" + std::to_string(k) +
                                ") must be finite and nonnegative");
    }
}

double SchoenbergSpectrum::coeff(int k) const noexcept {
    if (k < 0 || k > order()) return 0.0;
    return coeffs_[static_cast<std::size_t>(k)];
}

std::size_t SchoenbergSpectrum::positive_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(coeffs_.begin(), coeffs_.end(), [](double a) { return a > 0.0; }));
}

double SchoenbergSpectrum::trace_value() const {
    double sum = 0.0;
    for (int k = 0; k <= order(); ++k) sum += static_cast<double>(harmonic_dimension(d_, k)) * coeff(k);
    return sum;
}

double SchoenbergSpectrum::last_term_magnitude() const {
    return static_cast<double>(harmonic_dimension(d_, order())) * coeff(order());
}

SchoenbergSpectrum SchoenbergSpectrum::scaled(double c) const {
    if (!(c > 0.0)) throw ContractError("schoenberg spectrum: scale must be positive");
    std::vector<double> out(coeffs_);
    for (auto& a : out) a *= c;
    return {d_, std::move(out)};
}

void validate(const CovarianceKernel& kernel) {
    std::visit(overloaded{
                   [](const BrownianKernel& k) {
                       if (!(k.sigma > 0.0) || !std::isfinite(k.sigma))
                           throw ContractError("brownian kernel: sigma must be positive");
                   },
                   [](const ExponentialKernel& k) {
                       if (!(k.sigma > 0.0) || !std::isfinite(k.sigma))
                           throw ContractError("exponential kernel: sigma must be positive");
                       if (!(k.beta > 0.0) || !std::isfinite(k.beta))
                           throw ContractError("exponential kernel: beta must be positive");
                   },
                   [](const SchoenbergKernel&) {},
               },
               kernel);
}

std::string variant_name(const CovarianceKernel& kernel) {
    return std::visit(overloaded{
                          [](const BrownianKernel&) { return std::string("brownian"); },
                          [](const ExponentialKernel&) { return std::string("exponential"); },
                          [](const SchoenbergKernel&) { return std::string("schoenberg"); },
                      },
                      kernel);
}

bool accepts(const CovarianceKernel& kernel, const Geometry& geometry) {
    return std::visit(overloaded{
                          [&](const BrownianKernel&) { return geometry == Geometry::euclidean(1); },
                          [&](const ExponentialKernel&) { return geometry.kind == GeometryKind::Euclidean; },
                          [&](const SchoenbergKernel& k) {
                              return geometry == Geometry::sphere(k.spectrum.sphere_dim());
                          },
                      },
                      kernel);
}

namespace {

double eval_schoenberg(const SchoenbergSpectrum& spectrum, double cosine) {
    const int d = spectrum.sphere_dim();
    const auto g = gegenbauer_normalized_all(spectrum.order(), d, cosine);
    double sum = 0.0;
    for (int k = 0; k <= spectrum.order(); ++k) {
        const double a = spectrum.coeff(k);
        if (a != 0.0) sum += a * static_cast<double>(harmonic_dimension(d, k)) * g[static_cast<std::size_t>(k)];
    }
    return sum;
}

void check_unit(const Point& p, int d) {
    if (p.size() != d) throw ContractError("schoenberg kernel: point dimension does not match sphere dimension");
    if (std::abs(p.norm() - 1.0) > kUnitNormTolerance)
        throw ContractError("schoenberg kernel: point is not on the unit sphere");
}

template <typename A, typename B>
double entry(const CovarianceKernel& kernel, const A& s, const B& t) {
    return std::visit(overloaded{
                          [&](const BrownianKernel& k) { return k.sigma * k.sigma * std::min(s(0), t(0)); },
                          [&](const ExponentialKernel& k) {
                              return k.sigma * k.sigma * std::exp(-k.beta * (s - t).norm());
                          },
                          [&](const SchoenbergKernel& k) {
                              return eval_schoenberg(k.spectrum, std::clamp(s.dot(t), -1.0, 1.0));
                          },
                      },
                      kernel);
}

}  // namespace

double eval_kernel(const CovarianceKernel& kernel, const Point& s, const Point& t) {
    validate(kernel);
    std::visit(overloaded{
                   [&](const BrownianKernel&) {
                       if (s.size() != 1 || t.size() != 1)
                           throw ContractError("brownian kernel: points must be scalar");
                       if (s(0) < 0.0 || t(0) < 0.0)
                           throw ContractError("brownian kernel: points must lie in [0, inf)");
                   },
                   [&](const ExponentialKernel&) {
                       if (s.size() != t.size() || s.size() == 0)
                           throw ContractError("exponential kernel: point dimensions differ");
                   },
                   [&](const SchoenbergKernel& k) {
                       check_unit(s, k.spectrum.sphere_dim());
                       check_unit(t, k.spectrum.sphere_dim());
                   },
               },
               kernel);
    return entry(kernel, s, t);
}

CovarianceKernel scaled_kernel(const CovarianceKernel& kernel, double c) {
    if (!(c > 0.0)) throw ContractError("scaled_kernel: scale must be positive");
    return std::visit(overloaded{
                          [&](const BrownianKernel& k) -> CovarianceKernel {
                              return BrownianKernel{k.sigma * std::sqrt(c)};
                          },
                          [&](const ExponentialKernel& k) -> CovarianceKernel {
                              return ExponentialKernel{k.sigma * std::sqrt(c), k.beta};
                          },
                          [&](const SchoenbergKernel& k) -> CovarianceKernel {
                              return SchoenbergKernel{k.spectrum.scaled(c)};
                          },
                      },
                      kernel);
}

Eigen::MatrixXd gram_entries(const CovarianceKernel& kernel, const Design& design) {
    validate(kernel);
    if (design.size() == 0) throw ContractError("gram: empty design");
    if (!accepts(kernel, design.geometry()))
        throw ContractError("gram: design geometry does not match " + variant_name(kernel) + " kernel");

    const auto n = static_cast<Eigen::Index>(design.size());
    const Eigen::MatrixXd& pts = design.points();
    if (std::holds_alternative<BrownianKernel>(kernel) && (pts.array() < 0.0).any())
        throw ContractError("brownian kernel: points must lie in [0, inf)");
    Eigen::MatrixXd out(n, n);
    // row i fills the lower triangle (i, 0..i); mirrored afterwards
    parallel_for(design.size(), [&](std::size_t row) {
        const auto i = static_cast<Eigen::Index>(row);
        for (Eigen::Index j = 0; j <= i; ++j) out(i, j) = entry(kernel, pts.row(i), pts.row(j));
    });
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < i; ++j) out(j, i) = out(i, j);
    return out;
}

GramMatrix gram(const CovarianceKernel& kernel, const Design& design, double jitter) {
    return GramMatrix(gram_entries(kernel, design), jitter);
}

}  // namespace gpeq
