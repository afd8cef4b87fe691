#include "gpeq/divergence.hpp"

#include "gpeq/parallel.hpp"

#include <fmt/core.h>

#include <cmath>
#include <cstdlib>
#include <limits>

namespace gpeq {

double trailing_slope(const std::vector<std::size_t>& sizes, const std::vector<double>& values, std::size_t count) {
    if (sizes.size() != values.size() || count > sizes.size())
        throw ContractError("trailing_slope: inconsistent trace");
    if (count == 0) return 0.0;
    if (count == 1) return values[0] / static_cast<double>(sizes[0]);

    std::size_t first = count / 2;
    if (count - first < 2) first = count - 2;
    const auto m = static_cast<double>(count - first);
    double mean_n = 0.0;
    double mean_j = 0.0;
    for (std::size_t i = first; i < count; ++i) {
        mean_n += static_cast<double>(sizes[i]);
        mean_j += values[i];
    }
    mean_n /= m;
    mean_j /= m;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = first; i < count; ++i) {
        const double dx = static_cast<double>(sizes[i]) - mean_n;
        sxy += dx * (values[i] - mean_j);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

void require_nested(const std::vector<Design>& designs) {
    for (std::size_t i = 1; i < designs.size(); ++i) {
        if (designs[i].size() <= designs[i - 1].size() || !designs[i - 1].is_prefix_of(designs[i]))
            throw ContractError(fmt::format("j_divergence_trace: design {} is not a strict prefix-extension of design {}",
                                            i, i - 1));
    }
}

DivergenceTrace j_divergence_trace(const CovarianceKernel& k1, const CovarianceKernel& k2,
                                   const std::vector<Design>& designs, double jitter) {
    if (designs.empty()) throw ContractError("j_divergence_trace: no designs");
    require_nested(designs);

    DivergenceTrace trace;
    trace.sizes.resize(designs.size());
    trace.values.resize(designs.size());
    parallel_for(designs.size(), [&](std::size_t i) {
        const auto g1 = gram(k1, designs[i], jitter);
        const auto g2 = gram(k2, designs[i], jitter);
        trace.sizes[i] = designs[i].size();
        trace.values[i] = j_divergence(g1, g2);
    });
    trace.slope_estimate = trailing_slope(trace.sizes, trace.values, trace.sizes.size());
    return trace;
}

std::string to_string(DichotomyLabel label) {
    switch (label) {
        case DichotomyLabel::EquivalenceIndicated: return "EquivalenceIndicated";
        case DichotomyLabel::OrthogonalityIndicated: return "OrthogonalityIndicated";
        case DichotomyLabel::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

DichotomyVerdict dichotomy_diagnostic(const DivergenceTrace& trace, const DichotomyRule& rule) {
    if (trace.sizes.size() != trace.values.size()) throw ContractError("dichotomy_diagnostic: inconsistent trace");
    if (trace.sizes.size() < 4) throw ContractError("dichotomy_diagnostic: need at least 4 trace points");

    const std::size_t last = trace.sizes.size() - 1;
    const double n_last = static_cast<double>(trace.sizes[last]);
    const double target = n_last / 2.0;
    std::size_t half = 0;
    for (std::size_t i = 1; i < last; ++i) {
        if (std::abs(static_cast<double>(trace.sizes[i]) - target) <
            std::abs(static_cast<double>(trace.sizes[half]) - target))
            half = i;
    }

    const double j_last = trace.values[last];
    const double j_half = trace.values[half];
    double ratio = 1.0;
    if (j_half > 0.0)
        ratio = j_last / j_half;
    else if (j_last > 0.0)
        ratio = std::numeric_limits<double>::infinity();

    DichotomyVerdict verdict;
    const double slope = trace.slope_estimate;
    if (ratio >= rule.orthogonal_ratio) {
        verdict.label = DichotomyLabel::OrthogonalityIndicated;
        verdict.statistic = slope;
        verdict.rationale = fmt::format("J({}) / J({}) = {:.6g} >= {}: divergence keeps growing with n (slope {:.6g})",
                                        trace.sizes[last], trace.sizes[half], ratio, rule.orthogonal_ratio, slope);
    } else if (ratio <= rule.equivalent_ratio &&
               slope * n_last <= rule.equivalent_slope_fraction * j_last + rule.absolute_slack) {
        verdict.label = DichotomyLabel::EquivalenceIndicated;
        verdict.statistic = j_last;
        verdict.rationale = fmt::format(
            "J({}) / J({}) = {:.6g} <= {} and slope * n = {:.6g} is within {} of J = {:.6g}: trace levels off",
            trace.sizes[last], trace.sizes[half], ratio, rule.equivalent_ratio, slope * n_last,
            rule.equivalent_slope_fraction, j_last);
    } else {
        verdict.label = DichotomyLabel::Inconclusive;
        verdict.statistic = ratio;
        verdict.rationale = fmt::format("J({}) / J({}) = {:.6g} with slope {:.6g}: neither rule applies",
                                        trace.sizes[last], trace.sizes[half], ratio, slope);
    }
    return verdict;
}

}  // namespace gpeq
