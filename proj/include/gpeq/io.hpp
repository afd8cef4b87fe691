#pragma once

// JSON loading of kernels, spectra, atomic measures and design generators, and
// CSV/JSON writers for results. CSV: ',' delimiter, '.' decimal point, LF line
// endings, doubles printed with 17 significant digits.

#include "gpeq/design.hpp"
#include "gpeq/divergence.hpp"
#include "gpeq/kernels.hpp"
#include "gpeq/mle.hpp"
#include "gpeq/sampler.hpp"
#include "gpeq/spectral.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace gpeq::io {

using Json = nlohmann::json;

/// Thrown for malformed documents; carries a JSON-path-like location.
class ConfigError : public ContractError {
public:
    using ContractError::ContractError;
};

/// {"variant": "brownian", "sigma": s}
/// {"variant": "exponential", "sigma": s, "beta": b}
/// {"variant": "schoenberg", "d": d, "coeffs": [...]}
[[nodiscard]] CovarianceKernel kernel_from_json(const Json& j);
[[nodiscard]] Json to_json(const CovarianceKernel& kernel);

/// {"d": d, "coeffs": [...]} ("variant": "schoenberg" optional).
[[nodiscard]] SchoenbergSpectrum spectrum_from_json(const Json& j);

/// {"atoms": [{"label": "k0", "mass": 1.0, "dim": 1}, ...]}
[[nodiscard]] AtomicSpectralMeasure measure_from_json(const Json& j);
[[nodiscard]] Json to_json(const AtomicSpectralMeasure& measure);

/// {"scale": c, "exponent": s, "offset": o, "dim_exponent": q, "dim_upper": U, "dim_lower": L};
/// omitted dimension fields fall back to `defaults`.
[[nodiscard]] RatioTailModel ratio_model_from_json(const Json& j, const RatioTailModel& defaults);

/// Nested design generators:
///   {"type": "interval_dyadic", "max_n": 128, "lower": 0, "upper": 1}
///   {"type": "sphere_fibonacci", "d": 3, "sizes": [20, 40, 80, 160]}
[[nodiscard]] std::vector<Design> nested_designs_from_json(const Json& j);

/// Single designs: the generators above (largest design), plus
///   {"type": "interval_grid", "n": 8, "lower": 0, "upper": 1}
///   {"type": "points", "geometry": "euclidean" | "sphere", "points": [[...], ...]}
[[nodiscard]] Design design_from_json(const Json& j);
[[nodiscard]] Json to_json(const Design& design);

[[nodiscard]] Json to_json(const DichotomyVerdict& verdict);
[[nodiscard]] Json to_json(const DivergenceTrace& trace);
[[nodiscard]] Json to_json(const CriterionResult& result);
[[nodiscard]] Json to_json(const ConsistencyReport& report);

[[nodiscard]] std::string format_double(double value);

/// n,J,slope_estimate ; the slope column uses the rows up to and including that one.
[[nodiscard]] std::string trace_csv(const DivergenceTrace& trace);
/// k,term,partial_sum
[[nodiscard]] std::string sphere_criterion_csv(const CriterionResult& result);
/// n,partial_sum
[[nodiscard]] std::string chow_criterion_csv(const CriterionResult& result);
/// one replicate per row, no header
[[nodiscard]] std::string samples_csv(const SampleBatch& batch);
/// n,rmse_sigma2,rmse_beta,rmse_microergodic,failed_replicates
[[nodiscard]] std::string consistency_csv(const ConsistencyReport& report);

[[nodiscard]] std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace gpeq::io
