#pragma once

#include "gpeq/kernels.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace gpeq {

struct Atom {
    std::string label;
    double mass;
    int dim;
};

/// Atoms with strictly positive masses and dimensions >= 1, labels unique.
class AtomicSpectralMeasure {
public:
    explicit AtomicSpectralMeasure(std::vector<Atom> atoms);

    [[nodiscard]] const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    [[nodiscard]] std::size_t size() const noexcept { return atoms_.size(); }

private:
    std::vector<Atom> atoms_;
};

/// Atom k of a sphere spectrum: label "k<k>", dimension h(k), mass a(k) h(k).
/// Degrees with a(k) = 0 are absent from the measure.
[[nodiscard]] AtomicSpectralMeasure sphere_atoms(const SchoenbergSpectrum& spectrum);

/// Closed-form description of the mass ratio and dimensions along an index i
/// (degree k for spheres, atom position n for atomic measures):
///   ratio(i)  = mu_1 / mu_2 = 1 + scale * (i + offset)^(-exponent)
///   dim_lower * (i + offset)^dim_exponent <= dim(i) <= dim_upper * (i + offset)^dim_exponent
/// Terms are dim(i) * scale^2 * (i + offset)^(-2 exponent). With
/// p = dim_exponent - 2 exponent the tail past N is bounded by the integral
///   dim_upper * scale^2 * (N + offset)^(p + 1) / (-p - 1)   when p < -1,
/// and the series diverges when p >= -1 and dim_lower > 0.
struct RatioTailModel {
    double scale = 0.0;
    double exponent = 0.0;
    double offset = 0.0;
    double dim_exponent = 0.0;
    double dim_upper = 1.0;
    double dim_lower = 1.0;
};

/// Model for sphere degree k on S^{d-1}: offset 1, dimension bounds
/// (k+1)^{d-2} / (d-2)! <= h(k) <= c_d (k+1)^{d-2}, c_3 = 2 and c_d = 1 for d >= 4.
[[nodiscard]] RatioTailModel sphere_ratio_model(int d, double scale, double exponent);

/// Model for atoms indexed n = 1, 2, ... with dim(n) = 1 (Grenander's setting).
[[nodiscard]] RatioTailModel unit_dim_ratio_model(double scale, double exponent);

enum class SeriesVerdict { Finite, Divergent, Inconclusive };

[[nodiscard]] std::string to_string(SeriesVerdict verdict);

struct CriterionResult {
    /// Series index of each term (degree k or 1-based atom position).
    std::vector<std::size_t> indices;
    std::vector<double> terms;
    std::vector<double> partial_sums;
    double final = 0.0;
    SeriesVerdict verdict = SeriesVerdict::Inconclusive;
    std::optional<double> tail_bound;
    std::string rationale;
};

/// Partial sums of sum_{k<=K} h(k) (1 - a_1(k)/a_2(k))^2 for spectra on the
/// same sphere. 0/0 terms contribute 0. Throws AtomMismatch when exactly one
/// of a_1(k), a_2(k) vanishes for some k <= K. Without a model the verdict is
/// Finite only if both spectra are supported on k <= K; with a model the
/// ratios are checked against it (relative 1e-9) and the verdict follows it.
[[nodiscard]] CriterionResult sphere_equivalence_sum(const SchoenbergSpectrum& s1, const SchoenbergSpectrum& s2,
                                                     int max_degree,
                                                     const std::optional<RatioTailModel>& model = std::nullopt);

/// Partial sums of sum_{n<=N} d(a_n) (1 - mu_1(a_n)/mu_2(a_n))^2 over atoms
/// paired by position. Throws AtomMismatch if labels or dimensions differ at
/// any n <= N. Without a model the verdict is Finite only if N covers every atom.
[[nodiscard]] CriterionResult chow_sum(const AtomicSpectralMeasure& m1, const AtomicSpectralMeasure& m2, std::size_t count,
                                       const std::optional<RatioTailModel>& model = std::nullopt);

/// True iff both measures have the same label set (order ignored).
[[nodiscard]] bool check_shared_atoms(const AtomicSpectralMeasure& m1, const AtomicSpectralMeasure& m2);

}  // namespace gpeq
