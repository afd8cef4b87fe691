#include "gpeq/spectral.hpp"

#include "gpeq/errors.hpp"
#include "gpeq/special.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace gpeq {

AtomicSpectralMeasure::AtomicSpectralMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    std::set<std::string> seen;
    for (const auto& atom : atoms_) {
        if (!seen.insert(atom.label).second) throw ContractError("atomic measure: duplicate label '" + atom.label + "'");
        if (!(atom.mass > 0.0) || !std::isfinite(atom.mass))
            throw ContractError("atomic measure: mass of '" + atom.label + "' must be positive");
        if (atom.dim < 1) throw ContractError("atomic measure: dimension of '" + atom.label + "' must be >= 1");
    }
}

AtomicSpectralMeasure sphere_atoms(const SchoenbergSpectrum& spectrum) {
    std::vector<Atom> atoms;
    const int d = spectrum.sphere_dim();
    for (int k = 0; k <= spectrum.order(); ++k) {
        const double a = spectrum.coeff(k);
        if (a <= 0.0) continue;
        const auto h = harmonic_dimension(d, k);
        atoms.push_back({fmt::format("k{}", k), a * static_cast<double>(h), static_cast<int>(h)});
    }
    return AtomicSpectralMeasure(std::move(atoms));
}

RatioTailModel sphere_ratio_model(int d, double scale, double exponent) {
    if (d < 3) throw ContractError("sphere_ratio_model: need d >= 3");
    RatioTailModel model;
    model.scale = scale;
    model.exponent = exponent;
    model.offset = 1.0;
    model.dim_exponent = static_cast<double>(d - 2);
    model.dim_upper = d == 3 ? 2.0 : 1.0;
    model.dim_lower = 1.0 / std::tgamma(static_cast<double>(d - 1));
    return model;
}

RatioTailModel unit_dim_ratio_model(double scale, double exponent) {
    RatioTailModel model;
    model.scale = scale;
    model.exponent = exponent;
    return model;
}

std::string to_string(SeriesVerdict verdict) {
    switch (verdict) {
        case SeriesVerdict::Finite: return "Finite";
        case SeriesVerdict::Divergent: return "Divergent";
        case SeriesVerdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

namespace {

constexpr double kModelTolerance = 1e-9;

void check_model_term(const RatioTailModel& model, std::size_t index, double ratio, double dim) {
    const double x = static_cast<double>(index) + model.offset;
    if (!(x > 0.0)) throw ContractError("ratio model: index + offset must be positive");
    const double expected = 1.0 + model.scale * std::pow(x, -model.exponent);
    if (std::abs(ratio - expected) > kModelTolerance * std::max(1.0, std::abs(expected)))
        throw ContractError(fmt::format("ratio model: mass ratio {} at index {} does not match model value {}", ratio,
                                        index, expected));
    const double power = std::pow(x, model.dim_exponent);
    if (dim > model.dim_upper * power * (1.0 + 1e-12) || dim < model.dim_lower * power * (1.0 - 1e-12))
        throw ContractError(fmt::format("ratio model: dimension {} at index {} outside model bounds", dim, index));
}

// Fills verdict/tail_bound from the model once every term has been checked.
void apply_model(const RatioTailModel& model, std::size_t last_index, CriterionResult& result) {
    const double p = model.dim_exponent - 2.0 * model.exponent;
    if (model.scale == 0.0) {
        result.verdict = SeriesVerdict::Finite;
        result.tail_bound = 0.0;
        result.rationale = "ratio model is identically 1: every term vanishes";
    } else if (p < -1.0) {
        const double x = static_cast<double>(last_index) + model.offset;
        const double tail = model.dim_upper * model.scale * model.scale * std::pow(x, p + 1.0) / (-p - 1.0);
        result.verdict = SeriesVerdict::Finite;
        result.tail_bound = tail;
        result.rationale = fmt::format("terms are O(i^{:.6g}); integral test bounds the tail past index {} by {:.6g}", p,
                                       last_index, tail);
    } else if (model.dim_lower > 0.0) {
        result.verdict = SeriesVerdict::Divergent;
        result.rationale = fmt::format("terms are bounded below by a multiple of i^{:.6g} with exponent >= -1", p);
    } else {
        result.verdict = SeriesVerdict::Inconclusive;
        result.rationale = "ratio model gives no lower bound on the dimensions";
    }
}

void push_term(CriterionResult& result, std::size_t index, double term) {
    const double previous = result.partial_sums.empty() ? 0.0 : result.partial_sums.back();
    result.indices.push_back(index);
    result.terms.push_back(term);
    result.partial_sums.push_back(previous + term);
}

}  // namespace

CriterionResult sphere_equivalence_sum(const SchoenbergSpectrum& s1, const SchoenbergSpectrum& s2, int max_degree,
                                       const std::optional<RatioTailModel>& model) {
    if (s1.sphere_dim() != s2.sphere_dim()) throw ContractError("sphere_equivalence_sum: sphere dimensions differ");
    if (max_degree < 0) throw ContractError("sphere_equivalence_sum: K must be >= 0");
    const int d = s1.sphere_dim();

    CriterionResult result;
    result.indices.reserve(static_cast<std::size_t>(max_degree) + 1);
    result.terms.reserve(static_cast<std::size_t>(max_degree) + 1);
    result.partial_sums.reserve(static_cast<std::size_t>(max_degree) + 1);
    for (int k = 0; k <= max_degree; ++k) {
        const double a1 = s1.coeff(k);
        const double a2 = s2.coeff(k);
        const auto h = static_cast<double>(harmonic_dimension(d, k));
        if ((a1 > 0.0) != (a2 > 0.0))
            throw AtomMismatch(static_cast<std::size_t>(k),
                               fmt::format("degree {} is an atom of only one spectrum (a1 = {}, a2 = {})", k, a1, a2));
        double term = 0.0;
        if (a2 > 0.0) {
            const double ratio = a1 / a2;
            if (model) check_model_term(*model, static_cast<std::size_t>(k), ratio, h);
            term = h * (1.0 - ratio) * (1.0 - ratio);
        }
        push_term(result, static_cast<std::size_t>(k), term);
    }
    result.final = result.partial_sums.back();

    if (model) {
        apply_model(*model, static_cast<std::size_t>(max_degree), result);
    } else if (std::max(s1.order(), s2.order()) <= max_degree) {
        result.verdict = SeriesVerdict::Finite;
        result.tail_bound = 0.0;
        result.rationale = "both spectra are supported on degrees <= K";
    } else {
        result.verdict = SeriesVerdict::Inconclusive;
        result.rationale = "spectra extend past K and no ratio model was supplied";
    }
    return result;
}

CriterionResult chow_sum(const AtomicSpectralMeasure& m1, const AtomicSpectralMeasure& m2, std::size_t count,
                         const std::optional<RatioTailModel>& model) {
    if (count == 0) throw ContractError("chow_sum: N must be >= 1");
    const std::size_t available = std::min(m1.size(), m2.size());
    if (count > available && m1.size() == m2.size())
        throw ContractError(fmt::format("chow_sum: N = {} exceeds the {} atoms of each measure", count, available));
    if (count > available) {
        const std::size_t n = available + 1;
        throw AtomMismatch(n, fmt::format("atom {} is present in only one measure", n));
    }

    CriterionResult result;
    result.indices.reserve(count);
    result.terms.reserve(count);
    result.partial_sums.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const Atom& a = m1.atoms()[i];
        const Atom& b = m2.atoms()[i];
        const std::size_t n = i + 1;
        if (a.label != b.label)
            throw AtomMismatch(n, fmt::format("atom {}: labels '{}' and '{}' differ", n, a.label, b.label));
        if (a.dim != b.dim)
            throw AtomMismatch(n, fmt::format("atom {} ('{}'): dimensions {} and {} differ", n, a.label, a.dim, b.dim));
        const double ratio = a.mass / b.mass;
        if (model) check_model_term(*model, n, ratio, static_cast<double>(a.dim));
        push_term(result, n, static_cast<double>(a.dim) * (1.0 - ratio) * (1.0 - ratio));
    }
    result.final = result.partial_sums.back();

    if (model) {
        apply_model(*model, count, result);
    } else if (count == available && m1.size() != m2.size()) {
        throw AtomMismatch(count + 1, fmt::format("atom {} is present in only one measure", count + 1));
    } else if (count == m1.size() && count == m2.size()) {
        result.verdict = SeriesVerdict::Finite;
        result.tail_bound = 0.0;
        result.rationale = "both measures have finitely many atoms, all summed";
    } else {
        result.verdict = SeriesVerdict::Inconclusive;
        result.rationale = "atoms remain past N and no ratio model was supplied";
    }
    return result;
}

bool check_shared_atoms(const AtomicSpectralMeasure& m1, const AtomicSpectralMeasure& m2) {
    std::set<std::string> l1;
    std::set<std::string> l2;
    for (const auto& a : m1.atoms()) l1.insert(a.label);
    for (const auto& a : m2.atoms()) l2.insert(a.label);
    return l1 == l2;
}

}  // namespace gpeq
