#pragma once

// Shared test inputs built from the library types.

#include "gpeq/kernels.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace gpeq::testing {

/// Pair of S^2 spectra that differ only on degrees k <= 5 and share the
/// geometric tail 2^{-k} up to degree 40, so both Grams stay nonsingular on
/// a few hundred points while the criterion sum is a finite sum over k <= 5.
struct BridgeSpectra {
    SchoenbergSpectrum s1;
    SchoenbergSpectrum s2;
};

inline BridgeSpectra bridge_spectra() {
    constexpr std::array<double, 6> ratio{1.5, 0.7, 1.3, 2.0, 0.8, 1.2};
    std::vector<double> a1(41), a2(41);
    for (std::size_t k = 0; k < a2.size(); ++k) {
        a2[k] = std::ldexp(1.0, -static_cast<int>(k));
        a1[k] = k < ratio.size() ? a2[k] * ratio[k] : a2[k];
    }
    return {SchoenbergSpectrum(3, a1), SchoenbergSpectrum(3, a2)};
}

}  // namespace gpeq::testing
