#pragma once

#include <cstdint>
#include <vector>

namespace gpeq {

/// Dimension h(k) of the space of degree-k spherical harmonics on S^{d-1}:
/// h(0) = 1, h(k) = C(k+d-1, d-1) - C(k+d-3, d-1).
[[nodiscard]] std::int64_t harmonic_dimension(int d, int k);

/// Normalized Gegenbauer polynomial G_k(x) = C_k^{(d-2)/2}(x) / C_k^{(d-2)/2}(1),
/// so that G_k(1) = 1. Throws DomainError for |x| > 1 + 1e-12; values just
/// outside [-1, 1] are clamped.
[[nodiscard]] double gegenbauer_normalized(int k, int d, double x);

/// G_0(x), ..., G_max_k(x) from one pass of the three-term recurrence.
[[nodiscard]] std::vector<double> gegenbauer_normalized_all(int max_k, int d, double x);

}  // namespace gpeq
