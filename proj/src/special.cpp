#include "gpeq/special.hpp"

#include "gpeq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gpeq {

namespace {

// C(m, j) with C(m, j) = 0 for m < j. Each partial product C(m-j+i, i) is an
// integer, so the running division is exact.
std::int64_t binomial(std::int64_t m, std::int64_t j) {
    if (j < 0 || m < j) return 0;
    j = std::min(j, m - j);
    std::int64_t result = 1;
    for (std::int64_t i = 1; i <= j; ++i) {
        const std::int64_t factor = m - j + i;
        if (result > std::numeric_limits<std::int64_t>::max() / factor)
            throw ContractError("harmonic_dimension: result overflows 64-bit integer");
        result = result * factor / i;
    }
    return result;
}

double checked_argument(double x) {
    if (!(std::abs(x) <= 1.0 + 1e-12))
        throw DomainError("gegenbauer: argument " + std::to_string(x) + " outside [-1, 1]");
    return std::clamp(x, -1.0, 1.0);
}

}  // namespace

std::int64_t harmonic_dimension(int d, int k) {
    if (d < 3) throw ContractError("harmonic_dimension: need d >= 3");
    if (k < 0) throw ContractError("harmonic_dimension: need k >= 0");
    if (k == 0) return 1;
    return binomial(k + d - 1, d - 1) - binomial(k + d - 3, d - 1);
}

std::vector<double> gegenbauer_normalized_all(int max_k, int d, double x) {
    if (d < 3) throw ContractError("gegenbauer: need d >= 3");
    if (max_k < 0) throw ContractError("gegenbauer: need k >= 0");
    x = checked_argument(x);

    std::vector<double> g(static_cast<std::size_t>(max_k) + 1);
    g[0] = 1.0;
    if (max_k == 0) return g;
    if (x == 1.0) {
        std::fill(g.begin(), g.end(), 1.0);
        return g;
    }
    g[1] = x;
    const double two_lambda = static_cast<double>(d - 2);
    // (k + 2λ) G_{k+1} = (2k + 2λ) x G_k - k G_{k-1}
    for (int k = 1; k < max_k; ++k) {
        const double kk = static_cast<double>(k);
        g[static_cast<std::size_t>(k) + 1] =
            ((2.0 * kk + two_lambda) * x * g[static_cast<std::size_t>(k)] - kk * g[static_cast<std::size_t>(k) - 1]) /
            (kk + two_lambda);
    }
    return g;
}

double gegenbauer_normalized(int k, int d, double x) { return gegenbauer_normalized_all(k, d, x).back(); }

}  // namespace gpeq
