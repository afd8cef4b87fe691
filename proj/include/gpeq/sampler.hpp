#pragma once

#include "gpeq/design.hpp"
#include "gpeq/gram.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <random>

namespace gpeq {

/// Replicates of Y_n ~ N(0, R(n)); row r is replicate r.
struct SampleBatch {
    std::optional<Design> design;
    Eigen::MatrixXd samples;
    std::uint64_t seed = 0;
};

/// Standard normal variates by the Marsaglia polar method on top of
/// mt19937_64, with 53-bit uniforms. Frozen: changing it changes every batch.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed);

    /// Generator for replicate `index` of a run seeded with `seed`.
    static NormalStream for_replicate(std::uint64_t seed, std::uint64_t index);

    double next();

private:
    double uniform();

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// m replicates L z, z i.i.d. standard normal from NormalStream::for_replicate(seed, r).
/// Replicates are generated in parallel; the output does not depend on the thread count.
[[nodiscard]] SampleBatch sample_paths(const GramMatrix& g, std::size_t m, std::uint64_t seed);
[[nodiscard]] SampleBatch sample_paths(const GramMatrix& g, const Design& design, std::size_t m, std::uint64_t seed);

/// (1/m) sum_r y_r y_r^T, no mean subtraction (centered model).
[[nodiscard]] Eigen::MatrixXd empirical_covariance(const SampleBatch& batch);

}  // namespace gpeq
