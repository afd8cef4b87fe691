#include "gpeq/sampler.hpp"

#include "gpeq/errors.hpp"
#include "gpeq/parallel.hpp"

#include <cmath>

namespace gpeq {

NormalStream::NormalStream(std::uint64_t seed) : engine_(seed) {}

NormalStream NormalStream::for_replicate(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32U),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32U)};
    NormalStream stream(0);
    stream.engine_.seed(seq);
    return stream;
}

double NormalStream::uniform() { return static_cast<double>(engine_() >> 11U) * 0x1.0p-53; }

double NormalStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

SampleBatch sample_paths(const GramMatrix& g, std::size_t m, std::uint64_t seed) {
    if (m == 0) throw ContractError("sample_paths: need at least one replicate");
    const auto n = static_cast<Eigen::Index>(g.n());
    SampleBatch batch;
    batch.seed = seed;
    batch.samples.resize(static_cast<Eigen::Index>(m), n);
    const auto lower = g.chol().triangularView<Eigen::Lower>();
    parallel_for(m, [&](std::size_t r) {
        auto stream = NormalStream::for_replicate(seed, r);
        Eigen::VectorXd z(n);
        for (Eigen::Index i = 0; i < n; ++i) z(i) = stream.next();
        batch.samples.row(static_cast<Eigen::Index>(r)) = (lower * z).transpose();
    });
    return batch;
}

SampleBatch sample_paths(const GramMatrix& g, const Design& design, std::size_t m, std::uint64_t seed) {
    if (design.size() != g.n()) throw ContractError("sample_paths: design size does not match Gram size");
    SampleBatch batch = sample_paths(g, m, seed);
    batch.design = design;
    return batch;
}

Eigen::MatrixXd empirical_covariance(const SampleBatch& batch) {
    const auto m = batch.samples.rows();
    if (m < 2) throw ContractError("empirical_covariance: need at least two replicates");
    return (batch.samples.transpose() * batch.samples) / static_cast<double>(m);
}

}  // namespace gpeq
