#include "gpeq/errors.hpp"
#include "gpeq/special.hpp"
#include "gpeq/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

using namespace gpeq;

namespace {

// a2(k) = (k+1)^{-4}, a1(k) = a2(k) (1 + (k+1)^{-s})
std::pair<SchoenbergSpectrum, SchoenbergSpectrum> ratio_pair(int d, int K, double s, double scale = 1.0) {
    std::vector<double> a1(static_cast<std::size_t>(K) + 1), a2(a1.size());
    for (int k = 0; k <= K; ++k) {
        const double x = k + 1.0;
        a2[static_cast<std::size_t>(k)] = std::pow(x, -4.0);
        a1[static_cast<std::size_t>(k)] = a2[static_cast<std::size_t>(k)] * (1.0 + scale * std::pow(x, -s));
    }
    return {SchoenbergSpectrum(d, a1), SchoenbergSpectrum(d, a2)};
}

AtomicSpectralMeasure unit_measure(std::size_t n, double (*mass)(std::size_t)) {
    std::vector<Atom> atoms;
    for (std::size_t i = 1; i <= n; ++i) atoms.push_back({"a" + std::to_string(i), mass(i), 1});
    return AtomicSpectralMeasure(std::move(atoms));
}

}  // namespace

TEST_CASE("identical spectra give a zero sum") {
    const SchoenbergSpectrum s(3, {1.0, 0.5, 0.0, 0.25});
    const auto r = sphere_equivalence_sum(s, s, 3);
    for (double p : r.partial_sums) CHECK(p == 0.0);
    CHECK(r.verdict == SeriesVerdict::Finite);
    CHECK(r.indices.size() == 4);
}

TEST_CASE("inverse-square ratio on S^2 converges") {
    const int K = 10000;
    const auto [s1, s2] = ratio_pair(3, K, 2.0);
    const auto r = sphere_equivalence_sum(s1, s2, K, sphere_ratio_model(3, 1.0, 2.0));
    // direct oracle: sum (2k+1)/(k+1)^4
    double oracle = 0.0;
    for (int k = 0; k <= K; ++k) oracle += (2.0 * k + 1.0) / std::pow(k + 1.0, 4.0);
    CHECK(r.final == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(r.final < 2.0);
    CHECK(r.verdict == SeriesVerdict::Finite);
    REQUIRE(r.tail_bound.has_value());
    CHECK(*r.tail_bound <= 1e-3);
    CHECK(*r.tail_bound >= 0.0);
    // the true tail is below the bound
    double tail = 0.0;
    for (int k = K + 1; k <= 40 * K; ++k) tail += (2.0 * k + 1.0) / std::pow(k + 1.0, 4.0);
    CHECK(tail <= *r.tail_bound);
}

TEST_CASE("constant ratio diverges") {
    const int K = 50;
    std::vector<double> a2(K + 1);
    for (int k = 0; k <= K; ++k) a2[static_cast<std::size_t>(k)] = std::pow(0.9, k);
    const SchoenbergSpectrum s2(3, a2);
    const auto s1 = s2.scaled(4.0);
    const auto r = sphere_equivalence_sum(s1, s2, K, sphere_ratio_model(3, 3.0, 0.0));
    CHECK(r.final == doctest::Approx(9.0 * (K + 1) * (K + 1)).epsilon(1e-12));
    CHECK(r.verdict == SeriesVerdict::Divergent);
    CHECK_FALSE(r.tail_bound.has_value());
}

TEST_CASE("slow ratio decay diverges under the model") {
    const auto [s1, s2] = ratio_pair(3, 200, 0.5);
    CHECK(sphere_equivalence_sum(s1, s2, 200, sphere_ratio_model(3, 1.0, 0.5)).verdict == SeriesVerdict::Divergent);
    const auto [t1, t2] = ratio_pair(4, 200, 1.0);
    CHECK(sphere_equivalence_sum(t1, t2, 200, sphere_ratio_model(4, 1.0, 1.0)).verdict == SeriesVerdict::Divergent);
    const auto [u1, u2] = ratio_pair(4, 200, 2.0);
    CHECK(sphere_equivalence_sum(u1, u2, 200, sphere_ratio_model(4, 1.0, 2.0)).verdict == SeriesVerdict::Finite);
}

TEST_CASE("verdict without a model") {
    const auto [s1, s2] = ratio_pair(3, 20, 2.0);
    CHECK(sphere_equivalence_sum(s1, s2, 20).verdict == SeriesVerdict::Finite);
    CHECK(sphere_equivalence_sum(s1, s2, 10).verdict == SeriesVerdict::Inconclusive);
}

TEST_CASE("model mismatch is a contract error") {
    const auto [s1, s2] = ratio_pair(3, 20, 2.0);
    CHECK_THROWS_AS((void)sphere_equivalence_sum(s1, s2, 20, sphere_ratio_model(3, 1.0, 1.0)), ContractError);
}

TEST_CASE("support mismatch is an atom mismatch") {
    const SchoenbergSpectrum s1(3, {1.0, 0.5, 0.2});
    const SchoenbergSpectrum s2(3, {1.0, 0.0, 0.2});
    try {
        (void)sphere_equivalence_sum(s1, s2, 2);
        FAIL("expected AtomMismatch");
    } catch (const AtomMismatch& e) {
        CHECK(e.index() == 1);
    }
    // 0/0 contributes nothing
    const SchoenbergSpectrum z1(3, {1.0, 0.0, 0.4});
    const SchoenbergSpectrum z2(3, {1.0, 0.0, 0.2});
    const auto r = sphere_equivalence_sum(z1, z2, 2);
    CHECK(r.terms[1] == 0.0);
    CHECK(r.terms[2] == doctest::Approx(5.0));
    CHECK(sphere_equivalence_sum(z1, z2, 4).terms.back() == 0.0);
}

TEST_CASE("partial sums are non-decreasing and scale invariant") {
    const auto [s1, s2] = ratio_pair(5, 300, 1.5);
    const auto r = sphere_equivalence_sum(s1, s2, 300);
    for (std::size_t i = 1; i < r.partial_sums.size(); ++i) CHECK(r.partial_sums[i] >= r.partial_sums[i - 1]);
    for (double c : {0.01, 3.0, 1e4}) {
        const auto scaled = sphere_equivalence_sum(s1.scaled(c), s2.scaled(c), 300);
        for (std::size_t i = 0; i < r.terms.size(); ++i)
            CHECK(std::abs(scaled.terms[i] - r.terms[i]) <= 1e-12 * (1.0 + r.terms[i]));
    }
}

TEST_CASE("chow sum examples") {
    const auto m = unit_measure(10, [](std::size_t i) { return 1.0 / static_cast<double>(i); });
    const auto same = chow_sum(m, m, 10);
    CHECK(same.final == 0.0);
    CHECK(same.verdict == SeriesVerdict::Finite);

    const std::size_t N = 100000;
    const auto m1 = unit_measure(N, [](std::size_t i) { return 1.0 + 1.0 / static_cast<double>(i); });
    const auto m2 = unit_measure(N, [](std::size_t) { return 1.0; });
    const auto r = chow_sum(m1, m2, N, unit_dim_ratio_model(1.0, 1.0));
    CHECK(std::abs(r.final - std::numbers::pi * std::numbers::pi / 6.0) <= 1e-4);
    CHECK(r.verdict == SeriesVerdict::Finite);
    REQUIRE(r.tail_bound.has_value());
    CHECK(r.final + *r.tail_bound >= std::numbers::pi * std::numbers::pi / 6.0);
    CHECK(r.indices.front() == 1);
}

TEST_CASE("chow sum on sphere atoms agrees with the sphere sum") {
    const int K = 2000;
    const auto [s1, s2] = ratio_pair(3, K, 2.0);
    const auto sphere = sphere_equivalence_sum(s1, s2, K);
    const auto chow = chow_sum(sphere_atoms(s1), sphere_atoms(s2), static_cast<std::size_t>(K) + 1);
    REQUIRE(chow.terms.size() == sphere.terms.size());
    for (std::size_t i = 0; i < chow.terms.size(); ++i) CHECK(std::abs(chow.terms[i] - sphere.terms[i]) <= 1e-12);
    CHECK(chow.verdict == SeriesVerdict::Finite);

    const auto atoms = sphere_atoms(SchoenbergSpectrum(4, {0.5, 0.0, 2.0}));
    REQUIRE(atoms.size() == 2);
    CHECK(atoms.atoms()[1].label == "k2");
    CHECK(atoms.atoms()[1].dim == harmonic_dimension(4, 2));
    CHECK(atoms.atoms()[1].mass == doctest::Approx(18.0));
}

TEST_CASE("chow sum mismatches") {
    const AtomicSpectralMeasure m1({{"x", 1.0, 1}, {"y", 2.0, 2}});
    const AtomicSpectralMeasure m2({{"x", 1.0, 1}, {"z", 2.0, 2}});
    const AtomicSpectralMeasure m3({{"x", 1.0, 1}, {"y", 2.0, 3}});
    const AtomicSpectralMeasure m4({{"x", 1.0, 1}});
    CHECK_THROWS_AS((void)chow_sum(m1, m2, 2), AtomMismatch);
    CHECK_THROWS_AS((void)chow_sum(m1, m3, 2), AtomMismatch);
    CHECK_THROWS_AS((void)chow_sum(m1, m4, 2), AtomMismatch);
    CHECK_THROWS_AS((void)chow_sum(m1, m4, 1), AtomMismatch);
    CHECK_THROWS_AS((void)chow_sum(m1, m1, 3), ContractError);
    CHECK(chow_sum(m1, m2, 1).final == 0.0);
    CHECK(chow_sum(m1, m1, 1).verdict == SeriesVerdict::Inconclusive);

    CHECK_THROWS_AS(AtomicSpectralMeasure({{"x", 1.0, 1}, {"x", 2.0, 1}}), ContractError);
    CHECK_THROWS_AS(AtomicSpectralMeasure({{"x", 0.0, 1}}), ContractError);
    CHECK_THROWS_AS(AtomicSpectralMeasure({{"x", 1.0, 0}}), ContractError);
}

TEST_CASE("shared atoms") {
    const AtomicSpectralMeasure m1({{"a", 1.0, 1}, {"b", 2.0, 1}, {"c", 3.0, 2}});
    const AtomicSpectralMeasure permuted({{"c", 5.0, 2}, {"a", 1.0, 1}, {"b", 0.1, 1}});
    const AtomicSpectralMeasure extra({{"a", 1.0, 1}, {"b", 2.0, 1}, {"c", 3.0, 2}, {"d", 1.0, 1}});
    CHECK(check_shared_atoms(m1, m1));
    CHECK(check_shared_atoms(m1, permuted));
    CHECK_FALSE(check_shared_atoms(extra, m1));
}
