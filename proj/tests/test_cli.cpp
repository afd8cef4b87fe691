#include "gpeq/cli.hpp"
#include "gpeq/io.hpp"
#include "cli_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>

using namespace gpeq;
using gpeq::testing::run_cli;
using gpeq::testing::slurp;
using gpeq::testing::TempDir;
using Json = nlohmann::json;

namespace {

const char* kBrownianJdiv = R"({
  "kernel1": {"variant": "brownian", "sigma": 1.0},
  "kernel2": {"variant": "brownian", "sigma": 2.0},
  "design": {"type": "interval_dyadic", "max_n": 64, "lower": 0, "upper": 1}
})";

Json read_json(const std::filesystem::path& p) { return Json::parse(slurp(p)); }

}  // namespace

TEST_CASE("sha256") {
    CHECK(cli::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("jdiv on scaled Brownian motion") {
    TempDir tmp;
    const auto cfg = tmp.write("jdiv.json", kBrownianJdiv);
    const auto out = tmp.path() / "out";
    const auto r = run_cli({"jdiv", "--config", cfg, "--out", out.string()});
    REQUIRE(r.code == cli::kOk);
    const Json verdict = read_json(out / "verdict.json");
    CHECK(verdict["label"] == "OrthogonalityIndicated");
    CHECK(verdict["slope_estimate"].get<double>() == doctest::Approx(1.125).epsilon(1e-8));
    const std::string csv = slurp(out / "trace.csv");
    CHECK(csv.rfind("n,J,slope_estimate\n", 0) == 0);
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(csv.find("\n64,72,") != std::string::npos);

    const Json manifest = read_json(out / "manifest.json");
    CHECK(manifest["subcommand"] == "jdiv");
    CHECK(manifest["config_digest"] == cli::sha256_hex(kBrownianJdiv));
    CHECK(manifest["tool_version"] == std::string(cli::kToolVersion));
    CHECK(manifest.contains("timestamp"));
    CHECK(manifest["threads"] == 1);
}

TEST_CASE("jdiv on identical and on Striebel-matched kernels") {
    TempDir tmp;
    const auto same = tmp.write("same.json", R"({
      "kernel1": {"variant": "exponential", "sigma": 1.0, "beta": 2.0},
      "kernel2": {"variant": "exponential", "sigma": 1.0, "beta": 2.0},
      "design": {"type": "interval_dyadic", "max_n": 32}})");
    REQUIRE(run_cli({"jdiv", "--config", same, "--out", (tmp.path() / "a").string()}).code == cli::kOk);
    const Json v = read_json(tmp.path() / "a" / "verdict.json");
    CHECK(v["label"] == "EquivalenceIndicated");
    for (double j : v["trace"]["values"]) CHECK(std::abs(j) <= 1e-9);

    const auto striebel = tmp.write("striebel.json", R"({
      "kernel1": {"variant": "exponential", "sigma": 1.0, "beta": 2.0},
      "kernel2": {"variant": "exponential", "sigma": 1.4142135623730951, "beta": 1.0},
      "design": {"type": "interval_dyadic", "max_n": 512}})");
    REQUIRE(run_cli({"jdiv", "--config", striebel, "--out", (tmp.path() / "b").string()}).code == cli::kOk);
    CHECK(read_json(tmp.path() / "b" / "verdict.json")["label"] == "EquivalenceIndicated");
}

TEST_CASE("sphere subcommand") {
    TempDir tmp;
    const auto finite = tmp.write("finite.json", R"({"d": 3, "K": 10000, "ratio_model": {"scale": 1, "exponent": 2}})");
    REQUIRE(run_cli({"sphere", "--config", finite, "--out", (tmp.path() / "f").string()}).code == cli::kOk);
    const Json v = read_json(tmp.path() / "f" / "verdict.json");
    CHECK(v["verdict"] == "Finite");
    CHECK(v["equivalence"] == "equivalent");
    CHECK(v["final"].get<double>() < 2.0);
    CHECK(slurp(tmp.path() / "f" / "criterion.csv").rfind("k,term,partial_sum\n", 0) == 0);

    const auto divergent = tmp.write("div.json", R"({"d": 3, "K": 100, "ratio_model": {"scale": 3, "exponent": 0}})");
    REQUIRE(run_cli({"sphere", "--config", divergent, "--out", (tmp.path() / "d").string()}).code == cli::kOk);
    const Json dv = read_json(tmp.path() / "d" / "verdict.json");
    CHECK(dv["verdict"] == "Divergent");
    CHECK(dv["final"].get<double>() == doctest::Approx(9.0 * 101 * 101));

    const auto same = tmp.write("same.json", R"({"K": 3,
      "spectrum1": {"d": 3, "coeffs": [1, 0.5, 0.25, 0.125]},
      "spectrum2": {"d": 3, "coeffs": [1, 0.5, 0.25, 0.125]}})");
    REQUIRE(run_cli({"sphere", "--config", same, "--out", (tmp.path() / "s").string()}).code == cli::kOk);
    CHECK(read_json(tmp.path() / "s" / "verdict.json")["final"] == 0.0);

    const auto mismatch = tmp.write("mismatch.json", R"({"K": 2,
      "spectrum1": {"d": 3, "coeffs": [1, 0.5, 0.25]},
      "spectrum2": {"d": 3, "coeffs": [1, 0, 0.25]}})");
    const auto r = run_cli({"sphere", "--config", mismatch, "--out", (tmp.path() / "m").string()});
    CHECK(r.code == cli::kAtomMismatch);
    CHECK(r.err.find("atom mismatch") != std::string::npos);
}

TEST_CASE("chow subcommand") {
    TempDir tmp;
    Json atoms1 = Json::array(), atoms2 = Json::array();
    for (int n = 1; n <= 1000; ++n) {
        atoms1.push_back({{"label", "a" + std::to_string(n)}, {"mass", 1.0 + 1.0 / n}, {"dim", 1}});
        atoms2.push_back({{"label", "a" + std::to_string(n)}, {"mass", 1.0}, {"dim", 1}});
    }
    tmp.write("m1.json", Json{{"atoms", atoms1}}.dump());
    tmp.write("m2.json", Json{{"atoms", atoms2}}.dump());
    const auto cfg = tmp.write("chow.json", R"({"measure1": "m1.json", "measure2": "m2.json",
      "ratio_model": {"scale": 1, "exponent": 1}})");
    REQUIRE(run_cli({"chow", "--config", cfg, "--out", (tmp.path() / "o").string()}).code == cli::kOk);
    const Json v = read_json(tmp.path() / "o" / "verdict.json");
    CHECK(v["verdict"] == "Finite");
    CHECK(v["shared_atoms"] == true);
    CHECK(v["final"].get<double>() == doctest::Approx(1.6439345666815598).epsilon(1e-12));  // H_1000^(2)
    CHECK(slurp(tmp.path() / "o" / "criterion.csv").rfind("n,partial_sum\n1,1\n", 0) == 0);

    const auto bad = tmp.write("bad.json", R"({
      "measure1": {"atoms": [{"label": "x", "mass": 1, "dim": 1}]},
      "measure2": {"atoms": [{"label": "y", "mass": 1, "dim": 1}]}})");
    CHECK(run_cli({"chow", "--config", bad, "--out", (tmp.path() / "b").string()}).code == cli::kAtomMismatch);
}

TEST_CASE("sample subcommand") {
    TempDir tmp;
    const auto cfg = tmp.write("sample.json", R"({
      "kernel": {"variant": "exponential", "sigma": 1.0, "beta": 1.0},
      "design": {"type": "interval_grid", "n": 5, "lower": 0, "upper": 1},
      "replicates": 7, "seed": 3})");
    REQUIRE(run_cli({"sample", "--config", cfg, "--out", (tmp.path() / "a").string()}).code == cli::kOk);
    const std::string csv = slurp(tmp.path() / "a" / "samples.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    const Json side = read_json(tmp.path() / "a" / "samples.json");
    CHECK(side["seed"] == 3);
    CHECK(side["replicates"] == 7);
    CHECK(side["kernel"]["variant"] == "exponential");

    REQUIRE(run_cli({"sample", "--config", cfg, "--out", (tmp.path() / "b").string(), "--seed", "4"}).code == cli::kOk);
    CHECK(slurp(tmp.path() / "b" / "samples.csv") != csv);
    CHECK(read_json(tmp.path() / "b" / "manifest.json")["seed"] == 4);
    REQUIRE(run_cli({"sample", "--config", cfg, "--out", (tmp.path() / "c").string(), "--threads", "3"}).code == cli::kOk);
    CHECK(slurp(tmp.path() / "c" / "samples.csv") == csv);

    const auto singular = tmp.write("singular.json", R"({
      "kernel": {"variant": "brownian", "sigma": 1.0},
      "design": {"type": "points", "geometry": "euclidean", "points": [[0.0], [0.5]]},
      "replicates": 3})");
    const auto r = run_cli({"sample", "--config", singular, "--out", (tmp.path() / "s").string()});
    CHECK(r.code == cli::kSingularGram);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("mle subcommand") {
    TempDir tmp;
    const auto cfg = tmp.write("mle.json", R"({"n_grid": [10, 20], "replicates": 20, "seed": 1, "starts": 2})");
    REQUIRE(run_cli({"mle", "--config", cfg, "--out", (tmp.path() / "a").string()}).code == cli::kOk);
    const std::string csv = slurp(tmp.path() / "a" / "consistency.csv");
    CHECK(csv.rfind("n,rmse_sigma2,rmse_beta,rmse_microergodic,failed_replicates\n10,", 0) == 0);
    const Json report = read_json(tmp.path() / "a" / "report.json");
    CHECK(report["replicates"] == 20);
    REQUIRE(run_cli({"mle", "--config", cfg, "--out", (tmp.path() / "b").string()}).code == cli::kOk);
    CHECK(slurp(tmp.path() / "b" / "consistency.csv") == csv);
}

TEST_CASE("config errors exit with code 2") {
    TempDir tmp;
    const auto out = (tmp.path() / "o").string();
    CHECK(run_cli({"jdiv", "--config", (tmp.path() / "missing.json").string(), "--out", out}).code == cli::kConfigError);
    CHECK(run_cli({"jdiv", "--config", tmp.write("bad.json", "{not json"), "--out", out}).code == cli::kConfigError);
    CHECK(run_cli({"jdiv", "--config", tmp.write("empty.json", "{}"), "--out", out}).code == cli::kConfigError);
    CHECK(run_cli({"jdiv", "--config", tmp.write("v.json", R"({
      "kernel1": {"variant": "matern", "sigma": 1},
      "kernel2": {"variant": "brownian", "sigma": 1},
      "design": {"type": "interval_dyadic", "max_n": 16}})"), "--out", out}).code == cli::kConfigError);
    CHECK(run_cli({"jdiv", "--config", tmp.write("short.json", R"({
      "kernel1": {"variant": "brownian", "sigma": 1},
      "kernel2": {"variant": "brownian", "sigma": 2},
      "design": {"type": "interval_dyadic", "max_n": 8}})"), "--out", out}).code == cli::kConfigError);
    CHECK(run_cli({"jdiv", "--config", tmp.write("geo.json", R"({
      "kernel1": {"variant": "brownian", "sigma": 1},
      "kernel2": {"variant": "brownian", "sigma": 2},
      "design": {"type": "sphere_fibonacci", "d": 3, "sizes": [4, 8, 16, 32]}})"), "--out", out}).code == cli::kConfigError);
    CHECK(run_cli({"sphere", "--config", tmp.write("s.json", R"({"d": 3})"), "--out", out}).code == cli::kConfigError);
    CHECK(run_cli({"mle", "--config", tmp.write("m.json", R"({"coordinates": "polar"})"), "--out", out}).code ==
          cli::kConfigError);
    CHECK(run_cli({"jdiv"}).code == cli::kConfigError);
    CHECK(run_cli({"frobnicate"}).code == cli::kConfigError);
    CHECK(run_cli({}).code == cli::kConfigError);
}

TEST_CASE("help documents the config keys") {
    const auto r = run_cli({"mle", "--help"});
    CHECK(r.code == cli::kOk);
    for (const char* key : {"n_grid", "replicates", "seed", "box_lower", "box_upper", "coordinates", "tol_x"})
        CHECK(r.out.find(key) != std::string::npos);
    const auto j = run_cli({"jdiv", "--help"});
    for (const char* key : {"kernel1", "kernel2", "design", "jitter"}) CHECK(j.out.find(key) != std::string::npos);
}

TEST_CASE("json loaders") {
    const auto k = io::kernel_from_json(Json::parse(R"({"variant": "schoenberg", "d": 3, "coeffs": [1, 2]})"));
    CHECK(variant_name(k) == "schoenberg");
    CHECK(io::to_json(k)["coeffs"].size() == 2);
    const auto e = io::kernel_from_json(Json::parse(R"({"variant": "exponential", "sigma": 2, "beta": 0.5})"));
    CHECK(io::kernel_from_json(io::to_json(e)).index() == e.index());
    CHECK_THROWS_AS((void)io::kernel_from_json(Json::parse(R"({"variant": "exponential", "sigma": 2})")), io::ConfigError);
    CHECK_THROWS_AS((void)io::kernel_from_json(Json::parse(R"({"variant": "brownian", "sigma": -1})")), ContractError);

    const auto m = io::measure_from_json(Json::parse(R"({"atoms": [{"label": "k0", "mass": 1.0, "dim": 1}]})"));
    CHECK(m.atoms()[0].label == "k0");
    CHECK(io::measure_from_json(io::to_json(m)).atoms()[0].mass == 1.0);

    const auto designs = io::nested_designs_from_json(Json::parse(R"({"type": "sphere_fibonacci", "sizes": [5, 10]})"));
    CHECK(designs.size() == 2);
    CHECK(designs[1].geometry() == Geometry::sphere(3));
    CHECK(io::format_double(0.1) == "0.10000000000000001");
}
