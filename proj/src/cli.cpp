#include "gpeq/cli.hpp"

#include "gpeq/divergence.hpp"
#include "gpeq/errors.hpp"
#include "gpeq/io.hpp"
#include "gpeq/mle.hpp"
#include "gpeq/parallel.hpp"
#include "gpeq/sampler.hpp"
#include "gpeq/spectral.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>
#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <optional>
#include <ostream>

namespace gpeq::cli {

namespace fs = std::filesystem;
using io::ConfigError;
using io::Json;

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256: digest failed");
    std::string hex;
    for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

namespace {

constexpr const char* kJdivHelp = R"(Config keys (JSON object):
  kernel1   kernel object: {"variant": "brownian", "sigma": s}
            | {"variant": "exponential", "sigma": s, "beta": b}
            | {"variant": "schoenberg", "d": d, "coeffs": [a0, a1, ...]}
  kernel2   second kernel, same forms
  design    nested design generator, one of
            {"type": "interval_dyadic", "max_n": 128, "lower": 0, "upper": 1}
            {"type": "sphere_fibonacci", "d": 3, "sizes": [20, 40, 80, 160]}
            (at least 4 designs are needed for the verdict)
  jitter    optional diagonal jitter added to both Grams (default 0)
Writes trace.csv (n,J,slope_estimate), verdict.json and manifest.json.)";

constexpr const char* kSphereHelp = R"(Config keys (JSON object):
  K            highest degree summed
  d            sphere dimension (optional when a spectrum is given)
  spectrum1    optional {"d": d, "coeffs": [...]}
  spectrum2    optional {"d": d, "coeffs": [...]}
  ratio_model  optional {"scale": c, "exponent": s}: a1(k)/a2(k) = 1 + c (k+1)^(-s).
               With a model, a missing spectrum1 is generated from spectrum2, and a
               missing spectrum2 is a2(k) = (k+1)^(-base_decay), k = 0..K.
  base_decay   exponent of the generated spectrum2 (default 4)
Writes criterion.csv (k,term,partial_sum), verdict.json and manifest.json.)";

constexpr const char* kChowHelp = R"(Config keys (JSON object):
  measure1     path (relative to the config file) of an atomic measure JSON file
               {"atoms": [{"label": "a1", "mass": 1.0, "dim": 1}, ...]}, or the object inline
  measure2     second measure, same forms
  N            optional number of atoms summed (default: all atoms)
  ratio_model  optional {"scale": c, "exponent": s, "offset": o, "dim_exponent": q,
               "dim_upper": U, "dim_lower": L}: mu1/mu2 = 1 + c (n+o)^(-s) and
               L (n+o)^q <= dim(n) <= U (n+o)^q for atom position n = 1, 2, ...
               (defaults o = 0, q = 0, U = L = 1)
Writes criterion.csv (n,partial_sum), verdict.json and manifest.json.)";

constexpr const char* kSampleHelp = R"(Config keys (JSON object):
  kernel       kernel object (see jdiv)
  design       {"type": "interval_grid", "n": 8, "lower": 0, "upper": 1}
               | {"type": "points", "geometry": "euclidean"|"sphere", "points": [[...], ...]}
               | a nested generator (its largest design is used)
  replicates   number of replicates m
  seed         unsigned seed (overridden by --seed)
  jitter       optional diagonal jitter (default 0)
Writes samples.csv (one replicate per row), samples.json and manifest.json.)";

constexpr const char* kMleHelp = R"(Config keys (JSON object, all optional):
  n_grid       increasing grid sizes (default [50, 100, 200, 400])
  replicates   replicates per grid size, >= 20 (default 50)
  seed         unsigned seed (default 7; overridden by --seed)
  sigma0       true sigma (default 1)
  beta0        true beta (default 1)
  domain       [lower, upper] of the observation interval (default [0, 1])
  box_lower    [sigma_min, beta_min] (default [0.05, 0.05])
  box_upper    [sigma_max, beta_max] (default [20, 20])
  starts       multistart count (default 5)
  tol_x        simplex size tolerance (default 1e-6)
  max_evals    evaluation budget per start (default 2000)
  coordinates  "log" or "natural" (default "log")
Writes consistency.csv (n,rmse_sigma2,rmse_beta,rmse_microergodic,failed_replicates),
report.json and manifest.json. Exits 5 when more than 20% of the fits fail.)";

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
};

struct LoadedConfig {
    std::string bytes;
    Json json;
    fs::path base_dir;
};

LoadedConfig load_config(const std::string& path) {
    LoadedConfig cfg;
    cfg.bytes = io::read_file(path);
    try {
        cfg.json = Json::parse(cfg.bytes);
    } catch (const Json::parse_error& e) {
        throw ConfigError(fmt::format("config '{}' is not valid JSON: {}", path, e.what()));
    }
    if (!cfg.json.is_object()) throw ConfigError("config must be a JSON object");
    cfg.base_dir = fs::path(path).parent_path();
    return cfg;
}

const Json& require(const Json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw ConfigError(fmt::format("config: missing key '{}'", key));
    return *it;
}

std::uint64_t read_seed(const Json& j, std::uint64_t fallback) {
    if (!j.contains("seed")) return fallback;
    const Json& s = j["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
        throw ConfigError("config: 'seed' must be an unsigned integer");
    return s.get<std::uint64_t>();
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

fs::path prepare_out(const Options& opt) {
    fs::path dir(opt.out_dir);
    fs::create_directories(dir);
    return dir;
}

void write_manifest(const fs::path& dir, const std::string& subcommand, const LoadedConfig& cfg, std::uint64_t seed,
                    const Options& opt) {
    Json manifest{{"subcommand", subcommand},
                  {"config_digest", sha256_hex(cfg.bytes)},
                  {"seed", seed},
                  {"tool_version", std::string(kToolVersion)},
                  {"timestamp", utc_timestamp()},
                  {"threads", opt.threads}};
    io::write_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");
}

int cmd_jdiv(const Options& opt, std::ostream& out) {
    const auto cfg = load_config(opt.config_path);
    const auto k1 = io::kernel_from_json(require(cfg.json, "kernel1"));
    const auto k2 = io::kernel_from_json(require(cfg.json, "kernel2"));
    const auto designs = io::nested_designs_from_json(require(cfg.json, "design"));
    const double jitter = cfg.json.value("jitter", 0.0);
    if (designs.size() < 4) throw ConfigError("jdiv: the design generator must produce at least 4 nested designs");
    for (const auto& d : designs) {
        if (!accepts(k1, d.geometry()) || !accepts(k2, d.geometry()))
            throw ConfigError("jdiv: design geometry does not match the kernels");
    }

    const auto trace = j_divergence_trace(k1, k2, designs, jitter);
    const auto verdict = dichotomy_diagnostic(trace);

    const auto dir = prepare_out(opt);
    io::write_file((dir / "trace.csv").string(), io::trace_csv(trace));
    Json v = io::to_json(verdict);
    v["slope_estimate"] = trace.slope_estimate;
    v["trace"] = io::to_json(trace);
    io::write_file((dir / "verdict.json").string(), v.dump(2) + "\n");
    write_manifest(dir, "jdiv", cfg, 0, opt);
    out << to_string(verdict.label) << " (slope " << io::format_double(trace.slope_estimate) << ")\n";
    return kOk;
}

int cmd_sphere(const Options& opt, std::ostream& out) {
    const auto cfg = load_config(opt.config_path);
    const Json& j = cfg.json;
    const Json& k_json = require(j, "K");
    if (!k_json.is_number_integer() || k_json.get<long long>() < 0)
        throw ConfigError("sphere: 'K' must be a nonnegative integer");
    const int max_degree = k_json.get<int>();

    std::optional<SchoenbergSpectrum> s1;
    std::optional<SchoenbergSpectrum> s2;
    if (j.contains("spectrum1")) s1 = io::spectrum_from_json(j["spectrum1"]);
    if (j.contains("spectrum2")) s2 = io::spectrum_from_json(j["spectrum2"]);

    int d = 0;
    if (j.contains("d")) {
        if (!j["d"].is_number_integer()) throw ConfigError("sphere: 'd' must be an integer");
        d = j["d"].get<int>();
    } else if (s1) {
        d = s1->sphere_dim();
    } else if (s2) {
        d = s2->sphere_dim();
    } else {
        throw ConfigError("sphere: missing key 'd'");
    }
    if (d < 3) throw ConfigError("sphere: 'd' must be >= 3");

    std::optional<RatioTailModel> model;
    if (j.contains("ratio_model")) model = io::ratio_model_from_json(j["ratio_model"], sphere_ratio_model(d, 0.0, 0.0));

    if (!s1 || !s2) {
        if (!model) throw ConfigError("sphere: both spectra are required without a ratio_model");
        if (s1 && !s2) throw ConfigError("sphere: spectrum2 is required when spectrum1 is given");
        if (!s2) {
            const double decay = j.value("base_decay", 4.0);
            std::vector<double> base(static_cast<std::size_t>(max_degree) + 1);
            for (std::size_t k = 0; k < base.size(); ++k) base[k] = std::pow(static_cast<double>(k + 1), -decay);
            s2 = SchoenbergSpectrum(d, std::move(base));
        }
        std::vector<double> a1(s2->coeffs());
        for (std::size_t k = 0; k < a1.size(); ++k)
            a1[k] *= 1.0 + model->scale * std::pow(static_cast<double>(k) + model->offset, -model->exponent);
        try {
            s1 = SchoenbergSpectrum(d, std::move(a1));
        } catch (const ContractError& e) {
            throw ConfigError(fmt::format("sphere: ratio model gives an invalid spectrum1: {}", e.what()));
        }
    }
    if (s1->sphere_dim() != d || s2->sphere_dim() != d) throw ConfigError("sphere: spectra must share dimension d");

    const auto dir = prepare_out(opt);
    const auto result = sphere_equivalence_sum(*s1, *s2, max_degree, model);
    io::write_file((dir / "criterion.csv").string(), io::sphere_criterion_csv(result));
    Json v = io::to_json(result);
    v["criterion"] = "sphere";
    v["equivalence"] = result.verdict == SeriesVerdict::Finite      ? "equivalent"
                       : result.verdict == SeriesVerdict::Divergent ? "orthogonal"
                                                                    : "undetermined";
    io::write_file((dir / "verdict.json").string(), v.dump(2) + "\n");
    write_manifest(dir, "sphere", cfg, 0, opt);
    out << to_string(result.verdict) << " (partial sum " << io::format_double(result.final) << ")\n";
    return kOk;
}

AtomicSpectralMeasure load_measure(const Json& entry, const fs::path& base_dir) {
    if (entry.is_string()) {
        const fs::path path = base_dir / entry.get<std::string>();
        Json parsed;
        try {
            parsed = Json::parse(io::read_file(path.string()));
        } catch (const Json::parse_error& e) {
            throw ConfigError(fmt::format("measure file '{}' is not valid JSON: {}", path.string(), e.what()));
        }
        return io::measure_from_json(parsed);
    }
    return io::measure_from_json(entry);
}

int cmd_chow(const Options& opt, std::ostream& out) {
    const auto cfg = load_config(opt.config_path);
    const Json& j = cfg.json;
    const auto m1 = load_measure(require(j, "measure1"), cfg.base_dir);
    const auto m2 = load_measure(require(j, "measure2"), cfg.base_dir);
    std::size_t count = std::max(m1.size(), m2.size());
    if (j.contains("N")) {
        if (!j["N"].is_number_integer() || j["N"].get<long long>() <= 0)
            throw ConfigError("chow: 'N' must be a positive integer");
        count = j["N"].get<std::size_t>();
    }
    std::optional<RatioTailModel> model;
    if (j.contains("ratio_model")) model = io::ratio_model_from_json(j["ratio_model"], unit_dim_ratio_model(0.0, 0.0));

    const auto dir = prepare_out(opt);
    const auto result = chow_sum(m1, m2, count, model);
    io::write_file((dir / "criterion.csv").string(), io::chow_criterion_csv(result));
    Json v = io::to_json(result);
    v["criterion"] = "chow";
    v["shared_atoms"] = check_shared_atoms(m1, m2);
    io::write_file((dir / "verdict.json").string(), v.dump(2) + "\n");
    write_manifest(dir, "chow", cfg, 0, opt);
    out << to_string(result.verdict) << " (partial sum " << io::format_double(result.final) << ")\n";
    return kOk;
}

int cmd_sample(const Options& opt, std::ostream& out) {
    const auto cfg = load_config(opt.config_path);
    const Json& j = cfg.json;
    const auto kernel = io::kernel_from_json(require(j, "kernel"));
    const auto design = io::design_from_json(require(j, "design"));
    const Json& reps = require(j, "replicates");
    if (!reps.is_number_integer() || reps.get<long long>() <= 0)
        throw ConfigError("sample: 'replicates' must be a positive integer");
    const std::uint64_t seed = opt.seed.value_or(read_seed(j, 0));
    if (!accepts(kernel, design.geometry())) throw ConfigError("sample: design geometry does not match the kernel");

    const auto g = gram(kernel, design, j.value("jitter", 0.0));
    const auto batch = sample_paths(g, design, reps.get<std::size_t>(), seed);

    const auto dir = prepare_out(opt);
    io::write_file((dir / "samples.csv").string(), io::samples_csv(batch));
    Json sidecar{{"seed", seed},
                 {"replicates", batch.samples.rows()},
                 {"kernel", io::to_json(kernel)},
                 {"design", io::to_json(design)}};
    io::write_file((dir / "samples.json").string(), sidecar.dump(2) + "\n");
    write_manifest(dir, "sample", cfg, seed, opt);
    out << batch.samples.rows() << " replicates of dimension " << batch.samples.cols() << "\n";
    return kOk;
}

Eigen::VectorXd vector_or(const Json& j, const char* key, const Eigen::VectorXd& fallback) {
    if (!j.contains(key)) return fallback;
    const Json& v = j[key];
    if (!v.is_array()) throw ConfigError(fmt::format("mle: '{}' must be an array", key));
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw ConfigError(fmt::format("mle: '{}' must contain numbers", key));
        out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
    }
    return out;
}

int cmd_mle(const Options& opt, std::ostream& out, std::ostream& err) {
    const auto cfg = load_config(opt.config_path);
    const Json& j = cfg.json;
    ExperimentConfig config;
    try {
        if (j.contains("n_grid")) config.n_grid = j["n_grid"].get<std::vector<std::size_t>>();
        config.replicates = j.value("replicates", config.replicates);
        config.sigma0 = j.value("sigma0", config.sigma0);
        config.beta0 = j.value("beta0", config.beta0);
        if (j.contains("domain")) {
            const auto domain = j["domain"].get<std::vector<double>>();
            if (domain.size() != 2) throw ConfigError("mle: 'domain' must be [lower, upper]");
            config.domain_lower = domain[0];
            config.domain_upper = domain[1];
        }
        config.optimizer.starts = j.value("starts", config.optimizer.starts);
        config.optimizer.tol_x = j.value("tol_x", config.optimizer.tol_x);
        config.optimizer.max_evals = j.value("max_evals", config.optimizer.max_evals);
        const std::string coords = j.value("coordinates", std::string("log"));
        if (coords == "log")
            config.optimizer.coordinates = Coordinates::Log;
        else if (coords == "natural")
            config.optimizer.coordinates = Coordinates::Natural;
        else
            throw ConfigError("mle: 'coordinates' must be 'log' or 'natural'");
    } catch (const Json::exception& e) {
        throw ConfigError(fmt::format("mle: malformed config: {}", e.what()));
    }
    config.box_lower = vector_or(j, "box_lower", config.box_lower);
    config.box_upper = vector_or(j, "box_upper", config.box_upper);
    config.seed = opt.seed.value_or(read_seed(j, config.seed));

    ConsistencyReport report;
    try {
        report = microergodic_experiment(config);
    } catch (const OptimizationFailed&) {
        throw;
    } catch (const ContractError& e) {
        throw ConfigError(fmt::format("mle: {}", e.what()));
    }

    const auto dir = prepare_out(opt);
    io::write_file((dir / "consistency.csv").string(), io::consistency_csv(report));
    io::write_file((dir / "report.json").string(), io::to_json(report).dump(2) + "\n");
    write_manifest(dir, "mle", cfg, config.seed, opt);

    std::size_t failed = 0;
    for (auto f : report.failed_replicates) failed += f;
    const double total = static_cast<double>(report.replicates * report.n_grid.size());
    out << "fits: " << total - static_cast<double>(failed) << " ok, " << failed << " failed\n";
    if (static_cast<double>(failed) > 0.2 * total) {
        err << "mle: optimization failed for " << failed << " of " << total << " fits (> 20%)\n";
        return kOptimizationFailed;
    }
    return kOk;
}

void add_common(CLI::App* sub, Options& opt) {
    sub->add_option("--config", opt.config_path, "JSON config file")->required();
    sub->add_option("--out", opt.out_dir, "output directory (created if missing)");
    sub->add_option("--seed", opt.seed, "seed, overrides the config value");
    sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Equivalence and orthogonality diagnostics for Gaussian process distributions", "gpeq"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    Options opt;
    auto* jdiv = app.add_subcommand("jdiv", "J-divergence trace along nested designs and dichotomy verdict");
    auto* sphere = app.add_subcommand("sphere", "sphere equivalence sum of two Schoenberg spectra");
    auto* chow = app.add_subcommand("chow", "dimension-weighted atom criterion for two atomic spectral measures");
    auto* sample = app.add_subcommand("sample", "simulate centered Gaussian vectors on a design");
    auto* mle = app.add_subcommand("mle", "ML consistency experiment for the exponential kernel");
    const std::pair<CLI::App*, const char*> helps[] = {
        {jdiv, kJdivHelp}, {sphere, kSphereHelp}, {chow, kChowHelp}, {sample, kSampleHelp}, {mle, kMleHelp}};
    for (const auto& [sub, help] : helps) {
        add_common(sub, opt);
        sub->footer(help);
    }
    app.footer("Exit codes: 0 ok, 2 config error, 3 singular Gram, 4 atom mismatch, 5 optimization failure.");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    set_num_threads(opt.threads);
    try {
        if (jdiv->parsed()) return cmd_jdiv(opt, out);
        if (sphere->parsed()) return cmd_sphere(opt, out);
        if (chow->parsed()) return cmd_chow(opt, out);
        if (sample->parsed()) return cmd_sample(opt, out);
        if (mle->parsed()) return cmd_mle(opt, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const SingularGram& e) {
        err << "singular Gram: " << e.what() << "\n";
        return kSingularGram;
    } catch (const AtomMismatch& e) {
        err << "atom mismatch (measures are orthogonal): " << e.what() << "\n";
        return kAtomMismatch;
    } catch (const OptimizationFailed& e) {
        err << "optimization failed: " << e.what() << "\n";
        return kOptimizationFailed;
    } catch (const ContractError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}

}  // namespace gpeq::cli
