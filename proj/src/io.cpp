#include "gpeq/io.hpp"

#include <fmt/core.h>

#include <fstream>
#include <sstream>

namespace gpeq::io {

namespace {

const Json& field(const Json& j, const char* key, const char* where) {
    if (!j.is_object()) throw ConfigError(fmt::format("{}: expected a JSON object", where));
    const auto it = j.find(key);
    if (it == j.end()) throw ConfigError(fmt::format("{}: missing key '{}'", where, key));
    return *it;
}

double number(const Json& j, const char* key, const char* where) {
    const Json& v = field(j, key, where);
    if (!v.is_number()) throw ConfigError(fmt::format("{}: '{}' must be a number", where, key));
    return v.get<double>();
}

double number_or(const Json& j, const char* key, double fallback, const char* where) {
    return j.contains(key) ? number(j, key, where) : fallback;
}

std::size_t count(const Json& j, const char* key, const char* where) {
    const Json& v = field(j, key, where);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError(fmt::format("{}: '{}' must be a nonnegative integer", where, key));
    return v.get<std::size_t>();
}

std::string text(const Json& j, const char* key, const char* where) {
    const Json& v = field(j, key, where);
    if (!v.is_string()) throw ConfigError(fmt::format("{}: '{}' must be a string", where, key));
    return v.get<std::string>();
}

std::vector<double> numbers(const Json& j, const char* key, const char* where) {
    const Json& v = field(j, key, where);
    if (!v.is_array()) throw ConfigError(fmt::format("{}: '{}' must be an array", where, key));
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(fmt::format("{}: '{}' must contain only numbers", where, key));
        out.push_back(x.get<double>());
    }
    return out;
}

// Library constructors signal bad values with ContractError; rewrap so callers see one type.
template <typename F>
auto wrap(const char* where, F&& make) {
    try {
        return make();
    } catch (const ConfigError&) {
        throw;
    } catch (const ContractError& e) {
        throw ConfigError(fmt::format("{}: {}", where, e.what()));
    }
}

Json numbers_json(const std::vector<double>& values) {
    Json out = Json::array();
    for (double v : values) out.push_back(v);
    return out;
}

}  // namespace

CovarianceKernel kernel_from_json(const Json& j) {
    constexpr const char* where = "kernel";
    const std::string variant = text(j, "variant", where);
    return wrap(where, [&]() -> CovarianceKernel {
        CovarianceKernel kernel;
        if (variant == "brownian") {
            kernel = BrownianKernel{number(j, "sigma", where)};
        } else if (variant == "exponential") {
            kernel = ExponentialKernel{number(j, "sigma", where), number(j, "beta", where)};
        } else if (variant == "schoenberg") {
            kernel = SchoenbergKernel{spectrum_from_json(j)};
        } else {
            throw ConfigError(fmt::format("kernel: unknown variant '{}'", variant));
        }
        validate(kernel);
        return kernel;
    });
}

Json to_json(const CovarianceKernel& kernel) {
    if (const auto* b = std::get_if<BrownianKernel>(&kernel)) return {{"variant", "brownian"}, {"sigma", b->sigma}};
    if (const auto* e = std::get_if<ExponentialKernel>(&kernel))
        return {{"variant", "exponential"}, {"sigma", e->sigma}, {"beta", e->beta}};
    const auto& s = std::get<SchoenbergKernel>(kernel).spectrum;
    return {{"variant", "schoenberg"}, {"d", s.sphere_dim()}, {"coeffs", numbers_json(s.coeffs())}};
}

SchoenbergSpectrum spectrum_from_json(const Json& j) {
    constexpr const char* where = "spectrum";
    if (j.contains("variant") && j["variant"] != "schoenberg")
        throw ConfigError("spectrum: variant must be 'schoenberg'");
    const Json& d = field(j, "d", where);
    if (!d.is_number_integer()) throw ConfigError("spectrum: 'd' must be an integer");
    return wrap(where, [&] { return SchoenbergSpectrum(d.get<int>(), numbers(j, "coeffs", where)); });
}

AtomicSpectralMeasure measure_from_json(const Json& j) {
    constexpr const char* where = "atomic measure";
    const Json& atoms = field(j, "atoms", where);
    if (!atoms.is_array()) throw ConfigError("atomic measure: 'atoms' must be an array");
    std::vector<Atom> out;
    out.reserve(atoms.size());
    for (const auto& a : atoms) {
        const Json& label = field(a, "label", where);
        std::string name = label.is_string() ? label.get<std::string>() : label.dump();
        const Json& dim = field(a, "dim", where);
        if (!dim.is_number_integer()) throw ConfigError("atomic measure: 'dim' must be an integer");
        out.push_back({std::move(name), number(a, "mass", where), dim.get<int>()});
    }
    return wrap(where, [&] { return AtomicSpectralMeasure(std::move(out)); });
}

Json to_json(const AtomicSpectralMeasure& measure) {
    Json atoms = Json::array();
    for (const auto& a : measure.atoms()) atoms.push_back({{"label", a.label}, {"mass", a.mass}, {"dim", a.dim}});
    return {{"atoms", atoms}};
}

RatioTailModel ratio_model_from_json(const Json& j, const RatioTailModel& defaults) {
    constexpr const char* where = "ratio_model";
    RatioTailModel model = defaults;
    model.scale = number(j, "scale", where);
    model.exponent = number(j, "exponent", where);
    model.offset = number_or(j, "offset", defaults.offset, where);
    model.dim_exponent = number_or(j, "dim_exponent", defaults.dim_exponent, where);
    model.dim_upper = number_or(j, "dim_upper", defaults.dim_upper, where);
    model.dim_lower = number_or(j, "dim_lower", defaults.dim_lower, where);
    if (model.dim_upper < model.dim_lower || model.dim_lower < 0.0)
        throw ConfigError("ratio_model: need 0 <= dim_lower <= dim_upper");
    return model;
}

std::vector<Design> nested_designs_from_json(const Json& j) {
    constexpr const char* where = "design";
    const std::string type = text(j, "type", where);
    return wrap(where, [&]() -> std::vector<Design> {
        if (type == "interval_dyadic")
            return dyadic_designs(count(j, "max_n", where), number_or(j, "lower", 0.0, where),
                                  number_or(j, "upper", 1.0, where));
        if (type == "sphere_fibonacci") {
            const Json& sizes = field(j, "sizes", where);
            if (!sizes.is_array()) throw ConfigError("design: 'sizes' must be an array");
            std::vector<std::size_t> n;
            for (const auto& s : sizes) {
                if (!s.is_number_integer() || s.get<long long>() <= 0)
                    throw ConfigError("design: 'sizes' must contain positive integers");
                n.push_back(s.get<std::size_t>());
            }
            const int d = j.contains("d") ? static_cast<int>(count(j, "d", where)) : 3;
            return fibonacci_sphere_designs(n, d);
        }
        throw ConfigError(fmt::format("design: unknown nested design type '{}'", type));
    });
}

Design design_from_json(const Json& j) {
    constexpr const char* where = "design";
    const std::string type = text(j, "type", where);
    if (type == "interval_dyadic" || type == "sphere_fibonacci") {
        auto designs = nested_designs_from_json(j);
        if (designs.empty()) throw ConfigError("design: generator produced no designs");
        return designs.back();
    }
    return wrap(where, [&]() -> Design {
        if (type == "interval_grid")
            return interval_grid(count(j, "n", where), number_or(j, "lower", 0.0, where),
                                 number_or(j, "upper", 1.0, where));
        if (type == "points") {
            const std::string geometry = j.contains("geometry") ? text(j, "geometry", where) : "euclidean";
            const Json& pts = field(j, "points", where);
            if (!pts.is_array() || pts.empty()) throw ConfigError("design: 'points' must be a nonempty array");
            const auto rows = static_cast<Eigen::Index>(pts.size());
            const auto cols = static_cast<Eigen::Index>(pts[0].is_array() ? pts[0].size() : 1);
            Eigen::MatrixXd m(rows, cols);
            for (Eigen::Index r = 0; r < rows; ++r) {
                const Json& p = pts[static_cast<std::size_t>(r)];
                if (p.is_number()) {
                    if (cols != 1) throw ConfigError("design: mixed point dimensions");
                    m(r, 0) = p.get<double>();
                    continue;
                }
                if (!p.is_array() || static_cast<Eigen::Index>(p.size()) != cols)
                    throw ConfigError("design: mixed point dimensions");
                for (Eigen::Index c = 0; c < cols; ++c) {
                    const Json& x = p[static_cast<std::size_t>(c)];
                    if (!x.is_number()) throw ConfigError("design: coordinates must be numbers");
                    m(r, c) = x.get<double>();
                }
            }
            const int dim = static_cast<int>(cols);
            if (geometry == "euclidean") return Design(Geometry::euclidean(dim), std::move(m));
            if (geometry == "sphere") return Design(Geometry::sphere(dim), std::move(m));
            throw ConfigError(fmt::format("design: unknown geometry '{}'", geometry));
        }
        throw ConfigError(fmt::format("design: unknown design type '{}'", type));
    });
}

Json to_json(const Design& design) {
    Json pts = Json::array();
    for (std::size_t i = 0; i < design.size(); ++i) {
        const Point p = design.point(i);
        pts.push_back(std::vector<double>(p.data(), p.data() + p.size()));
    }
    const bool sphere = design.geometry().kind == GeometryKind::Sphere;
    return {{"type", "points"}, {"geometry", sphere ? "sphere" : "euclidean"}, {"points", pts}};
}

Json to_json(const DichotomyVerdict& verdict) {
    return {{"label", to_string(verdict.label)}, {"statistic", verdict.statistic}, {"rationale", verdict.rationale}};
}

Json to_json(const DivergenceTrace& trace) {
    return {{"sizes", trace.sizes}, {"values", numbers_json(trace.values)}, {"slope_estimate", trace.slope_estimate}};
}

Json to_json(const CriterionResult& result) {
    Json out{{"final", result.final},
             {"verdict", to_string(result.verdict)},
             {"terms", result.terms.size()},
             {"rationale", result.rationale}};
    out["tail_bound"] = result.tail_bound ? Json(*result.tail_bound) : Json(nullptr);
    return out;
}

Json to_json(const ConsistencyReport& report) {
    return {{"n_grid", report.n_grid},
            {"rmse_sigma2", numbers_json(report.rmse_sigma2)},
            {"rmse_beta", numbers_json(report.rmse_beta)},
            {"rmse_microergodic", numbers_json(report.rmse_microergodic)},
            {"failed_replicates", report.failed_replicates},
            {"replicates", report.replicates},
            {"seed", report.seed}};
}

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

std::string trace_csv(const DivergenceTrace& trace) {
    std::string out = "n,J,slope_estimate\n";
    for (std::size_t i = 0; i < trace.sizes.size(); ++i) {
        const double slope = trailing_slope(trace.sizes, trace.values, i + 1);
        out += fmt::format("{},{},{}\n", trace.sizes[i], format_double(trace.values[i]), format_double(slope));
    }
    return out;
}

std::string sphere_criterion_csv(const CriterionResult& result) {
    std::string out = "k,term,partial_sum\n";
    for (std::size_t i = 0; i < result.terms.size(); ++i)
        out += fmt::format("{},{},{}\n", result.indices[i], format_double(result.terms[i]),
                           format_double(result.partial_sums[i]));
    return out;
}

std::string chow_criterion_csv(const CriterionResult& result) {
    std::string out = "n,partial_sum\n";
    for (std::size_t i = 0; i < result.partial_sums.size(); ++i)
        out += fmt::format("{},{}\n", result.indices[i], format_double(result.partial_sums[i]));
    return out;
}

std::string samples_csv(const SampleBatch& batch) {
    std::string out;
    for (Eigen::Index r = 0; r < batch.samples.rows(); ++r) {
        for (Eigen::Index c = 0; c < batch.samples.cols(); ++c) {
            if (c > 0) out += ',';
            out += format_double(batch.samples(r, c));
        }
        out += '\n';
    }
    return out;
}

std::string consistency_csv(const ConsistencyReport& report) {
    std::string out = "n,rmse_sigma2,rmse_beta,rmse_microergodic,failed_replicates\n";
    for (std::size_t i = 0; i < report.n_grid.size(); ++i)
        out += fmt::format("{},{},{},{},{}\n", report.n_grid[i], format_double(report.rmse_sigma2[i]),
                           format_double(report.rmse_beta[i]), format_double(report.rmse_microergodic[i]),
                           report.failed_replicates[i]);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(fmt::format("cannot open '{}'", path));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path));
    out << contents;
    if (!out) throw std::runtime_error(fmt::format("failed writing '{}'", path));
}

}  // namespace gpeq::io
