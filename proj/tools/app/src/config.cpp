#include "solsurf/app/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace solsurf::app {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::string& where, const std::set<std::string>& allowed)
{
    if (!j.is_object()) throw ConfigError(where.empty() ? "config must be a JSON object" : where + ": expected an object");
    for (const auto& [k, v] : j.items()) {
        (void)v;
        if (!allowed.count(k)) throw ConfigError("unknown key '" + (where.empty() ? k : where + "." + k) + "'");
    }
}

template <class T>
T get(const json& j, const std::string& key, const std::string& where)
{
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("bad value for '" + where + "'");
    }
}

matlie::cd complex_of(const json& v, const std::string& where)
{
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw ConfigError("'" + where + "' must be a number or [re, im]");
}

std::vector<matlie::cd> poly_of(const json& v, const std::string& where)
{
    if (!v.is_array() || v.empty()) throw ConfigError("'" + where + "' must be a non-empty coefficient list");
    std::vector<matlie::cd> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(complex_of(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

} // namespace

sigma::Grid2 Config::grid2() const
{
    return sigma::Grid2::centered(sigma::chart_from_name(space), grid.center[0], grid.center[1], grid.h, grid.n);
}

std::string Config::report_path() const { return report.empty() ? output_dir + "/report.json" : report; }

Config config_from_json(const json& j)
{
    only_keys(j, "", {"model", "space", "n", "solution", "grid", "lambda", "a_coeffs", "gauge", "symmetry", "outputs",
                      "tolerances", "frechet", "output_dir", "suite", "report"});
    Config c;
    if (j.contains("model")) c.model = get<std::string>(j, "model", "model");
    if (j.contains("space")) c.space = get<std::string>(j, "space", "space");
    if (j.contains("n")) c.n = get<int>(j, "n", "n");
    const bool mink = c.space == "minkowski";
    c.solution.kind = mink ? "traveling" : "veronese";
    c.grid.h = mink ? 0.04 : 0.05;
    if (j.contains("solution")) {
        const json& s = j["solution"];
        only_keys(s, "solution", {"kind", "level", "scale", "kappa", "omega"});
        if (s.contains("kind")) c.solution.kind = get<std::string>(s, "kind", "solution.kind");
        if (s.contains("level")) c.solution.level = get<int>(s, "level", "solution.level");
        if (s.contains("scale")) c.solution.scale = get<double>(s, "scale", "solution.scale");
        if (s.contains("kappa")) c.solution.kappa = get<double>(s, "kappa", "solution.kappa");
        if (s.contains("omega")) c.solution.omega = get<double>(s, "omega", "solution.omega");
    }
    if (j.contains("grid")) {
        const json& g = j["grid"];
        only_keys(g, "grid", {"center", "h", "n"});
        if (g.contains("center")) c.grid.center = get<std::array<double, 2>>(g, "center", "grid.center");
        if (g.contains("h")) c.grid.h = get<double>(g, "h", "grid.h");
        if (g.contains("n")) c.grid.n = get<int>(g, "n", "grid.n");
    }
    if (j.contains("lambda")) c.lambda = complex_of(j["lambda"], "lambda");
    if (j.contains("a_coeffs")) c.a_coeffs = get<std::vector<double>>(j, "a_coeffs", "a_coeffs");
    if (j.contains("gauge")) {
        const json& g = j["gauge"];
        only_keys(g, "gauge", {"kind", "preset", "path"});
        if (g.contains("kind")) c.gauge.kind = get<std::string>(g, "kind", "gauge.kind");
        if (g.contains("preset")) c.gauge.preset = get<std::string>(g, "preset", "gauge.preset");
        if (g.contains("path")) c.gauge.path = get<std::string>(g, "path", "gauge.path");
    }
    if (j.contains("symmetry")) {
        const json& s = j["symmetry"];
        only_keys(s, "symmetry", {"f", "g"});
        c.symmetry.enabled = true;
        if (!s.contains("f")) throw ConfigError("missing key 'symmetry.f'");
        c.symmetry.f = poly_of(s["f"], "symmetry.f");
        if (s.contains("g")) c.symmetry.g = poly_of(s["g"], "symmetry.g");
    }
    if (j.contains("outputs")) {
        if (!j["outputs"].is_array()) throw ConfigError("'outputs' must be a list");
        for (std::size_t i = 0; i < j["outputs"].size(); ++i) {
            const json& o = j["outputs"][i];
            const std::string w = "outputs[" + std::to_string(i) + "]";
            only_keys(o, w, {"format", "field", "quantity", "path"});
            OutputCfg oc;
            oc.format = get<std::string>(o, "format", w + ".format");
            oc.field = o.contains("field") ? get<std::string>(o, "field", w + ".field") : "F";
            if (o.contains("quantity")) oc.quantity = get<std::string>(o, "quantity", w + ".quantity");
            oc.path = get<std::string>(o, "path", w + ".path");
            c.outputs.push_back(oc);
        }
    }
    if (j.contains("tolerances")) {
        if (!j["tolerances"].is_object()) throw ConfigError("'tolerances' must be an object");
        for (const auto& [k, v] : j["tolerances"].items()) {
            if (!v.is_number()) throw ConfigError("bad value for 'tolerances." + k + "'");
            c.tolerances[k] = v.get<double>();
        }
    }
    if (j.contains("frechet")) {
        const json& f = j["frechet"];
        only_keys(f, "frechet", {"eps_base", "eps_differentiated", "richardson"});
        if (f.contains("eps_base")) c.frechet.eps_base = get<double>(f, "eps_base", "frechet.eps_base");
        if (f.contains("eps_differentiated"))
            c.eps_differentiated = get<double>(f, "eps_differentiated", "frechet.eps_differentiated");
        if (f.contains("richardson")) c.frechet.richardson = get<bool>(f, "richardson", "frechet.richardson");
    }
    if (j.contains("output_dir")) c.output_dir = get<std::string>(j, "output_dir", "output_dir");
    if (j.contains("suite")) c.suite = get<std::string>(j, "suite", "suite");
    if (j.contains("report")) c.report = get<std::string>(j, "report", "report");
    c.validate();
    return c;
}

void Config::validate() const
{
    if (model != "cpn") throw ConfigError("'model' must be \"cpn\"");
    if (space != "euclidean" && space != "minkowski") throw ConfigError("'space' must be euclidean or minkowski");
    if (n < 2 || n > matlie::kMaxDim) throw ConfigError("'n' must lie in [2, " + std::to_string(matlie::kMaxDim) + "]");
    const bool mink = space == "minkowski";
    if (solution.kind != "veronese" && solution.kind != "traveling")
        throw ConfigError("'solution.kind' must be veronese or traveling");
    if (mink && solution.kind != "traveling") throw ConfigError("'solution.kind' veronese needs space euclidean");
    if (!mink && solution.kind != "veronese") throw ConfigError("'solution.kind' traveling needs space minkowski");
    if (solution.kind == "traveling" && n != 2) throw ConfigError("'n' must be 2 for the traveling solution");
    if (solution.level < 0 || solution.level >= n) throw ConfigError("'solution.level' must lie in [0, n-1]");
    if (solution.kind == "traveling" && solution.level != 0) throw ConfigError("'solution.level' must be 0 for traveling");
    if (!(solution.scale > 0.0)) throw ConfigError("'solution.scale' must be positive");
    if (!(grid.h > 0.0) || !std::isfinite(grid.h)) throw ConfigError("'grid.h' must be positive");
    if (grid.n < 21 || grid.n % 2 == 0) throw ConfigError("'grid.n' must be odd and at least 21");
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()) || std::abs(lambda - 1.0) < 1e-12 ||
        std::abs(lambda + 1.0) < 1e-12)
        throw ConfigError("'lambda' must be finite and different from +1 and -1");
    if (gauge.kind != "none" && gauge.kind != "preset" && gauge.kind != "file")
        throw ConfigError("'gauge.kind' must be none, preset or file");
    if (gauge.kind == "preset" && gauge.preset != "bump") throw ConfigError("'gauge.preset' must be bump");
    if (gauge.kind == "file" && gauge.path.empty()) throw ConfigError("'gauge.path' is required for gauge.kind file");
    if (symmetry.enabled) {
        if (mink) {
            if (symmetry.g.empty()) throw ConfigError("'symmetry.g' is required on the Minkowski chart");
            for (const auto* p : {&symmetry.f, &symmetry.g})
                for (const auto& c : *p)
                    if (c.imag() != 0.0) throw ConfigError("'symmetry' coefficients must be real on the Minkowski chart");
        } else if (!symmetry.g.empty()) {
            throw ConfigError("'symmetry.g' is fixed by 'symmetry.f' on the Euclidean chart");
        }
    }
    static const std::set<std::string> formats = {"obj", "csv", "json"};
    static const std::set<std::string> fields = {"F", "F_closed", "calF", "theta", "phi"};
    static const std::set<std::string> quantities = {"gauss_curvature", "metric_det", "norm"};
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        const auto& o = outputs[i];
        const std::string w = "outputs[" + std::to_string(i) + "]";
        if (!formats.count(o.format)) throw ConfigError("'" + w + ".format' must be obj, csv or json");
        if (!fields.count(o.field)) throw ConfigError("'" + w + ".field' must be F, F_closed, calF, theta or phi");
        if (o.format == "csv" && !quantities.count(o.quantity))
            throw ConfigError("'" + w + ".quantity' must be gauss_curvature, metric_det or norm");
        if (o.format != "csv" && !o.quantity.empty()) throw ConfigError("'" + w + ".quantity' applies to csv only");
        if (o.format == "obj" && n != 2) throw ConfigError("'" + w + "': obj export needs n = 2");
        if (o.path.empty()) throw ConfigError("'" + w + ".path' must be non-empty");
    }
    for (const auto& [k, v] : tolerances)
        if (!(v > 0.0)) throw ConfigError("'tolerances." + k + "' must be positive");
    if (!(frechet.eps_base > 0.0)) throw ConfigError("'frechet.eps_base' must be positive");
    if (!(eps_differentiated > 0.0)) throw ConfigError("'frechet.eps_differentiated' must be positive");
    if (output_dir.empty()) throw ConfigError("'output_dir' must be non-empty");
}

Config load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

} // namespace solsurf::app
