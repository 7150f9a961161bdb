#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "solsurf/app/commands.hpp"
#include "solsurf/error.hpp"
#include "solsurf/geometry.hpp"
#include "solsurf/parallel.hpp"

namespace {

struct Overrides {
    std::optional<std::string> space, suite, output_dir, report;
    std::optional<std::vector<double>> lambda;
    std::optional<double> grid_h, kappa, omega;
    std::optional<int> grid_n, n, level, threads;
};

void add_options(CLI::App* sub, std::string& config, Overrides& o)
{
    sub->add_option("--config", config, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--lambda", o.lambda, "spectral parameter: re [im]")->expected(1, 2);
    sub->add_option("--grid-h", o.grid_h, "grid spacing");
    sub->add_option("--grid-n", o.grid_n, "nodes per axis (odd)");
    sub->add_option("--n", o.n, "matrix size N of CP^{N-1}");
    sub->add_option("--space", o.space, "euclidean or minkowski");
    sub->add_option("--level", o.level, "active ladder level");
    sub->add_option("--kappa", o.kappa, "traveling wave kappa");
    sub->add_option("--omega", o.omega, "traveling wave omega");
    sub->add_option("--suite", o.suite, "verify suite: all, identities, prop1..prop8, appendix");
    sub->add_option("--output-dir", o.output_dir, "directory for written files");
    sub->add_option("--report", o.report, "path of the JSON report");
    sub->add_option("--threads", o.threads, "worker threads (default: SOLSURF_THREADS or all cores)");
}

// Flags override the file: patch the document, then parse and validate once.
nlohmann::json patched(const std::string& config, const Overrides& o)
{
    nlohmann::json j = nlohmann::json::object();
    if (!config.empty()) {
        try {
            j = nlohmann::json::parse(solsurf::geom::read_text(config));
        } catch (const nlohmann::json::exception& e) {
            throw solsurf::app::ConfigError("config file '" + config + "' is not valid JSON: " + e.what());
        }
        if (!j.is_object()) throw solsurf::app::ConfigError("config must be a JSON object");
    }
    auto sub = [&](const char* k) -> nlohmann::json& {
        if (!j.contains(k)) j[k] = nlohmann::json::object();
        if (!j[k].is_object()) throw solsurf::app::ConfigError(std::string("'") + k + "' must be an object");
        return j[k];
    };
    if (o.space) j["space"] = *o.space;
    if (o.n) j["n"] = *o.n;
    if (o.lambda) j["lambda"] = o.lambda->size() == 1 ? nlohmann::json((*o.lambda)[0]) : nlohmann::json(*o.lambda);
    if (o.grid_h) sub("grid")["h"] = *o.grid_h;
    if (o.grid_n) sub("grid")["n"] = *o.grid_n;
    if (o.level) sub("solution")["level"] = *o.level;
    if (o.kappa) sub("solution")["kappa"] = *o.kappa;
    if (o.omega) sub("solution")["omega"] = *o.omega;
    if (o.suite) j["suite"] = *o.suite;
    if (o.output_dir) j["output_dir"] = *o.output_dir;
    if (o.report) j["report"] = *o.report;
    return j;
}

} // namespace

int main(int argc, char** argv)
{
    using namespace solsurf::app;
    CLI::App app{"solsurf: CP^{N-1} sigma model solutions and their soliton surfaces"};
    app.require_subcommand(1);
    std::string config;
    Overrides o;
    const char* names[][2] = {{"solve", "build a solution and its ladder"},
                              {"immerse", "integrate and evaluate the surface"},
                              {"verify", "run a verification suite"},
                              {"export", "write OBJ/CSV/JSON artifacts from earlier results"}};
    for (auto& [name, help] : names) add_options(app.add_subcommand(name, help), config, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (o.threads) {
            if (*o.threads < 1) throw ConfigError("'--threads' must be positive");
            solsurf::set_thread_count(*o.threads);
        }
        const Config c = config_from_json(patched(config, o));
        if (cmd == "solve") return cmd_solve(c, std::cout);
        if (cmd == "immerse") return cmd_immerse(c, std::cout);
        if (cmd == "verify") return cmd_verify(c, std::cout);
        return cmd_export(c, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
