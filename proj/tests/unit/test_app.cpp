#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "solsurf/app/checks.hpp"
#include "solsurf/app/commands.hpp"
#include "solsurf/app/config.hpp"
#include "solsurf/error.hpp"

using namespace solsurf;
using namespace solsurf::app;
using nlohmann::json;

namespace {

std::string config_error(const json& j)
{
    try {
        config_from_json(j).validate();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

bool mentions(const std::string& msg, const std::string& key) { return msg.find(key) != std::string::npos; }

} // namespace

TEST_CASE("config defaults depend on the space")
{
    const Config e = config_from_json(json::object());
    CHECK(e.space == "euclidean");
    CHECK(e.solution.kind == "veronese");
    CHECK(e.grid.h == 0.05);
    CHECK(e.frechet.eps_base == 1e-5);
    CHECK(e.eps_differentiated == 1e-3);
    CHECK(e.report_path() == "solsurf_out/report.json");
    const Config m = config_from_json({{"space", "minkowski"}});
    CHECK(m.solution.kind == "traveling");
    CHECK(m.grid.h == 0.04);
    CHECK_NOTHROW(m.validate());
    CHECK(m.grid2().chart == sigma::Chart::minkowski);
}

TEST_CASE("config values and complex numbers")
{
    const Config c = config_from_json({{"lambda", {0.2, 0.7}},
                                       {"n", 3},
                                       {"solution", {{"level", 2}}},
                                       {"symmetry", {{"f", {0, {1, 2}}}}},
                                       {"tolerances", {{"c2.lsp", 1e-9}}},
                                       {"report", "r.json"}});
    CHECK(c.lambda == matlie::cd(0.2, 0.7));
    CHECK(c.symmetry.enabled);
    CHECK(c.symmetry.f[1] == matlie::cd(1.0, 2.0));
    CHECK(c.tolerances.at("c2.lsp") == 1e-9);
    CHECK(c.report_path() == "r.json");
    CHECK_NOTHROW(c.validate());
    CHECK(tol(settings_from(c), "c2.lsp", 1.0) == 1e-9);
    CHECK(tol(settings_from(c), "other", 1.0) == 1.0);
}

TEST_CASE("unknown keys are rejected by name")
{
    CHECK(mentions(config_error({{"lamda", 0.5}}), "lamda"));
    CHECK(mentions(config_error({{"grid", {{"step", 0.1}}}}), "grid.step"));
    CHECK(mentions(config_error({{"frechet", {{"eps", 1e-3}}}}), "frechet.eps"));
    CHECK(mentions(config_error({{"outputs", {{{"format", "obj"}, {"path", "a.obj"}, {"colour", 1}}}}}), "colour"));
}

TEST_CASE("cross-field rules")
{
    CHECK(mentions(config_error({{"lambda", 1.0}}), "lambda"));
    CHECK(mentions(config_error({{"lambda", -1.0}}), "lambda"));
    CHECK(mentions(config_error({{"grid", {{"n", 20}}}}), "grid.n"));
    CHECK(mentions(config_error({{"space", "minkowski"}, {"n", 3}}), "n"));
    CHECK(mentions(config_error({{"space", "minkowski"}, {"solution", {{"kind", "veronese"}}}}), "solution.kind"));
    CHECK(mentions(config_error({{"solution", {{"level", 2}}}}), "solution.level"));
    CHECK(mentions(config_error({{"gauge", {{"kind", "file"}}}}), "gauge.path"));
    CHECK(mentions(config_error({{"n", 3}, {"solution", {{"level", 0}}},
                                 {"outputs", {{{"format", "obj"}, {"path", "a.obj"}}}}}),
                   "outputs[0]"));
    CHECK(mentions(config_error({{"outputs", {{{"format", "csv"}, {"path", "a.csv"}}}}}), "quantity"));
    CHECK(mentions(config_error({{"lambda", "half"}}), "lambda"));
    CHECK(config_error({{"space", "minkowski"}, {"lambda", 0.3}}).empty());
}

TEST_CASE("measure semantics")
{
    CHECK(below("a", "t", 1e-9, 1e-8).pass());
    CHECK_FALSE(below("a", "t", 1e-8, 1e-8).pass());
    CHECK_FALSE(below("a", "t", std::nan(""), 1e-8).pass());
    CHECK(above("a", "t", 0.2, 0.1).pass());
    CHECK_FALSE(above("a", "t", std::nan(""), 0.1).pass());
    CHECK(info("a", "t", std::nan("")).pass());
}

TEST_CASE("report JSON is deterministic and carries no timings")
{
    Report r;
    r.suite = "x";
    r.sections.push_back({"x", {below("m1", "t", 1e-9, 1e-8, true), info("m2", "t", 3.0)}, 1.25});
    Report r2 = r;
    r2.sections[0].seconds = 9.0;
    CHECK(r.to_json().dump() == r2.to_json().dump());
    CHECK(r.to_json().dump().find("seconds") == std::string::npos);
    CHECK(r.checks() == 1);
    CHECK(r.failures() == 0);
    CHECK(r.to_text(false).find("m1") != std::string::npos);
    CHECK(sci(1234.5) == "1.234500e+03");
}

TEST_CASE("suites by name")
{
    CHECK(suite_names().size() == 10);
    CHECK(suite_names().front() == "identities");
    CHECK_THROWS_AS(run_suite("prop9", Settings{}), Error);
}

TEST_CASE("solve writes diagnostics for a small Euclidean run")
{
    const auto dir = std::filesystem::temp_directory_path() / "solsurf_test_solve";
    Config c = config_from_json({{"grid", {{"n", 21}, {"h", 0.1}}}, {"output_dir", dir.string()}});
    c.validate();
    std::ostringstream out;
    CHECK(cmd_solve(c, out) == kExitPass);
    CHECK(std::filesystem::exists(dir / "solution.json"));
    std::filesystem::remove_all(dir);
}
