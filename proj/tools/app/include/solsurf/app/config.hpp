#pragma once

// Run configuration: one JSON document, unknown keys rejected.

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "solsurf/symmetry.hpp"

namespace solsurf::app {

// Invalid configuration; the message names the offending key.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolutionCfg {
    std::string kind;  // veronese | traveling
    int level = 0;     // active ladder level
    double scale = 1.0;
    double kappa = 2.0;
    double omega = 1.0;
};

struct GridCfg {
    std::array<double, 2> center{0.0, 0.0};
    double h = 0.0;
    int n = 101;
};

struct GaugeCfg {
    std::string kind = "none"; // none | preset | file
    std::string preset = "bump";
    std::string path;
};

struct SymmetryCfg {
    bool enabled = false;
    std::vector<matlie::cd> f, g;
};

struct OutputCfg {
    std::string format;   // obj | csv | json
    std::string field;    // F | F_closed | calF | theta | phi
    std::string quantity; // csv only: gauss_curvature | metric_det | norm
    std::string path;
};

struct Config {
    std::string model = "cpn";
    std::string space = "euclidean"; // euclidean | minkowski
    int n = 2;
    SolutionCfg solution;
    GridCfg grid;
    matlie::cd lambda = 0.5;
    std::vector<double> a_coeffs; // a(lambda), ascending powers
    GaugeCfg gauge;
    SymmetryCfg symmetry;
    std::vector<OutputCfg> outputs;
    std::map<std::string, double> tolerances;
    symmetry::FrechetPolicy frechet{};
    double eps_differentiated = 1e-3;
    std::string output_dir = "solsurf_out";
    std::string suite = "all";
    std::string report; // empty: <output_dir>/report.json

    sigma::Grid2 grid2() const;
    std::string report_path() const;
    // Cross-field checks; throws ConfigError.
    void validate() const;
};

Config config_from_json(const nlohmann::json& j);
Config load_config(const std::string& path);

} // namespace solsurf::app
