#pragma once

// Named fixtures and the check blocks shared by `solsurf verify` and the
// acceptance binary.

#include <map>
#include <string>
#include <vector>

#include "solsurf/app/report.hpp"
#include "solsurf/immersion.hpp"

namespace solsurf::app {

using matlie::cd;
using sigma::Chart;
using sigma::Grid2;

struct Settings {
    // exact-jet checks
    Grid2 euclid_default = Grid2::centered(Chart::euclidean, 0.0, 0.0, 0.05, 101);
    Grid2 mink_default = Grid2::box(Chart::minkowski, -2.0, 2.0, 101);
    // stencil-certified checks
    Grid2 euclid_fd = Grid2::centered(Chart::euclidean, 0.0, 0.0, 0.005, 101);
    Grid2 mink_fd = Grid2::box(Chart::minkowski, -0.25, 0.25, 101);

    double kappa = 2.0;
    double omega = 1.0;
    cd lambda = 0.5;
    std::vector<double> lambdas = {0.5, -0.3, 2.0};
    // constant-difference fixture f = a x1 + b, g = a x2 + c
    double cd_a = 0.7, cd_b = 0.3, cd_c = -0.4;

    symmetry::FrechetPolicy frechet{};                 // outputs used as values
    symmetry::FrechetPolicy frechet_diff{1e-3, true}; // outputs differentiated by a stencil

    std::map<std::string, double> tolerance_overrides;

    Settings refined() const; // FD fixtures at h/2, same extent
};

// Tolerance lookup honouring overrides.
double tol(const Settings& s, const std::string& name, double dflt);

// --- acceptance criteria blocks ---
std::vector<Measure> crit_solution_validity(const Settings& s);   // 1
std::vector<Measure> crit_lsp_euclidean(const Settings& s);       // 2
std::vector<Measure> crit_lsp_minkowski(const Settings& s);       // 3
std::vector<Measure> crit_tangent_theorem(const Settings& s);     // 4
std::vector<Measure> crit_euclidean_positive(const Settings& s);  // 5
std::vector<Measure> crit_traveling_wave(const Settings& s);      // 6
std::vector<Measure> crit_commutation(const Settings& s);         // 7

struct RefinementRow {
    std::string criterion;
    double coarse = 0.0;
    double fine = 0.0;
    double ratio = 0.0;
    bool floor = false;
    bool pass = false;
};
// 8: every fd-flagged measure family re-run at h/2.
std::vector<RefinementRow> refinement_study(const Settings& s, std::vector<Measure>* detail = nullptr);
inline constexpr double kRefineRatio = 8.0;
inline constexpr double kFloor = 1e-12;

// --- suite-only blocks ---
std::vector<Measure> suite_identities(const Settings& s);
std::vector<Measure> suite_prop1(const Settings& s);
std::vector<Measure> suite_prop2(const Settings& s);
std::vector<Measure> suite_prop3(const Settings& s);
std::vector<Measure> suite_prop4(const Settings& s);
std::vector<Measure> suite_prop5(const Settings& s);
std::vector<Measure> suite_prop6(const Settings& s);
std::vector<Measure> suite_prop7(const Settings& s);
std::vector<Measure> suite_prop8(const Settings& s);
std::vector<Measure> suite_appendix(const Settings& s);

const std::vector<std::string>& suite_names(); // identities, prop1..prop8, appendix
Report run_suite(const std::string& name, const Settings& s);

} // namespace solsurf::app
