#pragma once

// Check records and the verification report.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace solsurf::app {

enum class Cmp {
    below, // pass iff value < tol
    above, // pass iff value > tol
    info   // reported, never gated
};

struct Measure {
    std::string name;   // unique within a report
    std::string target; // statement the check certifies
    double value = 0.0;
    double tol = 0.0;
    Cmp cmp = Cmp::below;
    bool fd = false; // finite-difference certified: enters the refinement study
    std::string note;

    bool pass() const;
};

Measure below(std::string name, std::string target, double value, double tol, bool fd = false);
Measure above(std::string name, std::string target, double value, double tol);
Measure info(std::string name, std::string target, double value, bool fd = false);

struct Section {
    std::string suite;
    std::vector<Measure> measures;
    double seconds = 0.0; // wall time, text output only
};

struct Report {
    std::string suite;
    std::vector<Section> sections;

    std::size_t failures() const;
    std::size_t checks() const;
    // Deterministic: fixed order, no timings.
    nlohmann::json to_json() const;
    std::string to_text(bool with_timing = true) const;
};

// %.6e formatting shared by all text output.
std::string sci(double x);

} // namespace solsurf::app
