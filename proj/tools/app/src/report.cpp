#include "solsurf/app/report.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace solsurf::app {

bool Measure::pass() const
{
    switch (cmp) {
    case Cmp::below: return value < tol;
    case Cmp::above: return value > tol;
    case Cmp::info: return true;
    }
    return false;
}

Measure below(std::string name, std::string target, double value, double tol, bool fd)
{
    return Measure{std::move(name), std::move(target), value, tol, Cmp::below, fd, {}};
}

Measure above(std::string name, std::string target, double value, double tol)
{
    return Measure{std::move(name), std::move(target), value, tol, Cmp::above, false, {}};
}

Measure info(std::string name, std::string target, double value, bool fd)
{
    return Measure{std::move(name), std::move(target), value, 0.0, Cmp::info, fd, {}};
}

std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", x);
    return buf;
}

std::size_t Report::failures() const
{
    std::size_t n = 0;
    for (const auto& s : sections)
        for (const auto& m : s.measures)
            if (!m.pass()) ++n;
    return n;
}

std::size_t Report::checks() const
{
    std::size_t n = 0;
    for (const auto& s : sections)
        for (const auto& m : s.measures)
            if (m.cmp != Cmp::info) ++n;
    return n;
}

namespace {

const char* cmp_name(Cmp c)
{
    switch (c) {
    case Cmp::below: return "below";
    case Cmp::above: return "above";
    case Cmp::info: return "info";
    }
    return "?";
}

// NaN/inf are not JSON numbers; keep them readable and stable.
nlohmann::json num(double x)
{
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

} // namespace

nlohmann::json Report::to_json() const
{
    nlohmann::json secs = nlohmann::json::array();
    for (const auto& s : sections) {
        nlohmann::json ms = nlohmann::json::array();
        for (const auto& m : s.measures) {
            nlohmann::json j = {{"name", m.name},         {"target", m.target}, {"measured", num(m.value)},
                                {"kind", cmp_name(m.cmp)}, {"pass", m.pass()}};
            if (m.cmp != Cmp::info) j["tolerance"] = num(m.tol);
            if (!m.note.empty()) j["note"] = m.note;
            ms.push_back(std::move(j));
        }
        secs.push_back({{"suite", s.suite}, {"checks", std::move(ms)}});
    }
    return {{"suite", suite},
            {"checks", checks()},
            {"failures", failures()},
            {"pass", failures() == 0},
            {"sections", std::move(secs)}};
}

std::string Report::to_text(bool with_timing) const
{
    std::ostringstream o;
    for (const auto& s : sections) {
        o << "[" << s.suite << "]";
        if (with_timing) o << "  (" << std::fixed << std::setprecision(2) << s.seconds << " s)";
        o.unsetf(std::ios::floatfield);
        o << "\n";
        for (const auto& m : s.measures) {
            const char* tag = m.cmp == Cmp::info ? "INFO" : (m.pass() ? "PASS" : "FAIL");
            o << "  " << tag << "  " << m.name << "  " << sci(m.value);
            if (m.cmp == Cmp::below) o << " < " << sci(m.tol);
            if (m.cmp == Cmp::above) o << " > " << sci(m.tol);
            if (!m.note.empty()) o << "  (" << m.note << ")";
            o << "\n";
        }
    }
    o << "suite " << suite << ": " << checks() << " checks, " << failures() << " failed\n";
    return o.str();
}

} // namespace solsurf::app
