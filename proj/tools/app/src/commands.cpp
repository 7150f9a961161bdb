#include "solsurf/app/commands.hpp"

#include <filesystem>
#include <optional>
#include <ostream>

#include "solsurf/error.hpp"
#include "solsurf/geometry.hpp"

namespace solsurf::app {

using nlohmann::json;
using sigma::JetField;
using sigma::MatField;
using spectral::SpectralParam;
using spectral::WaveField;

namespace fs = std::filesystem;

Settings settings_from(const Config& c)
{
    Settings s;
    s.lambda = c.lambda;
    s.tolerance_overrides = c.tolerances;
    s.frechet = c.frechet;
    s.frechet_diff = symmetry::FrechetPolicy{c.eps_differentiated, c.frechet.richardson};
    return s;
}

namespace {

struct Solved {
    std::optional<sigma::SolutionLadder> ladder;
    std::optional<sigma::TravelingWave> wave;
    JetField theta;
};

Solved solve(const Config& c)
{
    Solved s;
    const sigma::Grid2 g = c.grid2();
    if (c.solution.kind == "veronese") {
        s.ladder = sigma::veronese_ladder(c.n, g, c.solution.scale);
        s.ladder->active = c.solution.level;
        s.theta = sigma::theta_of(s.ladder->levels.at(c.solution.level));
    } else {
        s.wave = sigma::traveling_solution(c.solution.kappa, c.solution.omega, g);
        s.theta = s.wave->jets;
    }
    return s;
}

WaveField wave_of(const Config& c, const Solved& s)
{
    if (s.ladder) return spectral::phi_euclidean(*s.ladder, SpectralParam(c.lambda), c.solution.level);
    return spectral::phi_traveling(*s.wave, SpectralParam(c.lambda));
}

MatField dlambda_of(const Config& c, const Solved& s)
{
    if (s.ladder) return spectral::dlambda_phi_euclidean(*s.ladder, c.lambda, c.solution.level);
    return spectral::dlambda_phi_traveling(*s.wave, c.lambda);
}

symmetry::ConformalSpec spec_of(const Config& c)
{
    if (c.space == "euclidean") return symmetry::ConformalSpec::euclidean(c.symmetry.f);
    std::vector<double> f, g;
    for (auto x : c.symmetry.f) f.push_back(x.real());
    for (auto x : c.symmetry.g) g.push_back(x.real());
    return symmetry::ConformalSpec::minkowski(f, g);
}

symmetry::PhiBuilder builder_of(const Config& c)
{
    const matlie::cd lam = c.lambda;
    if (c.space == "euclidean") {
        const int level = c.solution.level;
        return [lam, level](const JetField& j) { return spectral::phi_euclidean_from_jets(j, lam, level); };
    }
    const double kap = c.solution.kappa;
    return [lam, kap](const JetField& j) { return spectral::phi_traveling_from_jets(j, lam, kap); };
}

MatField gauge_of(const Config& c, const sigma::Grid2& g)
{
    if (c.gauge.kind == "file") {
        MatField s = geom::import_field_json(c.gauge.path);
        sigma::require_same_grid(s.grid(), g);
        if (s.dim() != c.n) throw Error(ErrorKind::dimension_mismatch, "gauge field has the wrong matrix size");
        return s;
    }
    const auto basis = matlie::su_basis(c.n);
    const double w = (g.n1 - 1) * g.h1;
    const double cx = g.x(g.n1 / 2), cy = g.y(g.n2 / 2);
    return MatField::generate(g, c.n, 0, [&](int i1, int i2) {
        const double x = (g.x(i1) - cx) / w, y = (g.y(i2) - cy) / w;
        const double e = std::exp(-(x * x + y * y));
        return matlie::CMatrix(e * (basis.elements[0] + x * basis.elements[1] + y * y * basis.elements[2]));
    });
}

void ensure_dir(const std::string& d)
{
    std::error_code ec;
    fs::create_directories(d, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create directory '" + d + "'");
}

std::string in_dir(const Config& c, const std::string& p)
{
    return fs::path(p).is_absolute() ? p : (fs::path(c.output_dir) / p).string();
}

json lambda_json(matlie::cd l) { return json::array({l.real(), l.imag()}); }

double tol_of(const Config& c, const std::string& key, double dflt)
{
    auto it = c.tolerances.find(key);
    return it == c.tolerances.end() ? dflt : it->second;
}

} // namespace

int cmd_solve(const Config& c, std::ostream& out)
{
    const Solved s = solve(c);
    ensure_dir(c.output_dir);
    json diag;
    diag["el_residual"] = sigma::el_residual(s.theta).interior_max();
    diag["theta2_defect"] = sigma::theta2_defect(s.theta).interior_max();
    diag["identity_v_defect"] = sigma::identity_v_defect(s.theta).interior_max();
    if (s.wave) diag["wave_relation_defect"] = sigma::interior_max_diff(sigma::scale(s.theta.d1, s.wave->kappa), s.theta.d2);
    json doc = {{"kind", c.solution.kind}, {"space", c.space},  {"n", c.n},
                {"level", c.solution.level}, {"diagnostics", diag}, {"theta", geom::field_to_json(s.theta.v)}};
    if (s.wave) {
        doc["kappa"] = s.wave->kappa;
        doc["omega"] = s.wave->omega;
    } else {
        doc["scale"] = c.solution.scale;
    }
    geom::write_text(in_dir(c, "solution.json"), doc.dump());
    if (s.ladder) {
        json levels = json::array();
        for (const auto& lv : s.ladder->levels) levels.push_back(geom::field_to_json(lv.v));
        json lad = {{"active", s.ladder->active},
                    {"orthogonality_defect", s.ladder->orthogonality_defect},
                    {"completeness_defect", s.ladder->completeness_defect},
                    {"levels", levels}};
        geom::write_text(in_dir(c, "ladder.json"), lad.dump());
    }
    const double el = diag["el_residual"].get<double>();
    const double el_tol = tol_of(c, "el_residual", 1e-8);
    out << "solution " << c.solution.kind << " n=" << c.n << " level=" << c.solution.level << "\n";
    for (const auto& [k, v] : diag.items()) out << "  " << k << " = " << sci(v.get<double>()) << "\n";
    out << "wrote " << in_dir(c, "solution.json") << (s.ladder ? " and ladder.json" : "") << "\n";
    return el < el_tol ? kExitPass : kExitFail;
}

int cmd_immerse(const Config& c, std::ostream& out)
{
    if (c.a_coeffs.empty() && c.gauge.kind == "none" && !c.symmetry.enabled)
        throw ConfigError("immerse needs at least one of 'a_coeffs', 'gauge' or 'symmetry'");
    const Solved s = solve(c);
    const WaveField w = wave_of(c, s);
    const sigma::Grid2& g = w.grid;
    const auto u = sigma::u_pair(s.theta, c.lambda);

    immersion::ImmersionInputs inp;
    std::optional<MatField> S;
    if (!c.a_coeffs.empty()) inp.a.c.assign(c.a_coeffs.begin(), c.a_coeffs.end());
    if (c.gauge.kind != "none") inp.S = S = gauge_of(c, g);
    if (c.symmetry.enabled) inp.Q = spec_of(c);
    const auto T = immersion::assemble_tangents(inp, s.theta, c.lambda);
    const auto compat = immersion::compatibility_defect(T.A, T.B, u.u1, u.u2);
    const auto ir = immersion::integrate_surface(T.A, T.B, w, std::nullopt, compat.max);

    // closed form: a(lambda) F^ST + Phi^-1 S Phi + Phi^-1 (f u1 + g u2) Phi
    std::optional<MatField> closed;
    auto acc = [&](const MatField& m) { closed = closed ? sigma::add(*closed, m) : m; };
    if (!c.a_coeffs.empty()) acc(immersion::sym_tafel(w, dlambda_of(c, s), inp.a(c.lambda)).raw);
    if (S) acc(immersion::gauge_immersion(*S, w).raw);
    if (inp.Q) acc(immersion::conformal_immersion_closed(*inp.Q, s.theta, w, c.lambda).raw);
    const auto cf = immersion::finish(*closed);

    json defects = {{"compatibility", compat.max},
                    {"path", ir.path_defect},
                    {"su_correction", ir.su_correction},
                    {"closed_variation", immersion::constant_difference_check(ir.F_raw, cf.raw).variation}};
    json flags = json::object();
    json doc = {{"space", c.space},
                {"n", c.n},
                {"lambda", lambda_json(c.lambda)},
                {"basepoint", {ir.base1, ir.base2}},
                {"phi", geom::field_to_json(w.phi)},
                {"F", geom::field_to_json(ir.F)},
                {"F_closed", geom::field_to_json(cf.F)}};
    if (inp.Q) {
        const MatField q = symmetry::conformal_characteristic(*inp.Q, s.theta);
        const auto pr = immersion::prolong_immersion(q, builder_of(c), s.theta, w,
                                                     symmetry::FrechetPolicy{c.eps_differentiated, c.frechet.richardson});
        const auto pw = symmetry::prolong_u(*inp.Q, s.theta, c.lambda);
        const double fg = immersion::tangent_check(pr.calF.raw, w, pw.u1, pw.u2).max();
        defects["calF_tangent"] = fg;
        flags["calF_integrates_prolonged_tangents"] = fg < tol_of(c, "calF_tangent", 1e-6);
        doc["calF"] = geom::field_to_json(pr.calF.F);
    }
    doc["defects"] = defects;
    doc["flags"] = flags;
    ensure_dir(c.output_dir);
    geom::write_text(in_dir(c, "immersion.json"), doc.dump());

    out << "immersion space=" << c.space << " n=" << c.n << "\n";
    for (const auto& [k, v] : defects.items()) out << "  " << k << " = " << sci(v.get<double>()) << "\n";
    for (const auto& [k, v] : flags.items()) out << "  " << k << " = " << (v.get<bool>() ? "yes" : "no") << "\n";
    out << "wrote " << in_dir(c, "immersion.json") << "\n";
    const bool ok = compat.max < tol_of(c, "compatibility", 1e-6) && ir.path_defect < tol_of(c, "path", 1e-6);
    return ok ? kExitPass : kExitFail;
}

int cmd_verify(const Config& c, std::ostream& out)
{
    const Report r = run_suite(c.suite, settings_from(c));
    out << r.to_text(true);
    const std::string path = c.report_path();
    const fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) ensure_dir(parent.string());
    geom::write_text(path, r.to_json().dump(2) + "\n");
    out << "report written to " << path << "\n";
    return r.failures() == 0 ? kExitPass : kExitFail;
}

int cmd_export(const Config& c, std::ostream& out)
{
    if (c.outputs.empty()) throw ConfigError("export needs a non-empty 'outputs' list");
    std::optional<json> imm, sol;
    auto load = [&](std::optional<json>& slot, const char* file) -> const json& {
        if (!slot) {
            const std::string p = in_dir(c, file);
            if (!fs::exists(p)) throw Error(ErrorKind::io, "missing input '" + p + "'; run the command that writes it first");
            slot = json::parse(geom::read_text(p));
        }
        return *slot;
    };
    for (const auto& o : c.outputs) {
        MatField f;
        if (o.field == "theta") {
            f = geom::field_from_json(load(sol, "solution.json").at("theta"));
        } else {
            const json& j = load(imm, "immersion.json");
            if (!j.contains(o.field))
                throw Error(ErrorKind::io, "field '" + o.field + "' is not present in " + in_dir(c, "immersion.json"));
            f = geom::field_from_json(j.at(o.field));
        }
        const std::string path = in_dir(c, o.path);
        const fs::path parent = fs::path(path).parent_path();
        if (!parent.empty()) ensure_dir(parent.string());
        if (o.format == "obj") {
            geom::export_obj(geom::embed_su2(f), path);
        } else if (o.format == "json") {
            geom::export_field_json(f, path);
        } else if (o.quantity == "norm") {
            geom::export_csv(sigma::frob(f), path);
        } else {
            const auto m = geom::first_fundamental_form(f);
            if (o.quantity == "metric_det") {
                sigma::ScalarField d{m.grid, m.margin, std::vector<double>(m.g11.size())};
                for (std::size_t k = 0; k < d.v.size(); ++k) d.v[k] = m.det(k);
                geom::export_csv(d, path);
            } else {
                const auto k = geom::gauss_curvature(m);
                geom::export_csv(k.K, path);
                out << "  masked nodes (degenerate metric): " << k.masked << "\n";
            }
        }
        out << "wrote " << o.format << " " << o.field << (o.quantity.empty() ? "" : " " + o.quantity) << " -> " << path
            << "\n";
    }
    return kExitPass;
}

} // namespace solsurf::app
