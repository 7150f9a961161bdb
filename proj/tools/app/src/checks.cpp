#include "solsurf/app/checks.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "solsurf/error.hpp"

namespace solsurf::app {

using matlie::CMatrix;
using sigma::JetField;
using sigma::MatField;
using sigma::MatJet;
using spectral::DerivativeSource;
using spectral::SpectralParam;
using spectral::WaveField;
using symmetry::ConformalSpec;
using symmetry::Functional;

Settings Settings::refined() const
{
    Settings r = *this;
    r.euclid_default = euclid_default.refined();
    r.mink_default = mink_default.refined();
    r.euclid_fd = euclid_fd.refined();
    r.mink_fd = mink_fd.refined();
    return r;
}

double tol(const Settings& s, const std::string& name, double dflt)
{
    auto it = s.tolerance_overrides.find(name);
    return it == s.tolerance_overrides.end() ? dflt : it->second;
}

namespace {

std::string cp(int n) { return "cp" + std::to_string(n - 1); }
std::string lvl(int n, int k) { return cp(n) + ".l" + std::to_string(k); }

std::string lam_tag(cd l)
{
    char buf[48];
    if (l.imag() == 0.0)
        std::snprintf(buf, sizeof buf, "lambda=%g", l.real());
    else
        std::snprintf(buf, sizeof buf, "lambda=%g%+gi", l.real(), l.imag());
    return buf;
}

// Gated measure with the tolerance routed through the override table.
Measure lt(const Settings& s, const std::string& name, std::string target, double value, double dflt, bool fd = false)
{
    return below(name, std::move(target), value, tol(s, name, dflt), fd);
}
Measure gt(const Settings& s, const std::string& name, std::string target, double value, double dflt)
{
    return above(name, std::move(target), value, tol(s, name, dflt));
}

void append(std::vector<Measure>& out, std::vector<Measure> more)
{
    for (auto& m : more) out.push_back(std::move(m));
}

// Nodewise combination on the common interior of the inputs.
MatField nodewise(std::initializer_list<const MatField*> fs, const std::function<CMatrix(std::size_t)>& fn)
{
    const MatField& a = **fs.begin();
    const int m = sigma::common_margin(fs);
    const sigma::Grid2& g = a.grid();
    return MatField::generate(g, a.dim(), m, [&](int i1, int i2) { return fn(g.index(i1, i2)); });
}

MatField commutator_field(const MatField& a, const MatField& b, cd c = 1.0)
{
    return nodewise({&a, &b}, [&](std::size_t k) -> CMatrix { return c * matlie::commutator(a.at(k), b.at(k)); });
}

double det_variation(const MatField& phi)
{
    const sigma::Grid2& g = phi.grid();
    const int m = phi.margin();
    const cd ref = phi.at(g.n1 / 2, g.n2 / 2).determinant();
    double best = 0.0;
    for (int i2 = m; i2 < g.n2 - m; ++i2)
        for (int i1 = m; i1 < g.n1 - m; ++i1) best = std::max(best, std::abs(phi.at(i1, i2).determinant() - ref));
    return best;
}

ConformalSpec euclid_spec() { return ConformalSpec::euclidean({0.0, 0.0, 1.0}); } // f = xi^2
ConformalSpec mink_linear() { return ConformalSpec::minkowski({0.0, 1.0}, {0.0, 1.0}); }
ConformalSpec mink_quadratic() { return ConformalSpec::minkowski({0.0, 0.0, 1.0}, {0.0}); }
ConformalSpec mink_unequal() { return ConformalSpec::minkowski({0.0, 1.0}, {0.0, 2.0}); }
ConformalSpec mink_cd(const Settings& s) { return ConformalSpec::minkowski({s.cd_b, s.cd_a}, {s.cd_c, s.cd_a}); }

symmetry::PhiBuilder euclid_builder(cd lambda, int level)
{
    return [lambda, level](const JetField& j) { return spectral::phi_euclidean_from_jets(j, lambda, level); };
}
symmetry::PhiBuilder traveling_builder(cd lambda, double kappa)
{
    return [lambda, kappa](const JetField& j) { return spectral::phi_traveling_from_jets(j, lambda, kappa); };
}

// |x|^2 (theta_1 + theta_2): not a symmetry of the field equation.
MatField bad_characteristic(const JetField& j)
{
    const sigma::Grid2& g = j.grid();
    const int m = sigma::common_margin({&j.d1, &j.d2});
    return MatField::generate(g, j.dim(), m, [&](int i1, int i2) {
        const double r2 = g.x(i1) * g.x(i1) + g.y(i2) * g.y(i2);
        const std::size_t k = g.index(i1, i2);
        return CMatrix(r2 * (j.d1.at(k) + j.d2.at(k)));
    });
}

// Smooth su(N)-valued bump used as a gauge term.
MatField gauge_bump(const sigma::Grid2& g, int n)
{
    const auto basis = matlie::su_basis(n);
    const double w = (g.n1 - 1) * g.h1;
    const double cx = g.x(g.n1 / 2), cy = g.y(g.n2 / 2);
    return MatField::generate(g, n, 0, [&](int i1, int i2) {
        const double x = (g.x(i1) - cx) / w, y = (g.y(i2) - cy) / w;
        const double e = std::exp(-(x * x + y * y));
        return CMatrix(e * (basis.elements[0] + x * basis.elements[1] + y * y * basis.elements[2]));
    });
}

sigma::Grid2 coarsened(const sigma::Grid2& g)
{
    sigma::Grid2 c = g;
    c.h1 *= 2.0;
    c.h2 *= 2.0;
    c.n1 = (g.n1 + 1) / 2;
    c.n2 = (g.n2 + 1) / 2;
    return c;
}

// f D1 X + g D2 X from exact derivatives.
MatField directional(const ConformalSpec& spec, const MatField& d1, const MatField& d2)
{
    const sigma::Grid2& g = d1.grid();
    const int m = sigma::common_margin({&d1, &d2});
    return MatField::generate(g, d1.dim(), m, [&](int i1, int i2) {
        return CMatrix(spec.f_at(g, i1, i2) * d1.at(i1, i2) + spec.g_at(g, i1, i2) * d2.at(i1, i2));
    });
}

// c(x) Phi^dag K Phi
MatField k_sandwich(const WaveField& w, const CMatrix& K, const std::function<cd(int, int)>& c)
{
    const sigma::Grid2& g = w.grid;
    return MatField::generate(g, w.phi.dim(), w.phi.margin(), [&](int i1, int i2) {
        const CMatrix p = w.phi.at(i1, i2);
        return CMatrix(c(i1, i2) * (p.adjoint() * K * p));
    });
}

// Central difference in lambda with one Richardson step.
MatField dlambda_oracle(const std::function<MatField(cd)>& builder, cd lambda)
{
    const double h = 1e-4;
    const MatField a = spectral::dlambda_fd(builder, lambda, h);
    const MatField b = spectral::dlambda_fd(builder, lambda, h / 2);
    return sigma::axpy(-1.0 / 3.0, a, sigma::scale(b, 4.0 / 3.0));
}

// --- tangent theorem on one fixture ---
void tangent_block(const Settings& s, std::vector<Measure>& out, const std::string& p, const ConformalSpec& spec,
                   const JetField& th, const WaveField& w, cd lambda)
{
    const auto cf = immersion::conformal_immersion_closed(spec, th, w, lambda);
    const auto pw = symmetry::prolong_u(spec, th, lambda);
    const auto u = sigma::u_pair(th, lambda);
    out.push_back(lt(s, p + ".tangent", "D_a F = Phi^-1 (pr w u^a) Phi for F = Phi^-1 (f u1 + g u2) Phi",
                     immersion::tangent_check(cf.raw, w, pw.u1, pw.u2).max(), 1e-6, true));
    out.push_back(lt(s, p + ".compatibility", "prolonged tangents satisfy the compatibility condition",
                     immersion::compatibility_defect(pw.u1, pw.u2, u.u1, u.u2).max, 1e-6, true));
    const auto ir = immersion::integrate_surface(pw.u1, pw.u2, w);
    out.push_back(lt(s, p + ".path", "line integration is path independent", ir.path_defect, 1e-6, true));
}

// --- traveling wave pieces ---
struct Traveling {
    sigma::TravelingWave t;
    WaveField w;
    CMatrix K;
};

Traveling traveling(const Settings& s, const sigma::Grid2& g)
{
    Traveling tw{sigma::traveling_solution(s.kappa, s.omega, g), {}, {}};
    tw.w = spectral::phi_traveling(tw.t, SpectralParam(s.lambda));
    tw.K = tw.t.k_matrix();
    return tw;
}

std::vector<Measure> tw_part_a(const Settings& s, const Traveling& tw)
{
    std::vector<Measure> out;
    const auto& g = tw.t.grid;
    const cd lam = s.lambda;
    const double kap = s.kappa;
    const std::pair<const char*, ConformalSpec> specs[] = {
        {"linear", mink_linear()}, {"quadratic", mink_quadratic()}, {"affine", mink_cd(s)}};
    for (const auto& [nm, spec] : specs) {
        const MatField q = symmetry::conformal_characteristic(spec, tw.t.jets);
        const auto pr = immersion::prolong_immersion(q, traveling_builder(lam, kap), tw.t.jets, tw.w, s.frechet_diff);
        const MatField ref = k_sandwich(tw.w, tw.K, [&](int i1, int i2) {
            return -2.0 * spec.f_at(g, i1, i2) - 2.0 * kap * spec.g_at(g, i1, i2) +
                   2.0 * spec.f1_at(g, i1, i2) * spectral::chi(g.x(i1), g.y(i2), kap, lam);
        });
        out.push_back(lt(s, std::string("c6.a.") + nm + ".calF_closed",
                         "calF = (-2f - 2 kappa g + 2 f_1 chi) Phi^dag K Phi",
                         sigma::interior_max_diff(pr.calF.raw, ref), 1e-6, true));
    }
    return out;
}

std::vector<Measure> tw_part_b(const Settings& s, const Traveling& tw)
{
    std::vector<Measure> out;
    const cd lam = s.lambda;
    const ConformalSpec spec = mink_quadratic();
    const MatField q = symmetry::conformal_characteristic(spec, tw.t.jets);
    const auto pr = immersion::prolong_immersion(q, traveling_builder(lam, s.kappa), tw.t.jets, tw.w, s.frechet_diff);
    const auto pw = symmetry::prolong_u(spec, tw.t.jets, lam);
    out.push_back(gt(s, "c6.b.quadratic.fg_identity_failure",
                     "with f_11 != 0 the prolongation immersion violates D_a calF = Phi^-1 (pr w u^a) Phi",
                     immersion::tangent_check(pr.calF.raw, tw.w, pw.u1, pw.u2).max(), 0.1));
    const auto R = symmetry::traveling_R_fields(spec, tw.t, lam);
    out.push_back(lt(s, "c6.b.quadratic.R_fields", "D_a calF = Phi^-1 R_a Phi",
                     immersion::tangent_check(pr.calF.raw, tw.w, R.u1, R.u2).max(), 1e-6, true));
    return out;
}

std::vector<Measure> tw_part_c(const Settings& s, const Traveling& tw)
{
    std::vector<Measure> out;
    const cd lam = s.lambda;
    const double kap = s.kappa;
    const ConformalSpec spec = mink_cd(s);
    const MatField q = symmetry::conformal_characteristic(spec, tw.t.jets);
    const auto pr = immersion::prolong_immersion(q, traveling_builder(lam, kap), tw.t.jets, tw.w, s.frechet_diff);
    const auto pw = symmetry::prolong_u(spec, tw.t.jets, lam);
    out.push_back(lt(s, "c6.c.affine.fg_identity", "with f_1 = g_2, f_11 = 0: D_a calF = Phi^-1 (pr w u^a) Phi",
                     immersion::tangent_check(pr.calF.raw, tw.w, pw.u1, pw.u2).max(), 1e-6, true));
    const auto cf = immersion::conformal_immersion_closed(spec, tw.t.jets, tw.w, lam);
    const auto diff = immersion::constant_difference_check(cf.raw, pr.calF.raw);
    out.push_back(lt(s, "c6.c.affine.difference_variation", "F - calF is constant", diff.variation, 1e-8, true));

    const sigma::Grid2& g = tw.t.grid;
    const int c1 = g.n1 / 2, c2 = g.n2 / 2;
    const CMatrix p = tw.w.phi.at(c1, c2);
    const CMatrix sandwich = p.adjoint() * tw.K * p; // constant on the wave
    const cd lit = 2.0 * s.cd_b * lam / (1.0 + lam) + 2.0 * s.cd_c * kap * lam / (1.0 - lam);
    const cd der = 2.0 * s.cd_b * lam / (1.0 + lam) - 2.0 * s.cd_c * kap * lam / (1.0 - lam);
    Measure m = lt(s, "c6.c.affine.difference_mean_stated",
                   "mean of F - calF equals (2b lambda/(1+lambda) + 2c kappa lambda/(1-lambda)) Phi^dag K Phi",
                   matlie::norm_fro(diff.mean - lit * sandwich), 1e-8);
    m.note = "stated sign of the c-term; see the derived check";
    out.push_back(m);
    out.push_back(lt(s, "c6.c.affine.difference_mean_derived",
                     "mean of F - calF equals (2b lambda/(1+lambda) - 2c kappa lambda/(1-lambda)) Phi^dag K Phi",
                     matlie::norm_fro(diff.mean - der * sandwich), 1e-8, true));
    return out;
}

// --- commutation lemma ---
struct Probe {
    std::string name;
    Functional g;
    Functional dg[2];
    // exact Frechet derivative of g along Q from the jets of Q
    std::function<MatField(const JetField&, const MatJet&)> exact;
};

std::vector<Probe> probes(cd lambda, bool with_cubic)
{
    std::vector<Probe> out;
    const cd c1 = -2.0 / (1.0 + lambda), c2 = -2.0 / (1.0 - lambda);
    Probe th;
    th.name = "theta";
    th.g = [](const JetField& j) { return j.v; };
    th.dg[0] = [](const JetField& j) { return j.d1; };
    th.dg[1] = [](const JetField& j) { return j.d2; };
    th.exact = [](const JetField&, const MatJet& q) { return q.v; };
    out.push_back(th);

    Probe u1;
    u1.name = "u1";
    u1.g = [c1](const JetField& j) { return commutator_field(j.d1, j.v, c1); };
    u1.dg[0] = [c1](const JetField& j) { return commutator_field(j.d11, j.v, c1); };
    u1.dg[1] = [c1](const JetField& j) {
        return sigma::add(commutator_field(j.d12, j.v, c1), commutator_field(j.d1, j.d2, c1));
    };
    u1.exact = [c1](const JetField& j, const MatJet& q) {
        return sigma::add(commutator_field(q.d1, j.v, c1), commutator_field(j.d1, q.v, c1));
    };
    out.push_back(u1);

    Probe u2;
    u2.name = "u2";
    u2.g = [c2](const JetField& j) { return commutator_field(j.d2, j.v, c2); };
    u2.dg[0] = [c2](const JetField& j) {
        return sigma::add(commutator_field(j.d12, j.v, c2), commutator_field(j.d2, j.d1, c2));
    };
    u2.dg[1] = [c2](const JetField& j) { return commutator_field(j.d22, j.v, c2); };
    u2.exact = [c2](const JetField& j, const MatJet& q) {
        return sigma::add(commutator_field(q.d2, j.v, c2), commutator_field(j.d2, q.v, c2));
    };
    out.push_back(u2);

    if (with_cubic) {
        auto cube_d = [](const MatField& t, const MatField& d) {
            return nodewise({&t, &d}, [&](std::size_t k) -> CMatrix {
                const CMatrix a = t.at(k), b = d.at(k);
                return b * a * a + a * b * a + a * a * b;
            });
        };
        Probe cu;
        cu.name = "cubic";
        cu.g = [](const JetField& j) {
            return sigma::map(j.v, [](const CMatrix& a) -> CMatrix { return a * a * a; });
        };
        cu.dg[0] = [cube_d](const JetField& j) { return cube_d(j.v, j.d1); };
        cu.dg[1] = [cube_d](const JetField& j) { return cube_d(j.v, j.d2); };
        cu.exact = [cube_d](const JetField& j, const MatJet& q) { return cube_d(j.v, q.v); };
        out.push_back(cu);
    }
    return out;
}

struct CommFixture {
    std::string name;
    JetField j;
    MatField q;
};

CommFixture euclid_comm(const Settings& s, const sigma::Grid2& g, int n, int k)
{
    const auto L = sigma::veronese_ladder(n, g);
    CommFixture f{"euclid." + lvl(n, k), sigma::theta_of(L.levels[k]), {}};
    f.q = symmetry::conformal_characteristic(euclid_spec(), f.j);
    (void)s;
    return f;
}

CommFixture mink_comm(const Settings& s, const sigma::Grid2& g)
{
    CommFixture f{"mink.traveling", sigma::traveling_solution(s.kappa, s.omega, g).jets, {}};
    f.q = symmetry::conformal_characteristic(mink_linear(), f.j);
    return f;
}

std::vector<Measure> commutation_gates(const Settings& s)
{
    std::vector<Measure> out;
    const CommFixture fx[] = {euclid_comm(s, s.euclid_fd, 2, 0), euclid_comm(s, s.euclid_fd, 3, 1),
                              mink_comm(s, s.mink_fd)};
    for (const auto& f : fx)
        for (const auto& pb : probes(s.lambda, false))
            out.push_back(lt(s, "c7." + f.name + "." + pb.name + ".commutation",
                             "D_a (pr w G) = pr w (D_a G)",
                             symmetry::commutation_defect(f.q, pb.g, pb.dg, f.j, s.frechet_diff), 1e-6, true));
    return out;
}

// Increment-based order in eps. The stencil part of the defect cancels in
// differences of the right-hand side, leaving the eps expansion alone.
void eps_study(const Settings& s, std::vector<Measure>& out, const CommFixture& f, const Probe& pb)
{
    const MatJet qj = sigma::stencil_jets(f.q, true);
    const MatField ex = pb.exact(f.j, qj);
    const MatField lhs[2] = {sigma::D1(ex), sigma::D2(ex)};
    double scale = 1.0 + sigma::max_abs_entry(f.j.v);
    const double eps0 = 1e-2 * scale;
    std::vector<MatField> rhs[2];
    for (int a = 0; a < 2; ++a)
        for (double e : {eps0, eps0 / 2, eps0 / 4}) rhs[a].push_back(symmetry::frechet_central(pb.dg[a], f.j, f.q, e));
    double e1 = 0.0, e2 = 0.0, d = 0.0;
    for (int a = 0; a < 2; ++a) {
        e1 = std::max(e1, sigma::interior_max_diff(rhs[a][0], rhs[a][1]));
        e2 = std::max(e2, sigma::interior_max_diff(rhs[a][1], rhs[a][2]));
        d = std::max(d, sigma::interior_max_diff(lhs[a], rhs[a][2]));
    }
    const std::string p = "c7." + f.name + "." + pb.name;
    out.push_back(info(p + ".eps_defect", "D_a (pr w G) - pr w (D_a G) at the smallest eps", d));
    if (e1 <= 1e-10) {
        Measure m = lt(s, p + ".eps_increment", "central difference in eps exact: G at most quadratic in theta",
                       std::max(e1, e2), 1e-10);
        m.note = "exact in eps";
        out.push_back(m);
        return;
    }
    const double order = std::log2(e1 / e2);
    Measure m = gt(s, p + ".eps_order", "defect decays at order >= 2 in eps", order, 1.95);
    m.note = "order 2 at 0.1 reporting precision";
    out.push_back(m);
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Worst-case rounding of the measured defect: one Richardson step on a central
// difference (3 eps_m |G| / eps), then a 4th-order stencil (weights 1.5 / h).
double rounding_bound(const CommFixture& f, const Probe& pb, const symmetry::FrechetPolicy& p)
{
    const double eps = symmetry::frechet_eps(f.j, p);
    const double g = sigma::interior_max_norm(pb.g(f.j));
    const double dg = std::max(sigma::interior_max_norm(pb.dg[0](f.j)), sigma::interior_max_norm(pb.dg[1](f.j)));
    const double h = std::min(f.j.grid().h1, f.j.grid().h2);
    return 3.0 * std::numeric_limits<double>::epsilon() / eps * (1.5 * g / h + dg);
}

void h_study(const Settings& s, std::vector<Measure>& out, const std::string& fname,
             const std::function<CommFixture(const sigma::Grid2&)>& make, const sigma::Grid2& base)
{
    const sigma::Grid2 grids[3] = {coarsened(base), base, base.refined()};
    CommFixture fx[3] = {make(grids[0]), make(grids[1]), make(grids[2])};
    for (const auto& pb : probes(s.lambda, true)) {
        std::vector<double> lh, ld;
        double rel = 0.0; // defect over its rounding bound, worst grid
        for (int i = 0; i < 3; ++i) {
            const double d = symmetry::commutation_defect(fx[i].q, pb.g, pb.dg, fx[i].j, s.frechet_diff);
            rel = std::max(rel, d / rounding_bound(fx[i], pb, s.frechet_diff));
            lh.push_back(std::log(grids[i].h1));
            ld.push_back(std::log(std::max(d, 1e-300)));
        }
        const std::string p = "c7." + fname + "." + pb.name;
        if (rel < 1.0) {
            Measure m = lt(s, p + ".h_rounding", "commutation defect below its rounding bound on every grid", rel, 1.0);
            m.note = "no truncation component";
            out.push_back(m);
            continue;
        }
        Measure m = gt(s, p + ".h_order", "defect decays at order >= 3 in h", lsq_slope(lh, ld), 2.95);
        m.note = "order 3 at 0.1 reporting precision";
        out.push_back(m);
    }
}

// Lowered projector P_{k-j} from the active theta, with the same jet route as the Phi builder.
MatField lowered_projector(const JetField& j, int steps)
{
    const int n = j.dim();
    const CMatrix E = matlie::central_unit(n);
    const cd mi(0.0, -1.0);
    MatJet cur;
    cur.v = sigma::map(j.v, [&](const CMatrix& t) -> CMatrix { return E + mi * t; });
    cur.d1 = sigma::scale(j.d1, mi);
    cur.d2 = sigma::scale(j.d2, mi);
    if (j.has_second()) {
        cur.d11 = sigma::scale(j.d11, mi);
        cur.d12 = sigma::scale(j.d12, mi);
        cur.d22 = sigma::scale(j.d22, mi);
    }
    MatField next = cur.v;
    for (int s = 0; s < steps; ++s) {
        const bool more = s + 1 < steps;
        if (more && cur.has_second()) {
            cur = sigma::lower_jets(cur);
            next = cur.v;
        } else {
            next = sigma::lower(cur).p;
            if (more) cur = sigma::stencil_jets(next, false);
        }
    }
    return next;
}

} // namespace

// ---------------------------------------------------------------- criteria

std::vector<Measure> crit_solution_validity(const Settings& s)
{
    std::vector<Measure> out;
    for (int n : {2, 3}) {
        const auto L = sigma::veronese_ladder(n, s.euclid_default);
        const std::string p = "c1.euclid." + cp(n);
        out.push_back(lt(s, p + ".ladder_orthogonality", "ladder projectors are mutually orthogonal",
                         L.orthogonality_defect, 1e-9));
        out.push_back(lt(s, p + ".ladder_completeness", "ladder projectors sum to the identity",
                         L.completeness_defect, 1e-10));
        for (int k = 0; k < L.length(); ++k) {
            const JetField th = sigma::theta_of(L.levels[k]);
            const std::string q = "c1.euclid." + lvl(n, k);
            out.push_back(lt(s, q + ".el_residual", "[D12 P, P] = 0", sigma::el_residual(th).interior_max(), 1e-8));
            out.push_back(lt(s, q + ".theta2", "theta^2 = -i(2-N)/N theta + (1-N)/N E",
                             sigma::theta2_defect(th).interior_max(), 1e-10));
            out.push_back(lt(s, q + ".identity_v", "[theta_a, theta](2i theta - (2-N)E) = -i theta_a",
                             sigma::identity_v_defect(th).interior_max(), 1e-10));
            out.push_back(lt(s, q + ".sandwich", "theta theta_a theta = (N-1)/N^2 theta_a",
                             sigma::sandwich_defect(th).interior_max(), 1e-10));
        }
    }
    {
        const auto L = sigma::veronese_ladder(2, s.euclid_default);
        const JetField st = sigma::theta_of(sigma::stencil_jets(L.levels[0].v, true));
        out.push_back(info("c1.euclid.cp1.l0.el_residual_stencil", "[D12 P, P] = 0 with stencil jets",
                           sigma::el_residual(st).interior_max()));
        // negative control: a smooth perturbation of P0 is not a solution
        const auto& g = s.euclid_default;
        CMatrix h = matlie::zeros(2);
        h(0, 1) = h(1, 0) = 1.0;
        const MatField pert = MatField::generate(g, 2, 0, [&](int i1, int i2) {
            const double r2 = g.x(i1) * g.x(i1) + g.y(i2) * g.y(i2);
            return CMatrix(L.levels[0].v.at(i1, i2) + 1e-2 * std::exp(-r2) * h);
        });
        const JetField bad = sigma::theta_of(sigma::stencil_jets(pert, true));
        out.push_back(gt(s, "c1.euclid.perturbed.el_residual", "perturbed projector violates the field equation",
                         sigma::el_residual(bad).interior_max(), 1e-4));
    }
    {
        const auto t = sigma::traveling_solution(s.kappa, s.omega, s.mink_default);
        const JetField& j = t.jets;
        const std::string p = "c1.mink.traveling";
        out.push_back(lt(s, p + ".el_residual", "[D12 P, P] = 0", sigma::el_residual(j).interior_max(), 1e-12));
        out.push_back(lt(s, p + ".theta2", "theta^2 = -I/4", sigma::theta2_defect(j).interior_max(), 1e-10));
        out.push_back(lt(s, p + ".identity_v", "[theta_a, theta] 2i theta = -i theta_a",
                         sigma::identity_v_defect(j).interior_max(), 1e-10));
        out.push_back(lt(s, p + ".wave_relation", "kappa theta_1 = theta_2",
                         sigma::interior_max_diff(sigma::scale(j.d1, s.kappa), j.d2), 1e-12));
        const CMatrix K = t.k_matrix();
        const MatField kf = commutator_field(j.d1, j.v);
        const MatField kc = MatField::generate(t.grid, 2, 0, [&](int, int) { return K; });
        out.push_back(lt(s, p + ".k_constant", "[theta_1, theta] is constant", sigma::interior_max_diff(kf, kc), 1e-12));
        const MatField dk1 = sigma::add(commutator_field(j.d11, j.v), commutator_field(j.d1, j.d1));
        const MatField dk2 = sigma::add(commutator_field(j.d12, j.v), commutator_field(j.d1, j.d2));
        out.push_back(lt(s, p + ".k_derivatives", "D_a [theta_1, theta] = 0",
                         std::max(sigma::interior_max_norm(dk1), sigma::interior_max_norm(dk2)), 1e-12));
    }
    return out;
}

std::vector<Measure> crit_lsp_euclidean(const Settings& s)
{
    std::vector<Measure> out;
    for (int n : {2, 3}) {
        const auto L = sigma::veronese_ladder(n, s.euclid_default);
        for (int k = 0; k < L.length(); ++k) {
            const JetField th = sigma::theta_of(L.levels[k]);
            for (double lr : s.lambdas) {
                const cd lam = lr;
                const WaveField w = spectral::phi_euclidean(L, SpectralParam(lam), k);
                const auto u = sigma::u_pair(th, lam);
                const std::string p = "c2.euclid." + lvl(n, k) + "." + lam_tag(lam);
                out.push_back(lt(s, p + ".lsp", "D_a Phi = u^a Phi",
                                 spectral::lsp_residual(w, u.u1, u.u2, DerivativeSource::analytic).max(), 1e-7));
                out.push_back(info(p + ".lsp_stencil", "D_a Phi = u^a Phi with stencil derivatives of Phi",
                                   spectral::lsp_residual(w, u.u1, u.u2, DerivativeSource::stencil).max(), true));
            }
        }
    }
    return out;
}

std::vector<Measure> crit_lsp_minkowski(const Settings& s)
{
    std::vector<Measure> out;
    const auto t = sigma::traveling_solution(s.kappa, s.omega, s.mink_default);
    const WaveField w = spectral::phi_traveling(t, SpectralParam(s.lambda));
    const auto u = sigma::u_pair(t.jets, s.lambda);
    const std::string p = "c3.mink.traveling." + lam_tag(s.lambda);
    out.push_back(lt(s, p + ".lsp", "D_a Phi = u^a Phi",
                     spectral::lsp_residual(w, u.u1, u.u2, DerivativeSource::analytic).max(), 1e-8));
    out.push_back(info(p + ".lsp_stencil", "D_a Phi = u^a Phi with stencil derivatives of Phi",
                       spectral::lsp_residual(w, u.u1, u.u2, DerivativeSource::stencil).max(), true));
    out.push_back(lt(s, p + ".det_constant", "det Phi is constant", det_variation(w.phi), 1e-10));
    return out;
}

std::vector<Measure> crit_tangent_theorem(const Settings& s)
{
    std::vector<Measure> out;
    for (int n : {2, 3}) {
        const auto L = sigma::veronese_ladder(n, s.euclid_fd);
        for (int k = 0; k < L.length(); ++k) {
            const JetField th = sigma::theta_of(L.levels[k]);
            const WaveField w = spectral::phi_euclidean(L, SpectralParam(s.lambda), k);
            tangent_block(s, out, "c4.euclid." + lvl(n, k), euclid_spec(), th, w, s.lambda);
        }
    }
    const auto t = sigma::traveling_solution(s.kappa, s.omega, s.mink_fd);
    const WaveField w = spectral::phi_traveling(t, SpectralParam(s.lambda));
    tangent_block(s, out, "c4.mink.linear", mink_linear(), t.jets, w, s.lambda);
    tangent_block(s, out, "c4.mink.quadratic", mink_quadratic(), t.jets, w, s.lambda);
    return out;
}

std::vector<Measure> crit_euclidean_positive(const Settings& s)
{
    std::vector<Measure> out;
    const ConformalSpec spec = euclid_spec();
    for (int n : {2, 3}) {
        const auto L = sigma::veronese_ladder(n, s.euclid_fd);
        for (int k = 0; k < L.length(); ++k) {
            const JetField th = sigma::theta_of(L.levels[k]);
            const WaveField w = spectral::phi_euclidean(L, SpectralParam(s.lambda), k);
            const MatField q = symmetry::conformal_characteristic(spec, th);
            const auto builder = euclid_builder(s.lambda, k);
            const std::string p = "c5.euclid." + lvl(n, k);
            const MatField prw = symmetry::frechet_apply(builder, th, q, s.frechet);
            const MatField rhs = directional(spec, *w.dphi1, *w.dphi2);
            out.push_back(lt(s, p + ".prw_phi", "pr w Phi = f D1 Phi + g D2 Phi", sigma::interior_max_diff(prw, rhs),
                             1e-6, true));
            const auto pr = immersion::prolong_immersion(q, builder, th, w, s.frechet_diff);
            const auto pw = symmetry::prolong_u(spec, th, s.lambda);
            out.push_back(lt(s, p + ".calF_tangent", "D_a calF = Phi^-1 (pr w u^a) Phi",
                             immersion::tangent_check(pr.calF.raw, w, pw.u1, pw.u2).max(), 1e-6, true));
        }
    }
    return out;
}

std::vector<Measure> crit_traveling_wave(const Settings& s)
{
    const Traveling tw = traveling(s, s.mink_fd);
    std::vector<Measure> out = tw_part_a(s, tw);
    append(out, tw_part_b(s, tw));
    append(out, tw_part_c(s, tw));
    return out;
}

std::vector<Measure> crit_commutation(const Settings& s)
{
    std::vector<Measure> out = commutation_gates(s);
    for (const auto& f : {euclid_comm(s, s.euclid_fd, 2, 0), mink_comm(s, s.mink_fd)})
        for (const auto& pb : probes(s.lambda, true)) eps_study(s, out, f, pb);
    h_study(
        s, out, "euclid.cp1.l0", [&](const sigma::Grid2& g) { return euclid_comm(s, g, 2, 0); }, s.euclid_fd);
    h_study(
        s, out, "mink.traveling", [&](const sigma::Grid2& g) { return mink_comm(s, g); }, s.mink_fd);
    return out;
}

namespace {

double headline(const std::vector<Measure>& ms)
{
    double h = 0.0;
    for (const auto& m : ms)
        if (m.fd && m.cmp != Cmp::above) h = std::max(h, m.value);
    return h;
}

} // namespace

std::vector<RefinementRow> refinement_study(const Settings& s, std::vector<Measure>* detail)
{
    using Block = std::vector<Measure> (*)(const Settings&);
    const std::pair<const char*, Block> blocks[] = {
        {"c2", crit_lsp_euclidean}, {"c3", crit_lsp_minkowski},     {"c4", crit_tangent_theorem},
        {"c5", crit_euclidean_positive}, {"c6", crit_traveling_wave}, {"c7", commutation_gates}};
    const Settings fine = s.refined();
    std::vector<RefinementRow> rows;
    for (const auto& [name, fn] : blocks) {
        RefinementRow r;
        r.criterion = name;
        r.coarse = headline(fn(s));
        r.fine = headline(fn(fine));
        r.ratio = r.fine > 0.0 ? r.coarse / r.fine : INFINITY;
        r.floor = r.coarse <= kFloor && r.fine <= kFloor;
        r.pass = r.floor || r.ratio >= kRefineRatio;
        if (detail) {
            Measure m = gt(s, std::string("c8.") + name + ".refinement_ratio",
                           "defect ratio between h and h/2 shows 4th-order convergence", r.ratio, kRefineRatio);
            if (r.floor) {
                m.cmp = Cmp::info;
                m.note = "floor";
            }
            detail->push_back(m);
        }
        rows.push_back(r);
    }
    return rows;
}

// ---------------------------------------------------------------- suites

std::vector<Measure> suite_identities(const Settings& s)
{
    std::vector<Measure> out = crit_solution_validity(s);
    append(out, crit_lsp_euclidean(s));
    append(out, crit_lsp_minkowski(s));

    // lambda-derivatives against a central difference in lambda
    for (int n : {2, 3}) {
        const auto L = sigma::veronese_ladder(n, s.euclid_default);
        const int k = L.length() - 1;
        const MatField exact = spectral::dlambda_phi_euclidean(L, s.lambda, k);
        const MatField fd = dlambda_oracle(
            [&](cd l) { return spectral::phi_euclidean(L, SpectralParam(l), k).phi; }, s.lambda);
        out.push_back(lt(s, "identities.euclid." + lvl(n, k) + ".dlambda_phi", "d_lambda Phi closed form",
                         sigma::interior_max_diff(exact, fd), 1e-7));
        const JetField th = sigma::theta_of(L.levels[k]);
        out.push_back(lt(s, "identities.euclid." + lvl(n, k) + ".zero_curvature",
                         "D2 u1 - D1 u2 + [u1, u2] = 0",
                         sigma::zero_curvature_residual(th, s.lambda).interior_max(), 1e-8));
        const auto ad = sigma::action_density(th);
        out.push_back(lt(s, "identities.euclid." + lvl(n, k) + ".action_real", "tr(P_1 P_2) is real",
                         ad.max_imag, 1e-10));
    }
    {
        const auto t = sigma::traveling_solution(s.kappa, s.omega, s.mink_default);
        const MatField exact = spectral::dlambda_phi_traveling(t, s.lambda);
        const MatField fd = dlambda_oracle(
            [&](cd l) { return spectral::phi_traveling(t, SpectralParam(l)).phi; }, s.lambda);
        out.push_back(lt(s, "identities.mink.traveling.dlambda_phi", "d_lambda Phi closed form",
                         sigma::interior_max_diff(exact, fd), 1e-7));
        out.push_back(lt(s, "identities.mink.traveling.zero_curvature", "D2 u1 - D1 u2 + [u1, u2] = 0",
                         sigma::zero_curvature_residual(t.jets, s.lambda).interior_max(), 1e-10));
    }
    return out;
}

std::vector<Measure> suite_prop1(const Settings& s)
{
    std::vector<Measure> out;
    const ConformalSpec spec = euclid_spec();
    for (auto [n, k] : {std::pair{2, 0}, std::pair{3, 1}}) {
        const auto L = sigma::veronese_ladder(n, s.euclid_fd);
        const JetField th = sigma::theta_of(L.levels[k]);
        const MatField q = symmetry::conformal_characteristic(spec, th);
        const std::string p = "prop1.euclid." + lvl(n, k);
        out.push_back(lt(s, p + ".el_symmetry", "conformal Q is a symmetry of the zero-curvature equation",
                         symmetry::el_symmetry_defect(q, th, s.lambda, s.frechet_diff).max, 1e-6, true));
        if (n == 2) {
            out.push_back(gt(s, p + ".el_symmetry_control", "|x|^2 (theta_1 + theta_2) is not a symmetry",
                             symmetry::el_symmetry_defect(bad_characteristic(th), th, s.lambda, s.frechet_diff).max,
                             1e-3));
            const MatField zero = sigma::scale(q, 0.0);
            out.push_back(lt(s, p + ".el_symmetry_zero", "Q = 0 gives a vanishing defect",
                             symmetry::el_symmetry_defect(zero, th, s.lambda, s.frechet_diff).max, 1e-14));
        }
        const WaveField w = spectral::phi_euclidean(L, SpectralParam(s.lambda), k);
        const auto pw = symmetry::prolong_u(spec, th, s.lambda);
        const auto u = sigma::u_pair(th, s.lambda);
        const auto cf = immersion::conformal_immersion_closed(spec, th, w, s.lambda);
        out.push_back(lt(s, p + ".psi_conformal", "Psi = Phi F solves D_a Psi = u^a Psi + A_a Phi",
                         immersion::psi_residual(immersion::psi_of(cf.raw, w), w, u.u1, u.u2, pw.u1, pw.u2), 1e-6,
                         true));
        const MatField dphi = spectral::dlambda_phi_euclidean(L, s.lambda, k);
        const auto st = immersion::sym_tafel(w, dphi, 1.0);
        out.push_back(lt(s, p + ".psi_sym_tafel", "Phi F^ST = d_lambda Phi",
                         sigma::interior_max_diff(immersion::psi_of(st.raw, w), dphi), 1e-7));
    }
    const auto t = sigma::traveling_solution(s.kappa, s.omega, s.mink_fd);
    const MatField q = symmetry::conformal_characteristic(mink_linear(), t.jets);
    out.push_back(lt(s, "prop1.mink.traveling.el_symmetry", "conformal Q is a symmetry of the zero-curvature equation",
                     symmetry::el_symmetry_defect(q, t.jets, s.lambda, s.frechet_diff).max, 1e-6, true));
    return out;
}

std::vector<Measure> suite_prop2(const Settings& s)
{
    std::vector<Measure> out;
    const auto L = sigma::veronese_ladder(2, s.euclid_fd);
    const JetField th = sigma::theta_of(L.levels[0]);
    const WaveField w = spectral::phi_euclidean(L, SpectralParam(s.lambda), 0);
    const auto u = sigma::u_pair(th, s.lambda);
    const std::string p = "prop2.euclid.cp1.l0";
    auto surface = [&](const std::string& nm, const MatField& a, const MatField& b) {
        out.push_back(lt(s, p + "." + nm + ".compatibility", "tangent fields satisfy the compatibility condition",
                         immersion::compatibility_defect(a, b, u.u1, u.u2).max, 1e-6, true));
        return immersion::integrate_surface(a, b, w);
    };
    {
        const auto ul = sigma::u_pair_dlambda(th, s.lambda);
        const auto ir = surface("sym_tafel", ul.u1, ul.u2);
        out.push_back(lt(s, p + ".sym_tafel.path", "line integration is path independent", ir.path_defect, 1e-6, true));
        const auto st = immersion::sym_tafel(w, spectral::dlambda_phi_euclidean(L, s.lambda, 0), 1.0);
        out.push_back(lt(s, p + ".sym_tafel.tangent", "D_a (Phi^-1 d_lambda Phi) = Phi^-1 (d_lambda u^a) Phi",
                         immersion::tangent_check(st.raw, w, ul.u1, ul.u2).max(), 1e-6, true));
        out.push_back(lt(s, p + ".sym_tafel.integrated", "integrated surface equals the closed form up to a constant",
                         immersion::constant_difference_check(ir.F_raw, st.raw).variation, 1e-7, true));
    }
    const MatField S = gauge_bump(s.euclid_fd, 2);
    {
        immersion::ImmersionInputs in;
        in.S = S;
        const auto T = immersion::assemble_tangents(in, th, s.lambda);
        const auto ir = surface("gauge", T.A, T.B);
        out.push_back(lt(s, p + ".gauge.path", "line integration is path independent", ir.path_defect, 1e-6, true));
        const auto gf = immersion::gauge_immersion(S, w);
        out.push_back(lt(s, p + ".gauge.tangent", "D_a (Phi^-1 S Phi) = Phi^-1 (D_a S + [S, u^a]) Phi",
                         immersion::tangent_check(gf.raw, w, T.A, T.B).max(), 1e-6, true));
    }
    {
        immersion::ImmersionInputs in;
        in.a.c = {1.0};
        in.S = S;
        in.Q = euclid_spec();
        const auto T = immersion::assemble_tangents(in, th, s.lambda);
        const auto ir = surface("combined", T.A, T.B);
        out.push_back(lt(s, p + ".combined.path", "line integration is path independent", ir.path_defect, 1e-6, true));
    }
    {
        const MatField bad = bad_characteristic(th);
        auto u1 = [&](const JetField& j) { return sigma::u_pair(j, s.lambda).u1; };
        auto u2 = [&](const JetField& j) { return sigma::u_pair(j, s.lambda).u2; };
        const MatField A = symmetry::frechet_apply(u1, th, bad, s.frechet_diff);
        const MatField B = symmetry::frechet_apply(u2, th, bad, s.frechet_diff);
        out.push_back(gt(s, p + ".non_symmetry.compatibility", "a non-symmetry gives incompatible tangents",
                         immersion::compatibility_defect(A, B, u.u1, u.u2).max, 1e-3));
        out.push_back(gt(s, p + ".non_symmetry.path", "a non-symmetry gives a path-dependent integral",
                         immersion::integrate_surface(A, B, w).path_defect, 1e-6));
    }
    return out;
}

std::vector<Measure> suite_prop3(const Settings& s)
{
    std::vector<Measure> out;
    const ConformalSpec spec = euclid_spec();
    for (int n : {2, 3}) {
        const auto L = sigma::veronese_ladder(n, s.euclid_fd);
        const int k = L.length() - 1;
        const JetField th = sigma::theta_of(L.levels[k]);
        const MatField q = symmetry::conformal_characteristic(spec, th);
        const auto d = symmetry::lsp_symmetry_defect(q, euclid_builder(s.lambda, k), th, s.lambda, s.frechet_diff);
        out.push_back(lt(s, "prop3.euclid." + lvl(n, k) + ".lsp_symmetry", "pr w_Q maps LSP solutions to solutions",
                         std::max(d.max1, d.max2), 1e-6, true));
    }
    const auto t = sigma::traveling_solution(s.kappa, s.omega, s.mink_fd);
    const WaveField w = spectral::phi_traveling(t, SpectralParam(s.lambda));
    for (const auto& [nm, spec2] :
         {std::pair<const char*, ConformalSpec>{"quadratic", mink_quadratic()}, {"unequal", mink_unequal()}}) {
        const MatField q = symmetry::conformal_characteristic(spec2, t.jets);
        const auto b = traveling_builder(s.lambda, s.kappa);
        const auto d = symmetry::lsp_symmetry_defect(q, b, t.jets, s.lambda, s.frechet_diff);
        const std::string p = std::string("prop3.mink.") + nm;
        out.push_back(gt(s, p + ".lsp_symmetry", "pr w_Q does not preserve the LSP", std::max(d.max1, d.max2), 0.1));
        const auto pr = immersion::prolong_immersion(q, b, t.jets, w, s.frechet_diff);
        const auto pw = symmetry::prolong_u(spec2, t.jets, s.lambda);
        out.push_back(gt(s, p + ".calF_tangent", "calF is not an integral of Phi^-1 (pr w u^a) Phi",
                         immersion::tangent_check(pr.calF.raw, w, pw.u1, pw.u2).max(), 0.1));
    }
    return out;
}

std::vector<Measure> suite_prop4(const Settings& s)
{
    std::vector<Measure> out = crit_tangent_theorem(s);
    auto prolong_vs_frechet = [&](const std::string& p, const ConformalSpec& spec, const JetField& th,
                                  const WaveField& w) {
        const MatField q = symmetry::conformal_characteristic(spec, th);
        const auto pw = symmetry::prolong_u(spec, th, s.lambda);
        auto u1 = [&](const JetField& j) { return sigma::u_pair(j, s.lambda).u1; };
        auto u2 = [&](const JetField& j) { return sigma::u_pair(j, s.lambda).u2; };
        const double d = std::max(sigma::interior_max_diff(symmetry::frechet_apply(u1, th, q, s.frechet), pw.u1),
                                  sigma::interior_max_diff(symmetry::frechet_apply(u2, th, q, s.frechet), pw.u2));
        out.push_back(lt(s, p + ".prolongation", "pr w_Q u^a equals its closed form", d, 1e-6, true));
        const auto cf = immersion::conformal_immersion_closed(spec, th, w, s.lambda);
        const auto ir = immersion::integrate_surface(pw.u1, pw.u2, w);
        out.push_back(lt(s, p + ".integrated", "integrated surface equals the closed form up to a constant",
                         immersion::constant_difference_check(ir.F_raw, cf.raw).variation, 1e-6, true));
    };
    for (auto [n, k] : {std::pair{2, 0}, std::pair{3, 1}}) {
        const auto L = sigma::veronese_ladder(n, s.euclid_fd);
        prolong_vs_frechet("prop4.euclid." + lvl(n, k), euclid_spec(), sigma::theta_of(L.levels[k]),
                           spectral::phi_euclidean(L, SpectralParam(s.lambda), k));
    }
    const auto t = sigma::traveling_solution(s.kappa, s.omega, s.mink_fd);
    prolong_vs_frechet("prop4.mink.linear", mink_linear(), t.jets, spectral::phi_traveling(t, SpectralParam(s.lambda)));
    return out;
}

std::vector<Measure> suite_prop5(const Settings& s)
{
    const Traveling tw = traveling(s, s.mink_fd);
    std::vector<Measure> out = tw_part_a(s, tw);
    const auto& g = tw.t.grid;
    for (const auto& [nm, spec] : {std::pair<const char*, ConformalSpec>{"linear", mink_linear()}, {"affine", mink_cd(s)}}) {
        const MatField q = symmetry::conformal_characteristic(spec, tw.t.jets);
        const auto pr =
            immersion::prolong_immersion(q, traveling_builder(s.lambda, s.kappa), tw.t.jets, tw.w, s.frechet_diff);
        const auto R = symmetry::traveling_R_fields(spec, tw.t, s.lambda);
        out.push_back(lt(s, std::string("prop5.") + nm + ".R_fields", "D_a calF = Phi^-1 R_a Phi",
                         immersion::tangent_check(pr.calF.raw, tw.w, R.u1, R.u2).max(), 1e-6, true));
        if (std::string(nm) == "linear") {
            out.push_back(lt(s, "prop5.linear.rank", "calF without a gauge term is a curve",
                             immersion::tangent_rank(pr.calF.raw).max_ratio, 1e-6, true));
            const MatField S = gauge_bump(g, 2);
            const auto gf = immersion::gauge_immersion(S, tw.w);
            out.push_back(gt(s, "prop5.linear.rank_gauge", "adding a gauge term gives a surface",
                             immersion::tangent_rank(sigma::add(pr.calF.raw, gf.raw)).min_ratio, 1e-6));
        }
    }
    {
        const ConformalSpec spec = mink_quadratic();
        const MatField q = symmetry::conformal_characteristic(spec, tw.t.jets);
        const auto d = symmetry::lsp_symmetry_defect(q, traveling_builder(s.lambda, s.kappa), tw.t.jets, s.lambda,
                                                     s.frechet_diff);
        const MatField ref = MatField::generate(g, 2, 0, [&](int i1, int i2) {
            const cd c = 2.0 * spec.f11_at(g, i1, i2) * spectral::chi(g.x(i1), g.y(i2), s.kappa, s.lambda);
            return CMatrix(c * tw.K * tw.w.phi.at(i1, i2));
        });
        out.push_back(lt(s, "prop5.quadratic.lsp_symmetry_formula", "pr w_Q (D_1 Phi - u^1 Phi) = 2 f_11 chi K Phi",
                         sigma::interior_max_diff(d.d1, ref), 1e-6, true));
    }
    out.push_back(lt(s, "prop5.sandwich_constant", "Phi^dag K Phi is constant on the wave",
                     sigma::interior_max_diff(k_sandwich(tw.w, tw.K, [](int, int) { return cd(1.0); }),
                                              MatField::generate(g, 2, 0, [&](int, int) {
                                                  const CMatrix p = tw.w.phi.at(g.n1 / 2, g.n2 / 2);
                                                  return CMatrix(p.adjoint() * tw.K * p);
                                              })),
                     1e-10));
    return out;
}

std::vector<Measure> suite_prop6(const Settings& s)
{
    const Traveling tw = traveling(s, s.mink_fd);
    std::vector<Measure> out = tw_part_b(s, tw);
    append(out, tw_part_c(s, tw));
    // f_11 = 0 criterion, positive side
    {
        const ConformalSpec spec = mink_linear();
        const MatField q = symmetry::conformal_characteristic(spec, tw.t.jets);
        const auto pr =
            immersion::prolong_immersion(q, traveling_builder(s.lambda, s.kappa), tw.t.jets, tw.w, s.frechet_diff);
        const auto pw = symmetry::prolong_u(spec, tw.t.jets, s.lambda);
        out.push_back(lt(s, "prop6.linear.fg_identity", "with f_11 = 0, f_1 = g_2 the identity holds",
                         immersion::tangent_check(pr.calF.raw, tw.w, pw.u1, pw.u2).max(), 1e-6, true));
    }
    // f_1 = g_2 criterion, negative side
    {
        const ConformalSpec spec = mink_unequal();
        const MatField q = symmetry::conformal_characteristic(spec, tw.t.jets);
        const auto pr =
            immersion::prolong_immersion(q, traveling_builder(s.lambda, s.kappa), tw.t.jets, tw.w, s.frechet_diff);
        const auto cf = immersion::conformal_immersion_closed(spec, tw.t.jets, tw.w, s.lambda);
        out.push_back(gt(s, "prop6.unequal.difference_variation", "with f_1 != g_2, F - calF is not constant",
                         immersion::constant_difference_check(cf.raw, pr.calF.raw).variation, 0.1));
    }
    // quadratic: difference not constant either
    {
        const ConformalSpec spec = mink_quadratic();
        const MatField q = symmetry::conformal_characteristic(spec, tw.t.jets);
        const auto pr =
            immersion::prolong_immersion(q, traveling_builder(s.lambda, s.kappa), tw.t.jets, tw.w, s.frechet_diff);
        const auto cf = immersion::conformal_immersion_closed(spec, tw.t.jets, tw.w, s.lambda);
        out.push_back(gt(s, "prop6.quadratic.difference_variation", "with f_11 != 0, F - calF is not constant",
                         immersion::constant_difference_check(cf.raw, pr.calF.raw).variation, 0.1));
    }
    // LSP symmetry for the affine case; the D_2 defect needs the finer grid
    {
        const auto t = sigma::traveling_solution(s.kappa, s.omega, s.mink_fd.refined());
        const ConformalSpec spec = mink_cd(s);
        const MatField q = symmetry::conformal_characteristic(spec, t.jets);
        const auto d = symmetry::lsp_symmetry_defect(q, traveling_builder(s.lambda, s.kappa), t.jets, s.lambda,
                                                     s.frechet_diff);
        out.push_back(lt(s, "prop6.affine.lsp_symmetry", "with f_1 = g_2, f_11 = 0, pr w_Q preserves the LSP",
                         std::max(d.max1, d.max2), 1e-6, true));
    }
    return out;
}

std::vector<Measure> suite_prop7(const Settings& s)
{
    std::vector<Measure> out;
    const ConformalSpec spec = euclid_spec();
    for (int n : {2, 3}) {
        const auto L = sigma::veronese_ladder(n, s.euclid_fd);
        for (int k = 0; k < L.length(); ++k) {
            const JetField th = sigma::theta_of(L.levels[k]);
            const MatField q = symmetry::conformal_characteristic(spec, th);
            for (int j = 0; j <= k; ++j) {
                const MatField prw = symmetry::frechet_apply(
                    [j](const JetField& x) { return lowered_projector(x, j); }, th, q, s.frechet);
                const auto& lv = L.levels[k - j];
                out.push_back(lt(s, "prop7.euclid." + lvl(n, k) + ".lowered" + std::to_string(j),
                                 "pr w (Pi_-^j P) = f D1 (Pi_-^j P) + g D2 (Pi_-^j P)",
                                 sigma::interior_max_diff(prw, directional(spec, lv.d1, lv.d2)), 1e-6, true));
            }
        }
    }
    return out;
}

std::vector<Measure> suite_prop8(const Settings& s) { return crit_euclidean_positive(s); }

std::vector<Measure> suite_appendix(const Settings& s) { return crit_commutation(s); }

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names = {"identities", "prop1", "prop2", "prop3", "prop4", "prop5",
                                                   "prop6",      "prop7", "prop8", "appendix"};
    return names;
}

Report run_suite(const std::string& name, const Settings& s)
{
    using Fn = std::vector<Measure> (*)(const Settings&);
    static const std::map<std::string, Fn> table = {
        {"identities", suite_identities}, {"prop1", suite_prop1}, {"prop2", suite_prop2}, {"prop3", suite_prop3},
        {"prop4", suite_prop4},           {"prop5", suite_prop5}, {"prop6", suite_prop6}, {"prop7", suite_prop7},
        {"prop8", suite_prop8},           {"appendix", suite_appendix}};
    std::vector<std::string> which;
    if (name == "all")
        which = suite_names();
    else if (table.count(name))
        which = {name};
    else
        throw Error(ErrorKind::invalid_argument, "unknown suite '" + name + "'");
    Report r;
    r.suite = name;
    for (const auto& w : which) {
        const auto t0 = std::chrono::steady_clock::now();
        Section sec;
        sec.suite = w;
        sec.measures = table.at(w)(s);
        sec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.sections.push_back(std::move(sec));
    }
    return r;
}

} // namespace solsurf::app
