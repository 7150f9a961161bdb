#include "solsurf/symmetry.hpp"

#include <algorithm>
#include <cmath>

#include "solsurf/parallel.hpp"

namespace solsurf::symmetry {

using matlie::commutator;

namespace {

void each_node(const Grid2& g, int margin, const std::function<void(int, int)>& fn)
{
    const int lo = margin, hi = g.n2 - margin;
    if (hi <= lo) return;
    parallel_for(static_cast<std::size_t>(hi - lo), [&](std::size_t b, std::size_t e) {
        for (std::size_t r = b; r < e; ++r)
            for (int i1 = margin; i1 < g.n1 - margin; ++i1) fn(i1, lo + static_cast<int>(r));
    });
}

cd x1_of(const Grid2& gr, int i1, int i2)
{
    return gr.chart == Chart::euclidean ? cd(gr.x(i1), gr.y(i2)) : cd(gr.x(i1), 0.0);
}

cd x2_of(const Grid2& gr, int i1, int i2)
{
    return gr.chart == Chart::euclidean ? cd(gr.x(i1), -gr.y(i2)) : cd(gr.y(i2), 0.0);
}

MatField evaluate_guarded(const Functional& g, const JetField& j)
{
    try {
        return g(j);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::contracted_to_zero || e.kind() == ErrorKind::singular_matrix ||
            e.kind() == ErrorKind::non_finite)
            throw Error(ErrorKind::deformation_out_of_domain, e.what());
        throw;
    }
}

} // namespace

cd Poly::operator()(cd x) const
{
    cd r = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
    return r;
}

Poly Poly::derivative() const
{
    Poly d;
    for (std::size_t k = 1; k < c.size(); ++k) d.c.push_back(double(k) * c[k]);
    return d;
}

bool Poly::is_zero() const
{
    return std::all_of(c.begin(), c.end(), [](cd x) { return x == cd(0.0); });
}

void ConformalSpec::validate() const
{
    if (chart == Chart::minkowski) {
        for (const Poly* p : {&f, &g})
            for (cd x : p->c)
                if (x.imag() != 0.0) throw Error(ErrorKind::invalid_argument, "Minkowski conformal data must be real");
        return;
    }
    const std::size_t n = std::max(f.c.size(), g.c.size());
    for (std::size_t k = 0; k < n; ++k) {
        cd a = k < f.c.size() ? f.c[k] : cd(0.0);
        cd b = k < g.c.size() ? g.c[k] : cd(0.0);
        if (std::abs(b - std::conj(a)) > 1e-14 * (1.0 + std::abs(a)))
            throw Error(ErrorKind::invalid_argument, "Euclidean conformal data needs g = conjugate mirror of f");
    }
}

ConformalSpec ConformalSpec::euclidean(std::vector<cd> f)
{
    ConformalSpec s;
    s.chart = Chart::euclidean;
    s.f.c = f;
    for (cd x : f) s.g.c.push_back(std::conj(x));
    return s;
}

ConformalSpec ConformalSpec::minkowski(std::vector<double> f, std::vector<double> g)
{
    ConformalSpec s;
    s.chart = Chart::minkowski;
    for (double x : f) s.f.c.emplace_back(x, 0.0);
    for (double x : g) s.g.c.emplace_back(x, 0.0);
    return s;
}

cd ConformalSpec::f_at(const Grid2& gr, int i1, int i2) const { return f(x1_of(gr, i1, i2)); }
cd ConformalSpec::g_at(const Grid2& gr, int i1, int i2) const { return g(x2_of(gr, i1, i2)); }
cd ConformalSpec::f1_at(const Grid2& gr, int i1, int i2) const { return f.derivative()(x1_of(gr, i1, i2)); }
cd ConformalSpec::g2_at(const Grid2& gr, int i1, int i2) const { return g.derivative()(x2_of(gr, i1, i2)); }
cd ConformalSpec::f11_at(const Grid2& gr, int i1, int i2) const
{
    return f.derivative().derivative()(x1_of(gr, i1, i2));
}

MatField conformal_characteristic(const ConformalSpec& spec, const JetField& j)
{
    const Grid2& g = j.grid();
    if (g.chart != spec.chart) throw Error(ErrorKind::chart_mismatch, "conformal spec and jets use different charts");
    const int m = std::max({j.v.margin(), j.d1.margin(), j.d2.margin()});
    const Poly f = spec.f, gg = spec.g;
    return MatField::generate(g, j.dim(), m, [&](int i1, int i2) {
        return CMatrix(f(x1_of(g, i1, i2)) * j.d1.at(i1, i2) + gg(x2_of(g, i1, i2)) * j.d2.at(i1, i2));
    });
}

JetField deform(const JetField& j, const sigma::MatJet& qj, double eps)
{
    JetField r;
    r.v = sigma::axpy(eps, qj.v, j.v);
    r.d1 = sigma::axpy(eps, qj.d1, j.d1);
    r.d2 = sigma::axpy(eps, qj.d2, j.d2);
    if (j.has_second()) {
        r.d11 = sigma::axpy(eps, qj.d11, j.d11);
        r.d12 = sigma::axpy(eps, qj.d12, j.d12);
        r.d22 = sigma::axpy(eps, qj.d22, j.d22);
    }
    r.provenance = sigma::Provenance::numeric_stencil;
    return r;
}

JetField deform(const JetField& j, const MatField& q, double eps)
{
    return deform(j, sigma::stencil_jets(q, j.has_second()), eps);
}

double frechet_eps(const JetField& j, const FrechetPolicy& p)
{
    if (!(p.eps_base > 0.0)) throw Error(ErrorKind::invalid_argument, "Frechet step must be positive");
    return p.eps_base * (1.0 + sigma::max_abs_entry(j.v));
}

namespace {

MatField central(const Functional& g, const JetField& j, const sigma::MatJet& qj, double eps)
{
    MatField a = evaluate_guarded(g, deform(j, qj, eps));
    MatField b = evaluate_guarded(g, deform(j, qj, -eps));
    return sigma::scale(sigma::sub(a, b), 1.0 / (2.0 * eps));
}

} // namespace

MatField frechet_central(const Functional& g, const JetField& j, const MatField& q, double eps)
{
    return central(g, j, sigma::stencil_jets(q, j.has_second()), eps);
}

MatField frechet_apply(const Functional& g, const JetField& j, const MatField& q, const FrechetPolicy& p)
{
    const double eps = frechet_eps(j, p);
    const sigma::MatJet qj = sigma::stencil_jets(q, j.has_second());
    MatField d = central(g, j, qj, eps);
    if (!p.richardson) return d;
    MatField h = central(g, j, qj, 0.5 * eps);
    // (4 D(eps/2) - D(eps)) / 3
    return sigma::zip(h, d, [](const CMatrix& a, const CMatrix& b) -> CMatrix { return (4.0 * a - b) / 3.0; });
}

sigma::UPair prolong_u(const ConformalSpec& spec, const JetField& j, cd lambda)
{
    const Grid2& g = j.grid();
    if (g.chart != spec.chart) throw Error(ErrorKind::chart_mismatch, "conformal spec and jets use different charts");
    sigma::UPair u = sigma::u_pair(j, lambda);
    sigma::UJets uj = sigma::u_jets(j, lambda);
    const int m = j.margin();
    const int n = j.dim();
    sigma::UPair out{MatField(g, n, m), MatField(g, n, m)};
    const Poly f = spec.f, gg = spec.g, f1 = spec.f.derivative(), g2 = spec.g.derivative();
    each_node(g, m, [&](int i1, int i2) {
        const std::size_t k = g.index(i1, i2);
        const cd fv = f(x1_of(g, i1, i2)), gv = gg(x2_of(g, i1, i2));
        const cd f1v = f1(x1_of(g, i1, i2)), g2v = g2(x2_of(g, i1, i2));
        out.u1.set(k, f1v * u.u1.at(k) + fv * uj.d1u1.at(k) + gv * uj.d2u1.at(k));
        out.u2.set(k, fv * uj.d1u2.at(k) + g2v * u.u2.at(k) + gv * uj.d2u2.at(k));
    });
    return out;
}

ElSymmetryDefect el_symmetry_defect(const MatField& q, const JetField& j, cd lambda, const FrechetPolicy& p)
{
    sigma::UPair u = sigma::u_pair(j, lambda);
    Functional g1 = [lambda](const JetField& x) { return sigma::u_pair(x, lambda).u1; };
    Functional g2 = [lambda](const JetField& x) { return sigma::u_pair(x, lambda).u2; };
    MatField q1 = frechet_apply(g1, j, q, p);
    MatField q2 = frechet_apply(g2, j, q, p);
    MatField d2q1 = sigma::D2(q1), d1q2 = sigma::D1(q2);
    const Grid2& g = j.grid();
    const int m = std::max(d2q1.margin(), d1q2.margin());
    MatField r = MatField::generate(g, j.dim(), m, [&](int i1, int i2) {
        return CMatrix(d2q1.at(i1, i2) - d1q2.at(i1, i2) + commutator(q1.at(i1, i2), u.u2.at(i1, i2)) +
                       commutator(u.u1.at(i1, i2), q2.at(i1, i2)));
    });
    ElSymmetryDefect out;
    out.field = sigma::frob(r);
    out.max = out.field.interior_max();
    return out;
}

LspSymmetryDefect lsp_symmetry_defect(const MatField& q, const PhiBuilder& builder, const JetField& j, cd lambda,
                                      const FrechetPolicy& p)
{
    auto lsp = [builder, lambda](const JetField& x, int a) {
        MatField phi = builder(x);
        sigma::UPair u = sigma::u_pair(x, lambda);
        MatField d = a == 1 ? sigma::D1(phi) : sigma::D2(phi);
        const MatField& ua = a == 1 ? u.u1 : u.u2;
        MatField up = sigma::zip(ua, phi, [](const CMatrix& s, const CMatrix& t) -> CMatrix { return s * t; });
        return sigma::sub(d, up);
    };
    LspSymmetryDefect out;
    out.d1 = frechet_apply([&](const JetField& x) { return lsp(x, 1); }, j, q, p);
    out.d2 = frechet_apply([&](const JetField& x) { return lsp(x, 2); }, j, q, p);
    out.r1 = sigma::frob(out.d1);
    out.r2 = sigma::frob(out.d2);
    out.max1 = out.r1.interior_max();
    out.max2 = out.r2.interior_max();
    return out;
}

namespace {

double commutation_from(const MatField& prw_g, const MatField& prw_dg1, const MatField& prw_dg2)
{
    MatField l1 = sigma::D1(prw_g), l2 = sigma::D2(prw_g);
    double a = sigma::interior_max_diff(l1, prw_dg1);
    double b = sigma::interior_max_diff(l2, prw_dg2);
    return std::max(a, b);
}

} // namespace

double commutation_defect(const MatField& q, const Functional& g, const Functional (&dg)[2], const JetField& j,
                          const FrechetPolicy& p)
{
    return commutation_from(frechet_apply(g, j, q, p), frechet_apply(dg[0], j, q, p), frechet_apply(dg[1], j, q, p));
}

double commutation_defect_eps(const MatField& q, const Functional& g, const Functional (&dg)[2], const JetField& j,
                              double eps)
{
    return commutation_from(frechet_central(g, j, q, eps), frechet_central(dg[0], j, q, eps),
                            frechet_central(dg[1], j, q, eps));
}

sigma::UPair traveling_R_fields(const ConformalSpec& spec, const sigma::TravelingWave& t, cd lambda)
{
    sigma::check_lambda(lambda);
    if (spec.chart != Chart::minkowski) throw Error(ErrorKind::chart_mismatch, "R fields need Minkowski conformal data");
    const Grid2& g = t.grid;
    const CMatrix K = t.k_matrix();
    const double kap = t.kappa;
    sigma::UPair out;
    out.u1 = MatField::generate(g, 2, 0, [&](int i1, int i2) {
        const cd c = -2.0 * spec.f1_at(g, i1, i2) / (1.0 + lambda) +
                     2.0 * spec.f11_at(g, i1, i2) * spectral::chi(g.x(i1), g.y(i2), kap, lambda);
        return CMatrix(c * K);
    });
    out.u2 = MatField::generate(g, 2, 0, [&](int i1, int i2) {
        const cd c = -2.0 * kap * spec.g2_at(g, i1, i2) - 2.0 * kap * lambda * spec.f1_at(g, i1, i2) / (1.0 - lambda);
        return CMatrix(c * K);
    });
    return out;
}

} // namespace solsurf::symmetry
