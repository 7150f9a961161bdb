#include "solsurf/immersion.hpp"

#include <algorithm>
#include <cmath>

#include "solsurf/parallel.hpp"

namespace solsurf::immersion {

using matlie::commutator;
using sigma::Chart;

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

MatField product(const MatField& a, const MatField& b)
{
    return sigma::zip(a, b, [](const CMatrix& x, const CMatrix& y) -> CMatrix { return x * y; });
}

// Integral over [x_i, x_{i+dir}] from four consecutive samples, 4th order.
cd one_interval(const std::vector<cd>& f, int i, int dir, double h)
{
    const int n = static_cast<int>(f.size());
    auto at = [&](int k) { return f[static_cast<std::size_t>(i + dir * k)]; };
    auto inside = [&](int k) {
        int idx = i + dir * k;
        return idx >= 0 && idx < n;
    };
    if (inside(3)) return h / 24.0 * (9.0 * at(0) + 19.0 * at(1) - 5.0 * at(2) + at(3));
    if (inside(-2)) return h / 24.0 * (at(-2) - 5.0 * at(-1) + 19.0 * at(0) + 9.0 * at(1));
    if (inside(2)) return h / 12.0 * (5.0 * at(0) + 8.0 * at(1) - at(2));
    if (inside(-1)) return h / 12.0 * (-at(-1) + 8.0 * at(0) + 5.0 * at(1));
    return 0.5 * h * (at(0) + at(1));
}

void sweep(const std::vector<cd>& f, double h, int b, int dir, std::vector<cd>& out)
{
    const int n = static_cast<int>(f.size());
    const double sh = dir * h;
    for (int i = b + dir, s = 1; i >= 0 && i < n; i += dir, ++s) {
        if (s % 2 == 0) {
            out[i] = out[i - 2 * dir] + sh / 3.0 * (f[i - 2 * dir] + 4.0 * f[i - dir] + f[i]);
        } else {
            out[i] = out[i - dir] + double(dir) * one_interval(f, i - dir, dir, h);
        }
    }
}

} // namespace

std::vector<cd> cumulative_simpson(const std::vector<cd>& f, double h, int b)
{
    std::vector<cd> out(f.size(), cd(0.0));
    if (f.empty()) return out;
    if (b < 0 || b >= static_cast<int>(f.size())) throw Error(ErrorKind::invalid_argument, "integration base outside line");
    sweep(f, h, b, +1, out);
    sweep(f, h, b, -1, out);
    return out;
}

Tangents assemble_tangents(const ImmersionInputs& inp, const JetField& j, cd lambda)
{
    const Grid2& g = j.grid();
    const int n = j.dim();
    sigma::UPair u = sigma::u_pair(j, lambda);
    Tangents t;
    t.A = MatField::generate(g, n, u.u1.margin(), [&](int, int) { return matlie::zeros(n); });
    t.B = t.A;
    const cd a = inp.a(lambda);
    if (a != cd(0.0)) {
        sigma::UPair ul = sigma::u_pair_dlambda(j, lambda);
        t.A = sigma::axpy(a, ul.u1, t.A);
        t.B = sigma::axpy(a, ul.u2, t.B);
    }
    if (inp.S) {
        const MatField& s = *inp.S;
        sigma::require_same_grid(s.grid(), g);
        MatField d1s = sigma::D1(s), d2s = sigma::D2(s);
        MatField ca = sigma::zip(s, u.u1, [](const CMatrix& x, const CMatrix& y) -> CMatrix { return commutator(x, y); });
        MatField cb = sigma::zip(s, u.u2, [](const CMatrix& x, const CMatrix& y) -> CMatrix { return commutator(x, y); });
        t.A = sigma::add(t.A, sigma::add(d1s, ca));
        t.B = sigma::add(t.B, sigma::add(d2s, cb));
    }
    if (inp.Q) {
        sigma::UPair pw = symmetry::prolong_u(*inp.Q, j, lambda);
        t.A = sigma::add(t.A, pw.u1);
        t.B = sigma::add(t.B, pw.u2);
    }
    return t;
}

Defect compatibility_defect(const MatField& a, const MatField& b, const MatField& u1, const MatField& u2)
{
    MatField d2a = sigma::D2(a), d1b = sigma::D1(b);
    const Grid2& g = a.grid();
    const int m = std::max({d2a.margin(), d1b.margin(), u1.margin(), u2.margin()});
    MatField r = MatField::generate(g, a.dim(), m, [&](int i1, int i2) {
        return CMatrix(d2a.at(i1, i2) - d1b.at(i1, i2) + commutator(a.at(i1, i2), u2.at(i1, i2)) +
                       commutator(u1.at(i1, i2), b.at(i1, i2)));
    });
    Defect d;
    d.field = sigma::frob(r);
    d.max = d.field.interior_max();
    return d;
}

MatField conjugate(const MatField& x, const WaveField& w)
{
    sigma::require_same_grid(x.grid(), w.phi.grid());
    MatField inv = spectral::inverse_field(w.phi);
    const Grid2& g = x.grid();
    const int m = std::max(x.margin(), w.phi.margin());
    return MatField::generate(g, x.dim(), m, [&](int i1, int i2) {
        return CMatrix(inv.at(i1, i2) * x.at(i1, i2) * w.phi.at(i1, i2));
    });
}

ImmersionResult integrate_surface(const MatField& a, const MatField& b, const WaveField& w,
                                  std::optional<std::pair<int, int>> basepoint, std::optional<double> compat)
{
    const Grid2& g = a.grid();
    const int n = a.dim();
    MatField t1 = conjugate(a, w), t2 = conjugate(b, w);
    const int m = std::max(t1.margin(), t2.margin());
    MatField tx(g, n, m), ty(g, n, m);
    each_node(g, m, [&](int i1, int i2) {
        CMatrix dx, dy;
        sigma::axis_from_chart(g.chart, t1.at(i1, i2), t2.at(i1, i2), dx, dy);
        tx.set(i1, i2, dx);
        ty.set(i1, i2, dy);
    });
    const int b1 = basepoint ? basepoint->first : (g.n1 - 1) / 2;
    const int b2 = basepoint ? basepoint->second : (g.n2 - 1) / 2;
    if (b1 < m || b2 < m || b1 >= g.n1 - m || b2 >= g.n2 - m)
        throw Error(ErrorKind::invalid_argument, "basepoint outside the valid integration region");
    const int len1 = g.n1 - 2 * m, len2 = g.n2 - 2 * m;
    const std::size_t nn = static_cast<std::size_t>(n) * n;

    MatField fa(g, n, m), fb(g, n, m);
    auto line = [&](const MatField& f, bool along_x, int fixed, std::size_t e) {
        const int len = along_x ? len1 : len2;
        std::vector<cd> v(len);
        for (int s = 0; s < len; ++s) {
            const int i1 = along_x ? m + s : fixed, i2 = along_x ? fixed : m + s;
            v[s] = f.node(g.index(i1, i2))[e];
        }
        return v;
    };
    // path A: along x^1 on the base row, then along x^2
    // path B: along x^2 on the base column, then along x^1
    std::vector<std::vector<cd>> rowA(nn), colB(nn);
    for (std::size_t e = 0; e < nn; ++e) {
        rowA[e] = cumulative_simpson(line(tx, true, b2, e), g.h1, b1 - m);
        colB[e] = cumulative_simpson(line(ty, false, b1, e), g.h2, b2 - m);
    }
    parallel_for(static_cast<std::size_t>(len1), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t s = lo; s < hi; ++s) {
            const int i1 = m + static_cast<int>(s);
            for (std::size_t e = 0; e < nn; ++e) {
                std::vector<cd> c = cumulative_simpson(line(ty, false, i1, e), g.h2, b2 - m);
                for (int r = 0; r < len2; ++r) fa.node(g.index(i1, m + r))[e] = rowA[e][s] + c[r];
            }
        }
    });
    parallel_for(static_cast<std::size_t>(len2), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t s = lo; s < hi; ++s) {
            const int i2 = m + static_cast<int>(s);
            for (std::size_t e = 0; e < nn; ++e) {
                std::vector<cd> c = cumulative_simpson(line(tx, true, i2, e), g.h1, b1 - m);
                for (int r = 0; r < len1; ++r) fb.node(g.index(m + r, i2))[e] = colB[e][s] + c[r];
            }
        }
    });
    ImmersionResult res;
    res.base1 = b1;
    res.base2 = b2;
    res.path_defect = sigma::interior_max_diff(fa, fb);
    res.F_raw = fa;
    ClosedForm cf = finish(fa);
    res.F = cf.F;
    res.su_correction = cf.su_correction;
    res.compat_defect = compat.value_or(std::nan(""));
    return res;
}

ClosedForm finish(MatField raw)
{
    ClosedForm c;
    const Grid2& g = raw.grid();
    c.F = MatField(g, raw.dim(), raw.margin());
    std::vector<double> corr(g.size(), 0.0);
    each_node(g, raw.margin(), [&](int i1, int i2) {
        matlie::SuProjection p = matlie::project_su(raw.at(i1, i2));
        corr[g.index(i1, i2)] = p.discarded;
        c.F.set(i1, i2, p.mat);
    });
    c.su_correction = *std::max_element(corr.begin(), corr.end());
    c.raw = std::move(raw);
    return c;
}

ClosedForm sym_tafel(const WaveField& w, const MatField& dphi, cd a)
{
    sigma::require_same_grid(w.phi.grid(), dphi.grid());
    MatField inv = spectral::inverse_field(w.phi);
    return finish(sigma::scale(product(inv, dphi), a));
}

ClosedForm gauge_immersion(const MatField& s, const WaveField& w) { return finish(conjugate(s, w)); }

ClosedForm conformal_immersion_closed(const ConformalSpec& spec, const JetField& j, const WaveField& w, cd lambda)
{
    const Grid2& g = j.grid();
    if (g.chart != spec.chart) throw Error(ErrorKind::chart_mismatch, "conformal spec and jets use different charts");
    sigma::UPair u = sigma::u_pair(j, lambda);
    const int m = std::max(u.u1.margin(), u.u2.margin());
    MatField x = MatField::generate(g, j.dim(), m, [&](int i1, int i2) {
        return CMatrix(spec.f_at(g, i1, i2) * u.u1.at(i1, i2) + spec.g_at(g, i1, i2) * u.u2.at(i1, i2));
    });
    return finish(conjugate(x, w));
}

ProlongImmersion prolong_immersion(const MatField& q, const symmetry::PhiBuilder& builder, const JetField& j,
                                   const WaveField& w, const symmetry::FrechetPolicy& p)
{
    ProlongImmersion r;
    r.prw_phi = symmetry::frechet_apply(builder, j, q, p);
    MatField inv = spectral::inverse_field(w.phi);
    r.calF = finish(product(inv, r.prw_phi));
    return r;
}

ConstantDifference constant_difference_check(const MatField& f, const MatField& g)
{
    ConstantDifference c;
    c.diff = sigma::sub(f, g);
    const Grid2& gr = f.grid();
    const int m = c.diff.margin();
    c.mean = matlie::zeros(f.dim());
    std::size_t count = 0;
    for (int i2 = m; i2 < gr.n2 - m; ++i2)
        for (int i1 = m; i1 < gr.n1 - m; ++i1) {
            c.mean += c.diff.at(i1, i2);
            ++count;
        }
    if (count) c.mean /= double(count);
    double var = 0.0;
    for (int i2 = m; i2 < gr.n2 - m; ++i2)
        for (int i1 = m; i1 < gr.n1 - m; ++i1) var = std::max(var, (c.diff.at(i1, i2) - c.mean).norm());
    c.variation = var;
    return c;
}

MatField psi_of(const MatField& f, const WaveField& w) { return product(w.phi, f); }

double psi_residual(const MatField& psi, const WaveField& w, const MatField& u1, const MatField& u2,
                    const MatField& a, const MatField& b)
{
    MatField d1 = sigma::D1(psi), d2 = sigma::D2(psi);
    const Grid2& g = psi.grid();
    const int m = std::max({d1.margin(), d2.margin(), a.margin(), b.margin()});
    double worst = 0.0;
    std::vector<double> r(g.size(), 0.0);
    each_node(g, m, [&](int i1, int i2) {
        const CMatrix ph = w.phi.at(i1, i2), ps = psi.at(i1, i2);
        double x = (d1.at(i1, i2) - u1.at(i1, i2) * ps - a.at(i1, i2) * ph).norm();
        double y = (d2.at(i1, i2) - u2.at(i1, i2) * ps - b.at(i1, i2) * ph).norm();
        r[g.index(i1, i2)] = std::max(x, y);
    });
    for (double x : r) worst = std::max(worst, x);
    return worst;
}

TangentCheck tangent_check(const MatField& f, const WaveField& w, const MatField& a, const MatField& b)
{
    MatField d1 = sigma::D1(f), d2 = sigma::D2(f);
    MatField ca = conjugate(a, w), cb = conjugate(b, w);
    TangentCheck t;
    t.max1 = sigma::interior_max_diff(d1, ca);
    t.max2 = sigma::interior_max_diff(d2, cb);
    return t;
}

RankReport tangent_rank(const MatField& f)
{
    MatField dx = sigma::d_axis(f, 0), dy = sigma::d_axis(f, 1);
    const Grid2& g = f.grid();
    const int m = dx.margin();
    std::vector<double> ratio(g.size(), -1.0);
    each_node(g, m, [&](int i1, int i2) {
        const CMatrix x = dx.at(i1, i2), y = dy.at(i1, i2);
        auto ip = [](const CMatrix& p, const CMatrix& q) { return 0.5 * (p.adjoint() * q).trace().real(); };
        const double gxx = ip(x, x), gxy = ip(x, y), gyy = ip(y, y);
        const double tr = gxx + gyy, det = gxx * gyy - gxy * gxy;
        const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
        const double hi = 0.5 * tr + disc, lo = 0.5 * tr - disc;
        ratio[g.index(i1, i2)] = hi > 0.0 ? std::max(0.0, lo) / hi : 0.0;
    });
    RankReport r;
    r.min_ratio = 1.0;
    for (double x : ratio) {
        if (x < 0.0) continue;
        r.max_ratio = std::max(r.max_ratio, x);
        r.min_ratio = std::min(r.min_ratio, x);
    }
    return r;
}

} // namespace solsurf::immersion
