#include "solsurf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "solsurf/parallel.hpp"

namespace solsurf::spectral {

using matlie::central_unit;
using matlie::commutator;
using matlie::identity;
using sigma::Chart;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDetFloor = 1e-10;

void each_node(const Grid2& g, int margin, const std::function<void(int, int)>& fn)
{
    const int lo = margin, hi = g.n2 - margin;
    if (hi <= lo) return;
    parallel_for(static_cast<std::size_t>(hi - lo), [&](std::size_t b, std::size_t e) {
        for (std::size_t r = b; r < e; ++r)
            for (int i1 = margin; i1 < g.n1 - margin; ++i1) fn(i1, lo + static_cast<int>(r));
    });
}

} // namespace

SpectralParam::SpectralParam(cd l)
    : lambda(l)
{
    sigma::check_lambda(l);
}

EuclidCoeffs euclid_coeffs(cd lambda)
{
    sigma::check_lambda(lambda);
    const cd om = 1.0 - lambda;
    EuclidCoeffs c;
    c.lower = 4.0 * lambda / (om * om);
    c.active = -2.0 / om;
    c.dlower = 4.0 * (1.0 + lambda) / (om * om * om);
    c.dactive = -2.0 / (om * om);
    return c;
}

MatField inverse_field(const MatField& phi, double* max_cond, double* min_abs_det)
{
    const Grid2& g = phi.grid();
    MatField out(g, phi.dim(), phi.margin());
    std::vector<double> cond(g.size(), 0.0), det(g.size(), std::numeric_limits<double>::infinity());
    each_node(g, phi.margin(), [&](int i1, int i2) {
        const std::size_t k = g.index(i1, i2);
        matlie::Inverse inv = matlie::invert(phi.at(k), kDetFloor);
        cond[k] = inv.cond1;
        det[k] = std::abs(inv.det);
        out.set(k, inv.inv);
    });
    if (max_cond) *max_cond = *std::max_element(cond.begin(), cond.end());
    if (min_abs_det) *min_abs_det = *std::min_element(det.begin(), det.end());
    return out;
}

void fill_diagnostics(WaveField& w)
{
    const Grid2& g = w.grid;
    const int n = w.phi.dim();
    w.unitarity_defect = ScalarField{g, w.phi.margin(), std::vector<double>(g.size(), kNaN)};
    each_node(g, w.phi.margin(), [&](int i1, int i2) {
        const std::size_t k = g.index(i1, i2);
        CMatrix p = w.phi.at(k);
        w.unitarity_defect.v[k] = (p.adjoint() * p - identity(n)).norm();
    });
    inverse_field(w.phi, &w.max_cond, &w.min_abs_det);
}

WaveField phi_euclidean(const sigma::SolutionLadder& l, const SpectralParam& sp, std::optional<int> active)
{
    const int k = active.value_or(l.active);
    if (k < 0 || k >= l.length()) throw Error(ErrorKind::invalid_argument, "active ladder index out of range");
    if (l.grid().chart != Chart::euclidean) throw Error(ErrorKind::chart_mismatch, "phi_euclidean needs the Euclidean chart");
    const EuclidCoeffs c = euclid_coeffs(sp.lambda);
    const Grid2& g = l.grid();
    const int n = l.dim();
    WaveField w;
    w.grid = g;
    w.lambda = sp.lambda;
    int m = 0;
    bool analytic = true;
    for (int j = 0; j <= k; ++j) {
        m = std::max(m, l.levels[j].margin());
        analytic = analytic && l.levels[j].provenance == sigma::Provenance::analytic;
    }
    w.phi = MatField(g, n, m);
    MatField d1(g, n, m), d2(g, n, m);
    each_node(g, m, [&](int i1, int i2) {
        const std::size_t idx = g.index(i1, i2);
        CMatrix p = identity(n) + c.active * l.levels[k].v.at(idx);
        CMatrix a = c.active * l.levels[k].d1.at(idx);
        CMatrix b = c.active * l.levels[k].d2.at(idx);
        for (int j = 0; j < k; ++j) {
            p += c.lower * l.levels[j].v.at(idx);
            a += c.lower * l.levels[j].d1.at(idx);
            b += c.lower * l.levels[j].d2.at(idx);
        }
        w.phi.set(idx, p);
        d1.set(idx, a);
        d2.set(idx, b);
    });
    if (analytic) {
        w.dphi1 = std::move(d1);
        w.dphi2 = std::move(d2);
    }
    fill_diagnostics(w);
    return w;
}

MatField phi_euclidean_from_jets(const JetField& j, cd lambda, int level)
{
    if (j.grid().chart != Chart::euclidean) throw Error(ErrorKind::chart_mismatch, "Euclidean builder on non-Euclidean grid");
    const EuclidCoeffs c = euclid_coeffs(lambda);
    const int n = j.dim();
    const cd I(0.0, 1.0);
    const CMatrix E = central_unit(n);
    // P = E - i theta with jets -i theta_a
    sigma::MatJet p;
    p.v = sigma::map(j.v, [&](const CMatrix& t) -> CMatrix { return E - I * t; });
    p.d1 = sigma::scale(j.d1, -I);
    p.d2 = sigma::scale(j.d2, -I);
    if (j.has_second()) {
        p.d11 = sigma::scale(j.d11, -I);
        p.d12 = sigma::scale(j.d12, -I);
        p.d22 = sigma::scale(j.d22, -I);
    }
    p.provenance = j.provenance;
    MatField acc;
    sigma::MatJet cur = p;
    for (int s = 0; s < level; ++s) {
        const bool more = s + 1 < level;
        MatField next;
        if (more && cur.has_second()) {
            // jets of the lowered projector from the product rule
            cur = sigma::lower_jets(cur);
            next = cur.v;
        } else {
            next = sigma::lower(cur).p;
            if (more) cur = sigma::stencil_jets(next, false);
        }
        acc = acc.empty() ? next : sigma::add(acc, next);
    }
    MatField phi = sigma::map(p.v, [&](const CMatrix& pk) -> CMatrix { return identity(n) + c.active * pk; });
    if (!acc.empty()) phi = sigma::axpy(c.lower, acc, phi);
    return phi;
}

cd chi(double x1, double x2, double kappa, cd lambda)
{
    return lambda * x1 / (1.0 + lambda) - kappa * lambda * x2 / (1.0 - lambda);
}

cd dchi_dlambda(double x1, double x2, double kappa, cd lambda)
{
    return x1 / ((1.0 + lambda) * (1.0 + lambda)) - kappa * x2 / ((1.0 - lambda) * (1.0 - lambda));
}

WaveField phi_traveling(const sigma::TravelingWave& t, const SpectralParam& sp)
{
    const Grid2& g = t.grid;
    const cd lam = sp.lambda;
    const CMatrix K = t.k_matrix();
    const cd I(0.0, 1.0);
    const cd chi1 = lam / (1.0 + lam), chi2 = -t.kappa * lam / (1.0 - lam);
    WaveField w;
    w.grid = g;
    w.lambda = lam;
    w.phi = MatField(g, 2, 0);
    MatField d1(g, 2, 0), d2(g, 2, 0);
    each_node(g, 0, [&](int i1, int i2) {
        const double x1 = g.x(i1), x2 = g.y(i2), s = t.s(x1, x2);
        const CMatrix ex = matlie::expm(2.0 * chi(x1, x2, t.kappa, lam) * K);
        const CMatrix phi = ex * (2.0 * I * t.theta(s));
        const CMatrix dth = ex * (2.0 * I * t.dtheta(s));
        // K is constant, so D_a exp(2 chi K) = 2 chi_a K exp(2 chi K)
        w.phi.set(i1, i2, phi);
        d1.set(i1, i2, 2.0 * chi1 * K * phi + dth);
        d2.set(i1, i2, 2.0 * chi2 * K * phi + t.kappa * dth);
    });
    w.dphi1 = std::move(d1);
    w.dphi2 = std::move(d2);
    fill_diagnostics(w);
    return w;
}

MatField phi_traveling_from_jets(const JetField& j, cd lambda, double kappa)
{
    sigma::check_lambda(lambda);
    if (j.grid().chart != Chart::minkowski) throw Error(ErrorKind::chart_mismatch, "traveling builder needs the Minkowski chart");
    const int n = j.dim();
    const cd I(0.0, 1.0);
    const CMatrix E = central_unit(n);
    const Grid2& g = j.grid();
    const int m = std::max(j.v.margin(), j.d1.margin());
    return MatField::generate(g, n, m, [&](int i1, int i2) {
        const CMatrix t = j.v.at(i1, i2), t1 = j.d1.at(i1, i2);
        const CMatrix ex = matlie::expm(2.0 * chi(g.x(i1), g.y(i2), kappa, lambda) * commutator(t1, t));
        return CMatrix(ex * (2.0 * I * t - double(2 - n) * E));
    });
}

LspResidual lsp_residual(const WaveField& w, const MatField& u1, const MatField& u2, DerivativeSource src)
{
    sigma::require_same_grid(w.phi.grid(), u1.grid());
    sigma::require_same_grid(w.phi.grid(), u2.grid());
    MatField d1, d2;
    if (src == DerivativeSource::analytic) {
        if (!w.dphi1 || !w.dphi2) throw Error(ErrorKind::invalid_argument, "wave field carries no exact derivatives");
        d1 = *w.dphi1;
        d2 = *w.dphi2;
    } else {
        d1 = sigma::D1(w.phi);
        d2 = sigma::D2(w.phi);
    }
    auto resid = [&](const MatField& d, const MatField& u) {
        MatField up = sigma::zip(u, w.phi, [](const CMatrix& a, const CMatrix& b) -> CMatrix { return a * b; });
        return sigma::frob(sigma::sub(d, up));
    };
    LspResidual r;
    r.r1 = resid(d1, u1);
    r.r2 = resid(d2, u2);
    r.max1 = r.r1.interior_max();
    r.max2 = r.r2.interior_max();
    return r;
}

MatField dlambda_phi_euclidean(const sigma::SolutionLadder& l, cd lambda, std::optional<int> active)
{
    const int k = active.value_or(l.active);
    if (k < 0 || k >= l.length()) throw Error(ErrorKind::invalid_argument, "active ladder index out of range");
    const EuclidCoeffs c = euclid_coeffs(lambda);
    const Grid2& g = l.grid();
    int m = 0;
    for (int j = 0; j <= k; ++j) m = std::max(m, l.levels[j].v.margin());
    return MatField::generate(g, l.dim(), m, [&](int i1, int i2) {
        CMatrix p = c.dactive * l.levels[k].v.at(i1, i2);
        for (int j = 0; j < k; ++j) p += c.dlower * l.levels[j].v.at(i1, i2);
        return p;
    });
}

MatField dlambda_phi_traveling(const sigma::TravelingWave& t, cd lambda)
{
    WaveField w = phi_traveling(t, SpectralParam(lambda));
    const CMatrix K = t.k_matrix();
    const Grid2& g = t.grid;
    return MatField::generate(g, 2, 0, [&](int i1, int i2) {
        return CMatrix(2.0 * dchi_dlambda(g.x(i1), g.y(i2), t.kappa, lambda) * K * w.phi.at(i1, i2));
    });
}

MatField dlambda_fd(const std::function<MatField(cd)>& builder, cd lambda, double step)
{
    sigma::check_lambda(lambda + step);
    sigma::check_lambda(lambda - step);
    MatField a = builder(lambda + step), b = builder(lambda - step);
    return sigma::scale(sigma::sub(a, b), 1.0 / (2.0 * step));
}

} // namespace solsurf::spectral
