#include "solsurf/sigma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "solsurf/parallel.hpp"
#include "solsurf/taylor.hpp"

namespace solsurf::sigma {

using matlie::central_unit;
using matlie::commutator;
using matlie::identity;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ScalarField scalar_like(const Grid2& g, int margin) { return ScalarField{g, margin, std::vector<double>(g.size(), kNaN)}; }

void each_node(const Grid2& g, int margin, const std::function<void(int, int)>& fn)
{
    const int lo = margin, hi = g.n2 - margin;
    if (hi <= lo) return;
    parallel_for(static_cast<std::size_t>(hi - lo), [&](std::size_t b, std::size_t e) {
        for (std::size_t r = b; r < e; ++r)
            for (int i1 = margin; i1 < g.n1 - margin; ++i1) fn(i1, lo + static_cast<int>(r));
    });
}

double binomial(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void require_euclidean(const Grid2& g, const char* what)
{
    if (g.chart != Chart::euclidean) throw Error(ErrorKind::chart_mismatch, std::string(what) + " needs the Euclidean chart");
}

} // namespace

const char* provenance_name(Provenance p) { return p == Provenance::analytic ? "analytic" : "numeric-stencil"; }

int MatJet::margin() const
{
    int m = std::max({v.margin(), d1.margin(), d2.margin()});
    if (has_second()) m = std::max({m, d11.margin(), d12.margin(), d22.margin()});
    return m;
}

MatJet stencil_jets(const MatField& v, bool second_order)
{
    MatJet j;
    j.v = v;
    j.d1 = D1(v);
    j.d2 = D2(v);
    if (second_order) {
        j.d11 = D11(v);
        j.d12 = D12(v);
        j.d22 = D22(v);
    }
    j.provenance = Provenance::numeric_stencil;
    return j;
}

CMatrix projector_from_vector(const CVector& v)
{
    const double nrm2 = v.squaredNorm();
    if (!(nrm2 > 0.0)) throw Error(ErrorKind::invalid_argument, "projector_from_vector needs a nonzero vector");
    return (v * v.adjoint()) / nrm2;
}

double projector_defect(const CMatrix& p)
{
    double herm = matlie::norm_inf(p - p.adjoint());
    double idem = matlie::norm_inf(p * p - p);
    double rank = std::abs(p.trace() - 1.0);
    return std::max({herm, idem, rank});
}

CMatrix nearest_rank_one(const CMatrix& m)
{
    const CMatrix h = 0.5 * (m + m.adjoint());
    const int n = static_cast<int>(h.rows());
    int best = 0;
    double bn = -1.0;
    for (int j = 0; j < n; ++j) {
        double c = h.col(j).norm();
        if (c > bn) {
            bn = c;
            best = j;
        }
    }
    if (!(bn > 0.0)) throw Error(ErrorKind::contracted_to_zero, "projector candidate vanishes");
    CVector x = h.col(best) / bn;
    for (int it = 0; it < 60; ++it) {
        CVector y = h * x;
        double yn = y.norm();
        if (!(yn > 0.0)) break;
        y /= yn;
        // fix the phase so convergence is measured on the ray
        cd ph = y.dot(x);
        if (std::abs(ph) > 0.0) y *= std::conj(ph) / std::abs(ph);
        double change = (y - x).norm();
        x = y;
        if (change < 1e-15) break;
    }
    return projector_from_vector(x);
}

CVector veronese_vector(int n, cd xi, double scale)
{
    if (n < 2) throw Error(ErrorKind::invalid_argument, "Veronese field needs N >= 2");
    CVector v(n);
    cd z = xi / scale, p = 1.0;
    for (int k = 0; k < n; ++k) {
        v(k) = std::sqrt(binomial(n - 1, k)) * p;
        p *= z;
    }
    return v;
}

MatField veronese_field(int n, const Grid2& g, double scale)
{
    require_euclidean(g, "veronese_field");
    return MatField::generate(g, n, 0, [&](int i1, int i2) {
        return projector_from_vector(veronese_vector(n, cd(g.x(i1), g.y(i2)), scale));
    });
}

namespace {

using J2 = taylor::Series<2>;

struct GsNode {
    std::vector<std::vector<J2>> proj; // per level, n*n entries (row-major)
};

// Gram-Schmidt of the xi-derivatives of the Veronese curve on jets in (xi, conj xi).
GsNode gram_schmidt_jets(int n, cd xi, double scale)
{
    const J2 z = J2::variable(1, xi) * cd(1.0 / scale);
    GsNode out;
    std::vector<std::vector<J2>> ws;
    for (int m = 0; m < n; ++m) {
        // d^m/dz^m of sqrt(C(n-1,k)) z^k
        std::vector<J2> vm(n);
        for (int k = 0; k < n; ++k) {
            if (k < m) {
                vm[k] = J2::constant(0.0);
                continue;
            }
            double c = std::sqrt(binomial(n - 1, k));
            for (int i = k - m + 1; i <= k; ++i) c *= i;
            J2 p = J2::constant(c);
            for (int i = 0; i < k - m; ++i) p = p * z;
            vm[k] = p;
        }
        std::vector<J2> w = vm;
        for (const auto& wj : ws) {
            J2 num = J2::constant(0.0), den = J2::constant(0.0);
            for (int k = 0; k < n; ++k) {
                J2 cj = taylor::conj_pair(wj[k]);
                num += cj * vm[k];
                den += cj * wj[k];
            }
            J2 coef = num / den;
            for (int k = 0; k < n; ++k) w[k] -= coef * wj[k];
        }
        J2 nrm = J2::constant(0.0);
        std::vector<J2> wc(n);
        for (int k = 0; k < n; ++k) {
            wc[k] = taylor::conj_pair(w[k]);
            nrm += w[k] * wc[k];
        }
        J2 inv = taylor::reciprocal(nrm);
        std::vector<J2> p(n * n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) p[a * n + b] = w[a] * wc[b] * inv;
        out.proj.push_back(std::move(p));
        ws.push_back(std::move(w));
    }
    return out;
}

} // namespace

SolutionLadder veronese_ladder(int n, const Grid2& g, double scale)
{
    require_euclidean(g, "veronese_ladder");
    if (n < 2 || n > matlie::kMaxDim) throw Error(ErrorKind::invalid_argument, "Veronese ladder needs 2 <= N <= max dim");
    SolutionLadder l;
    l.levels.resize(n);
    for (auto& lv : l.levels) {
        lv.v = MatField(g, n, 0);
        lv.d1 = MatField(g, n, 0);
        lv.d2 = MatField(g, n, 0);
        lv.d11 = MatField(g, n, 0);
        lv.d12 = MatField(g, n, 0);
        lv.d22 = MatField(g, n, 0);
        lv.provenance = Provenance::analytic;
    }
    each_node(g, 0, [&](int i1, int i2) {
        GsNode node = gram_schmidt_jets(n, cd(g.x(i1), g.y(i2)), scale);
        const std::size_t k = g.index(i1, i2);
        for (int m = 0; m < n; ++m) {
            MatJet& lv = l.levels[m];
            cd* pv = lv.v.node(k);
            cd* p1 = lv.d1.node(k);
            cd* p2 = lv.d2.node(k);
            cd* p11 = lv.d11.node(k);
            cd* p12 = lv.d12.node(k);
            cd* p22 = lv.d22.node(k);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    const J2& s = node.proj[m][a * n + b];
                    const std::size_t idx = static_cast<std::size_t>(b) * n + a; // column-major
                    pv[idx] = s.deriv(0, 0);
                    p1[idx] = s.deriv(1, 0);
                    p2[idx] = s.deriv(0, 1);
                    p11[idx] = s.deriv(2, 0);
                    p12[idx] = s.deriv(1, 1);
                    p22[idx] = s.deriv(0, 2);
                }
        }
    });
    ladder_diagnostics(l);
    return l;
}

MatJet veronese_jets(int n, const Grid2& g, double scale)
{
    require_euclidean(g, "veronese_jets");
    SolutionLadder l = veronese_ladder(n, g, scale);
    return l.levels.front();
}

namespace {

RaiseResult ladder_step(const MatJet& p, bool up, const LadderOptions& opt)
{
    require_euclidean(p.grid(), up ? "raise" : "lower");
    const Grid2& g = p.grid();
    const int n = p.dim();
    const int m = std::max({p.v.margin(), p.d1.margin(), p.d2.margin()});
    RaiseResult r;
    r.p = MatField(g, n, m);
    r.denominator = scalar_like(g, m);
    std::vector<double> corr(g.size(), 0.0);
    std::vector<char> contracted(g.size(), 1);
    each_node(g, m, [&](int i1, int i2) {
        const std::size_t k = g.index(i1, i2);
        const CMatrix P = p.v.at(k), a = p.d1.at(k), b = p.d2.at(k);
        CMatrix M = up ? CMatrix(a * P * b) : CMatrix(b * P * a);
        const cd t = M.trace();
        const double scale = a.norm() * b.norm();
        r.denominator.v[k] = std::abs(t);
        contracted[k] = std::abs(t) <= opt.tol_contract * scale ? 1 : 0;
        CMatrix q = M / t;
        if (opt.reproject && std::isfinite(std::abs(t)) && std::abs(t) > 0.0) {
            CMatrix pr = nearest_rank_one(q);
            corr[k] = (pr - q).norm();
            q = pr;
        }
        r.p.set(k, q);
    });
    bool all = true;
    for (int i2 = m; i2 < g.n2 - m && all; ++i2)
        for (int i1 = m; i1 < g.n1 - m; ++i1)
            if (!contracted[g.index(i1, i2)]) {
                all = false;
                break;
            }
    if (all) throw Error(ErrorKind::contracted_to_zero, up ? "raise contracted to zero" : "lower contracted to zero");
    for (double c : corr) r.reproject_correction = std::max(r.reproject_correction, c);
    return r;
}

MatJet ladder_step_jets(const MatJet& p, bool up, const LadderOptions& opt)
{
    require_euclidean(p.grid(), up ? "raise" : "lower");
    if (!p.has_second()) throw Error(ErrorKind::invalid_argument, "ladder step with jets needs second-order input jets");
    const Grid2& g = p.grid();
    const int n = p.dim();
    const int m = p.margin();
    MatJet r;
    r.v = MatField(g, n, m);
    r.d1 = MatField(g, n, m);
    r.d2 = MatField(g, n, m);
    r.provenance = p.provenance;
    std::vector<char> contracted(g.size(), 1);
    each_node(g, m, [&](int i1, int i2) {
        const std::size_t k = g.index(i1, i2);
        const CMatrix P = p.v.at(k), a = p.d1.at(k), b = p.d2.at(k);
        const CMatrix a1 = p.d11.at(k), ab = p.d12.at(k), b2 = p.d22.at(k);
        // M = a P b (raise) or b P a (lower); D1, D2 of M by the product rule
        CMatrix M, M1, M2;
        if (up) {
            M = a * P * b;
            M1 = a1 * P * b + a * a * b + a * P * ab;
            M2 = ab * P * b + a * b * b + a * P * b2;
        } else {
            M = b * P * a;
            M1 = ab * P * a + b * a * a + b * P * a1;
            M2 = b2 * P * a + b * b * a + b * P * ab;
        }
        const cd t = M.trace(), t1 = M1.trace(), t2 = M2.trace();
        contracted[k] = std::abs(t) <= opt.tol_contract * a.norm() * b.norm() ? 1 : 0;
        r.v.set(k, M / t);
        r.d1.set(k, M1 / t - M * (t1 / (t * t)));
        r.d2.set(k, M2 / t - M * (t2 / (t * t)));
    });
    bool all = true;
    for (int i2 = m; i2 < g.n2 - m && all; ++i2)
        for (int i1 = m; i1 < g.n1 - m; ++i1)
            if (!contracted[g.index(i1, i2)]) {
                all = false;
                break;
            }
    if (all) throw Error(ErrorKind::contracted_to_zero, up ? "raise contracted to zero" : "lower contracted to zero");
    return r;
}

} // namespace

RaiseResult raise(const MatJet& p, const LadderOptions& opt) { return ladder_step(p, true, opt); }
RaiseResult lower(const MatJet& p, const LadderOptions& opt) { return ladder_step(p, false, opt); }
MatJet raise_jets(const MatJet& p, const LadderOptions& opt) { return ladder_step_jets(p, true, opt); }
MatJet lower_jets(const MatJet& p, const LadderOptions& opt) { return ladder_step_jets(p, false, opt); }

SolutionLadder build_ladder(const MatJet& p0, const LadderOptions& opt)
{
    require_euclidean(p0.grid(), "build_ladder");
    SolutionLadder l;
    l.levels.push_back(p0);
    const int n = p0.dim();
    while (l.length() < n) {
        RaiseResult r;
        try {
            r = raise(l.levels.back(), opt);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::contracted_to_zero) break;
            throw;
        }
        l.reproject_corrections.push_back(r.reproject_correction);
        l.levels.push_back(stencil_jets(r.p, true));
    }
    ladder_diagnostics(l);
    return l;
}

void ladder_diagnostics(SolutionLadder& l)
{
    const Grid2& g = l.grid();
    const int n = l.dim();
    int m = 0;
    for (const auto& lv : l.levels) m = std::max(m, lv.v.margin());
    double orth = 0.0, comp = 0.0;
    const bool full = l.length() == n;
    for (int i2 = m; i2 < g.n2 - m; ++i2)
        for (int i1 = m; i1 < g.n1 - m; ++i1) {
            const std::size_t k = g.index(i1, i2);
            CMatrix sum = matlie::zeros(n);
            for (int a = 0; a < l.length(); ++a) {
                CMatrix pa = l.levels[a].v.at(k);
                sum += pa;
                for (int b = a + 1; b < l.length(); ++b) orth = std::max(orth, (pa * l.levels[b].v.at(k)).norm());
            }
            if (full) comp = std::max(comp, (sum - identity(n)).norm());
        }
    l.orthogonality_defect = orth;
    l.completeness_defect = full ? comp : kNaN;
}

JetField theta_of(const MatJet& p)
{
    const int n = p.dim();
    const cd I(0.0, 1.0);
    const CMatrix E = central_unit(n);
    JetField j;
    j.v = map(p.v, [&](const CMatrix& x) -> CMatrix { return I * (x - E); });
    j.d1 = scale(p.d1, I);
    j.d2 = scale(p.d2, I);
    if (p.has_second()) {
        j.d11 = scale(p.d11, I);
        j.d12 = scale(p.d12, I);
        j.d22 = scale(p.d22, I);
    }
    j.provenance = p.provenance;
    return j;
}

namespace {

ScalarField pointwise(const JetField& j, int margin, const std::function<double(std::size_t)>& fn)
{
    const Grid2& g = j.grid();
    ScalarField s = scalar_like(g, margin);
    each_node(g, margin, [&](int i1, int i2) {
        const std::size_t k = g.index(i1, i2);
        s.v[k] = fn(k);
    });
    return s;
}

int first_order_margin(const JetField& j) { return std::max({j.v.margin(), j.d1.margin(), j.d2.margin()}); }

void require_second(const JetField& j)
{
    if (!j.has_second()) throw Error(ErrorKind::invalid_argument, "second-order jets required");
}

} // namespace

ScalarField theta2_defect(const JetField& j)
{
    const int n = j.dim();
    const cd I(0.0, 1.0);
    const CMatrix E = central_unit(n);
    const cd a = -I * double(2 - n) / double(n);
    const double b = double(1 - n) / double(n);
    return pointwise(j, j.v.margin(), [&](std::size_t k) {
        CMatrix t = j.v.at(k);
        return (t * t - a * t - b * E).norm();
    });
}

ScalarField identity_v_defect(const JetField& j)
{
    const int n = j.dim();
    const cd I(0.0, 1.0);
    const CMatrix E = central_unit(n);
    return pointwise(j, first_order_margin(j), [&](std::size_t k) {
        CMatrix t = j.v.at(k);
        CMatrix w = 2.0 * I * t - double(2 - n) * E;
        double worst = 0.0;
        for (const MatField* d : {&j.d1, &j.d2}) {
            CMatrix ta = d->at(k);
            worst = std::max(worst, (commutator(ta, t) * w + I * ta).norm());
        }
        return worst;
    });
}

ScalarField sandwich_defect(const JetField& j)
{
    const int n = j.dim();
    const double c = double(n - 1) / double(n * n);
    return pointwise(j, first_order_margin(j), [&](std::size_t k) {
        CMatrix t = j.v.at(k);
        double worst = 0.0;
        for (const MatField* d : {&j.d1, &j.d2}) {
            CMatrix ta = d->at(k);
            worst = std::max(worst, (t * ta * t - c * ta).norm());
        }
        return worst;
    });
}

void check_lambda(cd lambda)
{
    if (std::abs(1.0 + lambda) < kTolLambda || std::abs(1.0 - lambda) < kTolLambda)
        throw Error(ErrorKind::lambda_singular, "spectral parameter too close to +1 or -1");
}

UPair u_pair(const JetField& j, cd lambda)
{
    check_lambda(lambda);
    const cd c1 = -2.0 / (1.0 + lambda), c2 = -2.0 / (1.0 - lambda);
    UPair u;
    u.u1 = zip(j.d1, j.v, [&](const CMatrix& t1, const CMatrix& t) -> CMatrix { return c1 * commutator(t1, t); });
    u.u2 = zip(j.d2, j.v, [&](const CMatrix& t2, const CMatrix& t) -> CMatrix { return c2 * commutator(t2, t); });
    return u;
}

UPair u_pair_dlambda(const JetField& j, cd lambda)
{
    check_lambda(lambda);
    const cd c1 = 2.0 / ((1.0 + lambda) * (1.0 + lambda)), c2 = -2.0 / ((1.0 - lambda) * (1.0 - lambda));
    UPair u;
    u.u1 = zip(j.d1, j.v, [&](const CMatrix& t1, const CMatrix& t) -> CMatrix { return c1 * commutator(t1, t); });
    u.u2 = zip(j.d2, j.v, [&](const CMatrix& t2, const CMatrix& t) -> CMatrix { return c2 * commutator(t2, t); });
    return u;
}

UJets u_jets(const JetField& j, cd lambda)
{
    check_lambda(lambda);
    require_second(j);
    const cd c1 = -2.0 / (1.0 + lambda), c2 = -2.0 / (1.0 - lambda);
    const Grid2& g = j.grid();
    const int n = j.dim();
    const int m = j.margin();
    UJets u{MatField(g, n, m), MatField(g, n, m), MatField(g, n, m), MatField(g, n, m)};
    each_node(g, m, [&](int i1, int i2) {
        const std::size_t k = g.index(i1, i2);
        const CMatrix t = j.v.at(k), t1 = j.d1.at(k), t2 = j.d2.at(k);
        const CMatrix t11 = j.d11.at(k), t12 = j.d12.at(k), t22 = j.d22.at(k);
        u.d1u1.set(k, c1 * commutator(t11, t));
        u.d2u1.set(k, c1 * (commutator(t12, t) + commutator(t1, t2)));
        u.d1u2.set(k, c2 * (commutator(t12, t) + commutator(t2, t1)));
        u.d2u2.set(k, c2 * commutator(t22, t));
    });
    return u;
}

ScalarField el_residual(const JetField& j)
{
    require_second(j);
    return pointwise(j, j.margin(), [&](std::size_t k) { return commutator(j.d12.at(k), j.v.at(k)).norm(); });
}

ScalarField zero_curvature_residual(const JetField& j, cd lambda)
{
    UPair u = u_pair(j, lambda);
    UJets uj = u_jets(j, lambda);
    return pointwise(j, j.margin(), [&](std::size_t k) {
        return (uj.d2u1.at(k) - uj.d1u2.at(k) + commutator(u.u1.at(k), u.u2.at(k))).norm();
    });
}

ActionDensity action_density(const JetField& j)
{
    ActionDensity a;
    const cd I(0.0, 1.0);
    std::vector<double> im(j.grid().size(), 0.0);
    a.density = pointwise(j, first_order_margin(j), [&](std::size_t k) {
        // P = E - i theta, so P_a = -i theta_a
        CMatrix p1 = -I * j.d1.at(k), p2 = -I * j.d2.at(k);
        cd t = (p1 * p2).trace();
        im[k] = std::abs(t.imag());
        return t.real();
    });
    for (double x : im) a.max_imag = std::max(a.max_imag, x);
    return a;
}

CMatrix TravelingWave::projector(double s) const
{
    const double c = std::cos(2.0 * omega * s), sn = std::sin(2.0 * omega * s);
    CMatrix p(2, 2);
    p << 0.5 * (1.0 + c), 0.5 * sn, 0.5 * sn, 0.5 * (1.0 - c);
    return p;
}

CMatrix TravelingWave::theta(double s) const
{
    return cd(0.0, 1.0) * (projector(s) - central_unit(2));
}

CMatrix TravelingWave::dtheta(double s) const
{
    const double c = std::cos(2.0 * omega * s), sn = std::sin(2.0 * omega * s);
    CMatrix p(2, 2);
    p << -sn, c, c, sn;
    return cd(0.0, omega) * p;
}

CMatrix TravelingWave::ddtheta(double s) const
{
    const double c = std::cos(2.0 * omega * s), sn = std::sin(2.0 * omega * s);
    CMatrix p(2, 2);
    p << -c, -sn, -sn, c;
    return cd(0.0, 2.0 * omega * omega) * p;
}

CMatrix TravelingWave::k_matrix() const
{
    CMatrix k(2, 2);
    k << 0.0, omega, -omega, 0.0;
    return k;
}

TravelingWave traveling_solution(double kappa, double omega, const Grid2& g)
{
    if (g.chart != Chart::minkowski) throw Error(ErrorKind::chart_mismatch, "traveling_solution needs the Minkowski chart");
    TravelingWave t;
    t.kappa = kappa;
    t.omega = omega;
    t.grid = g;
    JetField& j = t.jets;
    j.v = MatField(g, 2, 0);
    j.d1 = MatField(g, 2, 0);
    j.d2 = MatField(g, 2, 0);
    j.d11 = MatField(g, 2, 0);
    j.d12 = MatField(g, 2, 0);
    j.d22 = MatField(g, 2, 0);
    j.provenance = Provenance::analytic;
    each_node(g, 0, [&](int i1, int i2) {
        const double s = t.s(g.x(i1), g.y(i2));
        const CMatrix th = t.theta(s), d = t.dtheta(s), dd = t.ddtheta(s);
        j.v.set(i1, i2, th);
        j.d1.set(i1, i2, d);
        j.d2.set(i1, i2, kappa * d);
        j.d11.set(i1, i2, dd);
        j.d12.set(i1, i2, kappa * dd);
        j.d22.set(i1, i2, kappa * kappa * dd);
    });
    return t;
}

} // namespace solsurf::sigma
