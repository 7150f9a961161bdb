#include "solsurf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "solsurf/parallel.hpp"

namespace solsurf::sigma {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void for_nodes(const Grid2& g, int margin, const std::function<void(int, int)>& fn)
{
    const int lo2 = margin, hi2 = g.n2 - margin;
    if (hi2 <= lo2) return;
    parallel_for(static_cast<std::size_t>(hi2 - lo2), [&](std::size_t b, std::size_t e) {
        for (std::size_t r = b; r < e; ++r) {
            int i2 = lo2 + static_cast<int>(r);
            for (int i1 = margin; i1 < g.n1 - margin; ++i1) fn(i1, i2);
        }
    });
}

} // namespace

const char* chart_name(Chart c) { return c == Chart::euclidean ? "euclidean" : "minkowski"; }

Chart chart_from_name(const std::string& s)
{
    if (s == "euclidean" || s == "euclidean-complex") return Chart::euclidean;
    if (s == "minkowski" || s == "minkowski-lightcone") return Chart::minkowski;
    throw Error(ErrorKind::invalid_argument, "unknown chart '" + s + "'");
}

Grid2 Grid2::centered(Chart c, double cx, double cy, double h, int n)
{
    Grid2 g;
    g.chart = c;
    g.h1 = g.h2 = h;
    g.n1 = g.n2 = n;
    g.x0 = cx - 0.5 * h * (n - 1);
    g.y0 = cy - 0.5 * h * (n - 1);
    g.validate();
    return g;
}

Grid2 Grid2::box(Chart c, double lo, double hi, int n)
{
    Grid2 g;
    g.chart = c;
    g.n1 = g.n2 = n;
    g.h1 = g.h2 = (hi - lo) / (n - 1);
    g.x0 = g.y0 = lo;
    g.validate();
    return g;
}

Grid2 Grid2::refined() const
{
    Grid2 g = *this;
    g.h1 *= 0.5;
    g.h2 *= 0.5;
    g.n1 = 2 * n1 - 1;
    g.n2 = 2 * n2 - 1;
    return g;
}

void Grid2::validate() const
{
    if (!(h1 > 0.0) || !(h2 > 0.0)) throw Error(ErrorKind::invalid_argument, "grid spacing must be positive");
    if (n1 < 9 || n2 < 9) throw Error(ErrorKind::invalid_argument, "grid needs at least 9 nodes per axis");
    if (!std::isfinite(x0) || !std::isfinite(y0)) throw Error(ErrorKind::invalid_argument, "grid origin must be finite");
}

bool same_grid(const Grid2& a, const Grid2& b)
{
    return a.chart == b.chart && a.n1 == b.n1 && a.n2 == b.n2 && a.x0 == b.x0 && a.y0 == b.y0 && a.h1 == b.h1 &&
           a.h2 == b.h2;
}

void require_same_grid(const Grid2& a, const Grid2& b)
{
    if (!same_grid(a, b)) throw Error(ErrorKind::grid_mismatch, "fields live on different grids");
}

MatField::MatField(const Grid2& g, int n, int margin)
    : grid_(g), n_(n), margin_(margin), data_(g.size() * static_cast<std::size_t>(n) * n, cd(kNaN, kNaN))
{
}

MatField MatField::generate(const Grid2& g, int n, int margin, const std::function<CMatrix(int, int)>& fn)
{
    MatField f(g, n, margin);
    for_nodes(g, margin, [&](int i1, int i2) { f.set(i1, i2, fn(i1, i2)); });
    return f;
}

bool MatField::valid(int i1, int i2) const
{
    return i1 >= margin_ && i2 >= margin_ && i1 < grid_.n1 - margin_ && i2 < grid_.n2 - margin_;
}

CMatrix MatField::at(std::size_t k) const
{
    CMatrix m(n_, n_);
    const cd* p = node(k);
    std::copy(p, p + n_ * n_, m.data());
    return m;
}

void MatField::set(std::size_t k, const CMatrix& m)
{
    if (m.rows() != n_ || m.cols() != n_) throw Error(ErrorKind::dimension_mismatch, "node matrix has wrong size");
    std::copy(m.data(), m.data() + n_ * n_, node(k));
}

double ScalarField::interior_max(int min_margin) const
{
    const int m = std::max(margin, min_margin);
    double best = 0.0;
    bool any = false;
    for (int i2 = m; i2 < grid.n2 - m; ++i2)
        for (int i1 = m; i1 < grid.n1 - m; ++i1) {
            double x = v[grid.index(i1, i2)];
            if (std::isnan(x)) return x;
            best = any ? std::max(best, x) : x;
            any = true;
        }
    return best;
}

double ScalarField::interior_min(int min_margin) const
{
    const int m = std::max(margin, min_margin);
    double best = 0.0;
    bool any = false;
    for (int i2 = m; i2 < grid.n2 - m; ++i2)
        for (int i1 = m; i1 < grid.n1 - m; ++i1) {
            double x = v[grid.index(i1, i2)];
            if (std::isnan(x)) return x;
            best = any ? std::min(best, x) : x;
            any = true;
        }
    return best;
}

std::size_t ScalarField::interior_count(int min_margin) const
{
    const int m = std::max(margin, min_margin);
    if (grid.n1 - 2 * m <= 0 || grid.n2 - 2 * m <= 0) return 0;
    return static_cast<std::size_t>(grid.n1 - 2 * m) * static_cast<std::size_t>(grid.n2 - 2 * m);
}

int common_margin(std::initializer_list<const MatField*> fs)
{
    int m = 0;
    for (const MatField* f : fs) m = std::max(m, f->margin());
    return m;
}

MatField map(const MatField& a, const std::function<CMatrix(const CMatrix&)>& fn)
{
    const int n = a.dim();
    MatField out(a.grid(), n, a.margin());
    for_nodes(a.grid(), a.margin(), [&](int i1, int i2) {
        CMatrix r = fn(a.at(i1, i2));
        if (r.rows() != n) throw Error(ErrorKind::dimension_mismatch, "map changed the matrix size");
        out.set(i1, i2, r);
    });
    return out;
}

MatField zip(const MatField& a, const MatField& b, const std::function<CMatrix(const CMatrix&, const CMatrix&)>& fn)
{
    require_same_grid(a.grid(), b.grid());
    if (a.dim() != b.dim()) throw Error(ErrorKind::dimension_mismatch, "fields of different matrix size");
    const int m = std::max(a.margin(), b.margin());
    MatField out(a.grid(), a.dim(), m);
    for_nodes(a.grid(), m, [&](int i1, int i2) { out.set(i1, i2, fn(a.at(i1, i2), b.at(i1, i2))); });
    return out;
}

MatField add(const MatField& a, const MatField& b)
{
    return zip(a, b, [](const CMatrix& x, const CMatrix& y) -> CMatrix { return x + y; });
}

MatField sub(const MatField& a, const MatField& b)
{
    return zip(a, b, [](const CMatrix& x, const CMatrix& y) -> CMatrix { return x - y; });
}

MatField scale(const MatField& a, cd s)
{
    return map(a, [s](const CMatrix& x) -> CMatrix { return s * x; });
}

MatField axpy(cd s, const MatField& x, const MatField& y)
{
    return zip(x, y, [s](const CMatrix& p, const CMatrix& q) -> CMatrix { return s * p + q; });
}

ScalarField frob(const MatField& a)
{
    ScalarField s{a.grid(), a.margin(), std::vector<double>(a.grid().size(), kNaN)};
    const std::size_t nn = static_cast<std::size_t>(a.dim()) * a.dim();
    for_nodes(a.grid(), a.margin(), [&](int i1, int i2) {
        std::size_t k = a.grid().index(i1, i2);
        const cd* p = a.node(k);
        double acc = 0.0;
        for (std::size_t j = 0; j < nn; ++j) acc += std::norm(p[j]);
        s.v[k] = std::sqrt(acc);
    });
    return s;
}

double interior_max_norm(const MatField& a, int min_margin) { return frob(a).interior_max(min_margin); }

double interior_max_diff(const MatField& a, const MatField& b, int min_margin)
{
    return interior_max_norm(sub(a, b), min_margin);
}

double max_abs_entry(const MatField& a)
{
    double best = 0.0;
    const Grid2& g = a.grid();
    const int m = a.margin();
    const std::size_t nn = static_cast<std::size_t>(a.dim()) * a.dim();
    for (int i2 = m; i2 < g.n2 - m; ++i2)
        for (int i1 = m; i1 < g.n1 - m; ++i1) {
            const cd* p = a.node(g.index(i1, i2));
            for (std::size_t j = 0; j < nn; ++j) best = std::max(best, std::abs(p[j]));
        }
    return best;
}

namespace {

// Generic 5-point stencil along one axis with weights w[-2..2] / denom.
MatField stencil(const MatField& f, int axis, const double (&w)[5], double denom, int add_margin)
{
    const Grid2& g = f.grid();
    const int n = f.dim();
    const std::size_t nn = static_cast<std::size_t>(n) * n;
    const int m_in = f.margin();
    const int m_out = m_in + add_margin;
    MatField out(g, n, m_out);
    const long stride = axis == 0 ? 1 : g.n1;
    const std::vector<cd>& src = f.raw();
    std::vector<cd>& dst = out.raw();
    // Valid output needs inputs within the input's valid region along the stencil axis.
    for_nodes(g, m_out, [&](int i1, int i2) {
        const long k = static_cast<long>(g.index(i1, i2));
        cd* o = dst.data() + k * nn;
        for (std::size_t j = 0; j < nn; ++j) {
            cd acc = 0.0;
            for (int s = -2; s <= 2; ++s) {
                if (w[s + 2] == 0.0) continue;
                acc += w[s + 2] * src[static_cast<std::size_t>(k + s * stride) * nn + j];
            }
            o[j] = acc / denom;
        }
    });
    (void)m_in;
    return out;
}

} // namespace

MatField d_axis(const MatField& f, int axis)
{
    static const double w[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
    const double h = axis == 0 ? f.grid().h1 : f.grid().h2;
    return stencil(f, axis, w, 12.0 * h, 2);
}

MatField dd_axis(const MatField& f, int axis)
{
    static const double w[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
    const double h = axis == 0 ? f.grid().h1 : f.grid().h2;
    return stencil(f, axis, w, 12.0 * h * h, 4);
}

MatField d_xy(const MatField& f)
{
    return d_axis(d_axis(f, 0), 1);
}

MatField D1(const MatField& f)
{
    if (f.grid().chart == Chart::minkowski) return d_axis(f, 0);
    return zip(d_axis(f, 0), d_axis(f, 1),
               [](const CMatrix& dx, const CMatrix& dy) -> CMatrix { return 0.5 * (dx - cd(0, 1) * dy); });
}

MatField D2(const MatField& f)
{
    if (f.grid().chart == Chart::minkowski) return d_axis(f, 1);
    return zip(d_axis(f, 0), d_axis(f, 1),
               [](const CMatrix& dx, const CMatrix& dy) -> CMatrix { return 0.5 * (dx + cd(0, 1) * dy); });
}

namespace {

MatField euclid_second(const MatField& f, cd cxx, cd cyy, cd cxy)
{
    MatField xx = dd_axis(f, 0), yy = dd_axis(f, 1), xy = d_xy(f);
    MatField out(f.grid(), f.dim(), std::max({xx.margin(), yy.margin(), xy.margin()}));
    const Grid2& g = f.grid();
    for_nodes(g, out.margin(), [&](int i1, int i2) {
        out.set(i1, i2, cxx * xx.at(i1, i2) + cyy * yy.at(i1, i2) + cxy * xy.at(i1, i2));
    });
    return out;
}

} // namespace

MatField D11(const MatField& f)
{
    if (f.grid().chart == Chart::minkowski) return dd_axis(f, 0);
    return euclid_second(f, 0.25, -0.25, cd(0, -0.5));
}

MatField D12(const MatField& f)
{
    if (f.grid().chart == Chart::minkowski) return d_xy(f);
    return euclid_second(f, 0.25, 0.25, 0.0);
}

MatField D22(const MatField& f)
{
    if (f.grid().chart == Chart::minkowski) return dd_axis(f, 1);
    return euclid_second(f, 0.25, -0.25, cd(0, 0.5));
}

void axis_from_chart(Chart c, const CMatrix& d1, const CMatrix& d2, CMatrix& dx, CMatrix& dy)
{
    if (c == Chart::minkowski) {
        dx = d1;
        dy = d2;
        return;
    }
    dx = d1 + d2;
    dy = cd(0, 1) * (d1 - d2);
}

} // namespace solsurf::sigma
