#include <doctest.h>

#include <cmath>

#include "solsurf/error.hpp"
#include "solsurf/grid.hpp"

using namespace solsurf;
using namespace solsurf::sigma;
using matlie::cd;
using matlie::CMatrix;

namespace {

MatField scalar_field(const Grid2& g, const std::function<cd(double, double)>& fn)
{
    return MatField::generate(g, 1, 0, [&](int i1, int i2) {
        CMatrix m(1, 1);
        m(0, 0) = fn(g.x(i1), g.y(i2));
        return m;
    });
}

double max_err(const MatField& f, const std::function<cd(double, double)>& ref)
{
    const Grid2& g = f.grid();
    double e = 0.0;
    for (int i2 = f.margin(); i2 < g.n2 - f.margin(); ++i2)
        for (int i1 = f.margin(); i1 < g.n1 - f.margin(); ++i1)
            e = std::max(e, std::abs(f.at(i1, i2)(0, 0) - ref(g.x(i1), g.y(i2))));
    return e;
}

} // namespace

TEST_CASE("grid construction and refinement keep the extent")
{
    const Grid2 g = Grid2::centered(Chart::euclidean, 0.5, -1.0, 0.1, 21);
    CHECK(g.x(10) == doctest::Approx(0.5));
    CHECK(g.y(10) == doctest::Approx(-1.0));
    const Grid2 r = g.refined();
    CHECK(r.n1 == 41);
    CHECK(r.x(0) == doctest::Approx(g.x(0)));
    CHECK(r.x(r.n1 - 1) == doctest::Approx(g.x(g.n1 - 1)));
    const Grid2 b = Grid2::box(Chart::minkowski, -2.0, 2.0, 101);
    CHECK(b.h1 == doctest::Approx(0.04));
    CHECK(b.index(3, 2) == 2u * 101u + 3u);
    CHECK(same_grid(g, g));
    CHECK_FALSE(same_grid(g, r));
    CHECK_THROWS_AS(require_same_grid(g, r), Error);
}

TEST_CASE("first-derivative stencil is exact on quartics and adds margin 2")
{
    const Grid2 g = Grid2::box(Chart::minkowski, -1.0, 1.0, 21);
    auto p = [](double x, double y) { return cd(x * x * x * x - 2 * x * y + y * y * y, 0.0); };
    const MatField f = scalar_field(g, p);
    const MatField dx = d_axis(f, 0);
    CHECK(dx.margin() == 2);
    CHECK(max_err(dx, [](double x, double y) { return cd(4 * x * x * x - 2 * y, 0.0); }) < 1e-12);
    const MatField dyy = dd_axis(f, 1);
    CHECK(dyy.margin() == 4);
    CHECK(max_err(dyy, [](double, double y) { return cd(6 * y, 0.0); }) < 1e-10);
    CHECK(max_err(d_xy(f), [](double, double) { return cd(-2.0, 0.0); }) < 1e-10);
}

TEST_CASE("stencils converge at fourth order")
{
    auto err = [](int n) {
        const Grid2 g = Grid2::box(Chart::minkowski, 0.0, 1.0, n);
        const MatField f = scalar_field(g, [](double x, double y) { return cd(std::sin(3 * x) * std::cos(2 * y), 0.0); });
        return max_err(d_axis(f, 0), [](double x, double y) { return cd(3 * std::cos(3 * x) * std::cos(2 * y), 0.0); });
    };
    const double ratio = err(41) / err(81);
    CHECK(ratio > 14.0);
    CHECK(ratio < 18.0);
}

TEST_CASE("Euclidean chart derivatives are the Wirtinger operators")
{
    const Grid2 g = Grid2::centered(Chart::euclidean, 0.0, 0.0, 0.05, 41);
    // f = xi^3 + conj(xi)^2: D1 f = 3 xi^2, D2 f = 2 conj(xi), D12 f = 0, D11 f = 6 xi
    auto f = [](double x, double y) {
        const cd xi(x, y);
        return xi * xi * xi + std::conj(xi) * std::conj(xi);
    };
    const MatField m = scalar_field(g, f);
    CHECK(max_err(D1(m), [](double x, double y) { return 3.0 * cd(x, y) * cd(x, y); }) < 1e-12);
    CHECK(max_err(D2(m), [](double x, double y) { return 2.0 * cd(x, -y); }) < 1e-12);
    CHECK(max_err(D12(m), [](double, double) { return cd(0.0); }) < 1e-10);
    CHECK(max_err(D11(m), [](double x, double y) { return 6.0 * cd(x, y); }) < 1e-10);
    CHECK(max_err(D22(m), [](double, double) { return cd(2.0); }) < 1e-10);
}

TEST_CASE("nodes inside the margin are not readable and not counted")
{
    const Grid2 g = Grid2::box(Chart::minkowski, 0.0, 1.0, 11);
    const MatField f = scalar_field(g, [](double x, double) { return cd(x); });
    const MatField d = d_axis(f, 0);
    CHECK_FALSE(d.valid(1, 5));
    CHECK(d.valid(2, 5));
    CHECK(frob(d).interior_count() == 7u * 7u);
    CHECK(interior_max_norm(d) == doctest::Approx(1.0));
}

TEST_CASE("field algebra")
{
    const Grid2 g = Grid2::box(Chart::minkowski, 0.0, 1.0, 11);
    const MatField a = scalar_field(g, [](double x, double y) { return cd(x, y); });
    const MatField b = scalar_field(g, [](double x, double) { return cd(2 * x); });
    CHECK(interior_max_diff(sub(add(a, b), b), a) < 1e-15);
    CHECK(interior_max_diff(axpy(2.0, a, b), add(scale(a, 2.0), b)) == 0.0);
}
