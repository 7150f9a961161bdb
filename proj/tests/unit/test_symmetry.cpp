#include <doctest.h>

#include "solsurf/error.hpp"
#include "solsurf/spectral.hpp"
#include "solsurf/symmetry.hpp"

using namespace solsurf;
using namespace solsurf::symmetry;
using matlie::cd;
using matlie::CMatrix;
using sigma::Chart;
using sigma::Grid2;
using sigma::MatJet;

namespace {

const Grid2 kEuclidFd = Grid2::centered(Chart::euclidean, 0.0, 0.0, 0.005, 101);
const Grid2 kMinkFd = Grid2::box(Chart::minkowski, -0.25, 0.25, 101);
const FrechetPolicy kDiff{1e-3, true};

MatField square(const JetField& j)
{
    return sigma::map(j.v, [](const CMatrix& t) -> CMatrix { return t * t; });
}

} // namespace

TEST_CASE("polynomials")
{
    const Poly p{{1.0, cd(0.0, 2.0), 3.0}};
    CHECK(std::abs(p(cd(2.0, 0.0)) - cd(13.0, 4.0)) < 1e-15);
    const Poly d = p.derivative();
    REQUIRE(d.c.size() == 2);
    CHECK(std::abs(d(1.0) - cd(6.0, 2.0)) < 1e-15);
    CHECK(Poly{{0.0, 0.0}}.is_zero());
    CHECK_FALSE(p.is_zero());
}

TEST_CASE("conformal specs")
{
    const ConformalSpec e = ConformalSpec::euclidean({0.0, cd(1.0, 2.0)});
    CHECK(e.chart == Chart::euclidean);
    const Grid2 g = Grid2::centered(Chart::euclidean, 0.0, 0.0, 0.1, 11);
    // f(xi) = (1+2i) xi, g = conj(f(xi))
    const cd xi(g.x(7), g.y(2));
    CHECK(std::abs(e.f_at(g, 7, 2) - cd(1.0, 2.0) * xi) < 1e-15);
    CHECK(std::abs(e.g_at(g, 7, 2) - std::conj(cd(1.0, 2.0) * xi)) < 1e-15);
    const ConformalSpec m = ConformalSpec::minkowski({0.0, 0.0, 1.0}, {3.0});
    const Grid2 gm = Grid2::box(Chart::minkowski, -1.0, 1.0, 11);
    CHECK(std::abs(m.f11_at(gm, 8, 1) - 2.0) < 1e-15);
    CHECK(std::abs(m.g2_at(gm, 8, 1)) < 1e-15);
}

TEST_CASE("conformal characteristic is f theta_1 + g theta_2")
{
    const auto l = sigma::veronese_ladder(2, kEuclidFd);
    const JetField th = sigma::theta_of(l.levels[0]);
    const ConformalSpec spec = ConformalSpec::euclidean({0.0, 0.0, 1.0});
    const MatField q = conformal_characteristic(spec, th);
    const cd xi(kEuclidFd.x(30), kEuclidFd.y(60));
    const CMatrix ref = xi * xi * th.d1.at(30, 60) + std::conj(xi * xi) * th.d2.at(30, 60);
    CHECK((q.at(30, 60) - ref).norm() < 1e-15);
}

TEST_CASE("Frechet derivative of linear and quadratic functionals")
{
    const auto l = sigma::veronese_ladder(3, kEuclidFd);
    const JetField th = sigma::theta_of(l.levels[1]);
    const MatField q = conformal_characteristic(ConformalSpec::euclidean({0.0, 0.0, 1.0}), th);
    const MatField lin = frechet_apply([](const JetField& j) { return j.v; }, th, q);
    CHECK(sigma::interior_max_diff(lin, q) < 1e-10);
    const MatField quad = frechet_apply(square, th, q);
    const MatField ref = sigma::zip(q, th.v, [](const CMatrix& a, const CMatrix& t) -> CMatrix { return a * t + t * a; });
    CHECK(sigma::interior_max_diff(quad, ref) < 1e-10);
    CHECK(frechet_eps(th, FrechetPolicy{}) > 0.0);
}

TEST_CASE("deformed jets equal the stencil jets of the deformed field up to truncation")
{
    const auto l = sigma::veronese_ladder(2, kEuclidFd);
    const JetField th = sigma::theta_of(sigma::stencil_jets(l.levels[0].v));
    const MatField q = conformal_characteristic(ConformalSpec::euclidean({0.0, 1.0}), th);
    const double eps = 1e-3;
    const JetField d = deform(th, q, eps);
    const MatJet direct = sigma::stencil_jets(sigma::axpy(eps, q, th.v));
    CHECK(sigma::interior_max_diff(d.v, direct.v) < 1e-15);
    CHECK(sigma::interior_max_diff(d.d1, direct.d1) < 1e-10);
    CHECK(sigma::interior_max_diff(d.d12, direct.d12) < 1e-7);
}

TEST_CASE("prolongation of u1 by the conformal symmetry")
{
    const auto l = sigma::veronese_ladder(2, kEuclidFd);
    const JetField th = sigma::theta_of(l.levels[0]);
    const cd lam = 0.5;
    const ConformalSpec spec = ConformalSpec::euclidean({0.0, 0.0, 1.0});
    const MatField q = conformal_characteristic(spec, th);
    const sigma::UPair pw = prolong_u(spec, th, lam);
    const MatField fr = frechet_apply([&](const JetField& j) { return sigma::u_pair(j, lam).u1; }, th, q);
    CHECK(sigma::interior_max_diff(fr, pw.u1) < 1e-7);
}

TEST_CASE("conformal Q is a symmetry of the field equations")
{
    const auto l = sigma::veronese_ladder(2, kEuclidFd);
    const JetField th = sigma::theta_of(l.levels[0]);
    const MatField q = conformal_characteristic(ConformalSpec::euclidean({0.0, 0.0, 1.0}), th);
    CHECK(el_symmetry_defect(q, th, 0.5, kDiff).max < 1e-6);
}

TEST_CASE("LSP symmetry: Euclidean positive, Minkowski with f_11 != 0 negative")
{
    const cd lam = 0.5;
    {
        const auto l = sigma::veronese_ladder(2, kEuclidFd);
        const JetField th = sigma::theta_of(l.levels[1]);
        const MatField q = conformal_characteristic(ConformalSpec::euclidean({0.0, 0.0, 1.0}), th);
        const auto d = lsp_symmetry_defect(
            q, [&](const JetField& j) { return spectral::phi_euclidean_from_jets(j, lam, 1); }, th, lam, kDiff);
        CHECK(d.max1 < 1e-6);
        CHECK(d.max2 < 1e-6);
    }
    {
        const double kappa = 2.0;
        const auto t = sigma::traveling_solution(kappa, 1.0, kMinkFd);
        const auto w = spectral::phi_traveling(t, spectral::SpectralParam(lam));
        const ConformalSpec spec = ConformalSpec::minkowski({0.0, 0.0, 1.0}, {0.0});
        const MatField q = conformal_characteristic(spec, t.jets);
        const auto d = lsp_symmetry_defect(
            q, [&](const JetField& j) { return spectral::phi_traveling_from_jets(j, lam, kappa); }, t.jets, lam, kDiff);
        const MatField ref = MatField::generate(kMinkFd, 2, 0, [&](int i1, int i2) {
            const cd c = -spec.f11_at(kMinkFd, i1, i2) * spectral::chi(kMinkFd.x(i1), kMinkFd.y(i2), kappa, lam) *
                         (1.0 + lam);
            return CMatrix(c * w.dphi1->at(i1, i2));
        });
        CHECK(sigma::interior_max_diff(d.d1, ref) < 1e-6);
        CHECK(d.max1 > 0.1);
    }
}

TEST_CASE("LSP symmetry on the traveling wave with f_1 = g_2, f_11 = 0")
{
    const cd lam = 0.5;
    const double kappa = 2.0;
    // the D_2 defect carries kappa^4 in its stencil error; h = 0.0025
    const auto t = sigma::traveling_solution(kappa, 1.0, kMinkFd.refined());
    const MatField q = conformal_characteristic(ConformalSpec::minkowski({0.3, 0.7}, {-0.4, 0.7}), t.jets);
    const auto d = lsp_symmetry_defect(
        q, [&](const JetField& j) { return spectral::phi_traveling_from_jets(j, lam, kappa); }, t.jets, lam, kDiff);
    CHECK(d.max1 < 1e-6);
    CHECK(d.max2 < 1e-6);
}

TEST_CASE("R fields for f = x1, g = x2")
{
    const double kappa = 2.0;
    const cd lam = 0.5;
    const auto t = sigma::traveling_solution(kappa, 1.0, kMinkFd);
    const auto R = traveling_R_fields(ConformalSpec::minkowski({0.0, 1.0}, {0.0, 1.0}), t, lam);
    const CMatrix K = t.k_matrix();
    CHECK((R.u1.at(10, 70) - (-2.0 / (1.0 + lam)) * K).norm() < 1e-15);
    CHECK((R.u2.at(10, 70) - (-2.0 * kappa - 2.0 * lam * kappa / (1.0 - lam)) * K).norm() < 1e-14);
}

TEST_CASE("commutation with total derivatives")
{
    const auto l = sigma::veronese_ladder(2, kEuclidFd);
    const JetField th = sigma::theta_of(l.levels[0]);
    const MatField q = conformal_characteristic(ConformalSpec::euclidean({0.0, 0.0, 1.0}), th);
    const Functional g = [](const JetField& j) { return j.v; };
    const Functional dg[2] = {[](const JetField& j) { return j.d1; }, [](const JetField& j) { return j.d2; }};
    CHECK(commutation_defect(q, g, dg, th, kDiff) < 1e-10);
    CHECK(commutation_defect_eps(q, g, dg, th, 1e-3) < 1e-10);
    // a wrong derivative functional is detected
    const Functional wrong[2] = {[](const JetField& j) { return j.d2; }, [](const JetField& j) { return j.d1; }};
    CHECK(commutation_defect(q, g, wrong, th, kDiff) > 1e-3);
}
