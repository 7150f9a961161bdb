#include <doctest.h>

#include <random>

#include "../support.hpp"
#include "solsurf/immersion.hpp"
#include "solsurf/spectral.hpp"
#include "solsurf/symmetry.hpp"

using namespace solsurf;
using matlie::cd;
using matlie::CMatrix;
using sigma::Chart;
using sigma::Grid2;

namespace {

constexpr int kTrials = 12;

// lambda away from the poles +1, -1 and from 0
cd random_lambda(std::mt19937& rng, bool real)
{
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (;;) {
        const cd l(u(rng), real ? 0.0 : u(rng));
        if (std::abs(l - 1.0) > 0.2 && std::abs(l + 1.0) > 0.2 && std::abs(l) > 0.1) return l;
    }
}

Grid2 random_euclid_grid(std::mt19937& rng)
{
    std::uniform_real_distribution<double> c(-0.5, 0.5);
    return Grid2::centered(Chart::euclidean, c(rng), c(rng), 0.05, 21);
}

} // namespace

TEST_CASE("su(N) exponentials are special unitary and invert by negation")
{
    std::mt19937 rng(101);
    for (int t = 0; t < kTrials; ++t) {
        const int n = 2 + t % 4;
        const CMatrix x = testsupport::random_su(rng, n, 1.5);
        const CMatrix u = matlie::expm(x);
        CHECK((u.adjoint() * u - matlie::identity(n)).norm() < 1e-12);
        CHECK((u * matlie::expm(-x) - matlie::identity(n)).norm() < 1e-12);
        CHECK(std::abs(u.determinant() - 1.0) < 1e-12);
    }
}

TEST_CASE("structure constants are antisymmetric and satisfy Jacobi")
{
    for (int n : {2, 3}) {
        const auto b = matlie::su_basis(n);
        const auto& f = b.structure_constants;
        const std::size_t d = b.elements.size();
        double anti = 0.0, jacobi = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t k = 0; k < d; ++k) {
                    anti = std::max(anti, std::abs(f[i][j][k] + f[j][i][k]));
                    // totally antisymmetric in an orthonormal basis
                    anti = std::max(anti, std::abs(f[i][j][k] + f[i][k][j]));
                    for (std::size_t l = 0; l < d; ++l) {
                        double s = 0.0;
                        for (std::size_t m = 0; m < d; ++m)
                            s += f[i][j][m] * f[m][k][l] + f[j][k][m] * f[m][i][l] + f[k][i][m] * f[m][j][l];
                        jacobi = std::max(jacobi, std::abs(s));
                    }
                }
        CHECK(anti < 1e-13);
        CHECK(jacobi < 1e-12);
    }
}

TEST_CASE("pointwise theta identities hold on random ladders")
{
    std::mt19937 rng(202);
    std::uniform_real_distribution<double> sc(0.5, 2.0);
    for (int t = 0; t < kTrials; ++t) {
        const int n = 2 + t % 3;
        const auto l = sigma::veronese_ladder(n, random_euclid_grid(rng), sc(rng));
        const int k = static_cast<int>(rng() % static_cast<unsigned>(n));
        const auto th = sigma::theta_of(l.levels[k]);
        INFO("trial ", t, " n=", n, " k=", k);
        CHECK(sigma::theta2_defect(th).interior_max() < 1e-10);
        CHECK(sigma::sandwich_defect(th).interior_max() < 1e-10);
        CHECK(sigma::el_residual(th).interior_max() < 1e-9);
    }
}

TEST_CASE("Euclidean Phi solves the linear problem for random lambda")
{
    std::mt19937 rng(303);
    for (int t = 0; t < kTrials; ++t) {
        const int n = 2 + t % 2;
        const auto l = sigma::veronese_ladder(n, random_euclid_grid(rng));
        const int k = static_cast<int>(rng() % static_cast<unsigned>(n));
        const cd lam = random_lambda(rng, t % 2 == 0);
        const auto w = spectral::phi_euclidean(l, spectral::SpectralParam(lam), k);
        const auto u = sigma::u_pair(sigma::theta_of(l.levels[k]), lam);
        INFO("trial ", t, " lambda=", lam.real(), "+", lam.imag(), "i");
        CHECK(spectral::lsp_residual(w, u.u1, u.u2, spectral::DerivativeSource::analytic).max() < 1e-11);
    }
}

TEST_CASE("traveling wave Phi: det -1 and unitarity for random real lambda")
{
    std::mt19937 rng(404);
    std::uniform_real_distribution<double> kw(0.5, 2.5);
    const Grid2 g = Grid2::box(Chart::minkowski, -1.0, 1.0, 21);
    for (int t = 0; t < kTrials; ++t) {
        const auto tw = sigma::traveling_solution(kw(rng), kw(rng), g);
        const cd lam = random_lambda(rng, true);
        const auto w = spectral::phi_traveling(tw, spectral::SpectralParam(lam));
        CHECK(w.unitarity_defect.interior_max() < 1e-11);
        for (int i : {0, 10, 20}) CHECK(std::abs(w.phi.at(i, 20 - i).determinant() + 1.0) < 1e-11);
        const auto u = sigma::u_pair(tw.jets, lam);
        CHECK(spectral::lsp_residual(w, u.u1, u.u2, spectral::DerivativeSource::analytic).max() < 1e-10);
    }
}

TEST_CASE("Frechet derivative is linear in the characteristic")
{
    std::mt19937 rng(505);
    std::normal_distribution<double> nd;
    const Grid2 g = Grid2::centered(Chart::euclidean, 0.0, 0.0, 0.05, 21);
    const auto th = sigma::theta_of(sigma::veronese_ladder(2, g).levels[0]);
    const symmetry::Functional sq = [](const sigma::JetField& j) {
        return sigma::map(j.v, [](const CMatrix& x) -> CMatrix { return x * x * x; });
    };
    for (int t = 0; t < 4; ++t) {
        const CMatrix c1 = testsupport::random_su(rng, 2), c2 = testsupport::random_su(rng, 2);
        const auto q1 = sigma::MatField::generate(g, 2, 0, [&](int i1, int) { return CMatrix(g.x(i1) * c1); });
        const auto q2 = sigma::MatField::generate(g, 2, 0, [&](int, int i2) { return CMatrix(g.y(i2) * c2); });
        const double a = nd(rng), b = nd(rng);
        const auto lhs = symmetry::frechet_apply(sq, th, sigma::axpy(a, q1, sigma::scale(q2, b)));
        const auto rhs = sigma::axpy(a, symmetry::frechet_apply(sq, th, q1),
                                     sigma::scale(symmetry::frechet_apply(sq, th, q2), b));
        CHECK(sigma::interior_max_diff(lhs, rhs) < 1e-9);
    }
}

TEST_CASE("integrated gauge tangents converge to the closed form at fourth order")
{
    // D_a S + [S, u^a] integrates to Phi^-1 S Phi; path and constant-difference
    // defects are quadrature and stencil truncation only
    std::mt19937 rng(606);
    for (int t = 0; t < 3; ++t) {
        const CMatrix e0 = testsupport::random_su(rng, 2), e1 = testsupport::random_su(rng, 2);
        const cd lam = random_lambda(rng, true);
        auto defects = [&](int n) {
            const Grid2 g = Grid2::box(Chart::minkowski, -0.5, 0.5, n);
            const auto tw = sigma::traveling_solution(2.0, 1.0, g);
            const auto s = sigma::MatField::generate(g, 2, 0, [&](int i1, int i2) {
                return CMatrix(std::cos(g.x(i1)) * e0 + g.x(i1) * g.y(i2) * e1);
            });
            const auto w = spectral::phi_traveling(tw, spectral::SpectralParam(lam));
            immersion::ImmersionInputs inp;
            inp.a = symmetry::Poly{{0.0}};
            inp.S = s;
            const auto tan = immersion::assemble_tangents(inp, tw.jets, lam);
            const auto r = immersion::integrate_surface(tan.A, tan.B, w);
            const auto closed = immersion::gauge_immersion(s, w);
            return std::pair{r.path_defect, immersion::constant_difference_check(r.F, closed.F).variation};
        };
        const auto [p1, v1] = defects(41);
        const auto [p2, v2] = defects(81);
        INFO("trial ", t, " lambda=", lam.real());
        CHECK(p1 / p2 > 12.0);
        CHECK(v1 / v2 > 12.0);
    }
}
