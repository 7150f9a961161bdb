#include <doctest.h>

#include "solsurf/error.hpp"
#include "solsurf/spectral.hpp"

using namespace solsurf;
using namespace solsurf::spectral;
using matlie::cd;
using matlie::CMatrix;
using sigma::Chart;
using sigma::Grid2;

namespace {

const Grid2 kEuclid = Grid2::centered(Chart::euclidean, 0.2, 0.1, 0.05, 41);
const Grid2 kMink = Grid2::box(Chart::minkowski, -1.0, 1.0, 41);

MatField richardson_dlambda(const std::function<MatField(cd)>& b, cd lam)
{
    const MatField a = dlambda_fd(b, lam, 1e-4), c = dlambda_fd(b, lam, 5e-5);
    return sigma::axpy(-1.0 / 3.0, a, sigma::scale(c, 4.0 / 3.0));
}

} // namespace

TEST_CASE("holomorphic level: Phi = I - 2/(1-lambda) P0 solves the linear problem")
{
    const auto l = sigma::veronese_ladder(2, kEuclid);
    const cd lam = 0.4;
    const WaveField w = phi_euclidean(l, SpectralParam(lam), 0);
    const auto& p0 = l.levels[0];
    const CMatrix I = matlie::identity(2);
    const JetField th = sigma::theta_of(p0);
    const auto u = sigma::u_pair(th, lam);
    for (int i : {3, 20, 37}) {
        CHECK((w.phi.at(i, i) - (I - 2.0 / (1.0 - lam) * p0.v.at(i, i))).norm() < 1e-15);
        // residual assembled by hand from the exact jets
        const CMatrix r1 = -2.0 / (1.0 - lam) * p0.d1.at(i, i) - u.u1.at(i, i) * w.phi.at(i, i);
        const CMatrix r2 = -2.0 / (1.0 - lam) * p0.d2.at(i, i) - u.u2.at(i, i) * w.phi.at(i, i);
        CHECK(r1.norm() < 1e-13);
        CHECK(r2.norm() < 1e-13);
    }
    CHECK(lsp_residual(w, u.u1, u.u2, DerivativeSource::analytic).max() < 1e-13);
}

TEST_CASE("holomorphic level: the coefficient -2/(1+lambda) does not solve the linear problem")
{
    const auto l = sigma::veronese_ladder(2, kEuclid);
    const cd lam = 0.4;
    const auto& p0 = l.levels[0];
    const auto u = sigma::u_pair(sigma::theta_of(p0), lam);
    double worst = 0.0;
    for (int i : {3, 20, 37}) {
        const CMatrix phi = matlie::identity(2) - 2.0 / (1.0 + lam) * p0.v.at(i, i);
        worst = std::max(worst, (-2.0 / (1.0 + lam) * p0.d1.at(i, i) - u.u1.at(i, i) * phi).norm());
    }
    CHECK(worst > 1e-2);
}

TEST_CASE("Euclidean Phi solves the linear problem on every ladder level")
{
    for (int n : {2, 3}) {
        const auto l = sigma::veronese_ladder(n, kEuclid);
        for (int k = 0; k < n; ++k)
            for (cd lam : {cd(0.5), cd(-0.3), cd(2.0), cd(0.2, 0.7)}) {
                const WaveField w = phi_euclidean(l, SpectralParam(lam), k);
                const auto u = sigma::u_pair(sigma::theta_of(l.levels[k]), lam);
                INFO("n=", n, " k=", k, " lambda=", lam.real(), "+", lam.imag(), "i");
                CHECK(lsp_residual(w, u.u1, u.u2, DerivativeSource::analytic).max() < 1e-12);
                CHECK(lsp_residual(w, u.u1, u.u2, DerivativeSource::stencil).max() < 5e-3);
                CHECK(w.min_abs_det > 0.0);
            }
    }
}

TEST_CASE("lambda-derivative of the Euclidean Phi")
{
    const auto l = sigma::veronese_ladder(3, kEuclid);
    const cd lam = 0.5;
    for (int k = 0; k < 3; ++k) {
        const MatField exact = dlambda_phi_euclidean(l, lam, k);
        const MatField fd = richardson_dlambda([&](cd x) { return phi_euclidean(l, SpectralParam(x), k).phi; }, lam);
        CHECK(sigma::interior_max_diff(exact, fd) < 1e-9);
    }
    // k = 0: -2/(1-lambda)^2 P0
    const MatField d0 = dlambda_phi_euclidean(l, lam, 0);
    CHECK((d0.at(4, 9) + 2.0 / ((1.0 - lam) * (1.0 - lam)) * l.levels[0].v.at(4, 9)).norm() < 1e-14);
}

TEST_CASE("Phi from theta jets agrees with the ladder construction")
{
    for (int n : {2, 3}) {
        const auto l = sigma::veronese_ladder(n, kEuclid);
        const int k = n - 1;
        const MatField built = phi_euclidean_from_jets(sigma::theta_of(l.levels[k]), 0.5, k);
        const WaveField w = phi_euclidean(l, SpectralParam(0.5), k);
        CHECK(sigma::interior_max_diff(built, w.phi) < 1e-10);
    }
}

TEST_CASE("traveling wave Phi")
{
    const double kappa = 2.0;
    const auto t = sigma::traveling_solution(kappa, 1.0, kMink);
    const cd lam = 0.5;
    const WaveField w = phi_traveling(t, SpectralParam(lam));
    const auto u = sigma::u_pair(t.jets, lam);
    CHECK(lsp_residual(w, u.u1, u.u2, DerivativeSource::analytic).max() < 1e-12);
    // chi by hand at (x1, x2) = (0.3, -0.2)
    CHECK(std::abs(chi(0.3, -0.2, kappa, lam) - (0.5 * 0.3 / 1.5 + 2.0 * 0.5 * 0.2 / 0.5)) < 1e-15);
    // det(2 i theta) = -1, det exp(2 chi K) = 1
    for (int i : {0, 17, 40}) CHECK(std::abs(w.phi.at(i, 40 - i).determinant() + 1.0) < 1e-12);
    CHECK(sigma::interior_max_diff(phi_traveling_from_jets(t.jets, lam, kappa), w.phi) < 1e-13);
    const MatField d = dlambda_phi_traveling(t, lam);
    const MatField fd = richardson_dlambda([&](cd x) { return phi_traveling(t, SpectralParam(x)).phi; }, lam);
    CHECK(sigma::interior_max_diff(d, fd) < 1e-9);
    // real lambda: Phi is unitary on the traveling wave
    CHECK(w.unitarity_defect.interior_max() < 1e-12);
}

TEST_CASE("stencil LSP residual converges at fourth order")
{
    auto res = [](int n) {
        const auto t = sigma::traveling_solution(2.0, 1.0, Grid2::box(Chart::minkowski, -1.0, 1.0, n));
        const WaveField w = phi_traveling(t, SpectralParam(0.5));
        const auto u = sigma::u_pair(t.jets, 0.5);
        return lsp_residual(w, u.u1, u.u2, DerivativeSource::stencil).max();
    };
    const double ratio = res(41) / res(81);
    CHECK(ratio > 12.0);
}

TEST_CASE("singular spectral parameter and inverse field")
{
    CHECK_THROWS_AS(SpectralParam(1.0), Error);
    CHECK_THROWS_AS(SpectralParam(-1.0), Error);
    const auto l = sigma::veronese_ladder(2, kEuclid);
    const WaveField w = phi_euclidean(l, SpectralParam(0.5), 1);
    double cond = 0.0, det = 0.0;
    const MatField inv = inverse_field(w.phi, &cond, &det);
    const MatField prod = sigma::zip(w.phi, inv, [](const CMatrix& a, const CMatrix& b) -> CMatrix { return a * b; });
    const MatField id = sigma::map(prod, [](const CMatrix&) -> CMatrix { return matlie::identity(2); });
    CHECK(sigma::interior_max_diff(prod, id) < 1e-13);
    CHECK(cond >= 1.0);
    CHECK(det > 0.0);
}
