#include <doctest.h>

#include <cmath>

#include "solsurf/error.hpp"
#include "solsurf/sigma.hpp"

using namespace solsurf;
using namespace solsurf::sigma;
using matlie::cd;
using matlie::CMatrix;
using matlie::CVector;

namespace {

const Grid2 kEuclid = Grid2::centered(Chart::euclidean, 0.1, -0.2, 0.05, 41);
const Grid2 kMink = Grid2::box(Chart::minkowski, -1.0, 1.0, 41);

double max_diff(const MatField& a, const MatField& b) { return interior_max_diff(a, b); }

} // namespace

TEST_CASE("N=2 Veronese projector matches the normalized outer product")
{
    const MatField p = veronese_field(2, kEuclid);
    for (int i : {0, 7, 20, 40}) {
        const cd xi(kEuclid.x(i), kEuclid.y(40 - i));
        const double d = 1.0 + std::norm(xi);
        CMatrix ref(2, 2);
        ref << 1.0 / d, std::conj(xi) / d, xi / d, std::norm(xi) / d;
        CHECK((p.at(i, 40 - i) - ref).norm() < 1e-15);
    }
}

TEST_CASE("projector helpers")
{
    CVector v(3);
    v << 1.0, cd(0.0, 2.0), -1.0;
    const CMatrix p = projector_from_vector(v);
    CHECK(projector_defect(p) < 1e-15);
    CHECK((p * v - v).norm() < 1e-14);
    CHECK_THROWS_AS(projector_from_vector(CVector::Zero(3)), Error);
    CMatrix noisy = p;
    noisy(0, 1) += 1e-6;
    CHECK(projector_defect(nearest_rank_one(noisy)) < 1e-14);
    CHECK((nearest_rank_one(noisy) - p).norm() < 1e-5);
}

TEST_CASE("theta identities hold on Veronese ladders")
{
    for (int n : {2, 3, 4}) {
        const SolutionLadder l = veronese_ladder(n, kEuclid);
        REQUIRE(l.length() == n);
        CHECK(l.orthogonality_defect < 1e-12);
        CHECK(l.completeness_defect < 1e-12);
        for (int k = 0; k < n; ++k) {
            const JetField th = theta_of(l.levels[k]);
            INFO("n=", n, " k=", k);
            CHECK(theta2_defect(th).interior_max() < 1e-10);
            CHECK(identity_v_defect(th).interior_max() < 1e-10);
            CHECK(sandwich_defect(th).interior_max() < 1e-10);
            CHECK(el_residual(th).interior_max() < 1e-10);
            CHECK(zero_curvature_residual(th, 0.5).interior_max() < 1e-9);
            CHECK(action_density(th).max_imag < 1e-12);
        }
    }
}

TEST_CASE("N=2: theta squared is -I/4 at every node")
{
    const JetField th = theta_of(veronese_ladder(2, kEuclid).levels[0]);
    const Grid2& g = kEuclid;
    double worst = 0.0;
    for (int i2 = 0; i2 < g.n2; ++i2)
        for (int i1 = 0; i1 < g.n1; ++i1) {
            const CMatrix t = th.v.at(i1, i2);
            worst = std::max(worst, (t * t + 0.25 * matlie::identity(2)).norm());
        }
    CHECK(worst < 1e-15);
}

TEST_CASE("raising exact jets reproduces the Gram-Schmidt ladder")
{
    const SolutionLadder l = veronese_ladder(3, kEuclid);
    const RaiseResult up = raise(l.levels[0]);
    CHECK(max_diff(up.p, l.levels[1].v) < 1e-12);
    const MatJet upj = raise_jets(l.levels[0]);
    CHECK(max_diff(upj.v, l.levels[1].v) < 1e-12);
    CHECK(max_diff(upj.d1, l.levels[1].d1) < 1e-10);
    CHECK(max_diff(upj.d2, l.levels[1].d2) < 1e-10);
    const RaiseResult down = lower(l.levels[2]);
    CHECK(max_diff(down.p, l.levels[1].v) < 1e-12);
    const MatJet downj = lower_jets(l.levels[1]);
    CHECK(max_diff(downj.v, l.levels[0].v) < 1e-12);
    CHECK(max_diff(downj.d1, l.levels[0].d1) < 1e-10);
}

TEST_CASE("raising the N=2 ladder twice contracts to zero")
{
    const SolutionLadder l = veronese_ladder(2, kEuclid);
    const MatJet one = raise_jets(l.levels[0]);
    CHECK_THROWS_AS(raise(one), Error);
    try {
        raise(l.levels[1]);
        FAIL("expected ContractedToZero");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::contracted_to_zero);
    }
}

TEST_CASE("numeric ladder from stencil jets stops after N levels")
{
    const SolutionLadder l = build_ladder(stencil_jets(veronese_field(3, kEuclid)));
    CHECK(l.length() == 3);
    const SolutionLadder exact = veronese_ladder(3, kEuclid);
    // stencil jets at h = 0.05
    CHECK(max_diff(l.levels[1].v, exact.levels[1].v) < 1e-4);
}

TEST_CASE("stencil jets approach exact jets at fourth order")
{
    auto err = [](double h) {
        const Grid2 g = Grid2::centered(Chart::euclidean, 0.3, 0.1, h, 41);
        const MatJet exact = veronese_jets(2, g);
        const MatJet st = stencil_jets(exact.v);
        return std::max(max_diff(st.d1, exact.d1), max_diff(st.d2, exact.d2));
    };
    const double ratio = err(0.02) / err(0.01);
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("traveling wave: relations and the constant K")
{
    const double kappa = 2.0, omega = 1.0;
    const TravelingWave t = traveling_solution(kappa, omega, kMink);
    const JetField& j = t.jets;
    CHECK(max_diff(scale(j.d1, kappa), j.d2) < 1e-15);
    CHECK(theta2_defect(j).interior_max() < 1e-15);
    CHECK(el_residual(j).interior_max() < 1e-14);
    // hand computation: K = omega [[0, 1], [-1, 0]]
    CMatrix kref(2, 2);
    kref << 0.0, omega, -omega, 0.0;
    CHECK((t.k_matrix() - kref).norm() < 1e-14);
    for (int i : {0, 13, 40}) {
        const CMatrix k = matlie::commutator(j.d1.at(i, 40 - i), j.v.at(i, 40 - i));
        CHECK((k - kref).norm() < 1e-14);
        // D_a [theta_b, theta] = 0
        const CMatrix dk = matlie::commutator(j.d12.at(i, i), j.v.at(i, i)) +
                           matlie::commutator(j.d1.at(i, i), j.d2.at(i, i));
        CHECK(dk.norm() < 1e-12);
    }
    CHECK_THROWS_AS(traveling_solution(kappa, omega, kEuclid), Error);
}

TEST_CASE("u fields: singular lambda, coefficients and lambda-derivatives")
{
    const JetField th = theta_of(veronese_ladder(2, kEuclid).levels[0]);
    CHECK_THROWS_AS(check_lambda(1.0), Error);
    CHECK_THROWS_AS(u_pair(th, -1.0), Error);
    const cd lam = 0.3;
    const UPair u = u_pair(th, lam);
    const CMatrix ref = -2.0 / (1.0 + lam) * matlie::commutator(th.d1.at(5, 5), th.v.at(5, 5));
    CHECK((u.u1.at(5, 5) - ref).norm() < 1e-15);
    const double h = 1e-5;
    const UPair up = u_pair(th, lam + h), um = u_pair(th, lam - h);
    const UPair ul = u_pair_dlambda(th, lam);
    CHECK(max_diff(scale(sub(up.u1, um.u1), 1.0 / (2 * h)), ul.u1) < 1e-8);
    CHECK(max_diff(scale(sub(up.u2, um.u2), 1.0 / (2 * h)), ul.u2) < 1e-8);
    // jets of u against stencils: fourth-order agreement under refinement
    auto err = [&](const Grid2& g) {
        const JetField t = theta_of(veronese_ladder(2, g).levels[0]);
        const UPair uu = u_pair(t, lam);
        const UJets uj = u_jets(t, lam);
        return std::max(max_diff(D2(uu.u1), uj.d2u1), max_diff(D1(uu.u2), uj.d1u2));
    };
    const double coarse = err(kEuclid), fine = err(kEuclid.refined());
    CHECK(coarse < 1e-3);
    CHECK(coarse / fine > 12.0);
}
