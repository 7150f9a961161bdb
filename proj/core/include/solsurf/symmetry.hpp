#pragma once

// Conformal characteristics, Frechet-derivative prolongation by whole-field
// deformation, and symmetry defects.

#include <functional>
#include <vector>

#include "solsurf/sigma.hpp"
#include "solsurf/spectral.hpp"

namespace solsurf::symmetry {

using matlie::cd;
using matlie::CMatrix;
using sigma::Chart;
using sigma::Grid2;
using sigma::JetField;
using sigma::MatField;
using sigma::ScalarField;

// Polynomial with complex coefficients in ascending degree.
struct Poly {
    std::vector<cd> c;

    cd operator()(cd x) const;
    Poly derivative() const;
    bool is_zero() const;
};

struct ConformalSpec {
    Poly f; // in x^1 (Euclidean: in xi)
    Poly g; // in x^2 (Euclidean: in conj xi)
    Chart chart = Chart::euclidean;

    // Minkowski: real coefficients. Euclidean: g has the conjugated coefficients of f.
    void validate() const;
    // Euclidean spec with g the conjugate mirror of f.
    static ConformalSpec euclidean(std::vector<cd> f);
    static ConformalSpec minkowski(std::vector<double> f, std::vector<double> g);

    // Node values of f, g and their derivatives f_1 = df/dx^1, g_2 = dg/dx^2.
    cd f_at(const Grid2& gr, int i1, int i2) const;
    cd g_at(const Grid2& gr, int i1, int i2) const;
    cd f1_at(const Grid2& gr, int i1, int i2) const;
    cd g2_at(const Grid2& gr, int i1, int i2) const;
    cd f11_at(const Grid2& gr, int i1, int i2) const;
};

MatField conformal_characteristic(const ConformalSpec& spec, const JetField& j);

struct FrechetPolicy {
    double eps_base = 1e-5;
    bool richardson = true;
};

using Functional = std::function<MatField(const JetField&)>;

// theta + eps Q. Jets are theta_J + eps D_J Q with D_J Q from the stencils;
// equal to re-stenciling the sum, without the eps_mach / (h eps) cancellation.
JetField deform(const JetField& j, const MatField& q, double eps);
JetField deform(const JetField& j, const sigma::MatJet& qj, double eps);

double frechet_eps(const JetField& j, const FrechetPolicy& p);

// Central difference of G along Q; one Richardson step when enabled.
MatField frechet_apply(const Functional& g, const JetField& j, const MatField& q, const FrechetPolicy& p = {});
// Plain central difference with an explicit step.
MatField frechet_central(const Functional& g, const JetField& j, const MatField& q, double eps);

// Closed forms D1(f u1) + g D2 u1 and f D1 u2 + D2(g u2).
sigma::UPair prolong_u(const ConformalSpec& spec, const JetField& j, cd lambda);

// Q_a = frechet_apply(u^a); residual D2 Q1 - D1 Q2 + [Q1, u2] + [u1, Q2].
struct ElSymmetryDefect {
    ScalarField field;
    double max = 0.0;
};
ElSymmetryDefect el_symmetry_defect(const MatField& q, const JetField& j, cd lambda, const FrechetPolicy& p = {});

// Rebuilds Phi from a deformed theta field.
using PhiBuilder = std::function<MatField(const JetField&)>;

struct LspSymmetryDefect {
    MatField d1, d2; // pr w_Q (D_a Phi - u^a Phi)
    ScalarField r1, r2;
    double max1 = 0.0, max2 = 0.0;
};
LspSymmetryDefect lsp_symmetry_defect(const MatField& q, const PhiBuilder& builder, const JetField& j, cd lambda,
                                      const FrechetPolicy& p = {});

// |D_a(pr w G) - pr w(D_a G)|, max over a. dg[a] evaluates D_{a+1} G from jets.
double commutation_defect(const MatField& q, const Functional& g, const Functional (&dg)[2], const JetField& j,
                          const FrechetPolicy& p = {});
double commutation_defect_eps(const MatField& q, const Functional& g, const Functional (&dg)[2], const JetField& j,
                              double eps);

// Tangent fields of the conformal prolongation immersion on the traveling wave:
// R1 = (-2 f_1/(1+l) + 2 f_11 chi) K, R2 = (-2 kappa g_2 - 2 kappa l f_1/(1-l)) K.
sigma::UPair traveling_R_fields(const ConformalSpec& spec, const sigma::TravelingWave& t, cd lambda);

} // namespace solsurf::symmetry
