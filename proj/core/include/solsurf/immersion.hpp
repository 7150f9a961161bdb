#pragma once

// Fokas-Gel'fand tangent fields, compatibility, line integration and the
// closed-form immersions.

#include <optional>

#include "solsurf/spectral.hpp"
#include "solsurf/symmetry.hpp"

namespace solsurf::immersion {

using matlie::cd;
using matlie::CMatrix;
using sigma::Grid2;
using sigma::JetField;
using sigma::MatField;
using sigma::ScalarField;
using spectral::WaveField;
using symmetry::ConformalSpec;

struct ImmersionInputs {
    symmetry::Poly a;                 // a(lambda)
    std::optional<MatField> S;        // gauge field
    std::optional<ConformalSpec> Q;   // conformal characteristic
};

struct Tangents {
    MatField A, B;
};

// A = a u1_lambda + D1 S + [S, u1] + pr w u1, B likewise.
Tangents assemble_tangents(const ImmersionInputs& inp, const JetField& j, cd lambda);

struct Defect {
    ScalarField field;
    double max = 0.0;
};

// D2 A - D1 B + [A, u2] + [u1, B]
Defect compatibility_defect(const MatField& a, const MatField& b, const MatField& u1, const MatField& u2);

struct ImmersionResult {
    MatField F;      // su-projected
    MatField F_raw;  // before projection
    int base1 = 0, base2 = 0;
    double compat_defect = 0.0;
    double path_defect = 0.0;
    double su_correction = 0.0;
};

// D1 F = Phi^-1 A Phi, D2 F = Phi^-1 B Phi by composite Simpson, x^1 then x^2;
// path_defect compares with the x^2-then-x^1 order. basepoint defaults to the center.
ImmersionResult integrate_surface(const MatField& a, const MatField& b, const WaveField& w,
                                  std::optional<std::pair<int, int>> basepoint = {},
                                  std::optional<double> compat_defect = {});

// Cumulative integral of samples f with spacing h, zero at index b.
std::vector<cd> cumulative_simpson(const std::vector<cd>& f, double h, int b);

struct ClosedForm {
    MatField raw;
    MatField F;
    double su_correction = 0.0;
};

ClosedForm finish(MatField raw);

// a Phi^-1 d_lambda Phi
ClosedForm sym_tafel(const WaveField& w, const MatField& dphi, cd a);
// Phi^-1 S Phi
ClosedForm gauge_immersion(const MatField& s, const WaveField& w);
// Phi^-1 (f u1 + g u2) Phi
ClosedForm conformal_immersion_closed(const ConformalSpec& spec, const JetField& j, const WaveField& w, cd lambda);
// Phi^-1 pr w_Q Phi with pr w_Q Phi from the Frechet derivative of the builder.
struct ProlongImmersion {
    ClosedForm calF;
    MatField prw_phi;
};
ProlongImmersion prolong_immersion(const MatField& q, const symmetry::PhiBuilder& builder, const JetField& j,
                                   const WaveField& w, const symmetry::FrechetPolicy& p = {});

struct ConstantDifference {
    CMatrix mean;
    double variation = 0.0;
    MatField diff;
};
ConstantDifference constant_difference_check(const MatField& f, const MatField& g);

// Psi = Phi F
MatField psi_of(const MatField& f, const WaveField& w);
// |D_a Psi - u^a Psi - A_a Phi|, max over a
double psi_residual(const MatField& psi, const WaveField& w, const MatField& u1, const MatField& u2,
                    const MatField& a, const MatField& b);

// FD tangents of F against Phi^-1 A_a Phi.
struct TangentCheck {
    double max1 = 0.0, max2 = 0.0;
    double max() const { return std::max(max1, max2); }
};
TangentCheck tangent_check(const MatField& f, const WaveField& w, const MatField& a, const MatField& b);
// Phi^-1 X Phi pointwise.
MatField conjugate(const MatField& x, const WaveField& w);

// Smallest over largest eigenvalue of the 2x2 Gram matrix of the coordinate
// tangents under Re tr(X^dag Y)/2, max over the interior (rank-2 certificate
// when bounded away from 0).
struct RankReport {
    double max_ratio = 0.0;
    double min_ratio = 0.0;
};
RankReport tangent_rank(const MatField& f);

} // namespace solsurf::immersion
