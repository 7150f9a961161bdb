#pragma once

// CP^{N-1} solutions in projector form: jets, ladder, u-matrices, residuals,
// Veronese and traveling-wave generators.

#include <optional>
#include <vector>

#include "solsurf/grid.hpp"
#include "solsurf/matlie.hpp"

namespace solsurf::sigma {

using matlie::CVector;

inline constexpr double kTolProj = 1e-10;
inline constexpr double kTolContract = 1e-10;
inline constexpr double kTolLambda = 1e-6;

enum class Provenance { numeric_stencil, analytic };
const char* provenance_name(Provenance p);

// A matrix field with chart derivatives up to second order.
struct MatJet {
    MatField v, d1, d2, d11, d12, d22;
    Provenance provenance = Provenance::numeric_stencil;

    const Grid2& grid() const { return v.grid(); }
    int dim() const { return v.dim(); }
    bool has_second() const { return !d11.empty(); }
    // Region where the value and all stored jets are valid.
    int margin() const;
};

// Theta field with jets.
using JetField = MatJet;

MatJet stencil_jets(const MatField& v, bool second_order = true);

// --- projectors ---
CMatrix projector_from_vector(const CVector& v);
// max of |P - P^dag|, |P^2 - P|, |tr P - 1|
double projector_defect(const CMatrix& p);
// Nearest Hermitian rank-one projector via the dominant eigenvector.
CMatrix nearest_rank_one(const CMatrix& m);

// Holomorphic Veronese projector P0(xi) from v = (1, sqrt(C(N-1,1)) z, ..., z^{N-1}), z = xi / scale.
CVector veronese_vector(int n, cd xi, double scale = 1.0);
MatField veronese_field(int n, const Grid2& g, double scale = 1.0);
// Same field with exact jets.
MatJet veronese_jets(int n, const Grid2& g, double scale = 1.0);

struct RaiseResult {
    MatField p;
    ScalarField denominator;  // |trace of the unnormalised product|
    double reproject_correction = 0.0;
};

struct LadderOptions {
    double tol_contract = kTolContract;
    bool reproject = true;
};

// Pi_+ P = D1P P D2P / tr(.), Pi_- P = D2P P D1P / tr(.), using the jets of P.
// Throws ContractedToZero when the trace is below tol_contract * |D1P||D2P| on
// every interior node.
RaiseResult raise(const MatJet& p, const LadderOptions& opt = {});
RaiseResult lower(const MatJet& p, const LadderOptions& opt = {});
// Same step returning first-order jets of the result by the product rule from
// the second-order jets of p (no stencils, no re-projection).
MatJet raise_jets(const MatJet& p, const LadderOptions& opt = {});
MatJet lower_jets(const MatJet& p, const LadderOptions& opt = {});

struct SolutionLadder {
    std::vector<MatJet> levels; // levels[k] = Pi_+^k P0
    int active = 0;
    double orthogonality_defect = 0.0;
    double completeness_defect = 0.0;
    std::vector<double> reproject_corrections;

    int length() const { return static_cast<int>(levels.size()); }
    const Grid2& grid() const { return levels.front().grid(); }
    int dim() const { return levels.front().dim(); }
};

// Raises until contraction or until N mutually orthogonal levels exist.
// Levels above 0 carry stencil jets.
SolutionLadder build_ladder(const MatJet& p0, const LadderOptions& opt = {});

// Veronese ladder with exact jets on every level: level k projects onto the
// component of d^k v / dxi^k orthogonal to the lower derivatives.
SolutionLadder veronese_ladder(int n, const Grid2& g, double scale = 1.0);

void ladder_diagnostics(SolutionLadder& l);

// --- theta and derived quantities ---
JetField theta_of(const MatJet& p);

// Pointwise defects of theta^2 = -i(2-N)/N theta + (1-N)/N E.
ScalarField theta2_defect(const JetField& j);
// Pointwise defect of [theta_a, theta](2i theta - (2-N)E) = -i theta_a, max over a = 1, 2.
ScalarField identity_v_defect(const JetField& j);
// theta theta_a theta = (N-1)/N^2 theta_a, max over a.
ScalarField sandwich_defect(const JetField& j);

void check_lambda(cd lambda);
struct UPair {
    MatField u1, u2;
};
UPair u_pair(const JetField& j, cd lambda);
// d/dlambda of u1, u2 from the coefficients of u_pair.
UPair u_pair_dlambda(const JetField& j, cd lambda);
// D_a u^b from theta jets (product rule), needs second-order jets.
struct UJets {
    MatField d1u1, d2u1, d1u2, d2u2;
};
UJets u_jets(const JetField& j, cd lambda);

ScalarField el_residual(const JetField& j);
// |D2 u1 - D1 u2 + [u1, u2]| from jets.
ScalarField zero_curvature_residual(const JetField& j, cd lambda);

struct ActionDensity {
    ScalarField density; // Re tr(P1 P2)
    double max_imag = 0.0;
};
ActionDensity action_density(const JetField& j);

// --- traveling wave (N = 2, Minkowski chart) ---
struct TravelingWave {
    double kappa = 2.0;
    double omega = 1.0;
    Grid2 grid;
    JetField jets; // analytic

    double s(double x1, double x2) const { return x1 + kappa * x2; }
    CMatrix projector(double s) const;
    CMatrix theta(double s) const;
    CMatrix dtheta(double s) const;  // d theta / ds
    CMatrix ddtheta(double s) const; // d^2 theta / ds^2
    // [theta_1, theta], constant on solutions
    CMatrix k_matrix() const;
};

TravelingWave traveling_solution(double kappa, double omega, const Grid2& g);

} // namespace solsurf::sigma
