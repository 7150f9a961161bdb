#pragma once

// Wave functions solving D_a Phi = u^a Phi, their lambda-derivatives and residuals.

#include <functional>
#include <optional>

#include "solsurf/sigma.hpp"

namespace solsurf::spectral {

using matlie::cd;
using matlie::CMatrix;
using sigma::Grid2;
using sigma::JetField;
using sigma::MatField;
using sigma::ScalarField;

struct SpectralParam {
    cd lambda;
    explicit SpectralParam(cd l);
};

struct WaveField {
    Grid2 grid;
    cd lambda;
    MatField phi;
    // Exact D1 Phi, D2 Phi when the generator supplies them.
    std::optional<MatField> dphi1, dphi2;
    ScalarField unitarity_defect; // |Phi^dag Phi - I|, diagnostic only
    double min_abs_det = 0.0;
    double max_cond = 0.0;
};

// Coefficients of Phi = I + c_lower * sum_{j<k} P_j + c_active * P_k.
struct EuclidCoeffs {
    cd lower, active;
    cd dlower, dactive; // lambda-derivatives
};
EuclidCoeffs euclid_coeffs(cd lambda);

// Phi for the active ladder level (default: ladder.active).
WaveField phi_euclidean(const sigma::SolutionLadder& l, const SpectralParam& sp, std::optional<int> active = {});

// Same construction from a theta field alone: the lower projectors are
// obtained by lowering the active one `level` times with stencil jets.
MatField phi_euclidean_from_jets(const JetField& j, cd lambda, int level);

cd chi(double x1, double x2, double kappa, cd lambda);
cd dchi_dlambda(double x1, double x2, double kappa, cd lambda);

WaveField phi_traveling(const sigma::TravelingWave& t, const SpectralParam& sp);
// Phi = exp(2 chi [theta_1, theta]) (2 i theta - (2 - N) E) evaluated on arbitrary jets.
MatField phi_traveling_from_jets(const JetField& j, cd lambda, double kappa);

enum class DerivativeSource { stencil, analytic };

struct LspResidual {
    ScalarField r1, r2;
    double max1 = 0.0, max2 = 0.0;
    double max() const { return std::max(max1, max2); }
};

LspResidual lsp_residual(const WaveField& w, const MatField& u1, const MatField& u2,
                         DerivativeSource src = DerivativeSource::stencil);

MatField dlambda_phi_euclidean(const sigma::SolutionLadder& l, cd lambda, std::optional<int> active = {});
MatField dlambda_phi_traveling(const sigma::TravelingWave& t, cd lambda);

// Central difference in lambda of a closed-form builder.
MatField dlambda_fd(const std::function<MatField(cd)>& builder, cd lambda, double step = 1e-5);

// Per-node inverse; records the largest condition estimate and smallest |det|.
MatField inverse_field(const MatField& phi, double* max_cond = nullptr, double* min_abs_det = nullptr);

void fill_diagnostics(WaveField& w);

} // namespace solsurf::spectral
