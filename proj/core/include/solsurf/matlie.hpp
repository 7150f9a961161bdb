#pragma once

// Dense complex matrices and su(N) structure.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "solsurf/error.hpp"

namespace solsurf::matlie {

using cd = std::complex<double>;

// Upper bound on N. Storage is inline so per-node arithmetic never allocates.
inline constexpr int kMaxDim = 6;

using CMatrix = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
using CVector = Eigen::Matrix<cd, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

inline constexpr double kTolAlg = 1e-12;

CMatrix zeros(int n);
CMatrix identity(int n);

CMatrix dagger(const CMatrix& m);
CMatrix commutator(const CMatrix& x, const CMatrix& y);

// Max-abs entry norm.
double norm_inf(const CMatrix& m);
double norm_fro(const CMatrix& m);
bool all_finite(const CMatrix& m);

// Anti-Hermitian traceless matrix with a checked invariant.
class SuElement {
public:
    SuElement() = default;
    // Throws InvalidArgument unless m is in su(N) to tol (relative to max(1, |m|_inf)).
    explicit SuElement(const CMatrix& m, double tol = kTolAlg);
    const CMatrix& mat() const { return mat_; }
    int dim() const { return static_cast<int>(mat_.rows()); }

private:
    CMatrix mat_;
};

double su_defect(const CMatrix& m);

struct SuProjection {
    CMatrix mat;
    double discarded = 0.0; // Frobenius norm of M - mat
};

SuProjection project_su(const CMatrix& m);

struct SuBasis {
    int dim = 0;
    std::vector<CMatrix> elements;
    // c[k][l][j]: [e_k, e_l] = sum_j c[k][l][j] e_j
    std::vector<std::vector<std::vector<double>>> structure_constants;

    std::vector<double> decompose(const CMatrix& x) const;
    CMatrix recompose(const std::vector<double>& coeffs) const;
    double closure_residual() const;
};

SuBasis su_basis(int n);

double inner(const CMatrix& x, const CMatrix& y);

CMatrix central_unit(int n);

// Scaling and squaring with a Taylor kernel.
CMatrix expm(const CMatrix& m);

struct Inverse {
    CMatrix inv;
    double cond1 = 0.0; // 1-norm condition estimate
    cd det;
};

// LU with partial pivoting. Throws SingularMatrix when |det| <= det_floor.
Inverse invert(const CMatrix& m, double det_floor = 0.0);

} // namespace solsurf::matlie
