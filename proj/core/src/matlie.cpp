#include "solsurf/matlie.hpp"

#include <cmath>
#include <string>

namespace solsurf::matlie {

namespace {

void check_dim(int n)
{
    if (n < 1 || n > kMaxDim)
        throw Error(ErrorKind::invalid_argument, "matrix dimension " + std::to_string(n) + " outside [1," + std::to_string(kMaxDim) + "]");
}

void same_shape(const CMatrix& a, const CMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(ErrorKind::dimension_mismatch, "matrices of different shape");
}

double norm1(const CMatrix& m)
{
    double best = 0.0;
    for (int j = 0; j < m.cols(); ++j) {
        double s = 0.0;
        for (int i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

} // namespace

CMatrix zeros(int n)
{
    check_dim(n);
    return CMatrix::Zero(n, n);
}

CMatrix identity(int n)
{
    check_dim(n);
    return CMatrix::Identity(n, n);
}

CMatrix dagger(const CMatrix& m) { return m.adjoint(); }

CMatrix commutator(const CMatrix& x, const CMatrix& y)
{
    same_shape(x, y);
    CMatrix r = x * y;
    r.noalias() -= y * x;
    return r;
}

double norm_inf(const CMatrix& m)
{
    double best = 0.0;
    for (int i = 0; i < m.size(); ++i) best = std::max(best, std::abs(m.data()[i]));
    return best;
}

double norm_fro(const CMatrix& m) { return m.norm(); }

bool all_finite(const CMatrix& m)
{
    for (int i = 0; i < m.size(); ++i)
        if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
    return true;
}

double su_defect(const CMatrix& m)
{
    return std::max(norm_inf(m + m.adjoint()), std::abs(m.trace()));
}

SuElement::SuElement(const CMatrix& m, double tol)
    : mat_(m)
{
    if (m.rows() != m.cols()) throw Error(ErrorKind::dimension_mismatch, "SuElement needs a square matrix");
    double scale = std::max(1.0, norm_inf(m));
    if (su_defect(m) > tol * scale) throw Error(ErrorKind::invalid_argument, "matrix is not anti-Hermitian traceless");
}

SuProjection project_su(const CMatrix& m)
{
    if (m.rows() != m.cols()) throw Error(ErrorKind::dimension_mismatch, "project_su needs a square matrix");
    const int n = static_cast<int>(m.rows());
    CMatrix a = 0.5 * (m - m.adjoint());
    cd t = a.trace() / double(n);
    for (int i = 0; i < n; ++i) a(i, i) -= t;
    SuProjection out;
    out.discarded = (m - a).norm();
    out.mat = std::move(a);
    return out;
}

double inner(const CMatrix& x, const CMatrix& y)
{
    same_shape(x, y);
    // tr(XY) without forming the product
    cd t = 0.0;
    for (int i = 0; i < x.rows(); ++i)
        for (int k = 0; k < x.cols(); ++k) t += x(i, k) * y(k, i);
    return -0.5 * t.real();
}

CMatrix central_unit(int n)
{
    if (n < 2) throw Error(ErrorKind::invalid_argument, "central_unit needs N >= 2");
    return identity(n) / double(n);
}

SuBasis su_basis(int n)
{
    if (n < 2) throw Error(ErrorKind::invalid_argument, "su_basis needs N >= 2");
    check_dim(n);
    const cd I(0.0, 1.0);
    SuBasis b;
    b.dim = n;
    // Generalized Gell-Mann matrices lambda_a with tr(l_a l_b) = 2 delta_ab,
    // e_a = i l_a gives -1/2 tr(e_a e_b) = delta_ab.
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            CMatrix s = zeros(n);
            s(j, k) = 1.0;
            s(k, j) = 1.0;
            b.elements.push_back(I * s);
            CMatrix a = zeros(n);
            a(j, k) = -I;
            a(k, j) = I;
            b.elements.push_back(I * a);
        }
    for (int l = 1; l < n; ++l) {
        CMatrix d = zeros(n);
        double c = std::sqrt(2.0 / (double(l) * (l + 1)));
        for (int j = 0; j < l; ++j) d(j, j) = c;
        d(l, l) = -c * l;
        b.elements.push_back(I * d);
    }
    const int m = static_cast<int>(b.elements.size());
    b.structure_constants.assign(m, std::vector<std::vector<double>>(m, std::vector<double>(m, 0.0)));
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
            CMatrix c = commutator(b.elements[k], b.elements[l]);
            for (int j = 0; j < m; ++j) b.structure_constants[k][l][j] = inner(c, b.elements[j]);
        }
    return b;
}

std::vector<double> SuBasis::decompose(const CMatrix& x) const
{
    std::vector<double> c(elements.size());
    for (std::size_t j = 0; j < elements.size(); ++j) c[j] = inner(x, elements[j]);
    return c;
}

CMatrix SuBasis::recompose(const std::vector<double>& coeffs) const
{
    if (coeffs.size() != elements.size()) throw Error(ErrorKind::dimension_mismatch, "coefficient count does not match basis");
    CMatrix x = zeros(dim);
    for (std::size_t j = 0; j < elements.size(); ++j) x += coeffs[j] * elements[j];
    return x;
}

double SuBasis::closure_residual() const
{
    double worst = 0.0;
    const std::size_t m = elements.size();
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) {
            CMatrix r = commutator(elements[k], elements[l]);
            for (std::size_t j = 0; j < m; ++j) r -= structure_constants[k][l][j] * elements[j];
            worst = std::max(worst, norm_inf(r));
        }
    return worst;
}

CMatrix expm(const CMatrix& m)
{
    if (m.rows() != m.cols()) throw Error(ErrorKind::dimension_mismatch, "expm needs a square matrix");
    if (!all_finite(m)) throw Error(ErrorKind::non_finite, "expm argument has non-finite entries");
    const int n = static_cast<int>(m.rows());
    // Scale so that |A|_1 <= 1/2; degree-18 Taylor then truncates below 1e-22.
    double nrm = norm1(m);
    int s = 0;
    if (nrm > 0.5) s = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
    CMatrix a = m / std::ldexp(1.0, s);
    constexpr int kDegree = 18;
    CMatrix r = identity(n);
    for (int k = kDegree; k >= 1; --k) {
        CMatrix t = a * r;
        r = identity(n) + t / double(k);
    }
    for (int i = 0; i < s; ++i) {
        CMatrix t = r * r;
        r = t;
    }
    return r;
}

Inverse invert(const CMatrix& m, double det_floor)
{
    if (m.rows() != m.cols()) throw Error(ErrorKind::dimension_mismatch, "invert needs a square matrix");
    Eigen::PartialPivLU<CMatrix> lu(m);
    Inverse out;
    out.det = lu.determinant();
    if (!(std::abs(out.det) > det_floor)) throw Error(ErrorKind::singular_matrix, "matrix is singular at determinant floor");
    out.inv = lu.inverse();
    out.cond1 = norm1(m) * norm1(out.inv);
    return out;
}

} // namespace solsurf::matlie
