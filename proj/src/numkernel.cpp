#include "bfree/numkernel.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace bfree {

namespace {

std::string dims_of(const ComplexMatrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

// Pade approximants for expm, orders 3/5/7/9/13, with the usual 1-norm
// switching thresholds. Coefficients are exact integers.
void pade3(const ComplexMatrix& a, ComplexMatrix& u, ComplexMatrix& v) {
    const double b[] = {120., 60., 12., 1.};
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix id = ComplexMatrix::Identity(a.rows(), a.cols());
    u = a * (b[3] * a2 + b[1] * id);
    v = b[2] * a2 + b[0] * id;
}

void pade5(const ComplexMatrix& a, ComplexMatrix& u, ComplexMatrix& v) {
    const double b[] = {30240., 15120., 3360., 420., 30., 1.};
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix id = ComplexMatrix::Identity(a.rows(), a.cols());
    u = a * (b[5] * a4 + b[3] * a2 + b[1] * id);
    v = b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade7(const ComplexMatrix& a, ComplexMatrix& u, ComplexMatrix& v) {
    const double b[] = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a4 * a2;
    const ComplexMatrix id = ComplexMatrix::Identity(a.rows(), a.cols());
    u = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade9(const ComplexMatrix& a, ComplexMatrix& u, ComplexMatrix& v) {
    const double b[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                        2162160.,     110880.,     3960.,       90.,        1.};
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a4 * a2;
    const ComplexMatrix a8 = a6 * a2;
    const ComplexMatrix id = ComplexMatrix::Identity(a.rows(), a.cols());
    u = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade13(const ComplexMatrix& a, ComplexMatrix& u, ComplexMatrix& v) {
    const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                        1187353796428800.,  129060195264000.,   10559470521600.,
                        670442572800.,      33522128640.,       1323241920.,
                        40840800.,          960960.,            16380.,
                        182.,               1.};
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a4 * a2;
    const ComplexMatrix id = ComplexMatrix::Identity(a.rows(), a.cols());
    ComplexMatrix tmp = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
    tmp += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
    u = a * tmp;
    v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
    v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

ComplexMatrix expm_pade(const ComplexMatrix& m) {
    const double l1norm = m.cwiseAbs().colwise().sum().maxCoeff();
    ComplexMatrix u, v;
    int squarings = 0;
    if (l1norm < 1.495585217958292e-2) {
        pade3(m, u, v);
    } else if (l1norm < 2.539398330063230e-1) {
        pade5(m, u, v);
    } else if (l1norm < 9.504178996162932e-1) {
        pade7(m, u, v);
    } else if (l1norm < 2.097847961257068e0) {
        pade9(m, u, v);
    } else {
        const double theta13 = 5.371920351148152;
        std::frexp(l1norm / theta13, &squarings);
        if (squarings < 0) squarings = 0;
        const ComplexMatrix scaled = m * std::ldexp(1.0, -squarings);
        pade13(scaled, u, v);
    }
    ComplexMatrix result = (v - u).partialPivLu().solve(v + u);
    if (!result.allFinite())
        throw NumericalError("expm: Pade solve produced non-finite entries (" + dims_of(m) + ")");
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

ComplexMatrix expm_spectral(const ComplexMatrix& hermitian_part, bool anti) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part);
    if (es.info() != Eigen::Success)
        throw NumericalError("expm: Hermitian eigensolver failed (" + dims_of(hermitian_part) + ")");
    const RealVector& lam = es.eigenvalues();
    ComplexVector phases(lam.size());
    for (Index i = 0; i < lam.size(); ++i)
        phases[i] = anti ? std::exp(Complex(0.0, lam[i])) : Complex(std::exp(lam[i]), 0.0);
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

Subspace null_space(const ComplexMatrix& m, const RankTolerance& tol) {
    if (m.size() == 0) throw ValidationError("null_space: matrix must be nonempty");
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success)
        throw NumericalError("null_space: SVD failed on " + dims_of(m) + " matrix");
    const RealVector& sigma = svd.singularValues();
    const double sigma_max = sigma.size() > 0 ? sigma[0] : 0.0;
    const double threshold = tol.resolve(m.rows(), m.cols(), sigma_max);
    Index rank = 0;
    while (rank < sigma.size() && sigma[rank] > threshold) ++rank;
    return {m.cols(), svd.matrixV().rightCols(m.cols() - rank)};
}

Subspace intersect(const Subspace& s1, const Subspace& s2, const RankTolerance& tol) {
    if (s1.ambient_dim != s2.ambient_dim)
        throw ValidationError("intersect: ambient dimensions differ (" +
                              std::to_string(s1.ambient_dim) + " vs " +
                              std::to_string(s2.ambient_dim) + ")");
    const Index n = s1.ambient_dim;
    if (s1.dim() == 0 || s2.dim() == 0) return Subspace::zero(n);
    if (s1.dim() == n) return s2;
    if (s2.dim() == n) return s1;
    ComplexMatrix stacked(2 * n, n);
    stacked.topRows(n) = ComplexMatrix::Identity(n, n) - s1.frame * s1.frame.adjoint();
    stacked.bottomRows(n) = ComplexMatrix::Identity(n, n) - s2.frame * s2.frame.adjoint();
    return null_space(stacked, tol);
}

ComplexMatrix expm(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw ValidationError("expm: matrix must be square, got " + dims_of(m));
    if (m.rows() == 0) return m;
    const double scale = m.norm();
    if (scale == 0.0) return ComplexMatrix::Identity(m.rows(), m.cols());
    if ((m - m.adjoint()).norm() <= 1e-12 * scale)
        return expm_spectral(((m + m.adjoint()) / 2.0).eval(), /*anti=*/false);
    if ((m + m.adjoint()).norm() <= 1e-12 * scale) {
        // m = i h with h Hermitian; exp(m) = V diag(e^{i lambda}) V^dag.
        const ComplexMatrix h = (m - m.adjoint()) / (2.0 * kImag);
        return expm_spectral(h, /*anti=*/true);
    }
    return expm_pade(m);
}

std::pair<RealVector, ComplexMatrix> hermitian_eig(const ComplexMatrix& m) {
    if (m.rows() != m.cols())
        throw ValidationError("hermitian_eig: matrix must be square, got " + dims_of(m));
    const double defect = (m - m.adjoint()).norm();
    if (defect > 1e-10 * std::max(1.0, m.norm()))
        throw ValidationError("hermitian_eig: input deviates from Hermitian by " +
                              std::to_string(defect));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(((m + m.adjoint()) / 2.0).eval());
    if (es.info() != Eigen::Success)
        throw NumericalError("hermitian_eig: eigensolver failed on " + dims_of(m) + " matrix");
    return {es.eigenvalues(), es.eigenvectors()};
}

RealVector principal_angles(const Subspace& s1, const Subspace& s2) {
    if (s1.ambient_dim != s2.ambient_dim)
        throw ValidationError("principal_angles: ambient dimensions differ");
    const Index k = std::min(s1.dim(), s2.dim());
    if (k == 0) return RealVector(0);
    const ComplexMatrix overlap = s1.frame.adjoint() * s2.frame;
    const RealVector cosines = Eigen::JacobiSVD<ComplexMatrix>(overlap).singularValues();
    // acos near sigma = 1 loses half the digits; switch to the sine form for
    // small angles (Bjorck-Golub).
    const RealVector sines =
        Eigen::JacobiSVD<ComplexMatrix>((s2.frame - s1.frame * overlap).eval()).singularValues();
    RealVector angles(k);
    for (Index i = 0; i < k; ++i) {
        const double c = std::clamp(cosines[i], 0.0, 1.0);
        if (c * c > 0.5) {
            const double s = std::clamp(sines[sines.size() - 1 - i], 0.0, 1.0);
            angles[i] = std::asin(s);
        } else {
            angles[i] = std::acos(c);
        }
    }
    return angles;  // cosines descend, so angles ascend
}

bool subspaces_equal(const Subspace& s1, const Subspace& s2, double angle_tol) {
    if (s1.dim() != s2.dim()) return false;
    if (s1.dim() == 0) return true;
    return principal_angles(s1, s2).maxCoeff() <= angle_tol;
}

double containment_defect(const Subspace& s1, const Subspace& s2) {
    if (s1.ambient_dim != s2.ambient_dim)
        throw ValidationError("containment_defect: ambient dimensions differ");
    if (s1.dim() == 0) return 0.0;
    if (s2.dim() == 0) return s1.frame.norm();
    return (s1.frame - s2.frame * (s2.frame.adjoint() * s1.frame)).norm();
}

double trace_norm(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues().sum();
}

}  // namespace bfree
