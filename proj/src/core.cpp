#include "bfree/core.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace bfree {

namespace {

double spectral_norm(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues()[0];
}

}  // namespace

void GeneratorPair::validate() const {
    if (a.rows() != a.cols() || b.rows() != b.cols())
        throw ValidationError("GeneratorPair: a and b must be square");
    if (a.rows() != b.rows())
        throw ValidationError("GeneratorPair: a and b must have equal dimensions");
    if (a.rows() == 0) throw ValidationError("GeneratorPair: empty generator");
}

KernelChain kernel_chain(const ComplexMatrix& a, const ComplexMatrix& b,
                         const RankTolerance& tol) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw ValidationError("kernel_chain: a and b must be square with equal dimensions");
    const Index n = a.rows();

    // Step k works on the stacked matrix [b; b a; ...; b a^k] (powers of a
    // spectrally normalized), whose null space is exactly W_k. One SVD per
    // step keeps the rank threshold anchored to the scale of b instead of the
    // shrinking products b a^k.
    KernelChain result;
    ComplexMatrix stack = b;
    Subspace w = null_space(stack, tol);
    result.chain_dims.push_back(w.dim());

    const double a_norm = spectral_norm(a);
    if (a_norm > 0.0 && w.dim() > 0) {
        const ComplexMatrix a_unit = a / a_norm;
        ComplexMatrix block = b;  // b * a_unit^k
        for (Index k = 1; k <= n - 1; ++k) {
            block = block * a_unit;
            stack.conservativeResize(stack.rows() + n, Eigen::NoChange);
            stack.bottomRows(n) = block;
            const Subspace next = null_space(stack, tol);
            result.chain_dims.push_back(next.dim());
            const bool stabilized = next.dim() == w.dim();
            w = next;
            if (stabilized || w.dim() == 0) break;
        }
    }
    result.subspace = std::move(w);
    return result;
}

Subspace compute_M(const GeneratorPair& gen, const RankTolerance& tol) {
    return compute_M_chain(gen, tol).subspace;
}

KernelChain compute_M_chain(const GeneratorPair& gen, const RankTolerance& tol) {
    gen.validate();
    return kernel_chain(gen.a, gen.b, tol);
}

ShemeshResult shemesh_nontrivial(const GeneratorPair& gen, int max_power,
                                 const RankTolerance& tol) {
    gen.validate();
    const Index n = gen.ambient_dim();
    if (max_power < 1 || max_power > n - 1)
        throw ValidationError("shemesh_nontrivial: max_power must be in [1, n-1]");

    const double na = spectral_norm(gen.a);
    const double nb = spectral_norm(gen.b);
    ShemeshResult result;
    if (na == 0.0 || nb == 0.0) {
        // One operator vanishes: every eigenvector of the other is common.
        result.nontrivial = true;
        result.subspace_dim = n;
        const ComplexMatrix& nonzero = na == 0.0 ? gen.b : gen.a;
        Eigen::ComplexEigenSolver<ComplexMatrix> es(nonzero);
        if (es.info() != Eigen::Success) throw NumericalError("shemesh_nontrivial: eigensolver failed");
        ComplexVector w = es.eigenvectors().col(0);
        w /= w.norm();
        result.witness = w;
        result.eigenvalue_a = (w.adjoint() * gen.a * w)(0);
        result.eigenvalue_b = (w.adjoint() * gen.b * w)(0);
        return result;
    }

    const ComplexMatrix a_unit = gen.a / na;
    const ComplexMatrix b_unit = gen.b / nb;

    std::vector<ComplexMatrix> a_pows(max_power), b_pows(max_power);
    a_pows[0] = a_unit;
    b_pows[0] = b_unit;
    for (int k = 1; k < max_power; ++k) {
        a_pows[k] = a_pows[k - 1] * a_unit;
        b_pows[k] = b_pows[k - 1] * b_unit;
        if (!a_pows[k].allFinite() || !b_pows[k].allFinite())
            throw NumericalError(
                "shemesh_nontrivial: power overflow despite normalization; "
                "pass an explicit tolerance");
    }

    // All commutators [a^k, b^l] stacked into one tall system; a single SVD
    // decides the intersection of their kernels. The blocks are products of
    // unit-spectral-norm factors, so the rank threshold anchors to scale 1:
    // a nearly commuting pair leaves a stack of pure roundoff, whose own
    // sigma_max must not be mistaken for signal.
    ComplexMatrix stack(static_cast<Index>(max_power) * max_power * n, n);
    for (int k = 0; k < max_power; ++k)
        for (int l = 0; l < max_power; ++l)
            stack.middleRows((static_cast<Index>(k) * max_power + l) * n, n) =
                a_pows[k] * b_pows[l] - b_pows[l] * a_pows[k];
    const RankTolerance anchored =
        tol.mode == RankTolerance::Mode::automatic
            ? RankTolerance::explicit_value(tol.resolve(stack.rows(), stack.cols(), 1.0))
            : tol;
    const Subspace inter = null_space(stack, anchored);
    result.subspace_dim = inter.dim();
    result.nontrivial = inter.dim() > 0;
    if (!result.nontrivial) return result;

    // The intersection is invariant under both operators and they commute on
    // it, so a common eigenvector can be extracted: diagonalize A restricted,
    // then B restricted to one A-eigenspace.
    const ComplexMatrix& f = inter.frame;
    const ComplexMatrix a_res = f.adjoint() * gen.a * f;
    Eigen::ComplexEigenSolver<ComplexMatrix> es_a(a_res);
    if (es_a.info() != Eigen::Success) throw NumericalError("shemesh_nontrivial: eigensolver failed");

    const ComplexVector evs = es_a.eigenvalues();
    const double cluster = 1e-8 * std::max(1.0, na);
    Index pick = 0;
    ComplexMatrix cols(inter.dim(), 0);
    for (Index i = 0; i < evs.size(); ++i) {
        if (std::abs(evs[i] - evs[pick]) <= cluster) {
            cols.conservativeResize(Eigen::NoChange, cols.cols() + 1);
            cols.col(cols.cols() - 1) = es_a.eigenvectors().col(i);
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(cols);
    const ComplexMatrix eigbasis =
        qr.householderQ() * ComplexMatrix::Identity(cols.rows(), cols.cols());
    const ComplexMatrix g = f * eigbasis;  // orthonormal frame of one A-eigenspace

    const ComplexMatrix b_res = g.adjoint() * gen.b * g;
    Eigen::ComplexEigenSolver<ComplexMatrix> es_b(b_res);
    if (es_b.info() != Eigen::Success) throw NumericalError("shemesh_nontrivial: eigensolver failed");
    ComplexVector w = g * es_b.eigenvectors().col(0);
    w /= w.norm();

    const Complex ea = (w.adjoint() * gen.a * w)(0);
    const Complex eb = (w.adjoint() * gen.b * w)(0);
    result.witness = w;
    result.eigenvalue_a = ea;
    result.eigenvalue_b = eb;
    result.witness_residual_a = (gen.a * w - ea * w).norm();
    result.witness_residual_b = (gen.b * w - eb * w).norm();
    return result;
}

SectorDecomposition sector_decompose(const ComplexMatrix& h0, const ComplexMatrix& hI,
                                     double cluster_tol, const RankTolerance& tol) {
    if (h0.rows() != h0.cols() || hI.rows() != hI.cols() || h0.rows() != hI.rows())
        throw ValidationError("sector_decompose: h0 and hI must be square with equal dimensions");
    if ((h0 - h0.adjoint()).norm() > 1e-10 * std::max(1.0, h0.norm()))
        throw ValidationError("sector_decompose: h0 must be Hermitian");
    const auto [evals_i, _] = hermitian_eig(hI);  // also validates Hermiticity of hI
    const Index n = h0.rows();

    if (cluster_tol < 0.0) cluster_tol = 1e-8 * hI.norm();

    // Eigenvalues come out ascending; merge runs closer than cluster_tol.
    std::vector<double> alphas;
    std::vector<Index> multiplicity;
    Index i = 0;
    while (i < n) {
        Index j = i;
        double sum = 0.0;
        while (j < n && evals_i[j] - evals_i[i] <= cluster_tol) sum += evals_i[j++];
        alphas.push_back(sum / static_cast<double>(j - i));
        multiplicity.push_back(j - i);
        i = j;
    }

    SectorDecomposition out;
    std::vector<double> kept_alphas;
    const ComplexMatrix a = -kImag * h0;
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        const ComplexMatrix b = -kImag * (hI - alphas[k] * id);
        Subspace sector = kernel_chain(a, b, tol).subspace;
        if (sector.dim() == 0) continue;
        out.restricted_free.push_back(sector.frame.adjoint() * h0 * sector.frame);
        out.sectors.push_back(std::move(sector));
        out.cluster_multiplicity.push_back(multiplicity[k]);
        kept_alphas.push_back(alphas[k]);
    }
    out.eigenvalues = Eigen::Map<const RealVector>(kept_alphas.data(),
                                                   static_cast<Index>(kept_alphas.size()));
    return out;
}

PictureInvarianceReport picture_deviations(const GeneratorPair& gen, const Subspace& m,
                                           const RealVector& t_grid) {
    gen.validate();
    if (m.ambient_dim != gen.ambient_dim())
        throw ValidationError("picture_deviations: subspace ambient dimension mismatch");
    PictureInvarianceReport report;
    report.t_grid = t_grid;
    report.b_picture_deviation.resize(t_grid.size());
    report.a_picture_deviation.resize(t_grid.size());
    report.a_picture_literal.resize(t_grid.size());
    if (m.dim() == 0) {
        report.b_picture_deviation.setZero();
        report.a_picture_deviation.setZero();
        report.a_picture_literal.setZero();
        return report;
    }
    const ComplexMatrix& f = m.frame;
    const ComplexMatrix af = gen.a * f;
    for (Index i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        const ComplexMatrix eat = expm((t * gen.a).eval());
        const ComplexMatrix eat_inv = expm((-t * gen.a).eval());
        report.b_picture_deviation[i] = (eat_inv * (gen.b * (eat * f))).norm();
        const ComplexMatrix ebt = expm((t * gen.b).eval());
        const ComplexMatrix ebt_inv = expm((-t * gen.b).eval());
        report.a_picture_deviation[i] = (gen.a * (ebt * f) - ebt * af).norm();
        report.a_picture_literal[i] = (ebt_inv * (gen.a * (ebt * f)) - af).norm();
    }
    if (t_grid.size() > 0) {
        report.max_b_picture = report.b_picture_deviation.maxCoeff();
        report.max_a_picture = report.a_picture_deviation.maxCoeff();
        report.max_a_literal = report.a_picture_literal.maxCoeff();
    }
    return report;
}

PictureInvarianceReport verify_picture_invariance(const GeneratorPair& gen, const Subspace& m,
                                                  const RealVector& t_grid,
                                                  const RankTolerance& tol) {
    const Subspace big = compute_M(gen, tol);
    const double defect = containment_defect(m, big);
    if (defect > 1e-8 * std::max<double>(1, m.dim()))
        throw ValidationError("verify_picture_invariance: subspace is not contained in M "
                              "(projection defect " + std::to_string(defect) + ")");
    return picture_deviations(gen, m, t_grid);
}

RestrictionReport restriction_commutes(const GeneratorPair& gen, const Subspace& m) {
    gen.validate();
    if (m.ambient_dim != gen.ambient_dim())
        throw ValidationError("restriction_commutes: subspace ambient dimension mismatch");
    RestrictionReport report;
    report.commutator_norm_on_m = ((gen.a * gen.b - gen.b * gen.a) * m.frame).norm();
    report.restricted_a = m.frame.adjoint() * gen.a * m.frame;
    report.restricted_b = m.frame.adjoint() * gen.b * m.frame;
    return report;
}

GeneratorPair eigenvalue_shift(const GeneratorPair& gen, double alpha) {
    gen.validate();
    GeneratorPair shifted = gen;
    shifted.b += kImag * alpha * ComplexMatrix::Identity(gen.ambient_dim(), gen.ambient_dim());
    return shifted;
}

RealVector time_grid(double t_max, Index points) {
    if (points < 1) throw ValidationError("time_grid: need at least one point");
    if (t_max < 0.0) throw ValidationError("time_grid: t_max must be nonnegative");
    RealVector grid(points);
    if (points == 1) {
        grid[0] = t_max;
        return grid;
    }
    for (Index i = 0; i < points; ++i)
        grid[i] = t_max * static_cast<double>(i) / static_cast<double>(points - 1);
    return grid;
}

}  // namespace bfree
