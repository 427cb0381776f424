#include "bfree/liouville.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "bfree/numkernel.hpp"
#include "bfree/operators.hpp"

namespace bfree {

void GkslSpec::validate() const {
    if (h0.rows() != h0.cols() || h0.rows() == 0)
        throw ValidationError("GkslSpec: h0 must be square and nonempty");
    if ((h0 - h0.adjoint()).norm() > 1e-10 * std::max(1.0, h0.norm()))
        throw ValidationError("GkslSpec: h0 must be Hermitian");
    for (const auto& nop : noise_ops) {
        if (nop.op.rows() != h0.rows() || nop.op.cols() != h0.cols())
            throw ValidationError("GkslSpec: noise operator dimension mismatch");
        if (!(nop.rate >= 0.0)) throw ValidationError("GkslSpec: rates must be nonnegative");
    }
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() == 0)
        throw ValidationError("DensityMatrix: matrix must be square and nonempty");
    if ((mat_ - mat_.adjoint()).norm() > 1e-10 * std::max(1.0, mat_.norm()))
        throw ValidationError("DensityMatrix: matrix must be Hermitian");
    if (std::abs(mat_.trace() - Complex(1.0)) > 1e-10)
        throw ValidationError("DensityMatrix: trace must be 1");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(((mat_ + mat_.adjoint()) / 2.0).eval());
    if (es.info() != Eigen::Success) throw NumericalError("DensityMatrix: eigensolver failed");
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw ValidationError("DensityMatrix: matrix is not positive semidefinite (min eig " +
                              std::to_string(es.eigenvalues().minCoeff()) + ")");
}

ComplexVector vectorize(const ComplexMatrix& m) {
    return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix devectorize(const ComplexVector& v, Index n) {
    if (v.size() != n * n) throw ValidationError("devectorize: size is not n^2");
    return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

ComplexMatrix superop_sandwich(const ComplexMatrix& x, const ComplexMatrix& y) {
    // vec(X rho Y) = (Y^T kron X) vec(rho), column stacking.
    return tensor(y.transpose(), x);
}

GeneratorPair vectorize_generator(const GkslSpec& spec) {
    spec.validate();
    const Index n = spec.dim();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);

    GeneratorPair pair;
    pair.space_kind = SpaceKind::density_operator;
    pair.a = -kImag * (superop_sandwich(spec.h0, id) - superop_sandwich(id, spec.h0));
    pair.b = ComplexMatrix::Zero(n * n, n * n);
    for (const auto& nop : spec.noise_ops) {
        const ComplexMatrix vdv = nop.op.adjoint() * nop.op;
        pair.b += nop.rate * (superop_sandwich(nop.op, nop.op.adjoint()) -
                              0.5 * superop_sandwich(vdv, id) -
                              0.5 * superop_sandwich(id, vdv));
    }
    return pair;
}

Subspace decoherence_free_subspace(const GkslSpec& spec, const RankTolerance& tol) {
    return decoherence_free_subspace_chain(spec, tol).subspace;
}

KernelChain decoherence_free_subspace_chain(const GkslSpec& spec, const RankTolerance& tol) {
    return compute_M_chain(vectorize_generator(spec), tol);
}

std::optional<DensityMatrix> find_df_state(const Subspace& m, double tol, DfDiagnostics* diag) {
    const double n_real = std::sqrt(static_cast<double>(m.ambient_dim));
    const Index n = static_cast<Index>(std::llround(n_real));
    if (n * n != m.ambient_dim)
        throw ValidationError("find_df_state: ambient dimension is not a perfect square");
    if (m.dim() == 0) return std::nullopt;

    // The span is closed under the adjoint (the generators preserve
    // Hermiticity), so projecting the maximally mixed state and re-Hermitizing
    // stays inside it.
    const ComplexVector mixed = vectorize(ComplexMatrix::Identity(n, n) / static_cast<double>(n));
    const ComplexVector projected = m.frame * (m.frame.adjoint() * mixed);
    ComplexMatrix candidate = devectorize(projected, n);
    candidate = ((candidate + candidate.adjoint()) / 2.0).eval();

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(candidate);
    if (es.info() != Eigen::Success) throw NumericalError("find_df_state: eigensolver failed");
    const double min_eig = es.eigenvalues().minCoeff();
    const double tr = candidate.trace().real();
    if (diag) {
        diag->raw_min_eigenvalue = min_eig;
        diag->projected_trace = tr;
    }
    if (min_eig < -tol || tr <= tol) return std::nullopt;

    RealVector clipped = es.eigenvalues().cwiseMax(0.0);
    ComplexMatrix state = es.eigenvectors() * clipped.asDiagonal().toDenseMatrix().cast<Complex>() *
                          es.eigenvectors().adjoint();
    state /= state.trace().real();
    state = ((state + state.adjoint()) / 2.0).eval();
    return DensityMatrix(state);
}

VerificationReport verify_unitary_evolution(const GkslSpec& spec, const DensityMatrix& rho,
                                            const RealVector& t_grid, double tol) {
    spec.validate();
    if (rho.dim() != spec.dim())
        throw ValidationError("verify_unitary_evolution: state dimension mismatch");
    const GeneratorPair pair = vectorize_generator(spec);
    const ComplexMatrix full = pair.a + pair.b;
    const ComplexVector v0 = vectorize(rho.matrix());

    VerificationReport report;
    report.t_grid = t_grid;
    report.deviation.resize(t_grid.size());
    report.tolerance_used = tol;

    for (Index i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        const ComplexMatrix propagated = devectorize(expm((t * full).eval()) * v0, spec.dim());
        const ComplexMatrix u = expm((-kImag * t * spec.h0).eval());
        const ComplexMatrix free_path = u * rho.matrix() * u.adjoint();
        report.deviation[i] = trace_norm(propagated - free_path);
        report.max_trace_defect = std::max(report.max_trace_defect,
                                           std::abs(propagated.trace() - Complex(1.0)));
        report.max_hermiticity_defect =
            std::max(report.max_hermiticity_defect, (propagated - propagated.adjoint()).norm());
    }
    if (report.max_trace_defect > 1e-6 || report.max_hermiticity_defect > 1e-6)
        throw NumericalError("verify_unitary_evolution: propagation lost trace or Hermiticity");
    report.max_deviation = t_grid.size() > 0 ? report.deviation.maxCoeff() : 0.0;
    report.verdict = report.max_deviation <= tol;
    return report;
}

std::pair<RealVector, RealVector> energy_curves(const ComplexMatrix& h1, const ComplexMatrix& h2,
                                                const std::vector<ComplexVector>& psi_t) {
    if (h1.rows() != h1.cols() || h2.rows() != h2.cols())
        throw ValidationError("energy_curves: subsystem Hamiltonians must be square");
    const Index d1 = h1.rows();
    const Index d2 = h2.rows();
    const ComplexMatrix lifted1 = tensor(h1, ComplexMatrix::Identity(d2, d2));
    const ComplexMatrix lifted2 = tensor(ComplexMatrix::Identity(d1, d1), h2);
    RealVector e1(static_cast<Index>(psi_t.size()));
    RealVector e2(static_cast<Index>(psi_t.size()));
    for (std::size_t i = 0; i < psi_t.size(); ++i) {
        const ComplexVector& psi = psi_t[i];
        if (psi.size() != d1 * d2)
            throw ValidationError("energy_curves: state dimension is not d1*d2");
        e1[static_cast<Index>(i)] = (psi.adjoint() * lifted1 * psi)(0).real();
        e2[static_cast<Index>(i)] = (psi.adjoint() * lifted2 * psi)(0).real();
    }
    return {std::move(e1), std::move(e2)};
}

Complex dephasing_factor(DephasingModel model, const DephasingParams& params, int k, int l,
                         double t) {
    switch (model) {
        case DephasingModel::weyl_qudit: {
            const int d = params.d;
            if (d < 2) throw ValidationError("dephasing_factor: d must be >= 2");
            if (k < 0 || k >= d || l < 0 || l >= d)
                throw ValidationError("dephasing_factor: indices out of range");
            if (static_cast<int>(params.gamma.size()) != d - 1)
                throw ValidationError("dephasing_factor: need d-1 rates");
            if (!params.energies.empty() && static_cast<int>(params.energies.size()) != d - 1)
                throw ValidationError("dephasing_factor: need d-1 energy levels");
            Complex exponent(0.0, 0.0);
            const double step = 2.0 * std::numbers::pi / d;
            for (int n = 1; n < d; ++n) {
                const int p = (((n * (k - l)) % d) + d) % d;
                exponent += params.gamma[n - 1] * (std::polar(1.0, step * p) - 1.0);
            }
            const double ek = k == 0 ? 0.0 : (params.energies.empty() ? 0.0 : params.energies[k - 1]);
            const double el = l == 0 ? 0.0 : (params.energies.empty() ? 0.0 : params.energies[l - 1]);
            exponent += Complex(0.0, -(ek - el));
            return std::exp(exponent * t);
        }
        case DephasingModel::phase_damping: {
            if (params.n_max < 2) throw ValidationError("dephasing_factor: n_max must be >= 2");
            if (k < 0 || k >= params.n_max || l < 0 || l >= params.n_max)
                throw ValidationError("dephasing_factor: indices out of range");
            const double diff = static_cast<double>(k - l);
            const Complex exponent(-0.5 * diff * diff * params.big_gamma, -params.omega * diff);
            return std::exp(exponent * t);
        }
    }
    throw ValidationError("dephasing_factor: unknown model");
}

}  // namespace bfree
