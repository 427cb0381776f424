#ifndef BFREE_LIOUVILLE_HPP
#define BFREE_LIOUVILLE_HPP

#include <optional>
#include <utility>
#include <vector>

#include "bfree/core.hpp"
#include "bfree/types.hpp"

namespace bfree {

struct NoiseOp {
    ComplexMatrix op;   // V_k
    double rate = 1.0;  // gamma_k >= 0
};

/// GKSL generator data: L rho = -i[h0, rho] + sum_k rate_k (V rho V^dag - {V^dag V, rho}/2).
struct GkslSpec {
    ComplexMatrix h0;
    std::vector<NoiseOp> noise_ops;

    Index dim() const { return h0.rows(); }
    void validate() const;
};

/// Hermitian, unit-trace, positive-semidefinite (within 1e-10) matrix.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m);
    const ComplexMatrix& matrix() const { return mat_; }
    Index dim() const { return mat_.rows(); }

private:
    ComplexMatrix mat_;
};

/// Column-stacking vectorization; vec(X rho Y) = (Y^T kron X) vec(rho).
ComplexVector vectorize(const ComplexMatrix& m);
ComplexMatrix devectorize(const ComplexVector& v, Index n);

/// Matrix of rho -> X rho Y under the column-stacking convention.
ComplexMatrix superop_sandwich(const ComplexMatrix& x, const ComplexMatrix& y);

/// Vectorized split L = A + B with A the Hamiltonian commutator part
/// (anti-Hermitian) and B the dissipator (annihilates vec(I)^dag from the
/// left, i.e. preserves trace).
GeneratorPair vectorize_generator(const GkslSpec& spec);

/// Kernel chain of the vectorized pair; ambient dimension n^2.
Subspace decoherence_free_subspace(const GkslSpec& spec, const RankTolerance& tol = {});
KernelChain decoherence_free_subspace_chain(const GkslSpec& spec, const RankTolerance& tol = {});

struct DfDiagnostics {
    double raw_min_eigenvalue = 0.0;  // before clipping
    double projected_trace = 0.0;
};

/// Projection heuristic for a state inside the subspace: project I/n onto the
/// span, re-Hermitize, clip eigenvalues at -tol, renormalize. Returns nothing
/// when the projection is not a state within tolerance -- which means the
/// heuristic failed, not that no state exists.
std::optional<DensityMatrix> find_df_state(const Subspace& m, double tol,
                                           DfDiagnostics* diag = nullptr);

struct VerificationReport {
    RealVector t_grid;
    RealVector deviation;  // trace-norm distance per grid point
    std::optional<RealVector> energy1;
    std::optional<RealVector> energy2;
    bool verdict = false;
    double tolerance_used = 0.0;
    double max_deviation = 0.0;
    double max_trace_defect = 0.0;
    double max_hermiticity_defect = 0.0;
};

/// Propagates rho under the full generator and compares, in trace norm,
/// against conjugation by exp(-i h0 t). Trace and Hermiticity of the
/// propagated state are checked at every grid point.
VerificationReport verify_unitary_evolution(const GkslSpec& spec, const DensityMatrix& rho,
                                            const RealVector& t_grid, double tol = 1e-8);

/// Subsystem energy expectations <psi|h1 kron I|psi> and <psi|I kron h2|psi>
/// along a trajectory; first tensor factor slowest.
std::pair<RealVector, RealVector> energy_curves(const ComplexMatrix& h1, const ComplexMatrix& h2,
                                                const std::vector<ComplexVector>& psi_t);

enum class DephasingModel { weyl_qudit, phase_damping };

struct DephasingParams {
    // weyl_qudit: d, gamma (indices 1..d-1 as gamma[0..d-2]), energies E_1..E_{d-1}
    // (E_0 = 0) as energies[0..d-2]; empty energies means h0 = 0.
    int d = 0;
    std::vector<double> gamma;
    std::vector<double> energies;
    // phase_damping: n_max, omega, big_gamma.
    int n_max = 0;
    double omega = 0.0;
    double big_gamma = 0.0;
};

/// Closed-form Hadamard factor for the off-diagonal element (k, l) at time t
/// under the full generator L = L0 + L_D of the two pure-dephasing models.
/// |factor| <= 1 and factor = 1 when k = l.
Complex dephasing_factor(DephasingModel model, const DephasingParams& params, int k, int l,
                         double t);

}  // namespace bfree

#endif
