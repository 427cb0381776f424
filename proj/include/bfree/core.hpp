#ifndef BFREE_CORE_HPP
#define BFREE_CORE_HPP

#include <optional>
#include <vector>

#include "bfree/numkernel.hpp"
#include "bfree/types.hpp"

namespace bfree {

enum class SpaceKind { state_vector, density_operator };

/// The split generator L = A + B. For Hamiltonian-origin state-vector pairs,
/// a = -i H0 and b = -i H_I are anti-Hermitian.
struct GeneratorPair {
    ComplexMatrix a;
    ComplexMatrix b;
    SpaceKind space_kind = SpaceKind::state_vector;

    Index ambient_dim() const { return a.rows(); }
    void validate() const;
};

/// Kernel-chain output: the stabilized subspace plus the dimension at every
/// chain step (W0 = Ker B, W_{k+1} = W_k cap Ker(B A^{k+1})), so borderline
/// rank decisions can be audited.
struct KernelChain {
    Subspace subspace;
    std::vector<Index> chain_dims;
};

/// Largest A-invariant subspace annihilated by B, i.e. the subspace of states
/// whose evolution under exp(t(A+B)) coincides with exp(tA). Powers of A are
/// taken on a spectrally normalized copy; the chain stops as soon as the
/// dimension stabilizes (at most n-1 steps).
KernelChain kernel_chain(const ComplexMatrix& a, const ComplexMatrix& b,
                         const RankTolerance& tol = {});

Subspace compute_M(const GeneratorPair& gen, const RankTolerance& tol = {});
KernelChain compute_M_chain(const GeneratorPair& gen, const RankTolerance& tol = {});

/// Common-eigenvector test: A and B share an eigenvector iff the intersection
/// of Ker [A^k, B^l] over 1 <= k, l <= max_power is nonzero.
struct ShemeshResult {
    bool nontrivial = false;
    Index subspace_dim = 0;
    std::optional<ComplexVector> witness;      // common eigenvector, unit norm
    std::optional<Complex> eigenvalue_a;       // A witness = eigenvalue_a witness
    std::optional<Complex> eigenvalue_b;
    double witness_residual_a = 0.0;           // ||A w - a w||
    double witness_residual_b = 0.0;           // ||B w - b w||
};

ShemeshResult shemesh_nontrivial(const GeneratorPair& gen, int max_power,
                                 const RankTolerance& tol = {});

/// Decomposition of M into interaction-eigenvalue sectors for a Hermitian pair
/// (h0, hI): for each clustered eigenvalue alpha of hI, the sector is the
/// kernel chain of (A = -i h0, B = -i (hI - alpha)). Empty sectors are dropped.
struct SectorDecomposition {
    RealVector eigenvalues;                     // clustered alpha_k, one per kept sector
    std::vector<Subspace> sectors;              // M_{alpha_k}
    std::vector<ComplexMatrix> restricted_free; // h_k = F^dag h0 F per sector
    std::vector<Index> cluster_multiplicity;    // eigenvalue multiplicity per cluster

    Index total_dim() const {
        Index d = 0;
        for (const auto& s : sectors) d += s.dim();
        return d;
    }
};

SectorDecomposition sector_decompose(const ComplexMatrix& h0, const ComplexMatrix& hI,
                                     double cluster_tol = -1.0,
                                     const RankTolerance& tol = {});

/// Deviations of the two interaction-picture kernels on a subspace frame F.
///   b_picture(t)   = || e^{-At} B e^{At} F ||
///   a_picture(t)   = || A e^{Bt} F - e^{Bt} A F ||
///   a_literal(t)   = || (e^{-Bt} A e^{Bt} - A) F ||
/// a_picture is the literal residual premultiplied by the bounded factor
/// e^{Bt}; the literal form multiplies roundoff by || e^{-Bt} ||, which grows
/// exponentially for strongly dissipative B, so a_picture is the deviation
/// the verdicts use. The literal value is still reported for audits.
struct PictureInvarianceReport {
    RealVector t_grid;
    RealVector b_picture_deviation;
    RealVector a_picture_deviation;
    RealVector a_picture_literal;
    double max_b_picture = 0.0;
    double max_a_picture = 0.0;
    double max_a_literal = 0.0;
};

/// No containment check; usable for negative controls with m outside M.
PictureInvarianceReport picture_deviations(const GeneratorPair& gen, const Subspace& m,
                                           const RealVector& t_grid);

/// Checks m is contained in compute_M(gen) (by projection defect), then
/// evaluates the picture deviations.
PictureInvarianceReport verify_picture_invariance(const GeneratorPair& gen, const Subspace& m,
                                                  const RealVector& t_grid,
                                                  const RankTolerance& tol = {});

struct RestrictionReport {
    double commutator_norm_on_m = 0.0;  // ||(AB - BA) F||
    ComplexMatrix restricted_a;         // F^dag A F
    ComplexMatrix restricted_b;         // F^dag B F
};

RestrictionReport restriction_commutes(const GeneratorPair& gen, const Subspace& m);

/// Uniform grid of `points` values on [0, t_max]; a single point lands on t_max.
RealVector time_grid(double t_max, Index points);

/// For Hamiltonian-origin pairs (b = -i hI), absorbs the global phase
/// e^{-i alpha t} of an interaction eigenvalue alpha into the pair:
/// b -> b + i alpha I.
GeneratorPair eigenvalue_shift(const GeneratorPair& gen, double alpha);

}  // namespace bfree

#endif
