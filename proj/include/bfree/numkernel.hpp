#ifndef BFREE_NUMKERNEL_HPP
#define BFREE_NUMKERNEL_HPP

#include <utility>

#include "bfree/types.hpp"

namespace bfree {

/// Orthonormal basis of {x : ||m x|| <= tol ||x||}, from the SVD of m.
/// Singular directions with sigma <= resolved tolerance are kept.
Subspace null_space(const ComplexMatrix& m, const RankTolerance& tol = {});

/// s1 cap s2, computed as the null space of the stacked projector complements
/// [(I - F1 F1^dag); (I - F2 F2^dag)].
Subspace intersect(const Subspace& s1, const Subspace& s2, const RankTolerance& tol = {});

/// Matrix exponential. Hermitian and anti-Hermitian inputs take the spectral
/// path (keeps propagators exactly unitary); everything else goes through
/// scaling-and-squaring with a diagonal Pade approximant.
ComplexMatrix expm(const ComplexMatrix& m);

/// Eigendecomposition of a Hermitian matrix: eigenvalues ascending, V unitary,
/// m V = V diag(lambda). Rejects inputs that are not Hermitian within
/// 1e-10 * ||m||_F.
std::pair<RealVector, ComplexMatrix> hermitian_eig(const ComplexMatrix& m);

/// Canonical angles between two subspaces, ascending in [0, pi/2].
/// Returns min(dim1, dim2) angles; empty when either subspace is {0}.
RealVector principal_angles(const Subspace& s1, const Subspace& s2);

/// Equal dimension and max principal angle <= angle_tol.
bool subspaces_equal(const Subspace& s1, const Subspace& s2, double angle_tol = 1e-8);

/// ||(I - F2 F2^dag) F1||: zero iff s1 is contained in s2.
double containment_defect(const Subspace& s1, const Subspace& s2);

/// Sum of singular values.
double trace_norm(const ComplexMatrix& m);

}  // namespace bfree

#endif
