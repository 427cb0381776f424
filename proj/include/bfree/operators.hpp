#ifndef BFREE_OPERATORS_HPP
#define BFREE_OPERATORS_HPP

#include "bfree/types.hpp"

namespace bfree {

enum class Pauli { x, y, z, plus, minus };

/// Standard 2x2 Pauli / ladder matrices, sigma_z = diag(1, -1).
ComplexMatrix pauli(Pauli which);

/// Truncated bosonic mode with Fock states |0> ... |n_max - 1>.
struct FockSpace {
    int n_max;
    explicit FockSpace(int n) : n_max(n) {
        if (n_max < 2) throw ValidationError("FockSpace: n_max must be >= 2");
    }
};

/// a|n> = sqrt(n)|n-1> on the truncated basis.
ComplexMatrix annihilation(FockSpace space);

/// a^dag a = diag(0, ..., n_max - 1), exact.
ComplexMatrix number_operator(FockSpace space);

/// Shift-and-phase unitary on a d-level system: U_{nm}|k> = w^{nk}|m+k mod d>,
/// w = e^{2 pi i / d}. Indices are reduced mod d on construction.
struct WeylIndex {
    int d;
    int n;
    int m;
    WeylIndex(int d_, int n_, int m_) : d(d_) {
        if (d < 2) throw ValidationError("WeylIndex: d must be >= 2");
        auto reduce = [this](int v) { return ((v % d) + d) % d; };
        n = reduce(n_);
        m = reduce(m_);
    }
};

ComplexMatrix weyl(WeylIndex idx);

/// Kronecker product, first factor slowest: ((i1,i2),(j1,j2)) -> a(i1,j1) b(i2,j2).
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

struct NumberParity {
    ComplexMatrix number;  // diagonal, integer entries
    ComplexMatrix parity;  // (-1)^N, computed entrywise on the diagonal
};

/// Excitation number and its parity. With a qubit: N = a^dag a + (1 + sigma_z)/2
/// on the product space, qubit index slowest. Without: N = a^dag a.
NumberParity parity_number(FockSpace space, bool with_qubit);

}  // namespace bfree

#endif
