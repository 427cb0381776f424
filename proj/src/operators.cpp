#include "bfree/operators.hpp"

#include <cmath>
#include <numbers>

namespace bfree {

ComplexMatrix pauli(Pauli which) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    switch (which) {
        case Pauli::x:
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case Pauli::y:
            m(0, 1) = -kImag;
            m(1, 0) = kImag;
            break;
        case Pauli::z:
            m(0, 0) = 1.0;
            m(1, 1) = -1.0;
            break;
        case Pauli::plus:
            m(0, 1) = 1.0;
            break;
        case Pauli::minus:
            m(1, 0) = 1.0;
            break;
    }
    return m;
}

ComplexMatrix annihilation(FockSpace space) {
    ComplexMatrix a = ComplexMatrix::Zero(space.n_max, space.n_max);
    for (int n = 1; n < space.n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

ComplexMatrix number_operator(FockSpace space) {
    ComplexMatrix n = ComplexMatrix::Zero(space.n_max, space.n_max);
    for (int k = 0; k < space.n_max; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

ComplexMatrix weyl(WeylIndex idx) {
    const double step = 2.0 * std::numbers::pi / idx.d;
    ComplexMatrix u = ComplexMatrix::Zero(idx.d, idx.d);
    for (int k = 0; k < idx.d; ++k) {
        const int row = (idx.m + k) % idx.d;
        const int phase = (idx.n * k) % idx.d;
        u(row, k) = std::polar(1.0, step * phase);
    }
    return u;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

NumberParity parity_number(FockSpace space, bool with_qubit) {
    ComplexMatrix number = number_operator(space);
    if (with_qubit) {
        const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
        const ComplexMatrix ifock = ComplexMatrix::Identity(space.n_max, space.n_max);
        const ComplexMatrix excited = (i2 + pauli(Pauli::z)) / 2.0;  // diag(1, 0)
        number = tensor(excited, ifock) + tensor(i2, number_operator(space));
    }
    // N is diagonal with integer entries, so (-1)^N is exact.
    ComplexMatrix parity = ComplexMatrix::Zero(number.rows(), number.cols());
    for (Index k = 0; k < number.rows(); ++k) {
        const long long n = std::llround(number(k, k).real());
        parity(k, k) = (n % 2 == 0) ? 1.0 : -1.0;
    }
    return {std::move(number), std::move(parity)};
}

}  // namespace bfree
