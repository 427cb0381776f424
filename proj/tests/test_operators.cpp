#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bfree/numkernel.hpp"
#include "bfree/operators.hpp"

using namespace bfree;

namespace {

ComplexMatrix random_matrix(Index rows, Index cols, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist;
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = Complex(dist(gen), dist(gen));
    return m;
}

}  // namespace

TEST_CASE("pauli matrices") {
    const ComplexMatrix sz = pauli(Pauli::z);
    CHECK(sz(0, 0) == Complex(1.0));
    CHECK(sz(1, 1) == Complex(-1.0));
    CHECK(sz(0, 1) == Complex(0.0));

    const ComplexMatrix sp = pauli(Pauli::plus);
    const ComplexMatrix sm = pauli(Pauli::minus);
    CHECK((sp * sm + sm * sp - ComplexMatrix::Identity(2, 2)).norm() < 1e-15);

    const ComplexMatrix sx = pauli(Pauli::x);
    const ComplexMatrix sy = pauli(Pauli::y);
    CHECK((sx * sy - sy * sx - 2.0 * kImag * sz).norm() < 1e-15);
    CHECK((sp - (sx + kImag * sy) / 2.0).norm() < 1e-15);
}

TEST_CASE("annihilation operator on the truncated basis") {
    const ComplexMatrix a2 = annihilation(FockSpace(2));
    CHECK(a2(0, 1) == Complex(1.0));
    CHECK(a2(1, 0) == Complex(0.0));
    CHECK(a2(0, 0) == Complex(0.0));

    const FockSpace space(6);
    const ComplexMatrix a = annihilation(space);
    const ComplexMatrix num = a.adjoint() * a;
    CHECK((num - number_operator(space)).norm() < 1e-14);
    ComplexVector three = ComplexVector::Zero(6);
    three[3] = 1.0;
    CHECK(((num * three) - 3.0 * three).norm() < 1e-14);

    // Truncation artifact: [a, a^dag] = I except the last diagonal entry.
    const ComplexMatrix comm = a * a.adjoint() - a.adjoint() * a;
    for (Index i = 0; i + 1 < 6; ++i) CHECK(std::abs(comm(i, i) - Complex(1.0)) < 1e-14);
    CHECK(std::abs(comm(5, 5) - Complex(1.0 - 6.0)) < 1e-14);
    CHECK((comm - ComplexMatrix(comm.diagonal().asDiagonal())).norm() < 1e-14);

    CHECK_THROWS_AS(FockSpace(1), ValidationError);
}

TEST_CASE("weyl operators: identity, Pauli coincidence, unitarity") {
    CHECK((weyl(WeylIndex(3, 0, 0)) - ComplexMatrix::Identity(3, 3)).norm() < 1e-15);
    CHECK((weyl(WeylIndex(2, 1, 0)) - pauli(Pauli::z)).norm() < 1e-14);
    CHECK((weyl(WeylIndex(2, 0, 1)) - pauli(Pauli::x)).norm() < 1e-14);

    for (int n = 0; n < 3; ++n)
        for (int m = 0; m < 3; ++m) {
            const ComplexMatrix u = weyl(WeylIndex(3, n, m));
            CHECK((u.adjoint() * u - ComplexMatrix::Identity(3, 3)).norm() <= 1e-12);
        }
    // Index reduction mod d.
    CHECK((weyl(WeylIndex(3, -1, 5)) - weyl(WeylIndex(3, 2, 2))).norm() < 1e-14);
}

TEST_CASE("weyl orthogonality tr[U_mn^dag U_kl] = d delta_mk delta_nl at d = 3") {
    const int d = 3;
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    const Complex tr =
                        (weyl(WeylIndex(d, m, n)).adjoint() * weyl(WeylIndex(d, k, l))).trace();
                    const double expected = (m == k && n == l) ? d : 0.0;
                    CHECK(std::abs(tr - Complex(expected)) < 1e-12);
                }
}

TEST_CASE("weyl composition and adjoint laws from the defining action") {
    // U_{nm} U_{rs} |k> = w^{rk} U_{nm} |s+k> = w^{rk + n(s+k)} |m+s+k>, so the
    // product is w^{ns} U_{n+r, m+s}: the phase couples the left phase index
    // with the right shift index.
    const int d = 3;
    const double step = 2.0 * M_PI / d;
    for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m)
            for (int r = 0; r < d; ++r)
                for (int s = 0; s < d; ++s) {
                    const ComplexMatrix lhs = weyl(WeylIndex(d, n, m)) * weyl(WeylIndex(d, r, s));
                    const ComplexMatrix rhs =
                        std::polar(1.0, step * ((n * s) % d)) * weyl(WeylIndex(d, n + r, m + s));
                    CHECK((lhs - rhs).norm() < 1e-12);
                }
    // U_{mn}^dag = w^{mn} U_{-m,-n}.
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            const ComplexMatrix lhs = weyl(WeylIndex(d, m, n)).adjoint();
            const ComplexMatrix rhs =
                std::polar(1.0, step * ((m * n) % d)) * weyl(WeylIndex(d, -m, -n));
            CHECK((lhs - rhs).norm() < 1e-12);
        }
}

TEST_CASE("tensor products") {
    CHECK((tensor(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)) -
           ComplexMatrix::Identity(6, 6))
              .norm() < 1e-15);

    const auto [evals, vecs] =
        hermitian_eig(tensor(pauli(Pauli::z), ComplexMatrix::Identity(2, 2)));
    RealVector expected(4);
    expected << -1, -1, 1, 1;
    CHECK((evals - expected).norm() < 1e-12);

    // Mixed-product identity (a kron b)(c kron d) = (ac) kron (bd).
    const ComplexMatrix a = random_matrix(2, 2, 1), c = random_matrix(2, 2, 2);
    const ComplexMatrix b = random_matrix(3, 3, 3), d = random_matrix(3, 3, 4);
    CHECK((tensor(a, b) * tensor(c, d) - tensor((a * c).eval(), (b * d).eval())).norm() < 1e-12);
}

TEST_CASE("number and parity with a qubit") {
    const int n_max = 5;
    const auto np = parity_number(FockSpace(n_max), true);

    // Qubit slowest: the sigma = +1 block comes first. N|n,+> = (n+1)|n,+>,
    // N|n,-> = n|n,->.
    for (int n = 0; n < n_max; ++n) {
        CHECK(np.number(n, n) == Complex(n + 1.0));
        CHECK(np.number(n_max + n, n_max + n) == Complex(static_cast<double>(n)));
    }

    // (-1)^N on |0,-> has N = 0, so parity +1.
    CHECK(np.parity(n_max + 0, n_max + 0) == Complex(1.0));
    CHECK((np.parity * np.parity - ComplexMatrix::Identity(2 * n_max, 2 * n_max)).norm() < 1e-15);

    const auto bare = parity_number(FockSpace(4), false);
    CHECK((bare.number - number_operator(FockSpace(4))).norm() < 1e-15);
    CHECK(bare.parity(2, 2) == Complex(1.0));
    CHECK(bare.parity(3, 3) == Complex(-1.0));
}
