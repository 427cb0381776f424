#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "bfree/core.hpp"
#include "bfree/numkernel.hpp"
#include "bfree/operators.hpp"
#include "test_helpers.hpp"

using namespace bfree;
using namespace bfree::testing;

namespace {

GeneratorPair hand_pair_3x3() {
    // a = -i diag(1,2,3); b couples e2 and e3 only, so the chain collapses to
    // span{e1} immediately and stays there (e1 is an eigenvector of a).
    ComplexMatrix a = ComplexMatrix::Zero(3, 3);
    a(0, 0) = Complex(0, -1);
    a(1, 1) = Complex(0, -2);
    a(2, 2) = Complex(0, -3);
    ComplexMatrix hb = ComplexMatrix::Zero(3, 3);
    hb(1, 2) = 1;
    hb(2, 1) = 1;
    GeneratorPair gen;
    gen.a = a;
    gen.b = -kImag * hb;
    return gen;
}

}  // namespace

TEST_CASE("compute_M: zero interaction leaves the full space") {
    std::mt19937 gen(7);
    GeneratorPair pair;
    pair.a = -kImag * random_hermitian(5, gen);
    pair.b = ComplexMatrix::Zero(5, 5);
    const auto chain = compute_M_chain(pair);
    CHECK(chain.subspace.dim() == 5);
    CHECK(chain.subspace.orthonormality_defect() < 1e-10);
}

TEST_CASE("compute_M: commuting pair reduces to the kernel of b") {
    ComplexMatrix a = ComplexMatrix::Zero(4, 4);
    ComplexMatrix b = ComplexMatrix::Zero(4, 4);
    a.diagonal() << Complex(0, 1), Complex(0, 2), Complex(0, 3), Complex(0, 4);
    b.diagonal() << Complex(0, 0), Complex(0, 0), Complex(0, 5), Complex(0, 7);
    GeneratorPair pair{a, b, SpaceKind::state_vector};
    const Subspace m = compute_M(pair);
    REQUIRE(m.dim() == 2);
    ComplexVector e1 = ComplexVector::Zero(4), e2 = ComplexVector::Zero(4);
    e1[0] = 1;
    e2[1] = 1;
    CHECK(m.contains(e1, 1e-10));
    CHECK(m.contains(e2, 1e-10));
}

TEST_CASE("compute_M: hand kernel chain on the 3x3 pair") {
    const GeneratorPair pair = hand_pair_3x3();
    const auto chain = compute_M_chain(pair);
    REQUIRE(chain.subspace.dim() == 1);
    ComplexVector e1 = ComplexVector::Zero(3);
    e1[0] = 1;
    CHECK(chain.subspace.contains(e1, 1e-10));
    // W0 = Ker b is already a-invariant, so the chain stabilizes right away.
    CHECK(chain.chain_dims.size() == 2);
    CHECK(chain.chain_dims[0] == 1);
    CHECK(chain.chain_dims[1] == 1);
}

TEST_CASE("computed M is b-annihilated and a-invariant") {
    std::mt19937 gen(11);
    for (int trial = 0; trial < 10; ++trial) {
        const auto planted = make_planted_pair(6, 2, gen);
        const Subspace m = compute_M(planted.gen);
        const ComplexMatrix& f = m.frame;
        REQUIRE(m.dim() > 0);
        CHECK((planted.gen.b * f).norm() <= 1e-10);
        const ComplexMatrix af = planted.gen.a * f;
        CHECK((af - f * (f.adjoint() * af)).norm() <= 1e-10);
    }
}

TEST_CASE("completeness: planted invariant structure is recovered exactly") {
    std::mt19937 gen(13);
    for (int trial = 0; trial < 10; ++trial) {
        const auto planted = make_planted_pair(6, 2, gen);
        const Subspace m = compute_M(planted.gen);
        CHECK(m.dim() == 2);
        CHECK(subspaces_equal(m, planted.planted, 1e-8));
    }
}

TEST_CASE("chain dimensions decrease monotonically until stabilization") {
    std::mt19937 gen(17);
    for (int trial = 0; trial < 10; ++trial) {
        GeneratorPair pair;
        pair.a = -kImag * random_hermitian(7, gen);
        // Rank-deficient interaction so the chain has something to do.
        const ComplexMatrix g = random_matrix(7, 3, gen);
        pair.b = -kImag * (g * g.adjoint());
        const auto chain = compute_M_chain(pair);
        REQUIRE(chain.chain_dims.size() >= 1);
        CHECK(chain.chain_dims.size() <= 7);
        for (std::size_t i = 1; i < chain.chain_dims.size(); ++i)
            CHECK(chain.chain_dims[i] <= chain.chain_dims[i - 1]);
        if (chain.chain_dims.size() >= 2) {
            const auto last = chain.chain_dims.size() - 1;
            // Terminated either by stabilization or by hitting zero.
            const bool stabilized = chain.chain_dims[last] == chain.chain_dims[last - 1];
            CHECK((stabilized || chain.chain_dims[last] == 0));
        }
    }
}

TEST_CASE("dynamic soundness: frames of M evolve freely") {
    std::mt19937 gen(19);
    const RealVector grid = time_grid(10.0, 51);
    for (int trial = 0; trial < 3; ++trial) {
        const auto planted = make_planted_pair(6, 2, gen);
        const Subspace m = compute_M(planted.gen);
        REQUIRE(m.dim() == 2);
        for (Index j = 0; j < m.dim(); ++j)
            CHECK(free_evolution_deviation(planted.gen, m.frame.col(j), grid) <= 1e-8);
        // Negative control: a unit vector orthogonal to M must deviate.
        ComplexVector outside = random_unit_vector(6, gen);
        outside -= m.frame * (m.frame.adjoint() * outside);
        outside /= outside.norm();
        CHECK(free_evolution_deviation(planted.gen, outside, grid) > 1e-3);
    }
}

TEST_CASE("eigenvector evolution: common eigenvector picks up a scalar phase") {
    std::mt19937 gen(23);
    for (int trial = 0; trial < 5; ++trial) {
        const auto planted = make_planted_pair(6, 2, gen);
        // Common eigenvector: eigenvector of a restricted to the planted block.
        const ComplexMatrix a_res =
            planted.planted.frame.adjoint() * planted.gen.a * planted.planted.frame;
        Eigen::ComplexEigenSolver<ComplexMatrix> es(a_res);
        REQUIRE(es.info() == Eigen::Success);
        ComplexVector x0 = planted.planted.frame * es.eigenvectors().col(0);
        x0 /= x0.norm();
        const Complex a_val = (x0.adjoint() * planted.gen.a * x0)(0);
        CHECK((planted.gen.b * x0).norm() < 1e-10);
        const ComplexMatrix full = planted.gen.a + planted.gen.b;
        for (double t : {0.5, 3.0, 10.0}) {
            const ComplexVector lhs = expm((t * full).eval()) * x0;
            const ComplexVector rhs = std::exp(a_val * t) * x0;
            CHECK((lhs - rhs).norm() <= 1e-9);
        }
    }
}

TEST_CASE("shemesh: Pauli pair shares no eigenvector") {
    GeneratorPair pair;
    pair.a = pauli(Pauli::z);
    pair.b = pauli(Pauli::x);
    const auto res = shemesh_nontrivial(pair, 1);
    CHECK_FALSE(res.nontrivial);
    CHECK(res.subspace_dim == 0);
    CHECK_FALSE(res.witness.has_value());
}

TEST_CASE("shemesh: diagonal pair yields a witness annihilated by b") {
    GeneratorPair pair;
    pair.a = ComplexMatrix::Zero(2, 2);
    pair.b = ComplexMatrix::Zero(2, 2);
    pair.a.diagonal() << Complex(1), Complex(2);
    pair.b.diagonal() << Complex(0), Complex(5);
    const auto res = shemesh_nontrivial(pair, 1);
    REQUIRE(res.nontrivial);
    REQUIRE(res.witness.has_value());
    CHECK(res.witness_residual_a < 1e-10);
    CHECK(res.witness_residual_b < 1e-10);
    // Both diagonal: the whole space is the commutator kernel; the extracted
    // witness is a shared eigenvector.
    CHECK(res.subspace_dim == 2);
    const ComplexVector& w = *res.witness;
    const bool is_e1 = std::abs(std::abs(w[0]) - 1.0) < 1e-10;
    const bool is_e2 = std::abs(std::abs(w[1]) - 1.0) < 1e-10;
    CHECK((is_e1 || is_e2));
}

TEST_CASE("shemesh: nearly commuting pair with a scalar free part is nontrivial") {
    // The free part differs from a scalar only by summation roundoff, so every
    // commutator is pure noise; the verdict must still see the common
    // eigenvectors.
    std::mt19937 gen(47);
    ComplexMatrix a = ComplexMatrix::Zero(5, 5);
    a.diagonal().setConstant(Complex(0, -1.5));
    a(0, 0) = Complex(0, -(2.0 - 0.5));
    a(2, 2) = Complex(0, -(1.0 + 0.5) * (1.0 + 1e-16));
    GeneratorPair pair;
    pair.a = a;
    pair.b = -kImag * random_hermitian(5, gen);
    const auto res = shemesh_nontrivial(pair, 4);
    CHECK(res.nontrivial);
    CHECK(res.subspace_dim == 5);
    REQUIRE(res.witness.has_value());
    CHECK(res.witness_residual_b < 1e-8);
}

TEST_CASE("shemesh: max_power bounds are enforced") {
    GeneratorPair pair;
    pair.a = pauli(Pauli::z);
    pair.b = pauli(Pauli::x);
    CHECK_THROWS_AS(shemesh_nontrivial(pair, 0), ValidationError);
    CHECK_THROWS_AS(shemesh_nontrivial(pair, 2), ValidationError);
}

TEST_CASE("shemesh agreement with the sector scan on Hermitian pairs") {
    std::mt19937 gen(29);
    int planted_count = 0, free_count = 0;
    for (int trial = 0; trial < 8; ++trial) {
        ComplexMatrix ha, hb;
        if (trial % 2 == 0) {
            const auto planted = make_planted_pair(6, 2, gen);
            ha = planted.h_a;
            hb = planted.h_b;
        } else {
            ha = random_hermitian(6, gen);
            hb = random_hermitian(6, gen);
        }
        GeneratorPair pair;
        pair.a = -kImag * ha;
        pair.b = -kImag * hb;
        const auto res = shemesh_nontrivial(pair, 5);
        const auto dec = sector_decompose(ha, hb);
        const bool some_sector = !dec.sectors.empty();
        CHECK(res.nontrivial == some_sector);
        if (res.nontrivial) ++planted_count;
        else ++free_count;
    }
    // Both branches exercised: planted pairs share eigenvectors, generic
    // random pairs do not.
    CHECK(planted_count >= 4);
    CHECK(free_count >= 1);
}

TEST_CASE("sector decomposition: trivial interaction gives one full sector") {
    std::mt19937 gen(31);
    const ComplexMatrix h0 = random_hermitian(4, gen);
    const ComplexMatrix hI = ComplexMatrix::Zero(4, 4);
    const auto dec = sector_decompose(h0, hI);
    REQUIRE(dec.sectors.size() == 1);
    CHECK(dec.eigenvalues[0] == doctest::Approx(0.0));
    CHECK(dec.sectors[0].dim() == 4);
    CHECK(dec.total_dim() == 4);
}

TEST_CASE("sector decomposition: commuting diagonals split by eigenvalue") {
    ComplexMatrix h0 = ComplexMatrix::Zero(4, 4);
    h0.diagonal() << Complex(1), Complex(2), Complex(3), Complex(4);
    ComplexMatrix hI = ComplexMatrix::Zero(4, 4);
    hI.diagonal() << Complex(2), Complex(2), Complex(-1), Complex(-1);
    const auto dec = sector_decompose(h0, hI);
    REQUIRE(dec.sectors.size() == 2);
    CHECK(dec.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(dec.eigenvalues[1] == doctest::Approx(2.0));
    CHECK(dec.sectors[0].dim() == 2);
    CHECK(dec.sectors[1].dim() == 2);
    // Sector additivity and pairwise orthogonality.
    CHECK(dec.total_dim() == 4);
    CHECK((dec.sectors[0].frame.adjoint() * dec.sectors[1].frame).norm() < 1e-10);
    // Sectors invariant under both Hamiltonians.
    for (const auto& s : dec.sectors) {
        const ComplexMatrix h0f = h0 * s.frame;
        const ComplexMatrix hIf = hI * s.frame;
        CHECK((h0f - s.frame * (s.frame.adjoint() * h0f)).norm() < 1e-8);
        CHECK((hIf - s.frame * (s.frame.adjoint() * hIf)).norm() < 1e-8);
    }
    std::mt19937 rng(1);
    CHECK_THROWS_AS(sector_decompose(pauli(Pauli::z), random_matrix(2, 2, rng)), ValidationError);
}

TEST_CASE("sector additivity against compute_M on planted Hermitian pairs") {
    std::mt19937 gen(37);
    for (int trial = 0; trial < 5; ++trial) {
        const auto planted = make_planted_pair(6, 2, gen);
        const auto dec = sector_decompose(planted.h_a, planted.h_b);
        // The shifted chains must jointly recover the planted block.
        CHECK(dec.total_dim() == 2);
        for (const auto& s : dec.sectors)
            CHECK(containment_defect(s, planted.planted) < 1e-8);
    }
}

TEST_CASE("picture invariance on a commuting pair") {
    ComplexMatrix a = ComplexMatrix::Zero(3, 3);
    a.diagonal() << Complex(0, 1), Complex(0, 2), Complex(0, 3);
    ComplexMatrix b = ComplexMatrix::Zero(3, 3);
    b.diagonal() << Complex(0, 0), Complex(0, 4), Complex(0, 5);
    GeneratorPair pair{a, b, SpaceKind::state_vector};
    ComplexMatrix f = ComplexMatrix::Zero(3, 1);
    f(0, 0) = 1;
    const auto report = verify_picture_invariance(pair, {3, f}, time_grid(10.0, 21));
    CHECK(report.max_b_picture <= 1e-10);
    CHECK(report.max_a_picture <= 1e-10);
}

TEST_CASE("picture invariance rejects subspaces outside M") {
    const GeneratorPair pair = hand_pair_3x3();
    ComplexMatrix f = ComplexMatrix::Zero(3, 1);
    f(1, 0) = 1;  // e2 is not in M = span{e1}
    CHECK_THROWS_AS(verify_picture_invariance(pair, {3, f}, time_grid(1.0, 5)), ValidationError);
}

TEST_CASE("picture deviations flag states outside M (negative control)") {
    std::mt19937 gen(41);
    const auto planted = make_planted_pair(6, 2, gen);
    const Subspace m = compute_M(planted.gen);
    ComplexVector outside = random_unit_vector(6, gen);
    outside -= m.frame * (m.frame.adjoint() * outside);
    outside /= outside.norm();
    ComplexMatrix f(6, 1);
    f.col(0) = outside;
    const auto report = picture_deviations(planted.gen, {6, f}, time_grid(10.0, 21));
    CHECK(report.max_b_picture > 1e-3);
}

TEST_CASE("restriction commutes on M even when the pair does not commute globally") {
    const GeneratorPair pair = hand_pair_3x3();
    const Subspace m = compute_M(pair);
    const auto report = restriction_commutes(pair, m);
    CHECK(report.commutator_norm_on_m <= 1e-12);
    CHECK((pair.a * pair.b - pair.b * pair.a).norm() > 0.1);
    CHECK(report.restricted_a.rows() == 1);
    CHECK(std::abs(report.restricted_a(0, 0) - Complex(0, -1)) < 1e-12);
    CHECK(std::abs(report.restricted_b(0, 0)) < 1e-12);
}

TEST_CASE("restricted Hermitian pair commutes on M (simultaneous diagonalization)") {
    std::mt19937 gen(43);
    for (int trial = 0; trial < 5; ++trial) {
        const auto planted = make_planted_pair(7, 3, gen);
        const Subspace m = compute_M(planted.gen);
        REQUIRE(m.dim() == 3);
        const ComplexMatrix ha_res = m.frame.adjoint() * planted.h_a * m.frame;
        const ComplexMatrix hb_res = m.frame.adjoint() * planted.h_b * m.frame;
        CHECK((ha_res * hb_res - hb_res * ha_res).norm() < 1e-8);
        // hb vanishes on M here, so the common eigenbasis is that of ha.
        const auto [evals, vecs] = hermitian_eig(ha_res);
        CHECK((ha_res * vecs - vecs * evals.asDiagonal().toDenseMatrix().cast<Complex>()).norm() <
              1e-8);
    }
}

TEST_CASE("eigenvalue shift absorbs a scalar phase into the interaction part") {
    ComplexMatrix hI(2, 2);
    hI << 2, 0, 0, 2;
    GeneratorPair pair;
    pair.a = -kImag * pauli(Pauli::z);
    pair.b = -kImag * hI;
    // hI = 2 I: after shifting by alpha = 2 the interaction part vanishes.
    const GeneratorPair shifted = eigenvalue_shift(pair, 2.0);
    CHECK(shifted.b.norm() < 1e-15);
}

TEST_CASE("time grid") {
    const RealVector grid = time_grid(10.0, 101);
    CHECK(grid.size() == 101);
    CHECK(grid[0] == 0.0);
    CHECK(grid[100] == 10.0);
    CHECK(grid[50] == doctest::Approx(5.0));
    const RealVector single = time_grid(0.0, 1);
    CHECK(single.size() == 1);
    CHECK(single[0] == 0.0);
    CHECK_THROWS_AS(time_grid(1.0, 0), ValidationError);
    CHECK_THROWS_AS(time_grid(-1.0, 5), ValidationError);
}
