#ifndef BFREE_TYPES_HPP
#define BFREE_TYPES_HPP

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bfree {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kImag{0.0, 1.0};

/// Input violated a documented precondition (bad dimensions, malformed file,
/// non-Hermitian matrix where a Hermitian one is required, ...).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A dense factorization or solve failed to converge.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Threshold used for numerical rank decisions. Automatic mode resolves to
/// eps * max(rows, cols) * sigma_max at the point of use.
struct RankTolerance {
    enum class Mode { automatic, explicit_value };

    Mode mode = Mode::automatic;
    double value = 0.0;

    static RankTolerance automatic() { return {}; }

    static RankTolerance explicit_value(double v) {
        if (!(v >= 0.0)) throw ValidationError("RankTolerance: value must be nonnegative");
        return {Mode::explicit_value, v};
    }

    double resolve(Index rows, Index cols, double sigma_max) const {
        if (mode == Mode::explicit_value) return value;
        return std::numeric_limits<double>::epsilon() *
               static_cast<double>(std::max(rows, cols)) * sigma_max;
    }
};

/// A linear subspace of C^n, stored as an orthonormal column frame.
/// k = 0 columns encodes the zero subspace.
struct Subspace {
    Index ambient_dim = 0;
    ComplexMatrix frame;  // ambient_dim x k, orthonormal columns

    Subspace() = default;
    Subspace(Index ambient, ComplexMatrix f) : ambient_dim(ambient), frame(std::move(f)) {
        if (frame.rows() != ambient_dim)
            throw ValidationError("Subspace: frame rows do not match ambient dimension");
    }

    Index dim() const { return frame.cols(); }

    static Subspace zero(Index ambient) { return {ambient, ComplexMatrix(ambient, 0)}; }

    static Subspace full(Index ambient) {
        return {ambient, ComplexMatrix(ComplexMatrix::Identity(ambient, ambient))};
    }

    /// || frame^dag frame - I ||_F; zero for an exactly orthonormal frame.
    double orthonormality_defect() const {
        if (dim() == 0) return 0.0;
        return (frame.adjoint() * frame - ComplexMatrix::Identity(dim(), dim())).norm();
    }

    /// Membership test: ||(I - F F^dag) v|| <= tol * ||v||.
    bool contains(const ComplexVector& v, double tol) const {
        if (v.size() != ambient_dim)
            throw ValidationError("Subspace::contains: vector dimension mismatch");
        const double vn = v.norm();
        if (vn == 0.0) return true;
        if (dim() == 0) return false;
        return (v - frame * (frame.adjoint() * v)).norm() <= tol * vn;
    }
};

}  // namespace bfree

#endif
