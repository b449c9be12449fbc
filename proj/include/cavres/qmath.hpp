// qmath.hpp: small dense complex linear algebra for few-qubit states and
// single-excitation reservoir Hamiltonians.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace cavres {

using Complex = std::complex<double>;

/// Raised when a computed quantity violates an invariant that holds by
/// construction (as opposed to a bad argument from the caller).
class InvariantViolation : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Row-major dense complex matrix.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const double> values);
    static ComplexMatrix column(std::span<const Complex> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<Complex> data() { return data_; }
    std::span<const Complex> data() const { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;
    Complex trace() const;
    double frobenius_norm() const;

    /// max |M - M^dagger|
    double hermiticity_error() const;
    bool is_hermitian(double tol = 1e-12) const { return is_square() && hermiticity_error() <= tol; }

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(Complex s);

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);

/// Largest entrywise modulus of a - b. Shapes must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Hermitian, unit-trace, positive semidefinite matrix over n qubits.
/// Construction checks the dimension and Hermiticity; positivity is checked
/// by the operations that depend on it.
class DensityMatrix {
  public:
    explicit DensityMatrix(ComplexMatrix m, double hermitian_tol = 1e-10);

    /// |psi><psi| for a state vector of length 2^n.
    static DensityMatrix from_pure(std::span<const Complex> psi);

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return m_.rows(); }
    const ComplexMatrix& matrix() const { return m_; }
    Complex operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  private:
    ComplexMatrix m_;
    std::size_t num_qubits_ = 0;
};

/// Reduced state on the `keep` qubits, in the order given. Qubit 0 is the most
/// significant bit of the basis index.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);

/// For a pure state on n qubits, returns W (2^k x 2^(n-k)) whose column e is
/// the unnormalized branch <e|_traced |psi>, so that W W^dagger is the reduced
/// density matrix on `keep`. Branches are ordered by the traced qubits' basis
/// index (traced qubits in ascending order).
ComplexMatrix branch_factor(std::span<const Complex> psi, std::span<const std::size_t> keep);

struct EigenDecomposition {
    std::vector<double> values;  ///< descending
    ComplexMatrix vectors;       ///< column j pairs with values[j]
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
EigenDecomposition hermitian_eigen(const ComplexMatrix& h, double hermitian_tol = 1e-10);

/// Hermitian square root of a PSD matrix. Eigenvalues in (-1e-10, 0) are
/// treated as zero; anything more negative throws std::domain_error.
ComplexMatrix psd_sqrt(const ComplexMatrix& rho);

/// Pauli matrices and single-qubit rotations R_k(theta) = exp(-i theta sigma_k / 2).
namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

ComplexMatrix rotation_y(double theta);
ComplexMatrix rotation_z(double theta);

}  // namespace cavres
