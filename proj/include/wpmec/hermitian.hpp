#pragma once

#include <complex>
#include <span>
#include <vector>

namespace wpmec {

using cdouble = std::complex<double>;

/// Dense Hermitian matrix with packed lower-triangle storage, so conjugate
/// symmetry holds exactly by construction (the diagonal is kept real).
/// Dimensions up to 64 are supported; sizes in this project stay tiny.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(int n);

  static HermitianMatrix identity(int n);
  /// v v^H for a complex column vector v.
  static HermitianMatrix outer(std::span<const cdouble> v);
  /// Validates conjugate symmetry of a dense row-major array before adopting it.
  static HermitianMatrix from_row_major(int n, std::span<const cdouble> entries,
                                        double tol = 1e-12);

  int dim() const { return n_; }
  cdouble operator()(int r, int c) const;
  void set(int r, int c, cdouble v);

  double trace() const;
  double frobenius_norm() const;
  std::vector<cdouble> to_row_major() const;
  void matvec(std::span<const cdouble> x, std::span<cdouble> y) const;

  HermitianMatrix& operator+=(const HermitianMatrix& other);
  HermitianMatrix& operator*=(double s);
  /// this += alpha * other
  HermitianMatrix& axpy(double alpha, const HermitianMatrix& other);

 private:
  int n_ = 0;
  std::vector<cdouble> lo_;  // row-wise packed lower triangle

  int idx(int r, int c) const { return r * (r + 1) / 2 + c; }  // r >= c
};

struct EigDecomposition {
  std::vector<double> values;    // ascending
  std::vector<cdouble> vectors;  // column-major, column k pairs with values[k]
};

/// Full eigendecomposition by cyclic complex Jacobi rotations. Iterates until
/// the off-diagonal Frobenius mass falls below 1e-14 * ||A||_F (at most 100
/// sweeps). Chosen for accuracy and simplicity at the small sizes used here.
EigDecomposition eig(const HermitianMatrix& a);

/// Nearest (Frobenius) positive semidefinite matrix: negative eigenvalues clamped.
HermitianMatrix psd_project(const HermitianMatrix& a);

/// Re tr(A B) for Hermitian A, B (exactly real).
double trace_product(const HermitianMatrix& a, const HermitianMatrix& b);

struct MaxEigPair {
  double value = 0.0;
  std::vector<cdouble> vector;
};

/// Largest eigenvalue and a unit eigenvector.
MaxEigPair max_eigpair(const HermitianMatrix& a);

}  // namespace wpmec
