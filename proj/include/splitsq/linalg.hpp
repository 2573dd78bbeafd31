#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace splitsq {

using Vector = std::vector<double>;

// Dense row-major real matrix. Used for non-symmetric objects such as the
// commutator matrix and for intermediate products.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix transpose() const;
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& x);

// Real symmetric matrix. Symmetry is exact: every write goes to both (i,j)
// and (j,i), and construction from general data rejects asymmetric input.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n, double fill = 0.0);
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(const Vector& d);
  // Throws NotSymmetric unless m(i,j) == m(j,i) bit for bit.
  static SymMatrix from_matrix(const Matrix& m);
  // (m + mᵀ)/2, for products that are symmetric only up to rounding.
  static SymMatrix symmetrize(const Matrix& m);

  std::size_t dim() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v);
  void add(std::size_t i, std::size_t j, double v);

  Matrix to_matrix() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator*(double s, const SymMatrix& a);

struct EigenDecomposition {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // column i belongs to eigenvalues[i]

  double min() const { return eigenvalues.front(); }
  double max() const { return eigenvalues.back(); }
  Vector vector(std::size_t i) const;
};

// scale·v·vᵀ + diag(diagonal)
struct RankOnePlusDiag {
  double scale = 0.0;
  Vector vector;
  Vector diagonal;

  SymMatrix reconstruct() const;
};

// Cyclic Jacobi. Eigenvalues ascending; each eigenvector's first nonzero
// component is made positive.
EigenDecomposition eig_sym(const SymMatrix& a);

// Analytic spectrum for a uniform diagonal, secular-equation roots otherwise.
// Throws DegenerateSecular when two diagonal entries coincide (within 1e-14)
// and both carry a nonzero vector component; use rank1_diag_spectrum for the
// version that falls back to eig_sym.
EigenDecomposition rank1_diag_eigs(const RankOnePlusDiag& m);
EigenDecomposition rank1_diag_spectrum(const RankOnePlusDiag& m);

// Throws SingularCovariance when λ_min ≤ 1e-12·λ_max.
SymMatrix invert_spd(const SymMatrix& a);

// Inverse on the range of a PSD matrix; eigenvalues below rel_tol·λ_max are
// treated as zero. Returns the projector onto the discarded null space too.
struct PseudoInverse {
  SymMatrix inverse;
  Matrix null_basis;  // columns span the discarded subspace
};
PseudoInverse pseudo_inverse_psd(const SymMatrix& a, double rel_tol);

bool is_psd(const SymMatrix& a, double tol);

double dot(const Vector& a, const Vector& b);
double norm(const Vector& a);
double quadratic_form(const SymMatrix& a, const Vector& x);

// a·b·aᵀ for general a (rows×k) and symmetric b (k×k).
SymMatrix congruence(const Matrix& a, const SymMatrix& b);

}  // namespace splitsq
