#include "splitsq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "splitsq/errors.hpp"

namespace splitsq {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(const SymMatrix& a, const char* what) {
  if (!a.all_finite()) throw NonFinite(std::string(what) + ": matrix has NaN/Inf entries");
}

// Sort eigenpairs ascending and flip each vector so that its first
// component above noise level is positive.
EigenDecomposition finish(Vector values, Matrix vectors) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(vectors.rows(), n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.eigenvalues[c] = values[src];
    double sign = 1.0;
    for (std::size_t r = 0; r < vectors.rows(); ++r) {
      if (std::abs(vectors(r, src)) > 1e-12) {
        sign = vectors(r, src) < 0 ? -1.0 : 1.0;
        break;
      }
    }
    for (std::size_t r = 0; r < vectors.rows(); ++r) out.eigenvectors(r, c) = sign * vectors(r, src);
  }
  return out;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("Matrix product: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector operator*(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) throw DimensionMismatch("Matrix-vector product: size mismatch");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

SymMatrix::SymMatrix(std::size_t n, double fill) : n_(n), data_(n * n, fill) {
  if (n == 0) throw DimensionMismatch("SymMatrix: dimension must be at least 1");
}

SymMatrix::SymMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  *this = from_matrix(Matrix(rows));
}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::diagonal(const Vector& d) {
  SymMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
  return m;
}

SymMatrix SymMatrix::from_matrix(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("SymMatrix: matrix is not square");
  SymMatrix s(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) {
      if (m(i, j) != m(j, i) && !(std::isnan(m(i, j)) && std::isnan(m(j, i))))
        throw NotSymmetric("SymMatrix: entries (" + std::to_string(i) + "," + std::to_string(j) +
                           ") differ from their transpose");
      s.set(i, j, m(i, j));
    }
  return s;
}

SymMatrix SymMatrix::symmetrize(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("SymMatrix: matrix is not square");
  SymMatrix s(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) s.set(i, j, i == j ? m(i, i) : 0.5 * (m(i, j) + m(j, i)));
  return s;
}

void SymMatrix::set(std::size_t i, std::size_t j, double v) {
  data_[i * n_ + j] = v;
  data_[j * n_ + i] = v;
}

void SymMatrix::add(std::size_t i, std::size_t j, double v) {
  data_[i * n_ + j] += v;
  if (i != j) data_[j * n_ + i] = data_[i * n_ + j];
}

Matrix SymMatrix::to_matrix() const {
  Matrix m(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

double SymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool SymMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("SymMatrix sum: dimension mismatch");
  SymMatrix c(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i; j < a.dim(); ++j) c.set(i, j, a(i, j) + b(i, j));
  return c;
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) { return a + (-1.0) * b; }

SymMatrix operator*(double s, const SymMatrix& a) {
  SymMatrix c(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i; j < a.dim(); ++j) c.set(i, j, s * a(i, j));
  return c;
}

Vector EigenDecomposition::vector(std::size_t i) const {
  Vector v(eigenvectors.rows());
  for (std::size_t r = 0; r < v.size(); ++r) v[r] = eigenvectors(r, i);
  return v;
}

SymMatrix RankOnePlusDiag::reconstruct() const {
  if (vector.size() != diagonal.size()) throw DimensionMismatch("RankOnePlusDiag: size mismatch");
  SymMatrix m(diagonal.size());
  for (std::size_t i = 0; i < diagonal.size(); ++i)
    for (std::size_t j = i; j < diagonal.size(); ++j)
      m.set(i, j, scale * vector[i] * vector[j] + (i == j ? diagonal[i] : 0.0));
  return m;
}

EigenDecomposition eig_sym(const SymMatrix& in) {
  require_finite(in, "eig_sym");
  const std::size_t n = in.dim();
  Matrix a = in.to_matrix();
  Matrix v = Matrix::identity(n);
  const double scale = in.frobenius_norm();

  for (int sweep = 0; sweep < 100 && scale > 0.0; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off == 0.0 || std::sqrt(off) < 1e-3 * kEps * scale) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Once the entry is below the rounding level of both diagonal
        // entries, rotating would not change them; drop it.
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(a(p, p)) + g == std::abs(a(p, p)) &&
            std::abs(a(q, q)) + g == std::abs(a(q, q))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  Vector values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
  return finish(std::move(values), std::move(v));
}

namespace {

bool nearly_equal(double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, std::max(std::abs(a), std::abs(b))); }

EigenDecomposition uniform_diag_eigs(double c, double scale, const Vector& v) {
  const std::size_t n = v.size();
  const double vn = norm(v);
  Vector u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = v[i] / vn;

  // Householder reflector mapping e_0 to ±u; its remaining columns are an
  // orthonormal basis of the complement of u.
  Vector w = u;
  w[0] += (u[0] >= 0 ? 1.0 : -1.0);
  const double ww = dot(w, w);
  Matrix vectors(n, n);
  Vector values(n, c);
  for (std::size_t col = 0; col < n; ++col)
    for (std::size_t r = 0; r < n; ++r)
      vectors(r, col) = (r == col ? 1.0 : 0.0) - 2.0 * w[r] * w[col] / ww;
  for (std::size_t r = 0; r < n; ++r) vectors(r, 0) = u[r];
  values[0] = c + scale * vn * vn;
  return finish(std::move(values), std::move(vectors));
}

// Root of 1 + rho·Σ z_j²/(delta_j - tau) = 0 for tau in (lo, hi), where
// delta_j = d_j - origin.
double secular_root(const Vector& delta, const Vector& z2, double rho, double lo, double hi) {
  auto g = [&](double tau, double* deriv) {
    double f = 1.0, df = 0.0;
    for (std::size_t j = 0; j < delta.size(); ++j) {
      const double den = delta[j] - tau;
      f += rho * z2[j] / den;
      df += rho * z2[j] / (den * den);
    }
    *deriv = df;
    return f;
  };
  double tau = 0.5 * (lo + hi);
  for (int it = 0; it < 500; ++it) {
    double df = 0.0;
    const double f = g(tau, &df);
    if (f == 0.0) return tau;
    // rho·Σ z²/(δ-τ) is increasing in τ when rho > 0 and decreasing otherwise.
    const bool root_left = (rho > 0) == (f > 0);
    if (root_left) hi = tau; else lo = tau;
    if (hi - lo <= 4.0 * kEps * std::max(std::abs(lo), std::abs(hi))) break;
    double next = tau - f / df;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (next == tau) break;
    tau = next;
  }
  return tau;
}

}  // namespace

EigenDecomposition rank1_diag_eigs(const RankOnePlusDiag& m) {
  const std::size_t n = m.diagonal.size();
  if (n == 0 || m.vector.size() != n) throw DimensionMismatch("rank1_diag_eigs: size mismatch");
  if (!std::isfinite(m.scale)) throw NonFinite("rank1_diag_eigs: non-finite scale");
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(m.diagonal[i]) || !std::isfinite(m.vector[i]))
      throw NonFinite("rank1_diag_eigs: non-finite entries");

  const double vnorm = norm(m.vector);
  bool uniform = true;
  for (std::size_t i = 1; i < n; ++i) uniform = uniform && nearly_equal(m.diagonal[i], m.diagonal[0]);
  if (uniform && vnorm > 0.0) return uniform_diag_eigs(m.diagonal[0], m.scale, m.vector);

  Vector values(n);
  Matrix vectors(n, n);

  std::vector<std::size_t> active;  // indices taking part in the secular equation
  for (std::size_t i = 0; i < n; ++i) {
    if (m.scale == 0.0 || m.vector[i] == 0.0) {
      values[i] = m.diagonal[i];
      vectors(i, i) = 1.0;
    } else {
      active.push_back(i);
    }
  }
  std::sort(active.begin(), active.end(),
            [&](std::size_t a, std::size_t b) { return m.diagonal[a] < m.diagonal[b]; });
  for (std::size_t i = 1; i < active.size(); ++i)
    if (nearly_equal(m.diagonal[active[i]], m.diagonal[active[i - 1]]))
      throw DegenerateSecular("rank1_diag_eigs: coincident diagonal entries with nonzero weight");

  const std::size_t r = active.size();
  Vector d(r), z2(r);
  double znorm2 = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    d[i] = m.diagonal[active[i]];
    z2[i] = m.vector[active[i]] * m.vector[active[i]];
    znorm2 += z2[i];
  }
  const double rho = m.scale;

  for (std::size_t i = 0; i < r; ++i) {
    // Bracket: interlacing with the poles; the outermost root is bounded by
    // the pole plus rho·‖z‖².
    double left, right;
    if (rho > 0) {
      left = d[i];
      right = (i + 1 < r) ? d[i + 1] : d[i] + rho * znorm2;
    } else {
      left = (i == 0) ? d[0] + rho * znorm2 : d[i - 1];
      right = d[i];
    }
    // Work relative to the pole nearer to the root for accuracy.
    const double mid = 0.5 * (left + right);
    double fmid = 1.0;
    for (std::size_t j = 0; j < r; ++j) fmid += rho * z2[j] / (d[j] - mid);
    const bool root_left = (rho > 0) == (fmid > 0);
    const double origin = root_left ? left : right;
    Vector delta(r);
    for (std::size_t j = 0; j < r; ++j) delta[j] = d[j] - origin;
    const double lo = root_left ? 0.0 : left - origin;
    const double hi = root_left ? mid - origin : 0.0;
    const double tau = secular_root(delta, z2, rho, lo, hi);

    const std::size_t slot = active[i];
    values[slot] = origin + tau;
    Vector x(r);
    for (std::size_t j = 0; j < r; ++j) x[j] = m.vector[active[j]] / (delta[j] - tau);
    const double xn = norm(x);
    for (std::size_t row = 0; row < n; ++row) vectors(row, slot) = 0.0;
    for (std::size_t j = 0; j < r; ++j) vectors(active[j], slot) = x[j] / xn;
  }
  return finish(std::move(values), std::move(vectors));
}

EigenDecomposition rank1_diag_spectrum(const RankOnePlusDiag& m) {
  try {
    return rank1_diag_eigs(m);
  } catch (const DegenerateSecular&) {
    return eig_sym(m.reconstruct());
  }
}

SymMatrix invert_spd(const SymMatrix& a) {
  const auto e = eig_sym(a);
  if (!(e.max() > 0.0) || !(e.min() > 1e-12 * e.max()))
    throw SingularCovariance("invert_spd: matrix is singular or not positive definite (lambda_min=" +
                             std::to_string(e.min()) + ", lambda_max=" + std::to_string(e.max()) + ")");
  const std::size_t n = a.dim();
  Matrix inv(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = 1.0 / e.eigenvalues[k];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) inv(i, j) += w * e.eigenvectors(i, k) * e.eigenvectors(j, k);
  }
  return SymMatrix::symmetrize(inv);
}

PseudoInverse pseudo_inverse_psd(const SymMatrix& a, double rel_tol) {
  const auto e = eig_sym(a);
  const std::size_t n = a.dim();
  const double cut = rel_tol * std::max(0.0, e.max());
  Matrix inv(n, n);
  std::vector<std::size_t> dropped;
  for (std::size_t k = 0; k < n; ++k) {
    if (e.eigenvalues[k] <= cut) {
      dropped.push_back(k);
      continue;
    }
    const double w = 1.0 / e.eigenvalues[k];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) inv(i, j) += w * e.eigenvectors(i, k) * e.eigenvectors(j, k);
  }
  PseudoInverse out{SymMatrix::symmetrize(inv), Matrix(n, dropped.size())};
  for (std::size_t c = 0; c < dropped.size(); ++c)
    for (std::size_t i = 0; i < n; ++i) out.null_basis(i, c) = e.eigenvectors(i, dropped[c]);
  return out;
}

bool is_psd(const SymMatrix& a, double tol) {
  if (tol < 0) throw DomainError("is_psd: tolerance must be non-negative");
  return eig_sym(a).min() >= -tol;
}

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

double quadratic_form(const SymMatrix& a, const Vector& x) {
  if (a.dim() != x.size()) throw DimensionMismatch("quadratic_form: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) s += x[i] * a(i, j) * x[j];
  return s;
}

SymMatrix congruence(const Matrix& a, const SymMatrix& b) {
  if (a.cols() != b.dim()) throw DimensionMismatch("congruence: size mismatch");
  return SymMatrix::symmetrize(a * b.to_matrix() * a.transpose());
}

}  // namespace splitsq
