#pragma once

// Dense real kernels for small symmetric matrices: the Jacobi eigensolver,
// Loewner-order predicates and spectral functional calculus.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace loewner {

using Vector = std::vector<double>;

struct Tolerances {
  double eig_tol = 1e-14;       // Jacobi stop: off-diagonal mass relative to ||A||_F
  double psd_tol = 1e-9;        // absolute slack on lambda_min in order tests
  double rank_tol = 1e-9;       // relative cut-off for numerical rank
  double equality_tol = 1e-8;   // relative Frobenius distance for equality

  void validate() const;
};

// Square, row-major, general real matrix.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n);
  Matrix(std::size_t n, std::vector<double> row_major);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);
  static Matrix outer(std::span<const double> x, std::span<const double> y);
  static Matrix from_columns(const std::vector<Vector>& columns);

  std::size_t n() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::span<const double> data() const noexcept { return a_; }

  Vector column(std::size_t j) const;
  Matrix transpose() const;
  double frobenius_norm() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Vector operator*(const Matrix& a, std::span<const double> x);

// Symmetric matrix. Construction stores (M + M^t)/2 so the two triangles agree
// bit for bit, and rejects non-finite entries.
class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(const Matrix& m);
  SymMat(std::size_t n, std::vector<double> row_major);

  static SymMat identity(std::size_t n);
  static SymMat zero(std::size_t n);
  static SymMat diagonal(std::span<const double> d);
  static SymMat diagonal(std::initializer_list<double> d);
  // x x^t
  static SymMat outer(std::span<const double> x);
  // A^t A
  static SymMat gram(const Matrix& a);
  // T X T^t
  static SymMat congruence(const Matrix& t, const SymMat& x);

  std::size_t n() const noexcept { return m_.n(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }
  std::span<const double> data() const noexcept { return m_.data(); }
  double frobenius_norm() const { return m_.frobenius_norm(); }
  double trace() const;

  SymMat& operator+=(const SymMat& o);
  SymMat& operator-=(const SymMat& o);
  SymMat& operator*=(double s);

 private:
  Matrix m_;
};

SymMat operator+(SymMat a, const SymMat& b);
SymMat operator-(SymMat a, const SymMat& b);
SymMat operator-(SymMat a);
SymMat operator*(double s, SymMat a);

struct Spectrum {
  Vector eigenvalues;  // ascending
  Matrix vectors;      // column k pairs with eigenvalues[k]

  Vector vector(std::size_t k) const { return vectors.column(k); }
  double min() const { return eigenvalues.front(); }
  double max() const { return eigenvalues.back(); }
};

inline constexpr int kJacobiMaxSweeps = 100;

Spectrum eigh(const SymMat& a, const Tolerances& tol = {});

bool loewner_le(const SymMat& a, const SymMat& b, const Tolerances& tol = {});
bool loewner_lt(const SymMat& a, const SymMat& b, const Tolerances& tol = {});

SymMat sqrt_psd(const SymMat& a, const Tolerances& tol = {});
SymMat inv(const SymMat& a, const Tolerances& tol = {});

// V diag(f(lambda)) V^t. `f` may throw Error(DomainError); a non-finite value
// is reported the same way.
SymMat apply_fn(const SymMat& a, const std::function<double(double)>& f,
                const Tolerances& tol = {});
SymMat apply_fn(const Spectrum& s, const std::function<double(double)>& f);

class PseudoInverse {
 public:
  PseudoInverse(SymMat pinv, std::vector<Vector> range_basis, double rank_tol);

  const SymMat& pinv() const noexcept { return pinv_; }
  std::size_t rank() const noexcept { return basis_.size(); }
  const std::vector<Vector>& range_basis() const noexcept { return basis_; }
  // ||x - Pi x|| <= rank_tol * ||x|| where Pi projects onto range(A).
  bool in_range(std::span<const double> x) const;

 private:
  SymMat pinv_;
  std::vector<Vector> basis_;
  double rank_tol_;
};

PseudoInverse pinv_and_range(const SymMat& a, const Tolerances& tol = {});

// Spectral norm: max |lambda| for symmetric input, sigma_max for general input.
double norm2(const SymMat& a, const Tolerances& tol = {});
double norm2(const Matrix& a, const Tolerances& tol = {});
double sigma_min(const Matrix& a, const Tolerances& tol = {});

// LU with partial pivoting.
double det(const Matrix& a);
Matrix inverse(const Matrix& a);
// a^{-1} b; throws Singular on a zero pivot.
Matrix solve(const Matrix& a, const Matrix& b);

double dot(std::span<const double> x, std::span<const double> y);
double norm(std::span<const double> x);
Vector normalized(std::span<const double> x);

// Largest principal angle between the column spans of two orthonormal sets of
// equal size.
double principal_angle(const std::vector<Vector>& u, const std::vector<Vector>& v);

}  // namespace loewner
