#include "loewner/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "loewner/error.hpp"

namespace loewner {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    std::ostringstream os;
    os << where << ": dimension mismatch (" << a << " vs " << b << ")";
    fail(ErrorCode::DimensionMismatch, os.str());
  }
}

}  // namespace

void Tolerances::validate() const {
  if (!(eig_tol > 0) || !(psd_tol > 0) || !(rank_tol > 0) || !(equality_tol > 0)) {
    fail(ErrorCode::BadParameter, "tolerances must be strictly positive");
  }
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

Matrix::Matrix(std::size_t n, std::vector<double> row_major) : n_(n), a_(std::move(row_major)) {
  if (a_.size() != n * n) {
    std::ostringstream os;
    os << "matrix of dimension " << n << " needs " << n * n << " entries, got " << a_.size();
    fail(ErrorCode::DimensionMismatch, os.str());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::outer(std::span<const double> x, std::span<const double> y) {
  require_same_dim(x.size(), y.size(), "outer");
  Matrix m(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) m(i, j) = x[i] * y[j];
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vector>& columns) {
  const std::size_t n = columns.size();
  Matrix m(n);
  for (std::size_t j = 0; j < n; ++j) {
    require_same_dim(columns[j].size(), n, "from_columns");
    for (std::size_t i = 0; i < n; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector c(n_);
  for (std::size_t i = 0; i < n_; ++i) c[i] = (*this)(i, j);
  return c;
}

Matrix Matrix::transpose() const {
  Matrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

Matrix& Matrix::operator+=(const Matrix& o) {
  require_same_dim(n_, o.n_, "operator+");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  require_same_dim(n_, o.n_, "operator-");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : a_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same_dim(a.n(), b.n(), "operator*");
  const std::size_t n = a.n();
  Matrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
  require_same_dim(a.n(), x.size(), "matvec");
  Vector y(a.n(), 0.0);
  for (std::size_t i = 0; i < a.n(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.n(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

// ---------------------------------------------------------------- SymMat

SymMat::SymMat(const Matrix& m) : m_(m.n()) {
  const std::size_t n = m.n();
  if (n == 0) fail(ErrorCode::DimensionMismatch, "symmetric matrix must have dimension >= 1");
  for (std::size_t i = 0; i < n; ++i) {
    m_(i, i) = m(i, i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m_(i, j) = v;
      m_(j, i) = v;
    }
  }
  for (double v : m_.data()) {
    if (!std::isfinite(v)) fail(ErrorCode::DomainError, "symmetric matrix has a non-finite entry");
  }
}

SymMat::SymMat(std::size_t n, std::vector<double> row_major)
    : SymMat(Matrix(n, std::move(row_major))) {}

SymMat SymMat::identity(std::size_t n) { return SymMat(Matrix::identity(n)); }
SymMat SymMat::zero(std::size_t n) { return SymMat(Matrix(n)); }
SymMat SymMat::diagonal(std::span<const double> d) { return SymMat(Matrix::diagonal(d)); }
SymMat SymMat::diagonal(std::initializer_list<double> d) {
  return diagonal(std::span<const double>(d.begin(), d.size()));
}
SymMat SymMat::outer(std::span<const double> x) { return SymMat(Matrix::outer(x, x)); }
SymMat SymMat::gram(const Matrix& a) { return SymMat(a.transpose() * a); }
SymMat SymMat::congruence(const Matrix& t, const SymMat& x) {
  return SymMat(t * x.matrix() * t.transpose());
}

double SymMat::trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < n(); ++i) s += m_(i, i);
  return s;
}

SymMat& SymMat::operator+=(const SymMat& o) {
  m_ += o.m_;
  return *this;
}
SymMat& SymMat::operator-=(const SymMat& o) {
  m_ -= o.m_;
  return *this;
}
SymMat& SymMat::operator*=(double s) {
  m_ *= s;
  return *this;
}

SymMat operator+(SymMat a, const SymMat& b) { return a += b; }
SymMat operator-(SymMat a, const SymMat& b) { return a -= b; }
SymMat operator-(SymMat a) { return a *= -1.0; }
SymMat operator*(double s, SymMat a) { return a *= s; }

// ---------------------------------------------------------------- eigh

Spectrum eigh(const SymMat& a, const Tolerances& tol) {
  const std::size_t n = a.n();
  Matrix m = a.matrix();
  Matrix v = Matrix::identity(n);
  const double scale = a.frobenius_norm();

  auto off_mass = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += m(i, j) * m(i, j);
    return std::sqrt(s);
  };

  bool converged = false;
  for (int sweep = 0; sweep <= kJacobiMaxSweeps; ++sweep) {
    if (off_mass() <= tol.eig_tol * scale) {
      converged = true;
      break;
    }
    if (sweep == kJacobiMaxSweeps) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m(k, p);
          const double mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m(p, k);
          const double mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        m(p, q) = 0.0;
        m(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) {
    fail(ErrorCode::NonConvergence, "Jacobi eigensolver did not converge within the sweep budget");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return m(i, i) < m(j, j); });

  Spectrum out{Vector(n), Matrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = m(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

// ---------------------------------------------------------------- order

bool loewner_le(const SymMat& a, const SymMat& b, const Tolerances& tol) {
  require_same_dim(a.n(), b.n(), "loewner_le");
  return eigh(b - a, tol).min() >= -tol.psd_tol;
}

bool loewner_lt(const SymMat& a, const SymMat& b, const Tolerances& tol) {
  require_same_dim(a.n(), b.n(), "loewner_lt");
  return eigh(b - a, tol).min() > tol.psd_tol;
}

// ---------------------------------------------------------------- calculus

SymMat apply_fn(const Spectrum& s, const std::function<double(double)>& f) {
  const std::size_t n = s.eigenvalues.size();
  Vector fl(n);
  for (std::size_t k = 0; k < n; ++k) {
    fl[k] = f(s.eigenvalues[k]);
    if (!std::isfinite(fl[k])) {
      std::ostringstream os;
      os << "function undefined at eigenvalue " << s.eigenvalues[k];
      fail(ErrorCode::DomainError, os.str());
    }
  }
  Matrix r(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (fl[k] == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double vik = s.vectors(i, k) * fl[k];
      for (std::size_t j = 0; j < n; ++j) r(i, j) += vik * s.vectors(j, k);
    }
  }
  return SymMat(r);
}

SymMat apply_fn(const SymMat& a, const std::function<double(double)>& f, const Tolerances& tol) {
  return apply_fn(eigh(a, tol), f);
}

SymMat sqrt_psd(const SymMat& a, const Tolerances& tol) {
  const Spectrum s = eigh(a, tol);
  if (s.min() < -tol.psd_tol) {
    std::ostringstream os;
    os << "sqrt_psd: matrix is not positive semidefinite (lambda_min = " << s.min() << ")";
    fail(ErrorCode::NotPSD, os.str());
  }
  return apply_fn(s, [](double x) { return x <= 0.0 ? 0.0 : std::sqrt(x); });
}

SymMat inv(const SymMat& a, const Tolerances& tol) {
  const Spectrum s = eigh(a, tol);
  const double scale = std::max(std::abs(s.min()), std::abs(s.max()));
  double smallest = scale;
  for (double l : s.eigenvalues) smallest = std::min(smallest, std::abs(l));
  if (!(smallest > tol.rank_tol * scale) || scale == 0.0) {
    fail(ErrorCode::Singular, "inv: matrix is numerically singular");
  }
  return apply_fn(s, [](double x) { return 1.0 / x; });
}

PseudoInverse::PseudoInverse(SymMat pinv, std::vector<Vector> range_basis, double rank_tol)
    : pinv_(std::move(pinv)), basis_(std::move(range_basis)), rank_tol_(rank_tol) {}

bool PseudoInverse::in_range(std::span<const double> x) const {
  require_same_dim(x.size(), pinv_.n(), "in_range");
  Vector residual(x.begin(), x.end());
  for (const Vector& b : basis_) {
    const double c = dot(b, x);
    for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= c * b[i];
  }
  return norm(residual) <= rank_tol_ * norm(x);
}

PseudoInverse pinv_and_range(const SymMat& a, const Tolerances& tol) {
  const Spectrum s = eigh(a, tol);
  if (s.min() < -tol.psd_tol) {
    std::ostringstream os;
    os << "pinv_and_range: matrix is not positive semidefinite (lambda_min = " << s.min() << ")";
    fail(ErrorCode::NotPSD, os.str());
  }
  const double cut = tol.rank_tol * std::max(s.max(), 0.0);
  std::vector<Vector> basis;
  for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
    if (s.eigenvalues[k] > cut && s.eigenvalues[k] > 0.0) basis.push_back(s.vector(k));
  }
  SymMat p = apply_fn(s, [cut](double x) { return (x > cut && x > 0.0) ? 1.0 / x : 0.0; });
  return PseudoInverse(std::move(p), std::move(basis), tol.rank_tol);
}

// ---------------------------------------------------------------- norms, LU

double norm2(const SymMat& a, const Tolerances& tol) {
  const Spectrum s = eigh(a, tol);
  return std::max(std::abs(s.min()), std::abs(s.max()));
}

double norm2(const Matrix& a, const Tolerances& tol) {
  return std::sqrt(std::max(0.0, eigh(SymMat::gram(a), tol).max()));
}

double sigma_min(const Matrix& a, const Tolerances& tol) {
  return std::sqrt(std::max(0.0, eigh(SymMat::gram(a), tol).min()));
}

namespace {

struct Lu {
  Matrix lu;
  std::vector<std::size_t> perm;
  int sign = 1;
  bool singular = false;
};

Lu factor(const Matrix& a) {
  Lu f{a, std::vector<std::size_t>(a.n()), 1, false};
  const std::size_t n = a.n();
  std::iota(f.perm.begin(), f.perm.end(), 0);
  Matrix& m = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
    if (m(piv, k) == 0.0) {
      f.singular = true;
      return f;
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
      f.sign = -f.sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      m(i, k) /= m(k, k);
      const double lik = m(i, k);
      if (lik == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= lik * m(k, j);
    }
  }
  return f;
}

}  // namespace

double det(const Matrix& a) {
  const Lu f = factor(a);
  if (f.singular) return 0.0;
  double d = f.sign;
  for (std::size_t i = 0; i < a.n(); ++i) d *= f.lu(i, i);
  return d;
}

Matrix solve(const Matrix& a, const Matrix& b) {
  require_same_dim(a.n(), b.n(), "solve");
  const Lu f = factor(a);
  if (f.singular) fail(ErrorCode::Singular, "solve: matrix is singular");
  const std::size_t n = a.n();
  Matrix x(n);
  for (std::size_t col = 0; col < n; ++col) {
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = b(f.perm[i], col);
      for (std::size_t k = 0; k < i; ++k) s -= f.lu(i, k) * y[k];
      y[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = y[i];
      for (std::size_t k = i + 1; k < n; ++k) s -= f.lu(i, k) * x(k, col);
      x(i, col) = s / f.lu(i, i);
    }
  }
  return x;
}

Matrix inverse(const Matrix& a) { return solve(a, Matrix::identity(a.n())); }

// ---------------------------------------------------------------- vectors

double dot(std::span<const double> x, std::span<const double> y) {
  require_same_dim(x.size(), y.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm(std::span<const double> x) { return std::sqrt(dot(x, x)); }

Vector normalized(std::span<const double> x) {
  const double r = norm(x);
  if (!(r > 0.0)) fail(ErrorCode::DomainError, "cannot normalize a zero vector");
  Vector y(x.begin(), x.end());
  for (double& v : y) v /= r;
  return y;
}

double principal_angle(const std::vector<Vector>& u, const std::vector<Vector>& v) {
  require_same_dim(u.size(), v.size(), "principal_angle");
  const std::size_t k = u.size();
  if (k == 0) return 0.0;
  // residuals of v's columns after projecting onto span(u)
  std::vector<Vector> r;
  r.reserve(k);
  for (const Vector& vj : v) {
    Vector res = vj;
    for (const Vector& ui : u) {
      const double c = dot(ui, vj);
      for (std::size_t i = 0; i < res.size(); ++i) res[i] -= c * ui[i];
    }
    r.push_back(std::move(res));
  }
  Matrix g(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) g(i, j) = dot(r[i], r[j]);
  const double sine = std::sqrt(std::max(0.0, eigh(SymMat(g)).max()));
  return std::asin(std::min(1.0, sine));
}

}  // namespace loewner
