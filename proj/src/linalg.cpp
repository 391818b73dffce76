#include "hodge/linalg.hpp"

namespace hodge {

Vector zero_vector(std::size_t n) { return Vector(n); }

Vector unit_vector(std::size_t n, std::size_t i) {
  Vector v(n);
  v.at(i) = Complex(1);
  return v;
}

Vector conj(const Vector& v) {
  Vector out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(c.conj());
  return out;
}

bool is_zero(const Vector& v) {
  for (const auto& c : v)
    if (!c.is_zero()) return false;
  return true;
}

bool is_real(const Vector& v) {
  for (const auto& c : v)
    if (!c.is_real()) return false;
  return true;
}

Vector operator+(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw HodgeError("dimension-mismatch", "vector sum");
  Vector out(a);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

Vector operator-(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw HodgeError("dimension-mismatch", "vector difference");
  Vector out(a);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
  return out;
}

Vector operator*(const Complex& s, const Vector& v) {
  Vector out(v);
  for (auto& c : out) c *= s;
  return out;
}

std::vector<std::complex<double>> to_double(const Vector& v) {
  std::vector<std::complex<double>> out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(c.to_double());
  return out;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex(1);
  return m;
}

Matrix Matrix::from_columns(std::span<const Vector> cols, std::size_t n) {
  Matrix m(n, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != n) throw HodgeError("dimension-mismatch", "column length");
    for (std::size_t r = 0; r < n; ++r) m(r, c) = cols[c][r];
  }
  return m;
}

Matrix Matrix::from_rows(std::span<const Vector> rows, std::size_t n) {
  Matrix m(rows.size(), n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != n) throw HodgeError("dimension-mismatch", "row length");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Matrix Matrix::elementary(std::size_t n, std::size_t dst, std::size_t src) {
  Matrix m(n, n);
  m(dst, src) = Complex(1);
  return m;
}

Vector Matrix::row(std::size_t r) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Vector Matrix::col(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

std::vector<Vector> Matrix::columns() const {
  std::vector<Vector> out;
  out.reserve(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out.push_back(col(c));
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::conj() const {
  Matrix m(*this);
  for (auto& x : m.data_) x = x.conj();
  return m;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_)
    if (!x.is_zero()) return false;
  return true;
}

bool Matrix::is_real() const {
  for (const auto& x : data_)
    if (!x.is_real()) return false;
  return true;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw HodgeError("dimension-mismatch", "matrix sum");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw HodgeError("dimension-mismatch", "matrix difference");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(const Complex& s) {
  for (auto& x : data_) x *= s;
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw HodgeError("dimension-mismatch", "matrix product");
  Matrix m(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Complex& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Complex& bkj = b(k, j);
        if (bkj.is_zero()) continue;
        m(i, j) += aik * bkj;
      }
    }
  return m;
}

Vector operator*(const Matrix& a, const Vector& v) {
  if (a.cols_ != v.size()) throw HodgeError("dimension-mismatch", "matrix-vector product");
  Vector out(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      if (a(i, k).is_zero() || v[k].is_zero()) continue;
      out[i] += a(i, k) * v[k];
    }
  return out;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

Complex Matrix::trace() const {
  Complex t;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix adjoint_action(const Matrix& g, const Matrix& x) { return g * x * inverse(g); }

Echelon rref(Matrix m) {
  Echelon e;
  std::size_t lead_row = 0;
  for (std::size_t c = 0; c < m.cols() && lead_row < m.rows(); ++c) {
    std::size_t piv = lead_row;
    while (piv < m.rows() && m(piv, c).is_zero()) ++piv;
    if (piv == m.rows()) continue;
    if (piv != lead_row)
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(piv, k), m(lead_row, k));
    Complex inv = Complex(1) / m(lead_row, c);
    for (std::size_t k = c; k < m.cols(); ++k) m(lead_row, k) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == lead_row || m(r, c).is_zero()) continue;
      Complex f = m(r, c);
      for (std::size_t k = c; k < m.cols(); ++k) {
        if (m(lead_row, k).is_zero()) continue;
        m(r, k) -= f * m(lead_row, k);
      }
    }
    e.pivots.push_back(c);
    ++lead_row;
  }
  e.reduced = std::move(m);
  return e;
}

std::size_t rank(const Matrix& m) { return rref(m).rank(); }

Complex determinant(Matrix m) {
  if (!m.square()) throw HodgeError("dimension-mismatch", "determinant of non-square matrix");
  std::size_t n = m.rows();
  Complex det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m(piv, c).is_zero()) ++piv;
    if (piv == n) return Complex(0);
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m(piv, k), m(c, k));
      det = -det;
    }
    det *= m(c, c);
    Complex inv = Complex(1) / m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m(r, c).is_zero()) continue;
      Complex f = m(r, c) * inv;
      for (std::size_t k = c; k < n; ++k) m(r, k) -= f * m(c, k);
    }
  }
  return det;
}

Matrix inverse(const Matrix& m) {
  if (!m.square()) throw HodgeError("dimension-mismatch", "inverse of non-square matrix");
  std::size_t n = m.rows();
  Matrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
    aug(r, n + r) = Complex(1);
  }
  Echelon e = rref(std::move(aug));
  if (e.rank() < n || e.pivots[n - 1] != n - 1) throw HodgeError("singular", "matrix is not invertible");
  Matrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = e.reduced(r, n + c);
  return inv;
}

std::vector<Vector> nullspace(const Matrix& m) {
  Echelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vector> out;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(m.cols());
    v[free] = Complex(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, free);
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<Vector> solve(const Matrix& m, const Vector& b) {
  if (b.size() != m.rows()) throw HodgeError("dimension-mismatch", "solve");
  Matrix aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    aug(r, m.cols()) = b[r];
  }
  Echelon e = rref(std::move(aug));
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  Vector x(m.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, m.cols());
  return x;
}

Matrix power(const Matrix& m, unsigned k) {
  Matrix out = Matrix::identity(m.rows());
  for (unsigned i = 0; i < k; ++i) out = out * m;
  return out;
}

bool is_nilpotent(const Matrix& m) {
  if (!m.square()) return false;
  Matrix p = m;
  for (std::size_t k = 1; k <= m.rows(); ++k) {
    if (p.is_zero()) return true;
    p = p * m;
  }
  return p.is_zero();
}

Matrix exp_nilpotent(const Matrix& x) {
  std::size_t n = x.rows();
  Matrix out = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    term = term * x;
    if (term.is_zero()) return out;
    term *= Complex(Rational(1, static_cast<long>(k)));
    out += term;
  }
  if (!(term * x).is_zero()) throw HodgeError("not-nilpotent", "exp of non-nilpotent operator");
  return out;
}

Matrix log_unipotent(const Matrix& u) {
  std::size_t n = u.rows();
  Matrix x = u - Matrix::identity(n);
  Matrix out = Matrix::zero(n);
  Matrix term = Matrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    term = term * x;
    if (term.is_zero()) return out;
    Complex c(Rational(k % 2 == 1 ? 1 : -1, static_cast<long>(k)));
    out += c * term;
  }
  if (!(term * x).is_zero()) throw HodgeError("not-unipotent", "log of non-unipotent operator");
  return out;
}

}  // namespace hodge
