#pragma once

#include "hodge/exact.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace hodge {

using Vector = std::vector<Complex>;

Vector zero_vector(std::size_t n);
Vector unit_vector(std::size_t n, std::size_t i);
Vector conj(const Vector& v);
bool is_zero(const Vector& v);
bool is_real(const Vector& v);
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(const Complex& s, const Vector& v);

/// Dense row-major matrix over the Gaussian rationals. Square matrices double
/// as operators on V_C in the standard basis e_0..e_{n-1}.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n);
  static Matrix zero(std::size_t n) { return Matrix(n, n); }
  /// Matrix whose columns are the given vectors.
  static Matrix from_columns(std::span<const Vector> cols, std::size_t n);
  static Matrix from_rows(std::span<const Vector> rows, std::size_t n);
  /// Elementary operator e_src -> e_dst.
  static Matrix elementary(std::size_t n, std::size_t dst, std::size_t src);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vector row(std::size_t r) const;
  Vector col(std::size_t c) const;
  std::vector<Vector> columns() const;

  Matrix transpose() const;
  Matrix conj() const;
  Matrix adjoint() const { return conj().transpose(); }
  bool is_zero() const;
  bool is_real() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(const Complex& s);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const Complex& s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) { return a *= Complex(-1); }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Vector operator*(const Matrix& a, const Vector& v);
  friend bool operator==(const Matrix& a, const Matrix& b);
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  Complex trace() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

using Operator = Matrix;

Matrix commutator(const Matrix& a, const Matrix& b);
/// Ad(g)X = g X g^{-1}.
Matrix adjoint_action(const Matrix& g, const Matrix& x);

/// Result of Gauss-Jordan elimination.
struct Echelon {
  Matrix reduced;                 // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
  std::size_t rank() const { return pivots.size(); }
};

Echelon rref(Matrix m);
std::size_t rank(const Matrix& m);
Complex determinant(Matrix m);
/// Inverse; throws HodgeError("singular") when not invertible.
Matrix inverse(const Matrix& m);
/// Basis of {x : m x = 0}.
std::vector<Vector> nullspace(const Matrix& m);
/// Some solution of m x = b, or nullopt.
std::optional<Vector> solve(const Matrix& m, const Vector& b);

/// True if m^k = 0 for some k <= dim.
bool is_nilpotent(const Matrix& m);
/// exp(X) for nilpotent X (finite series); throws if X is not nilpotent.
Matrix exp_nilpotent(const Matrix& x);
/// log(U) for unipotent U (finite series); throws if U - 1 is not nilpotent.
Matrix log_unipotent(const Matrix& u);
Matrix power(const Matrix& m, unsigned k);

/// Vector of Complex as doubles.
std::vector<std::complex<double>> to_double(const Vector& v);

}  // namespace hodge
