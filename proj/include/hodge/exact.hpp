#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstddef>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hodge {

using Rational = mpq_class;

/// Error raised by every module. `kind` is a short machine-readable tag
/// (e.g. "not-an-mhs", "dimension-mismatch") used by the CLI for diagnostics.
class HodgeError : public std::runtime_error {
 public:
  HodgeError(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Gaussian rational a + b i with arbitrary precision parts.
class Complex {
 public:
  Complex() = default;
  Complex(long v) : re_(v), im_(0) {}  // NOLINT(google-explicit-constructor)
  Complex(int v) : re_(v), im_(0) {}   // NOLINT(google-explicit-constructor)
  Complex(Rational re) : re_(std::move(re)), im_(0) { re_.canonicalize(); }  // NOLINT
  Complex(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static Complex i() { return {Rational(0), Rational(1)}; }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  Complex conj() const { return {re_, -im_}; }
  Rational norm2() const { return re_ * re_ + im_ * im_; }

  Complex& operator+=(const Complex& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    if (o.is_real()) {
      re_ *= o.re_;
      im_ *= o.re_;
      return *this;
    }
    Rational r = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    if (o.is_zero()) throw HodgeError("division-by-zero", "exact complex division by zero");
    if (o.is_real()) {
      re_ /= o.re_;
      im_ /= o.re_;
      return *this;
    }
    Rational d = o.norm2();
    Rational r = (re_ * o.re_ + im_ * o.im_) / d;
    im_ = (im_ * o.re_ - re_ * o.im_) / d;
    re_ = std::move(r);
    return *this;
  }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend Complex operator-(const Complex& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const Complex& a, const Complex& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }

  std::complex<double> to_double() const { return {re_.get_d(), im_.get_d()}; }

  /// "a/b" when real, otherwise "a/b+c/di"-style human form.
  std::string str() const;

 private:
  Rational re_{0};
  Rational im_{0};
};

std::ostream& operator<<(std::ostream& os, const Complex& c);

/// Exact conversion of a binary floating value into a rational.
Rational rational_from_double(double v);
Rational rational_from_long_double(long double v);
Complex complex_from_double(std::complex<double> v);
Complex complex_from_long_double(long double re, long double im);

/// Parses "a", "a/b", "-a/b" or decimal "1.25" into a rational.
Rational parse_rational(std::string_view text);
std::string rational_str(const Rational& r);

}  // namespace hodge
