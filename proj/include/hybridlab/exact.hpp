#pragma once

#include <complex>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace hybridlab {

using Rational = boost::multiprecision::cpp_rational;

/// Complex number with exact rational real and imaginary parts.
struct ExactComplex {
  Rational re{0};
  Rational im{0};

  ExactComplex() = default;
  ExactComplex(Rational real, Rational imag = Rational{0}) : re(std::move(real)), im(std::move(imag)) {}
  ExactComplex(long long real) : re(real) {}  // NOLINT(google-explicit-constructor)

  static ExactComplex i() { return {Rational{0}, Rational{1}}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  ExactComplex conj() const { return {re, -im}; }

  ExactComplex& operator+=(const ExactComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  ExactComplex& operator-=(const ExactComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  ExactComplex& operator*=(const ExactComplex& o) {
    Rational r = re * o.re - im * o.im;
    Rational m = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(m);
    return *this;
  }
  /// Throws InvalidArgument on division by zero.
  ExactComplex& operator/=(const ExactComplex& o);

  friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
  friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }
  friend ExactComplex operator*(ExactComplex a, const ExactComplex& b) { return a *= b; }
  friend ExactComplex operator/(ExactComplex a, const ExactComplex& b) { return a /= b; }
  ExactComplex operator-() const { return {-re, -im}; }

  friend bool operator==(const ExactComplex& a, const ExactComplex& b) { return a.re == b.re && a.im == b.im; }

  std::complex<double> to_complex() const;
};

/// Parses a decimal literal ("12", "0.2", "1.5e-3") into an exact rational.
/// Throws InvalidArgument on malformed text.
Rational parse_decimal(std::string_view text);

/// Exact rational equal to the shortest decimal that round-trips `value`.
Rational rational_from_double(double value);

/// Terminating decimals render as decimals ("0.125"), everything else as "n/d".
std::string format_rational(const Rational& value);

/// Renders a coefficient in the expression grammar: "0.2", "-i", "0.5*i", "(1 - 2*i)".
std::string format_complex(const ExactComplex& value);

}  // namespace hybridlab
