#include "hybridlab/exact.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <system_error>

#include "hybridlab/error.hpp"

namespace hybridlab {

using boost::multiprecision::cpp_int;

ExactComplex& ExactComplex::operator/=(const ExactComplex& o) {
  const Rational denom = o.re * o.re + o.im * o.im;
  if (denom == 0) throw InvalidArgument("division by zero");
  Rational r = (re * o.re + im * o.im) / denom;
  Rational m = (im * o.re - re * o.im) / denom;
  re = std::move(r);
  im = std::move(m);
  return *this;
}

std::complex<double> ExactComplex::to_complex() const {
  return {re.convert_to<double>(), im.convert_to<double>()};
}

Rational parse_decimal(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }
  cpp_int mantissa = 0;
  long long scale = 0;
  bool any_digit = false;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    mantissa = mantissa * 10 + (text[pos] - '0');
    any_digit = true;
    ++pos;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      mantissa = mantissa * 10 + (text[pos] - '0');
      --scale;
      any_digit = true;
      ++pos;
    }
  }
  if (!any_digit) throw InvalidArgument("malformed number '" + std::string(text) + "'");
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
      exp_negative = text[pos] == '-';
      ++pos;
    }
    long long exponent = 0;
    bool exp_digit = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      exponent = exponent * 10 + (text[pos] - '0');
      if (exponent > 100000) throw InvalidArgument("exponent out of range in '" + std::string(text) + "'");
      exp_digit = true;
      ++pos;
    }
    if (!exp_digit) throw InvalidArgument("malformed exponent in '" + std::string(text) + "'");
    scale += exp_negative ? -exponent : exponent;
  }
  if (pos != text.size()) throw InvalidArgument("malformed number '" + std::string(text) + "'");

  cpp_int power = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(scale < 0 ? -scale : scale));
  Rational value = scale < 0 ? Rational(mantissa, power) : Rational(mantissa * power);
  return negative ? Rational(-value) : value;
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw InvalidArgument("non-finite value cannot be made exact");
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw InvalidArgument("cannot format double");
  return parse_decimal(std::string_view(buf.data(), static_cast<std::size_t>(end - buf.data())));
}

std::string format_rational(const Rational& value) {
  const cpp_int num = boost::multiprecision::numerator(value);
  const cpp_int den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();

  cpp_int d = den;
  unsigned twos = 0;
  unsigned fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return num.str() + "/" + den.str();

  // den = 2^a 5^b divides 10^max(a,b)
  const unsigned digits = std::max(twos, fives);
  const cpp_int scaled = num * (boost::multiprecision::pow(cpp_int(10), digits) / den);
  const bool negative = scaled < 0;
  std::string s = (negative ? cpp_int(-scaled) : scaled).str();
  if (s.size() <= digits) s.insert(0, digits - s.size() + 1, '0');
  s.insert(s.size() - digits, ".");
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return negative ? "-" + s : s;
}

std::string format_complex(const ExactComplex& value) {
  if (value.is_real()) return format_rational(value.re);
  auto imag_part = [](const Rational& im) -> std::string {
    if (im == 1) return "i";
    if (im == -1) return "-i";
    return format_rational(im) + "*i";
  };
  if (value.re == 0) return imag_part(value.im);
  const std::string sign = value.im < 0 ? " - " : " + ";
  return "(" + format_rational(value.re) + sign + imag_part(value.im < 0 ? Rational(-value.im) : value.im) + ")";
}

}  // namespace hybridlab
