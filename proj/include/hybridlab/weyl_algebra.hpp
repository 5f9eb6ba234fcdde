#pragma once

// Exact algebra over the canonical generators {q, p, x, y, p_x, p_y} with
// [q,p] = [x,p_x] = [y,p_y] = i (hbar = 1) and every other pair commuting.

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "hybridlab/exact.hpp"

namespace hybridlab {

/// Enumerators are listed in normal order: q p x p_x y p_y.
enum class Generator : std::uint8_t { q = 0, p = 1, x = 2, p_x = 3, y = 4, p_y = 5 };

inline constexpr std::array<Generator, 6> kAllGenerators = {Generator::q, Generator::p,   Generator::x,
                                                            Generator::p_x, Generator::y, Generator::p_y};

/// Basis order used by every matrix and report: (q, p, x, y, p_x, p_y).
inline constexpr std::array<Generator, 6> kBasisOrder = {Generator::q, Generator::p,   Generator::x,
                                                         Generator::y, Generator::p_x, Generator::p_y};

std::string_view name(Generator g);
std::optional<Generator> generator_from_name(std::string_view text);

/// p_x and p_y are the unobservable shift/boost operators; everything else is observable.
constexpr bool is_observable(Generator g) { return g != Generator::p_x && g != Generator::p_y; }
constexpr bool is_shift(Generator g) { return !is_observable(g); }

/// Second element of the pair (q,p), (x,p_x), (y,p_y).
constexpr bool is_momentum(Generator g) {
  return g == Generator::p || g == Generator::p_x || g == Generator::p_y;
}
constexpr Generator conjugate(Generator g) {
  const auto idx = static_cast<std::uint8_t>(g);
  return static_cast<Generator>(idx % 2 == 0 ? idx + 1 : idx - 1);
}
constexpr std::size_t index(Generator g) { return static_cast<std::size_t>(g); }

/// q^a p^b x^c p_x^d y^e p_y^g, exponents indexed by Generator.
struct Monomial {
  std::array<std::uint32_t, 6> exponents{};

  static Monomial unit() { return {}; }
  static Monomial of(Generator g, std::uint32_t power = 1) {
    Monomial m;
    m.exponents[index(g)] = power;
    return m;
  }

  std::uint32_t operator[](Generator g) const { return exponents[index(g)]; }
  std::uint32_t degree() const;
  bool is_unit() const { return degree() == 0; }
  bool has_shift() const { return exponents[index(Generator::p_x)] + exponents[index(Generator::p_y)] > 0; }

  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// Normal-ordered polynomial; never stores zero coefficients.
class OperatorPolynomial {
 public:
  using Terms = std::map<Monomial, ExactComplex>;

  OperatorPolynomial() = default;
  OperatorPolynomial(const ExactComplex& c);  // NOLINT(google-explicit-constructor)
  OperatorPolynomial(Generator g);            // NOLINT(google-explicit-constructor)

  static OperatorPolynomial term(const Monomial& m, const ExactComplex& c);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  std::uint32_t degree() const;
  bool has_shift() const;
  bool uses(Generator g) const;

  /// Coefficient of `m`, zero when absent.
  ExactComplex coefficient(const Monomial& m) const;

  /// Constant term when the polynomial is a constant, nothing otherwise.
  std::optional<ExactComplex> as_constant() const;

  void add_term(const Monomial& m, const ExactComplex& c);

  OperatorPolynomial& operator+=(const OperatorPolynomial& o);
  OperatorPolynomial& operator-=(const OperatorPolynomial& o);
  OperatorPolynomial& operator*=(const ExactComplex& c);
  OperatorPolynomial operator-() const;

  friend OperatorPolynomial operator+(OperatorPolynomial a, const OperatorPolynomial& b) { return a += b; }
  friend OperatorPolynomial operator-(OperatorPolynomial a, const OperatorPolynomial& b) { return a -= b; }
  friend OperatorPolynomial operator*(OperatorPolynomial a, const ExactComplex& c) { return a *= c; }
  friend OperatorPolynomial operator*(const ExactComplex& c, OperatorPolynomial a) { return a *= c; }
  /// Operator product (same as multiply()).
  friend OperatorPolynomial operator*(const OperatorPolynomial& a, const OperatorPolynomial& b);

  friend bool operator==(const OperatorPolynomial& a, const OperatorPolynomial& b) { return a.terms_ == b.terms_; }

 private:
  Terms terms_;
};

/// Associative product under the canonical commutation relations, normal ordered.
OperatorPolynomial multiply(const OperatorPolynomial& a, const OperatorPolynomial& b);

OperatorPolynomial commutator(const OperatorPolynomial& a, const OperatorPolynomial& b);

/// [a,[b,c]] + [b,[c,a]] + [c,[a,b]]; identically zero.
OperatorPolynomial jacobi_residual(const OperatorPolynomial& a, const OperatorPolynomial& b,
                                   const OperatorPolynomial& c);

/// [y, -k x] + [p, k q]. If some K_i gave both [p,K_i] = -k x and [y,K_i] = -k q
/// while [y,p] = 0, the Jacobi identity would force this to vanish; it equals -i k.
OperatorPolynomial nogo_witness(const ExactComplex& k);

/// Formal partial derivative of a classical function (no p_x, p_y).
/// Throws ShiftOperatorPresent otherwise.
OperatorPolynomial partial_derivative(const OperatorPolynomial& h, Generator v);

/// Liouvillian (dh/dy) p_x - (dh/dx) p_y with the derivative factor on the left.
OperatorPolynomial koopmanize(const OperatorPolynomial& h);

/// H_q + koopmanize(H_c + H_int): the quantum part stays an operator, the
/// classical and interaction parts are replaced by their Liouvillian.
OperatorPolynomial hybridize(const OperatorPolynomial& h_total);

/// -i [x_op, k_op], i.e. dX/dt under the generator k_op.
OperatorPolynomial heisenberg_rhs(const OperatorPolynomial& x_op, const OperatorPolynomial& k_op);

/// Canonical text, terms sorted by descending exponent vector, re-parseable by the expression frontend.
std::string to_string(const OperatorPolynomial& poly);
std::string to_string(const Monomial& m);

/// Numeric value of a polynomial treated as an ordinary function of commuting variables.
std::complex<double> evaluate(const OperatorPolynomial& poly, const std::array<double, 6>& values);

}  // namespace hybridlab
