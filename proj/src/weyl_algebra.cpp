#include "hybridlab/weyl_algebra.hpp"

#include <numeric>
#include <vector>

#include "hybridlab/error.hpp"

namespace hybridlab {

namespace {

constexpr std::array<std::string_view, 6> kNames = {"q", "p", "x", "p_x", "y", "p_y"};

using boost::multiprecision::cpp_int;

cpp_int binomial(std::uint32_t n, std::uint32_t k) {
  if (k > n) return 0;
  cpp_int r = 1;
  for (std::uint32_t j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

cpp_int factorial(std::uint32_t n) {
  cpp_int r = 1;
  for (std::uint32_t j = 2; j <= n; ++j) r *= j;
  return r;
}

// (-i)^s
ExactComplex minus_i_power(std::uint32_t s) {
  switch (s % 4) {
    case 0: return {1, 0};
    case 1: return {0, -1};
    case 2: return {-1, 0};
    default: return {0, 1};
  }
}

struct PairTerm {
  std::uint32_t pos;
  std::uint32_t mom;
  ExactComplex coeff;
};

// (pos^a mom^b)(pos^c mom^d) reordered with mom pos = pos mom - i.
std::vector<PairTerm> pair_product(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) {
  std::vector<PairTerm> out;
  const std::uint32_t smax = std::min(b, c);
  out.reserve(smax + 1);
  for (std::uint32_t s = 0; s <= smax; ++s) {
    const cpp_int weight = binomial(b, s) * binomial(c, s) * factorial(s);
    out.push_back({a + c - s, b + d - s, minus_i_power(s) * ExactComplex(Rational(weight))});
  }
  return out;
}

void multiply_monomials(const Monomial& lhs, const Monomial& rhs, const ExactComplex& scale,
                        OperatorPolynomial& acc) {
  std::array<std::vector<PairTerm>, 3> pairs;
  for (std::size_t j = 0; j < 3; ++j) {
    pairs[j] = pair_product(lhs.exponents[2 * j], lhs.exponents[2 * j + 1], rhs.exponents[2 * j],
                            rhs.exponents[2 * j + 1]);
  }
  for (const auto& t0 : pairs[0]) {
    for (const auto& t1 : pairs[1]) {
      for (const auto& t2 : pairs[2]) {
        Monomial m;
        m.exponents = {t0.pos, t0.mom, t1.pos, t1.mom, t2.pos, t2.mom};
        acc.add_term(m, scale * t0.coeff * t1.coeff * t2.coeff);
      }
    }
  }
}

void require_classical(const OperatorPolynomial& h, std::string_view what) {
  if (h.has_shift()) {
    throw ShiftOperatorPresent(std::string(what) + ": argument contains p_x or p_y: " + to_string(h));
  }
}

}  // namespace

std::string_view name(Generator g) { return kNames[index(g)]; }

std::optional<Generator> generator_from_name(std::string_view text) {
  for (Generator g : kAllGenerators) {
    if (kNames[index(g)] == text) return g;
  }
  return std::nullopt;
}

std::uint32_t Monomial::degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0U); }

OperatorPolynomial::OperatorPolynomial(const ExactComplex& c) { add_term(Monomial::unit(), c); }

OperatorPolynomial::OperatorPolynomial(Generator g) { add_term(Monomial::of(g), ExactComplex(1)); }

OperatorPolynomial OperatorPolynomial::term(const Monomial& m, const ExactComplex& c) {
  OperatorPolynomial out;
  out.add_term(m, c);
  return out;
}

std::uint32_t OperatorPolynomial::degree() const {
  std::uint32_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

bool OperatorPolynomial::has_shift() const {
  for (const auto& [m, c] : terms_) {
    if (m.has_shift()) return true;
  }
  return false;
}

bool OperatorPolynomial::uses(Generator g) const {
  for (const auto& [m, c] : terms_) {
    if (m[g] > 0) return true;
  }
  return false;
}

ExactComplex OperatorPolynomial::coefficient(const Monomial& m) const {
  const auto it = terms_.find(m);
  return it == terms_.end() ? ExactComplex{} : it->second;
}

std::optional<ExactComplex> OperatorPolynomial::as_constant() const {
  if (terms_.empty()) return ExactComplex{};
  if (terms_.size() == 1 && terms_.begin()->first.is_unit()) return terms_.begin()->second;
  return std::nullopt;
}

void OperatorPolynomial::add_term(const Monomial& m, const ExactComplex& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

OperatorPolynomial& OperatorPolynomial::operator+=(const OperatorPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

OperatorPolynomial& OperatorPolynomial::operator-=(const OperatorPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

OperatorPolynomial& OperatorPolynomial::operator*=(const ExactComplex& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coeff] : terms_) coeff *= c;
  return *this;
}

OperatorPolynomial OperatorPolynomial::operator-() const {
  OperatorPolynomial out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

OperatorPolynomial operator*(const OperatorPolynomial& a, const OperatorPolynomial& b) { return multiply(a, b); }

OperatorPolynomial multiply(const OperatorPolynomial& a, const OperatorPolynomial& b) {
  OperatorPolynomial out;
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) multiply_monomials(ma, mb, ca * cb, out);
  }
  return out;
}

OperatorPolynomial commutator(const OperatorPolynomial& a, const OperatorPolynomial& b) {
  return multiply(a, b) - multiply(b, a);
}

OperatorPolynomial jacobi_residual(const OperatorPolynomial& a, const OperatorPolynomial& b,
                                   const OperatorPolynomial& c) {
  return commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b));
}

OperatorPolynomial nogo_witness(const ExactComplex& k) {
  const OperatorPolynomial target_p = -k * OperatorPolynomial(Generator::x);  // desired [p, K_i]
  const OperatorPolynomial target_y = -k * OperatorPolynomial(Generator::q);  // desired [y, K_i]
  // Jacobi with [y,p] = 0 requires [y,[p,K_i]] = [p,[y,K_i]].
  return commutator(Generator::y, target_p) - commutator(Generator::p, target_y);
}

OperatorPolynomial partial_derivative(const OperatorPolynomial& h, Generator v) {
  require_classical(h, "partial_derivative");
  OperatorPolynomial out;
  for (const auto& [m, c] : h.terms()) {
    const std::uint32_t e = m[v];
    if (e == 0) continue;
    Monomial lowered = m;
    lowered.exponents[index(v)] = e - 1;
    out.add_term(lowered, c * ExactComplex(static_cast<long long>(e)));
  }
  return out;
}

OperatorPolynomial koopmanize(const OperatorPolynomial& h) {
  require_classical(h, "koopmanize");
  return multiply(partial_derivative(h, Generator::y), Generator::p_x) -
         multiply(partial_derivative(h, Generator::x), Generator::p_y);
}

OperatorPolynomial hybridize(const OperatorPolynomial& h_total) {
  require_classical(h_total, "hybridize");
  OperatorPolynomial quantum;
  OperatorPolynomial classical;
  for (const auto& [m, c] : h_total.terms()) {
    const bool has_classical = m[Generator::x] + m[Generator::y] > 0;
    if (!has_classical) {
      quantum.add_term(m, c);
      continue;
    }
    if (m[Generator::p] > 0) {
      throw UnsupportedMixing("hybridize: monomial " + to_string(m) +
                              " couples the quantum momentum p to classical generators");
    }
    classical.add_term(m, c);  // pure classical or q-x/y interaction
  }
  return quantum + koopmanize(classical);
}

OperatorPolynomial heisenberg_rhs(const OperatorPolynomial& x_op, const OperatorPolynomial& k_op) {
  return commutator(x_op, k_op) * ExactComplex(Rational(0), Rational(-1));
}

std::string to_string(const Monomial& m) {
  std::string out;
  for (Generator g : kAllGenerators) {
    const std::uint32_t e = m[g];
    if (e == 0) continue;
    if (!out.empty()) out += '*';
    out += name(g);
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out.empty() ? "1" : out;
}

std::string to_string(const OperatorPolynomial& poly) {
  if (poly.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = poly.terms().rbegin(); it != poly.terms().rend(); ++it) {
    const Monomial& m = it->first;
    ExactComplex c = it->second;
    // Pull a leading minus out of real and purely imaginary coefficients.
    const bool negative = (c.is_real() && c.re < 0) || (c.re == 0 && c.im < 0);
    if (negative) c = -c;
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;

    if (m.is_unit()) {
      out += format_complex(c);
    } else if (c == ExactComplex(1)) {
      out += to_string(m);
    } else {
      out += format_complex(c) + "*" + to_string(m);
    }
  }
  return out;
}

std::complex<double> evaluate(const OperatorPolynomial& poly, const std::array<double, 6>& values) {
  std::complex<double> total{0.0, 0.0};
  for (const auto& [m, c] : poly.terms()) {
    double v = 1.0;
    for (Generator g : kAllGenerators) {
      for (std::uint32_t e = 0; e < m[g]; ++e) v *= values[index(g)];
    }
    total += c.to_complex() * v;
  }
  return total;
}

}  // namespace hybridlab
