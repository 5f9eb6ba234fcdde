#include "hybridlab/moment_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

#include "hybridlab/error.hpp"

namespace hybridlab {

namespace {

const std::vector<Generator> kFullBasis(kBasisOrder.begin(), kBasisOrder.end());
const std::vector<Generator> kObservableBasis = {Generator::q, Generator::p, Generator::x, Generator::y};

std::size_t find_slot(const std::vector<Generator>& basis, Generator g) {
  const auto it = std::find(basis.begin(), basis.end(), g);
  if (it == basis.end()) throw InvalidArgument("generator " + std::string(name(g)) + " is not in the basis");
  return static_cast<std::size_t>(it - basis.begin());
}

// Writes the affine expansion of `rhs` into row `row`; throws NonlinearDynamics otherwise.
void expand_affine(const OperatorPolynomial& rhs, Generator row_label, std::size_t row,
                   const std::vector<Generator>& basis, GeneratorMatrix& out) {
  for (const auto& [m, c] : rhs.terms()) {
    if (m.degree() > 1) {
      throw NonlinearDynamics("d" + std::string(name(row_label)) + "/dt is not affine in the generators: " +
                              to_string(rhs));
    }
    if (!c.is_real()) {
      throw InvalidArgument("d" + std::string(name(row_label)) + "/dt has a non-real coefficient: " +
                            to_string(rhs));
    }
    const double v = c.re.convert_to<double>();
    if (m.is_unit()) {
      out.affine(static_cast<Eigen::Index>(row)) = v;
      continue;
    }
    const Generator g = *std::find_if(kAllGenerators.begin(), kAllGenerators.end(),
                                      [&](Generator h) { return m[h] == 1; });
    const auto it = std::find(basis.begin(), basis.end(), g);
    if (it == basis.end()) {
      throw NonlinearDynamics("d" + std::string(name(row_label)) + "/dt leaves the basis through " +
                              std::string(name(g)) + ": " + to_string(rhs));
    }
    out.matrix(static_cast<Eigen::Index>(row), it - basis.begin()) = v;
  }
}

GeneratorMatrix empty_generator(const std::vector<Generator>& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  return {basis, Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};
}

// Numerical nullity of A using singular values below tol * max(1, sigma_max).
std::size_t nullity(const Eigen::MatrixXcd& a, double tol) {
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  std::size_t count = 0;
  for (Eigen::Index j = 0; j < sv.size(); ++j) {
    if (sv(j) <= tol * scale) ++count;
  }
  return count;
}

struct RankProfile {
  std::size_t geometric = 0;
  std::size_t chain = 0;
  std::size_t generalized = 0;  // nullity of (G - lambda)^size
};

RankProfile rank_profile(const Eigen::MatrixXd& g, std::complex<double> lambda, std::size_t size, double tol) {
  const Eigen::Index n = g.rows();
  const Eigen::MatrixXcd shifted =
      g.cast<std::complex<double>>() - lambda * Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd power = shifted;
  RankProfile out;
  for (std::size_t m = 1; m <= size; ++m) {
    const std::size_t nu = nullity(power, tol);
    if (m == 1) out.geometric = nu;
    if (out.chain == 0 && nu >= size) out.chain = m;
    out.generalized = nu;
    if (m < size) power = power * shifted;
  }
  if (out.chain == 0) out.chain = size;
  return out;
}

std::vector<std::vector<std::size_t>> single_linkage(const std::vector<std::complex<double>>& values,
                                                     const std::vector<std::size_t>& members, double radius) {
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<bool> used(members.size(), false);
  for (std::size_t s = 0; s < members.size(); ++s) {
    if (used[s]) continue;
    std::vector<std::size_t> cluster{members[s]};
    used[s] = true;
    for (std::size_t head = 0; head < cluster.size(); ++head) {
      for (std::size_t j = 0; j < members.size(); ++j) {
        if (!used[j] && std::abs(values[cluster[head]] - values[members[j]]) <= radius) {
          used[j] = true;
          cluster.push_back(members[j]);
        }
      }
    }
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

std::complex<double> cluster_mean(const std::vector<std::complex<double>>& values,
                                  const std::vector<std::size_t>& cluster) {
  std::complex<double> sum{0.0, 0.0};
  for (std::size_t j : cluster) sum += values[j];
  return sum / static_cast<double>(cluster.size());
}

std::vector<double> least_squares_polyfit(std::span<const double> t, std::span<const double> y, int degree,
                                          double t_scale) {
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd a(n, degree + 1);
  Eigen::VectorXd b(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const double s = t[static_cast<std::size_t>(r)] / t_scale;
    double v = 1.0;
    for (int c = 0; c <= degree; ++c) {
      a(r, c) = v;
      v *= s;
    }
    b(r) = y[static_cast<std::size_t>(r)];
  }
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  std::vector<double> coeffs(static_cast<std::size_t>(degree + 1));
  double scale = 1.0;
  for (int c = 0; c <= degree; ++c) {
    coeffs[static_cast<std::size_t>(c)] = x(c) / scale;
    scale *= t_scale;
  }
  return coeffs;
}

}  // namespace

std::string basis_label(Generator g) { return std::string(name(g)); }

std::size_t GeneratorMatrix::slot(Generator g) const { return find_slot(basis, g); }

double MomentState::mean_of(Generator g) const { return mean(static_cast<Eigen::Index>(find_slot(basis, g))); }

double MomentState::second_of(Generator a, Generator b) const {
  return second(static_cast<Eigen::Index>(find_slot(basis, a)), static_cast<Eigen::Index>(find_slot(basis, b)));
}

GeneratorMatrix derive_generator(const OperatorPolynomial& k_op) {
  GeneratorMatrix out = empty_generator(kFullBasis);
  for (std::size_t row = 0; row < kFullBasis.size(); ++row) {
    const Generator b = kFullBasis[row];
    expand_affine(heisenberg_rhs(OperatorPolynomial(b), k_op), b, row, kFullBasis, out);
  }
  return out;
}

GeneratorMatrix derive_hamilton_generator(const OperatorPolynomial& h) {
  GeneratorMatrix out = empty_generator(kObservableBasis);
  const std::array<OperatorPolynomial, 4> rhs = {
      partial_derivative(h, Generator::p), -partial_derivative(h, Generator::q),
      partial_derivative(h, Generator::y), -partial_derivative(h, Generator::x)};
  for (std::size_t row = 0; row < 4; ++row) expand_affine(rhs[row], kObservableBasis[row], row, kObservableBasis, out);
  return out;
}

Eigen::MatrixXd matrix_exponential(const GeneratorMatrix& g, double t) {
  const Eigen::MatrixXd scaled = g.matrix * t;
  return scaled.exp();
}

MomentState default_moment_state(const std::vector<Generator>& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  return {basis, Eigen::VectorXd::Zero(n), 0.5 * Eigen::MatrixXd::Identity(n, n)};
}

MomentState propagate_moments(const GeneratorMatrix& g, const MomentState& s0, double t) {
  if (g.basis != s0.basis) throw DimensionMismatch("moment state basis differs from generator basis");
  const auto n = static_cast<Eigen::Index>(g.dimension());
  // [[G, c], [0, 0]] exponentiates to [[M, w], [0, 1]] with w the affine response.
  Eigen::MatrixXd augmented = Eigen::MatrixXd::Zero(n + 1, n + 1);
  augmented.topLeftCorner(n, n) = g.matrix * t;
  augmented.topRightCorner(n, 1) = g.affine * t;
  const Eigen::MatrixXd flow = augmented.exp();
  const Eigen::MatrixXd m = flow.topLeftCorner(n, n);
  const Eigen::VectorXd w = flow.topRightCorner(n, 1);

  MomentState out{s0.basis, m * s0.mean + w, Eigen::MatrixXd()};
  const Eigen::VectorXd mw = m * s0.mean;
  out.second = m * s0.second * m.transpose() + mw * w.transpose() + w * mw.transpose() + w * w.transpose();
  out.second = 0.5 * (out.second + out.second.transpose()).eval();
  return out;
}

double quadratic_expectation(const OperatorPolynomial& k_op, const MomentState& s) {
  std::complex<double> total{0.0, 0.0};
  for (const auto& [m, c] : k_op.terms()) {
    const std::uint32_t deg = m.degree();
    if (deg > 2) throw DegreeTooHigh("quadratic_expectation: term " + to_string(m) + " has degree " + std::to_string(deg));
    std::vector<Generator> factors;
    for (Generator g : kAllGenerators) {
      for (std::uint32_t e = 0; e < m[g]; ++e) factors.push_back(g);
    }
    std::complex<double> value{1.0, 0.0};
    if (factors.size() == 1) {
      value = s.mean_of(factors[0]);
    } else if (factors.size() == 2) {
      const ExactComplex half_comm =
          *commutator(factors[0], factors[1]).as_constant() * ExactComplex(Rational(1, 2));
      value = s.second_of(factors[0], factors[1]) + half_comm.to_complex();
    }
    total += c.to_complex() * value;
  }
  return total.real();
}

std::size_t SpectrumReport::total_multiplicity() const {
  std::size_t total = 0;
  for (const auto& c : clusters) total += c.algebraic;
  return total;
}

bool SpectrumReport::has_secular_growth() const {
  for (const auto& c : clusters) {
    if (c.eigenvalue.real() > tolerance) return true;
    if (std::abs(c.eigenvalue.real()) <= tolerance && c.longest_chain > 1) return true;
  }
  return false;
}

SpectrumReport classify_spectrum(const GeneratorMatrix& g, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("classify_spectrum: tolerance must be positive");
  const Eigen::MatrixXd& a = g.matrix;
  const auto n = static_cast<std::size_t>(a.rows());
  SpectrumReport report;
  report.tolerance = tol;
  if (n == 0) return report;

  const Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  std::vector<std::complex<double>> values(n);
  for (std::size_t j = 0; j < n; ++j) values[j] = solver.eigenvalues()(static_cast<Eigen::Index>(j));

  // A Jordan block of size m splits under rounding into m eigenvalues at
  // distance ~ (eps |G|)^(1/m); gather candidates at the widest such radius and
  // let the rank test decide.
  const double norm = std::max(1.0, a.norm());
  const double eps = std::numeric_limits<double>::epsilon();
  const double radius = std::max(tol, std::pow(64.0 * eps * norm, 1.0 / static_cast<double>(n)));

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  for (const auto& candidate : single_linkage(values, all, radius)) {
    const std::complex<double> center = cluster_mean(values, candidate);
    const RankProfile profile = rank_profile(a, center, candidate.size(), tol);
    if (profile.generalized == candidate.size()) {
      report.clusters.push_back({center, candidate.size(), profile.geometric, profile.chain});
      continue;
    }
    report.ill_conditioned = true;
    for (const auto& sub : single_linkage(values, candidate, tol)) {
      const std::complex<double> c = cluster_mean(values, sub);
      const RankProfile p = rank_profile(a, c, sub.size(), tol);
      report.clusters.push_back({c, sub.size(), std::min(p.geometric, sub.size()), p.chain});
    }
  }
  std::sort(report.clusters.begin(), report.clusters.end(), [](const EigenCluster& l, const EigenCluster& r) {
    if (l.eigenvalue.imag() != r.eigenvalue.imag()) return l.eigenvalue.imag() > r.eigenvalue.imag();
    return l.eigenvalue.real() > r.eigenvalue.real();
  });
  return report;
}

EnvelopeFit fit_envelope(std::span<const double> times, std::span<const double> values) {
  constexpr double kPi = 3.14159265358979323846;
  constexpr double kResidualThreshold = 0.01;
  constexpr std::size_t kMinOscillationMaxima = 10;
  if (times.size() != values.size()) throw DimensionMismatch("fit_envelope: times and values differ in length");
  if (times.size() < 32) throw InsufficientData("fit_envelope: need at least 32 samples");
  const double t0 = times.front();
  const double span = times.back() - t0;
  if (span < 20.0 * kPi) throw InsufficientData("fit_envelope: samples must span at least 10 periods");

  std::vector<double> env_t;
  std::vector<double> env_v;
  for (std::size_t j = 1; j + 1 < values.size(); ++j) {
    const double a = std::abs(values[j]);
    if (a > std::abs(values[j - 1]) && a >= std::abs(values[j + 1])) {
      env_t.push_back(times[j]);
      env_v.push_back(a);
    }
  }
  if (env_t.size() < kMinOscillationMaxima) {
    env_t.assign(times.begin(), times.end());
    env_v.clear();
    for (double v : values) env_v.push_back(std::abs(v));
  }

  const double cut = t0 + 0.1 * span;
  std::vector<double> fit_t;
  std::vector<double> fit_v;
  for (std::size_t j = 0; j < env_t.size(); ++j) {
    if (env_t[j] >= cut) {
      fit_t.push_back(env_t[j]);
      fit_v.push_back(env_v[j]);
    }
  }
  if (fit_t.size() < 4) throw InsufficientData("fit_envelope: too few envelope points after the transient");

  const double norm = std::sqrt(std::inner_product(fit_v.begin(), fit_v.end(), fit_v.begin(), 0.0));
  EnvelopeFit best;
  for (int degree = 0; degree <= 2; ++degree) {
    EnvelopeFit fit;
    fit.degree = degree;
    fit.points = fit_t.size();
    fit.coefficients = least_squares_polyfit(fit_t, fit_v, degree, std::max(1.0, std::abs(fit_t.back())));
    double sq = 0.0;
    for (std::size_t j = 0; j < fit_t.size(); ++j) {
      double model = 0.0;
      for (int c = degree; c >= 0; --c) model = model * fit_t[j] + fit.coefficients[static_cast<std::size_t>(c)];
      sq += (model - fit_v[j]) * (model - fit_v[j]);
    }
    fit.residual = norm > 0.0 ? std::sqrt(sq) / norm : 0.0;
    best = fit;
    if (fit.residual < kResidualThreshold) break;
  }
  return best;
}

}  // namespace hybridlab
