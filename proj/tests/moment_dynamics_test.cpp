#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/numeric/odeint.hpp>

#include "hybridlab/error.hpp"
#include "hybridlab/expr.hpp"
#include "hybridlab/moment_dynamics.hpp"

using namespace hybridlab;
using doctest::Approx;

namespace {

const Generator q = Generator::q, p = Generator::p, x = Generator::x, y = Generator::y, px = Generator::p_x,
                py = Generator::p_y;

OperatorPolynomial poly(const std::string& text, const char* k = "0.2") {
  return expr::compile(text, {{"k", ExactComplex(parse_decimal(k))}});
}

const std::string kBenchmark = "(q^2 + p^2)/2 + (x^2 + y^2)/2 + k*q*x";

GeneratorMatrix hybrid_generator(const char* k = "0.2") { return derive_generator(hybridize(poly(kBenchmark, k))); }
GeneratorMatrix classical_generator(const char* k = "0.2") { return derive_hamilton_generator(poly(kBenchmark, k)); }

// Resonantly driven oscillator from the vacuum-like default state.
double q2_closed_form(double k, double t) {
  const double s = std::sin(t);
  const double c = std::cos(t);
  return 0.5 + k * k / 8.0 * (t * t * s * s + (s - t * c) * (s - t * c));
}

}  // namespace

TEST_CASE("generator of the hybrid benchmark") {
  const auto g = hybrid_generator();
  CHECK(g.dimension() == 6);
  std::map<std::pair<Generator, Generator>, double> expected = {
      {{q, p}, 1.0},  {{p, q}, -1.0},  {{p, py}, 0.2},  {{x, y}, 1.0},
      {{y, x}, -1.0}, {{y, q}, -0.2}, {{px, py}, 1.0}, {{py, px}, -1.0}};
  for (Generator r : kBasisOrder) {
    for (Generator c : kBasisOrder) {
      const auto it = expected.find({r, c});
      CHECK(g.at(r, c) == (it == expected.end() ? 0.0 : it->second));
    }
  }
  CHECK(g.affine.isZero());
}

TEST_CASE("generator of the harmonic liouvillian rotates both blocks") {
  const auto g = derive_generator(poly("y*p_x - x*p_y"));
  CHECK(g.at(x, y) == 1.0);
  CHECK(g.at(y, x) == -1.0);
  CHECK(g.at(px, py) == 1.0);
  CHECK(g.at(py, px) == -1.0);
  CHECK(g.matrix.cwiseAbs().sum() == 4.0);
}

TEST_CASE("generator errors and affine parts") {
  CHECK_THROWS_AS(derive_generator(poly("q^3")), NonlinearDynamics);
  const auto g = derive_generator(poly("p^2/2 + 3*q"));
  CHECK(g.affine(g.slot(p)) == -3.0);
  CHECK_THROWS_AS(derive_hamilton_generator(poly("q^2")).slot(px), InvalidArgument);
}

TEST_CASE("decoupled benchmark has a block-diagonal generator") {
  const auto g = hybrid_generator("0");
  for (Generator a : {q, p}) {
    for (Generator b : {x, y, px, py}) {
      CHECK(g.at(a, b) == 0.0);
      CHECK(g.at(b, a) == 0.0);
    }
  }
}

TEST_CASE("matrix exponential") {
  GeneratorMatrix zero{{q, p}, Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Zero(2)};
  CHECK(matrix_exponential(zero, 3.0).isApprox(Eigen::MatrixXd::Identity(2, 2)));
  GeneratorMatrix rot{{q, p}, Eigen::MatrixXd(2, 2), Eigen::VectorXd::Zero(2)};
  rot.matrix << 0, 1, -1, 0;
  Eigen::MatrixXd quarter(2, 2);
  quarter << 0, 1, -1, 0;
  CHECK((matrix_exponential(rot, std::numbers::pi / 2) - quarter).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("matrix exponential agrees with an adaptive ODE integration") {
  using namespace boost::numeric::odeint;
  const auto g = hybrid_generator();
  using State = std::vector<double>;
  State m(36, 0.0);
  for (int i = 0; i < 6; ++i) m[static_cast<std::size_t>(i * 6 + i)] = 1.0;
  auto rhs = [&](const State& s, State& ds, double) {
    for (int r = 0; r < 6; ++r) {
      for (int c = 0; c < 6; ++c) {
        double acc = 0.0;
        for (int j = 0; j < 6; ++j) acc += g.matrix(r, j) * s[static_cast<std::size_t>(j * 6 + c)];
        ds[static_cast<std::size_t>(r * 6 + c)] = acc;
      }
    }
  };
  integrate_adaptive(make_controlled(1e-14, 1e-14, runge_kutta_fehlberg78<State>()), rhs, m, 0.0, 1.0, 1e-3);
  const Eigen::MatrixXd e = matrix_exponential(g, 1.0);
  double worst = 0.0;
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) worst = std::max(worst, std::abs(e(r, c) - m[static_cast<std::size_t>(r * 6 + c)]));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("propagation from the default state") {
  const auto g = hybrid_generator();
  const auto s0 = default_moment_state(g.basis);
  const auto same = propagate_moments(g, s0, 0.0);
  CHECK(same.mean.isApprox(s0.mean));
  CHECK((same.second - s0.second).cwiseAbs().maxCoeff() < 1e-15);
  for (double t : {0.5, 3.0, 17.0, 42.0, 100.0}) {
    const auto s = propagate_moments(g, s0, t);
    CHECK(s.second_of(q, q) == Approx(q2_closed_form(0.2, t)).epsilon(1e-10));
  }
}

TEST_CASE("normal modes of the classical benchmark") {
  const auto g = classical_generator();
  MomentState s0 = default_moment_state(g.basis);
  s0.mean(static_cast<Eigen::Index>(g.slot(q))) = 1.0;
  for (double t : {0.0, 1.0, 7.5, 30.0}) {
    const auto s = propagate_moments(g, s0, t);
    const double oracle = (std::cos(std::sqrt(1.2) * t) + std::cos(std::sqrt(0.8) * t)) / 2;
    CHECK(s.mean_of(q) == Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("second moments stay symmetric with a positive covariance") {
  std::mt19937 rng(9);
  std::normal_distribution<double> n01;
  for (const char* k : {"0", "0.2", "0.7"}) {
    const auto g = hybrid_generator(k);
    MomentState s0 = default_moment_state(g.basis);
    for (Eigen::Index i = 0; i < 6; ++i) s0.mean(i) = n01(rng);
    s0.second += s0.mean * s0.mean.transpose();
    for (double t : {0.3, 5.0, 60.0}) {
      const auto s = propagate_moments(g, s0, t);
      CHECK((s.second - s.second.transpose()).cwiseAbs().maxCoeff() == 0.0);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.covariance());
      CHECK(eig.eigenvalues().minCoeff() > -1e-10 * std::max(1.0, eig.eigenvalues().maxCoeff()));
    }
  }
}

TEST_CASE("quadratic expectations") {
  const auto g = hybrid_generator();
  const auto s0 = default_moment_state(g.basis);
  CHECK(quadratic_expectation(poly("q^2"), s0) == 0.5);
  // <p q> = <(pq+qp)/2> + [p,q]/2 has a vanishing real part here.
  CHECK(quadratic_expectation(poly("p*q + q*p"), s0) == 0.0);
  CHECK_THROWS_AS(quadratic_expectation(poly("q^3"), s0), DegreeTooHigh);
  const auto k_op = hybridize(poly(kBenchmark));
  const auto h_q = poly("(q^2 + p^2)/2");
  const double k0 = quadratic_expectation(k_op, s0);
  double previous = quadratic_expectation(h_q, s0);
  for (int j = 1; j <= 1000; ++j) {
    const auto s = propagate_moments(g, s0, 0.1 * j);
    CHECK(std::abs(quadratic_expectation(k_op, s) - k0) <= 1e-10 * std::abs(k0));
    const double e = quadratic_expectation(h_q, s);
    CHECK(e > previous);
    previous = e;
  }
}

TEST_CASE("spectrum of the classical benchmark") {
  const auto r = classify_spectrum(classical_generator());
  REQUIRE(r.clusters.size() == 4);
  std::vector<double> im;
  for (const auto& c : r.clusters) {
    CHECK(std::abs(c.eigenvalue.real()) < 1e-12);
    CHECK(c.algebraic == 1);
    CHECK(c.geometric == 1);
    im.push_back(c.eigenvalue.imag());
  }
  std::sort(im.begin(), im.end());
  CHECK(im[0] == Approx(-std::sqrt(1.2)).epsilon(1e-12));
  CHECK(im[1] == Approx(-std::sqrt(0.8)).epsilon(1e-12));
  CHECK(im[2] == Approx(std::sqrt(0.8)).epsilon(1e-12));
  CHECK(im[3] == Approx(std::sqrt(1.2)).epsilon(1e-12));
  CHECK(r.bounded());
}

TEST_CASE("spectrum of the hybrid benchmark") {
  const auto r = classify_spectrum(hybrid_generator());
  REQUIRE(r.clusters.size() == 2);
  for (const auto& c : r.clusters) {
    CHECK(std::abs(std::abs(c.eigenvalue.imag()) - 1.0) < 1e-5);
    CHECK(c.algebraic == 3);
    CHECK(c.geometric == 1);
    CHECK(c.longest_chain == 3);
  }
  CHECK(r.has_secular_growth());
  CHECK(r.total_multiplicity() == 6);

  const auto free = classify_spectrum(hybrid_generator("0"));
  REQUIRE(free.clusters.size() == 2);
  for (const auto& c : free.clusters) {
    CHECK(c.algebraic == 3);
    CHECK(c.geometric == 3);
  }
  CHECK(free.bounded());
}

TEST_CASE("rank oracle for the hybrid Jordan structure") {
  // Independent check: nullity of (G - iI)^m grows 1, 2, 3 and then saturates.
  const auto g = hybrid_generator();
  const Eigen::MatrixXcd a = g.matrix.cast<std::complex<double>>() -
                             std::complex<double>(0, 1) * Eigen::MatrixXcd::Identity(6, 6);
  Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(6, 6);
  const std::vector<Eigen::Index> nullity = {1, 2, 3, 3};
  for (std::size_t m = 0; m < nullity.size(); ++m) {
    power = power * a;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(power);
    const auto& sv = svd.singularValues();
    Eigen::Index zeros = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) zeros += sv(i) < 1e-10 * sv(0) ? 1 : 0;
    CHECK(zeros == nullity[m]);
  }
}

TEST_CASE("spectral classification matches trajectory growth") {
  for (const char* k : {"0", "0.2", "0.5", "0.9"}) {
    CAPTURE(k);
    const auto cc = classical_generator(k);
    CHECK(classify_spectrum(cc).bounded());
    double worst = 0.0;
    for (double t = 0; t <= 200; t += 1.0) worst = std::max(worst, matrix_exponential(cc, t).norm());
    CHECK(worst < 10.0);
  }
  for (const char* k : {"0.05", "0.2", "0.5"}) {
    CAPTURE(k);
    const auto h = hybrid_generator(k);
    CHECK(classify_spectrum(h).has_secular_growth());
    CHECK(matrix_exponential(h, 200.0).norm() > 5.0 * matrix_exponential(h, 20.0).norm());
  }
  CHECK(classify_spectrum(classical_generator("1.5")).has_secular_growth());
}

TEST_CASE("envelope fits") {
  std::vector<double> t;
  for (int j = 0; j <= 2000; ++j) t.push_back(0.05 * j);
  auto series = [&](auto f) {
    std::vector<double> v;
    for (double s : t) v.push_back(f(s));
    return v;
  };
  CHECK(fit_envelope(t, series([](double s) { return std::sin(s); })).degree == 0);
  CHECK(fit_envelope(t, series([](double s) { return s * std::sin(s); })).degree == 1);
  CHECK(fit_envelope(t, series([](double s) { return s * s * std::sin(s); })).degree == 2);
  const auto lin = fit_envelope(t, series([](double s) { return 3.0 + 0.5 * s; }));
  CHECK(lin.degree == 1);
  CHECK(lin.coefficients[1] == Approx(0.5));
  CHECK(lin.residual >= 0.0);
  const std::vector<double> shortt(t.begin(), t.begin() + 100);
  CHECK_THROWS_AS(fit_envelope(shortt, std::vector<double>(100, 1.0)), InsufficientData);
  CHECK_THROWS_AS(fit_envelope(t, std::vector<double>(5, 1.0)), DimensionMismatch);
}

TEST_CASE("hybrid envelope is unbounded for nonzero coupling") {
  for (const char* k : {"0.1", "0.2", "0.4"}) {
    CAPTURE(k);
    const auto g = hybrid_generator(k);
    const auto s0 = default_moment_state(g.basis);
    std::vector<double> t, v;
    for (int j = 0; j <= 2000; ++j) {
      t.push_back(0.05 * j);
      v.push_back(std::sqrt(propagate_moments(g, s0, t.back()).second_of(q, q)));
    }
    CHECK(fit_envelope(t, v).degree >= 1);
  }
}
