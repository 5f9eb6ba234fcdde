// Acceptance criteria 1-10. `acceptance N` runs one criterion, no argument runs all.
// Each criterion prints one PASS/FAIL line; the exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hybridlab/cli.hpp"
#include "hybridlab/expr.hpp"
#include "hybridlab/moment_dynamics.hpp"
#include "hybridlab/observables.hpp"
#include "hybridlab/phase_space.hpp"
#include "hybridlab/weyl_algebra.hpp"

using namespace hybridlab;

namespace {

constexpr double kPi = std::numbers::pi;
const double kVacuum = 1.0 / std::numbers::sqrt2;
const std::string kBenchmark = cli::kBenchmarkHamiltonian;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

OperatorPolynomial poly(const std::string& text, const char* k = "0.2") {
  return expr::compile(text, {{"k", ExactComplex(parse_decimal(k))}});
}

// 1. Symbolic regression of the benchmark equations of motion.
Outcome criterion1() {
  Outcome o;
  const auto k_op = hybridize(poly(kBenchmark));
  auto rhs = [&](Generator g) { return heisenberg_rhs(OperatorPolynomial(g), k_op); };
  auto eq = [&](Generator g, const std::string& expected) {
    const auto got = rhs(g);
    o.check(got == poly(expected),
            "d" + std::string(name(g)) + "/dt = " + to_string(got) + "  (expected " + to_string(poly(expected)) + ")");
  };
  eq(Generator::x, "y");
  eq(Generator::y, "-x - k*q");
  eq(Generator::q, "p");
  eq(Generator::p, "-q - k*p_y");
  eq(Generator::p_x, "p_y");
  eq(Generator::p_y, "-p_x");
  const auto l = koopmanize(poly("(x^2 + y^2)/2"));
  o.check(l == poly("y*p_x - x*p_y"), "koopmanize((x^2+y^2)/2) = " + to_string(l));

  std::ostringstream out, err;
  cli::run({"derive", "--hamiltonian", kBenchmark, "--k", "0.2"}, out, err);
  o.check(out.str().find("dp/dt = -q - 0.2*p_y\n") != std::string::npos,
          "derive output contains \"dp/dt = -q - 0.2*p_y\"");
  return o;
}

// 2. Hamilton's equations from koopmanize for random classical Hamiltonians.
Outcome criterion2() {
  Outcome o;
  std::mt19937 rng(20240601);
  std::uniform_int_distribution<int> num(-6, 6), den(1, 5), deg(0, 3), terms(1, 6), var(0, 1);
  int good = 0;
  for (int trial = 0; trial < 50; ++trial) {
    OperatorPolynomial h;
    for (int t = terms(rng); t > 0; --t) {
      Monomial m;
      for (int d = deg(rng); d > 0; --d) ++m.exponents[index(var(rng) ? Generator::x : Generator::y)];
      h.add_term(m, ExactComplex(Rational(num(rng), den(rng))));
    }
    const auto l = koopmanize(h);
    const bool ok = heisenberg_rhs(OperatorPolynomial(Generator::x), l) == partial_derivative(h, Generator::y) &&
                    heisenberg_rhs(OperatorPolynomial(Generator::y), l) == -partial_derivative(h, Generator::x);
    good += ok ? 1 : 0;
  }
  o.check(good == 50, std::to_string(good) + "/50 random Hamiltonians reproduce dx/dt = dH/dy, dy/dt = -dH/dx");
  return o;
}

// 3. Jacobi no-go certificate.
Outcome criterion3() {
  Outcome o;
  for (const char* k : {"0", "0.2", "1"}) {
    const ExactComplex kv(parse_decimal(k));
    const auto w = nogo_witness(kv);
    o.check(w == OperatorPolynomial(-ExactComplex::i() * kv), std::string("k = ") + k + ": witness = " + to_string(w));
    o.check(w.is_zero() == kv.is_zero(), std::string("k = ") + k + ": nonzero iff k != 0");
  }
  return o;
}

// 4. Normal modes of the classical benchmark.
Outcome criterion4() {
  Outcome o;
  const auto g = derive_hamilton_generator(poly(kBenchmark));
  const Eigen::EigenSolver<Eigen::MatrixXd> eig(g.matrix);
  const std::vector<double> expected = {std::sqrt(1.2), std::sqrt(0.8), -std::sqrt(0.8), -std::sqrt(1.2)};
  for (double w : expected) {
    double best = 1e300;
    for (Eigen::Index j = 0; j < eig.eigenvalues().size(); ++j) {
      best = std::min(best, std::abs(eig.eigenvalues()(j) - std::complex<double>(0, w)));
    }
    o.check(best <= 1e-12, "eigenvalue i*" + fmt(w) + " matched to " + fmt(best));
  }
  const auto report = classify_spectrum(g);
  o.check(report.clusters.size() == 4 && !report.has_secular_growth(), "classify_spectrum: four simple, bounded");

  MomentState s0 = default_moment_state(g.basis);
  s0.mean(static_cast<Eigen::Index>(g.slot(Generator::q))) = 1.0;
  const double T = 200.0, dt = 0.05;
  std::vector<double> t, v;
  for (int j = 0; j * dt <= T + 1e-9; ++j) {
    t.push_back(j * dt);
    v.push_back(propagate_moments(g, s0, t.back()).mean_of(Generator::q));
  }
  // Plain DFT on the bins 2 pi m / T.
  const double bin = 2 * kPi / T;
  std::vector<double> power;
  for (int m = 0; m * bin < 3.0; ++m) {
    std::complex<double> acc = 0;
    for (std::size_t j = 0; j < t.size(); ++j) acc += v[j] * std::exp(std::complex<double>(0, -m * bin * t[j]));
    power.push_back(std::abs(acc));
  }
  std::vector<std::pair<double, double>> peaks;
  for (std::size_t m = 1; m + 1 < power.size(); ++m) {
    if (power[m] > power[m - 1] && power[m] >= power[m + 1]) peaks.emplace_back(power[m], m * bin);
  }
  std::sort(peaks.rbegin(), peaks.rend());
  if (peaks.size() < 2) {
    o.check(false, "fewer than two spectral peaks");
    return o;
  }
  std::vector<double> freq = {peaks[0].second, peaks[1].second};
  std::sort(freq.begin(), freq.end());
  o.check(std::abs(freq[0] - std::sqrt(0.8)) <= bin, "DFT peak " + fmt(freq[0]) + " vs sqrt(0.8), bin " + fmt(bin));
  o.check(std::abs(freq[1] - std::sqrt(1.2)) <= bin, "DFT peak " + fmt(freq[1]) + " vs sqrt(1.2), bin " + fmt(bin));
  return o;
}

cli::RunConfig hybrid_moment_run() {
  cli::RunConfig c;
  c.mode = cli::Mode::hybrid;
  c.k = "0.2";
  c.engine = cli::Engine::moments;
  c.dt = 0.01;
  c.t_final = 100.0;
  c.observers = {"q^2", "(q^2 + p^2)/2"};
  return c;
}

// Resonant oscillator driven by the free shift operators, from m = 0, S = I/2.
double q2_closed_form(double k, double t) {
  const double s = std::sin(t), c = std::cos(t);
  return 0.5 + k * k / 8.0 * (t * t * s * s + (s - t * c) * (s - t * c));
}

// 5. Secular growth in the hybrid model.
Outcome criterion5() {
  Outcome o;
  const auto run = cli::run_moments(hybrid_moment_run());
  const auto t = run.table.values("t");
  const auto q2 = run.table.values("q^2");
  double worst = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    worst = std::max(worst, std::abs(q2[j] - q2_closed_form(0.2, t[j])) / q2_closed_form(0.2, t[j]));
  }
  o.check(t.back() == 100.0 && worst <= 1e-8, "<q^2> vs closed form over [0, 100]: max relative error " + fmt(worst));
  o.check(run.envelope && run.envelope->degree == 1,
          "envelope degree of sqrt(<q^2>) = " + (run.envelope ? std::to_string(run.envelope->degree) : "none"));

  const auto g = derive_generator(hybridize(poly(kBenchmark)));
  const auto report = classify_spectrum(g);
  bool structure = report.clusters.size() == 2;
  for (const auto& c : report.clusters) {
    structure = structure && c.algebraic == 3 && c.geometric == 1 && std::abs(std::abs(c.eigenvalue.imag()) - 1) < 1e-5;
  }
  o.check(structure, "classify_spectrum: +-i with algebraic 3, geometric 1");
  // Rank oracle: nullity of (G -+ iI)^m is 1, 2, 3, 3.
  for (double sign : {1.0, -1.0}) {
    const Eigen::MatrixXcd a = g.matrix.cast<std::complex<double>>() -
                               std::complex<double>(0, sign) * Eigen::MatrixXcd::Identity(6, 6);
    Eigen::MatrixXcd pw = Eigen::MatrixXcd::Identity(6, 6);
    std::string seq;
    bool ok = true;
    const int expected[] = {1, 2, 3, 3};
    for (int m = 0; m < 4; ++m) {
      pw = pw * a;
      const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pw);
      int nullity = 0;
      for (Eigen::Index i = 0; i < 6; ++i) nullity += svd.singularValues()(i) < 1e-10 * svd.singularValues()(0) ? 1 : 0;
      ok = ok && nullity == expected[m];
      seq += std::to_string(nullity) + (m < 3 ? "," : "");
    }
    o.check(ok, std::string("rank oracle at ") + (sign > 0 ? "+i" : "-i") + ": nullities " + seq);
  }
  return o;
}

// 6. The Koopmanian is conserved, the quantum energy is not.
Outcome criterion6() {
  Outcome o;
  const auto run = cli::run_moments(hybrid_moment_run());
  o.check(run.generator_drift < 1e-10, "relative drift of <K>: " + fmt(run.generator_drift));
  const auto e = run.table.values("(q^2 + p^2)/2");
  o.check(e.back() > 10.0 * e.front(), "<(q^2+p^2)/2>: " + fmt(e.front()) + " -> " + fmt(e.back()));
  return o;
}

GridState vacuum(const GridSpec& spec) {
  const std::vector<double> means(spec.rank(), 0.0);
  const std::vector<double> widths(spec.rank(), kVacuum);
  return gaussian_state(spec, means, widths);
}

// 7. Grid engine against the moment engine.
Outcome criterion7() {
  Outcome o;
  const auto spec = GridSpec::hybrid(64, 8.0);
  const auto k_op = hybridize(poly(kBenchmark));
  // Every first and second moment that is diagonal in a single representation per axis.
  const std::vector<std::string> names = {"q", "p", "x", "y", "q^2", "p^2", "x^2", "y^2",
                                          "q*x", "q*y", "p*x", "p*y", "x*y"};
  std::vector<OperatorPolynomial> obs;
  for (const auto& n : names) obs.push_back(poly(n));
  obs.push_back(k_op);
  const auto run = evolve(vacuum(spec), compile_splitting(k_op, spec, 0.01), 10.0, obs, {.stride = 10});
  const auto g = derive_generator(k_op);
  const auto s0 = default_moment_state(g.basis);
  double worst = 0.0;
  std::string worst_name;
  for (std::size_t j = 0; j < run.times.size(); ++j) {
    const auto s = propagate_moments(g, s0, run.times[j]);
    for (std::size_t n = 0; n < names.size(); ++n) {
      const double d = std::abs(run.series[n][j] - quadratic_expectation(obs[n], s));
      if (d > worst) {
        worst = d;
        worst_name = names[n];
      }
    }
  }
  o.check(std::abs(run.times.back() - 10.0) < 1e-12 && worst < 1e-3,
          "max |grid - moments| over first/second moments: " + fmt(worst) + " (" + worst_name + ")");
  o.check(run.norm_drift < 1e-10, "norm drift " + fmt(run.norm_drift));
  const auto& k_series = run.series[names.size()];
  double drift = 0.0;
  for (double v : k_series) drift = std::max(drift, std::abs(v - k_series.front()));
  drift /= std::abs(k_series.front());
  o.check(drift < 1e-3, "relative drift of <K> " + fmt(drift));
  return o;
}

// 8. Period of the harmonic Liouvillian.
Outcome criterion8() {
  Outcome o;
  const auto spec = GridSpec::classical(128, 8.0);
  const double coarse = period_residual(spec, 2 * kPi / 512);
  const double fine = period_residual(spec, 2 * kPi / 1024);
  const double ratio = coarse / fine;
  o.check(ratio >= 3.5 && ratio <= 4.5, "residual ratio " + fmt(ratio) + " (" + fmt(coarse) + " / " + fmt(fine) + ")");
  o.check(fine < 1e-4, "residual at dt = 2 pi / 1024: " + fmt(fine));
  return o;
}

// 9. Decoupled hybrid run against a standalone oscillator.
Outcome criterion9() {
  Outcome o;
  const auto spec = GridSpec::hybrid(64, 8.0);
  const auto plan = compile_splitting(hybridize(poly(kBenchmark, "0")), spec, 0.01);
  const GridSpec line({AxisSpec{Axis::q, 8.0, 64}});
  const std::vector<double> m = {0.0};
  const std::vector<double> w = {kVacuum};
  const auto line_plan = compile_splitting(poly("(q^2 + p^2)/2"), line, 0.01);
  GridState hybrid = vacuum(spec);
  GridState alone = gaussian_state(line, m, w);
  const double dq = line.axes()[0].spacing();
  double min_purity = 1.0, worst_diag = 0.0;
  for (int seg = 0; seg < 10; ++seg) {
    hybrid = evolve(hybrid, plan, 1.0, {}, {.stride = 1000}).final_state;
    alone = evolve(alone, line_plan, 1.0, {}, {.stride = 1000}).final_state;
    const auto rho = reduced_quantum_density(hybrid);
    min_purity = std::min(min_purity, rho.purity());
    const auto phi = alone.amplitudes();
    for (std::size_t j = 0; j < phi.size(); ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      worst_diag = std::max(worst_diag, std::abs(rho.matrix(jj, jj).real() / dq - std::norm(phi[j])));
    }
  }
  o.check(min_purity > 1.0 - 1e-6, "minimum purity over t = 1..10: 1 - " + fmt(1.0 - min_purity));
  o.check(worst_diag < 1e-6, "max |diag rho - |phi|^2| (density units): " + fmt(worst_diag));
  return o;
}

// 10. Purification of random diagonal distributions.
Outcome criterion10() {
  Outcome o;
  std::mt19937 rng(77);
  std::uniform_int_distribution<Eigen::Index> dim(1, 64);
  std::exponential_distribution<double> weight(1.0);
  std::normal_distribution<double> n01;
  double diag_err = 0.0, second = 0.0;
  int exact_means = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    const Eigen::Index d = dim(rng);
    Eigen::VectorXd dist(d);
    for (Eigen::Index i = 0; i < d; ++i) dist(i) = weight(rng);
    dist /= dist.sum();
    const auto pure = purify_diagonal(dist);
    diag_err = std::max(diag_err, (pure.rho.matrix().diagonal().real() - dist).cwiseAbs().maxCoeff());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(pure.rho.matrix());
    if (d > 1) second = std::max(second, eig.eigenvalues()(d - 2));
    Eigen::VectorXd a(d);
    for (Eigen::Index i = 0; i < d; ++i) a(i) = n01(rng);
    double mean = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) mean += dist(i) * a(i);
    const auto e = trace_expectation(pure.rho, a.cast<std::complex<double>>().asDiagonal().toDenseMatrix());
    exact_means += e.value == mean ? 1 : 0;
  }
  o.check(diag_err <= 1e-15, "diagonal error " + fmt(diag_err));
  o.check(second < 1e-12, "second eigenvalue " + fmt(second));
  o.check(exact_means == trials, std::to_string(exact_means) + "/" + std::to_string(trials) + " diagonal means exact");
  return o;
}

struct Criterion {
  std::function<Outcome()> run;
  double budget_seconds;
  const char* title;
};

const std::vector<Criterion> kCriteria = {
    {criterion1, 1.0, "symbolic benchmark regression"},
    {criterion2, 5.0, "Hamilton-equation recovery"},
    {criterion3, 1.0, "no-go certificate"},
    {criterion4, 10.0, "normal modes"},
    {criterion5, 10.0, "secular growth"},
    {criterion6, 10.0, "conservation contrast"},
    {criterion7, 600.0, "grid-moment cross-validation"},
    {criterion8, 60.0, "integer-spectrum period check"},
    {criterion9, 300.0, "decoupling sanity"},
    {criterion10, 5.0, "purification suite"},
};

bool run_one(std::size_t n) {
  const auto& c = kCriteria[n - 1];
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o.check(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.check(secs < c.budget_seconds, "runtime " + fmt(secs) + " s (budget " + fmt(c.budget_seconds) + " s)");
  std::printf("criterion %zu: %s  %s\n", n, o.pass ? "PASS" : "FAIL", c.title);
  for (const auto& note : o.notes) std::printf("    %s\n", note.c_str());
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  int failures = 0;
  if (argc > 1) {
    const long n = std::strtol(argv[1], nullptr, 10);
    if (n < 1 || n > static_cast<long>(kCriteria.size())) {
      std::fprintf(stderr, "usage: %s [1-%zu]\n", argv[0], kCriteria.size());
      return 2;
    }
    failures += run_one(static_cast<std::size_t>(n)) ? 0 : 1;
  } else {
    for (std::size_t n = 1; n <= kCriteria.size(); ++n) failures += run_one(n) ? 0 : 1;
  }
  return failures;
}
