#include "hybridlab/observables.hpp"

#include <cmath>
#include <string>

#include "hybridlab/error.hpp"

namespace hybridlab {

namespace {

void check_observable(const FiniteDensity& rho, const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols() || a.rows() != rho.dimension()) {
    throw DimensionMismatch("observable is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                            ", density is " + std::to_string(rho.dimension()) + "-dimensional");
  }
  const double residual = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (residual > 1e-10) {
    throw NonHermitianObservable("observable deviates from Hermitian by " + std::to_string(residual));
  }
}

// Row-by-row sum of rho_mn a_nm; for diagonal a this reduces term by term to sum_m rho_mm a_mm.
std::complex<double> trace_of_product(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& a) {
  std::complex<double> total{0.0, 0.0};
  for (Eigen::Index m = 0; m < rho.rows(); ++m) {
    std::complex<double> row{0.0, 0.0};
    for (Eigen::Index n = 0; n < rho.cols(); ++n) row += rho(m, n) * a(n, m);
    total += row;
  }
  return total;
}

}  // namespace

DensityValidation validate_density(const Eigen::MatrixXcd& rho, const DensityTolerances& tol) {
  DensityValidation report;
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    report.hermiticity_residual = INFINITY;
    report.trace_deviation = INFINITY;
    report.min_eigenvalue = -INFINITY;
    return report;
  }
  report.hermiticity_residual = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  report.trace_deviation = std::abs(rho.trace() - std::complex<double>(1.0, 0.0));
  const Eigen::MatrixXcd hermitian_part = 0.5 * (rho + rho.adjoint());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian_part, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = solver.eigenvalues().minCoeff();
  report.hermitian = report.hermiticity_residual <= tol.hermiticity;
  report.unit_trace = report.trace_deviation <= tol.trace;
  report.positive = report.min_eigenvalue >= tol.min_eigenvalue;
  return report;
}

FiniteDensity::FiniteDensity(Eigen::MatrixXcd rho, const DensityTolerances& tol) : rho_(std::move(rho)) {
  const DensityValidation v = validate_density(rho_, tol);
  if (!v.passed()) {
    throw InvalidArgument("not a density matrix: hermiticity residual " + std::to_string(v.hermiticity_residual) +
                          ", trace deviation " + std::to_string(v.trace_deviation) + ", min eigenvalue " +
                          std::to_string(v.min_eigenvalue));
  }
}

double FiniteDensity::purity() const { return trace_of_product(rho_, rho_).real(); }

Purification purify_diagonal(const Eigen::VectorXd& distribution) {
  if (distribution.size() == 0) throw InvalidArgument("purify_diagonal: empty distribution");
  if (distribution.minCoeff() < 0.0) throw InvalidArgument("purify_diagonal: negative probability");
  if (std::abs(distribution.sum() - 1.0) > 1e-12) throw InvalidArgument("purify_diagonal: probabilities do not sum to 1");

  const Eigen::VectorXd psi = distribution.cwiseSqrt();
  Eigen::MatrixXcd rho = (psi * psi.transpose()).cast<std::complex<double>>();
  rho.diagonal() = distribution.cast<std::complex<double>>();
  return {psi, FiniteDensity(std::move(rho))};
}

Expectation trace_expectation(const FiniteDensity& rho, const Eigen::MatrixXcd& a) {
  check_observable(rho, a);
  const std::complex<double> t = trace_of_product(rho.matrix(), a);
  return {t.real(), t.imag()};
}

double variance(const FiniteDensity& rho, const Eigen::MatrixXcd& a) {
  check_observable(rho, a);
  const double mean = trace_of_product(rho.matrix(), a).real();
  const Eigen::MatrixXcd a2 = a * a;
  return trace_of_product(rho.matrix(), a2).real() - mean * mean;
}

}  // namespace hybridlab
