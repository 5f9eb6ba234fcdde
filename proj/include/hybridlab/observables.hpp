#pragma once

#include <Eigen/Dense>

namespace hybridlab {

/// Real part of an expectation plus the discarded imaginary part as a sanity residual.
struct Expectation {
  double value = 0.0;
  double imaginary_residual = 0.0;
};

struct DensityTolerances {
  double hermiticity = 1e-12;
  double trace = 1e-12;
  double min_eigenvalue = -1e-10;
};

struct DensityValidation {
  double hermiticity_residual = 0.0;  // max |rho - rho^dagger|
  double trace_deviation = 0.0;       // |tr rho - 1|
  double min_eigenvalue = 0.0;
  bool hermitian = false;
  bool unit_trace = false;
  bool positive = false;

  bool passed() const { return hermitian && unit_trace && positive; }
};

/// Always returns a report; a non-square input fails every check.
DensityValidation validate_density(const Eigen::MatrixXcd& rho, const DensityTolerances& tol = {});

/// Density matrix known to satisfy the FiniteDensity tolerances.
class FiniteDensity {
 public:
  /// Throws InvalidArgument with the failing checks when `rho` is not a valid density.
  explicit FiniteDensity(Eigen::MatrixXcd rho, const DensityTolerances& tol = {});

  const Eigen::MatrixXcd& matrix() const { return rho_; }
  Eigen::Index dimension() const { return rho_.rows(); }
  double purity() const;

 private:
  Eigen::MatrixXcd rho_;
};

struct Purification {
  Eigen::VectorXd psi;
  FiniteDensity rho;
};

/// psi_m = sqrt(d_m); rho_mn = sqrt(d_m d_n) off the diagonal and rho_mm = d_m.
/// Throws InvalidArgument for negative entries or a sum away from 1 by more than 1e-12.
Purification purify_diagonal(const Eigen::VectorXd& distribution);

/// tr(rho a). Throws DimensionMismatch or NonHermitianObservable (tolerance 1e-10).
Expectation trace_expectation(const FiniteDensity& rho, const Eigen::MatrixXcd& a);

/// tr(rho a^2) - tr(rho a)^2.
double variance(const FiniteDensity& rho, const Eigen::MatrixXcd& a);

}  // namespace hybridlab
