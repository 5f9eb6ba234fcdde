#pragma once

// Linear Heisenberg dynamics of quadratic generators: d<v>/dt = G <v> + c on
// the generator basis, closed on first and symmetrized second moments.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hybridlab/weyl_algebra.hpp"

namespace hybridlab {

struct GeneratorMatrix {
  std::vector<Generator> basis;
  Eigen::MatrixXd matrix;  // row b holds the expansion of dv_b/dt
  Eigen::VectorXd affine;

  std::size_t dimension() const { return basis.size(); }
  /// Position of `g` in the basis; throws InvalidArgument if absent.
  std::size_t slot(Generator g) const;
  double at(Generator row, Generator col) const { return matrix(slot(row), slot(col)); }
};

/// Heisenberg generator on the full basis (q, p, x, y, p_x, p_y).
/// Throws NonlinearDynamics when some -i[b, K] is not affine in the generators.
GeneratorMatrix derive_generator(const OperatorPolynomial& k_op);

/// Hamilton's equations for (q,p) and (x,y) as two canonical pairs, on the
/// basis (q, p, x, y). Quadratic H gives the same matrix for the fully classical
/// and the fully quantum treatment of both oscillators.
GeneratorMatrix derive_hamilton_generator(const OperatorPolynomial& h);

/// e^{G t} by scaling and squaring.
Eigen::MatrixXd matrix_exponential(const GeneratorMatrix& g, double t);

struct MomentState {
  std::vector<Generator> basis;
  Eigen::VectorXd mean;
  Eigen::MatrixXd second;  // S_ij = <(v_i v_j + v_j v_i)/2>

  Eigen::MatrixXd covariance() const { return second - mean * mean.transpose(); }
  double mean_of(Generator g) const;
  double second_of(Generator a, Generator b) const;
};

/// m = 0 and S = diag(1/2) on the given basis.
MomentState default_moment_state(const std::vector<Generator>& basis);

MomentState propagate_moments(const GeneratorMatrix& g, const MomentState& s0, double t);

/// <K> for a polynomial of degree <= 2, with exact ordering corrections
/// <v_a v_b> = S_ab + [v_a, v_b]/2. Throws DegreeTooHigh.
double quadratic_expectation(const OperatorPolynomial& k_op, const MomentState& s);

struct EigenCluster {
  std::complex<double> eigenvalue;
  std::size_t algebraic = 0;
  std::size_t geometric = 0;
  std::size_t longest_chain = 0;
};

struct SpectrumReport {
  std::vector<EigenCluster> clusters;
  double tolerance = 0.0;
  /// Set when a cluster failed its rank check and was split back at `tolerance`.
  bool ill_conditioned = false;

  std::size_t total_multiplicity() const;
  /// Some eigenvalue has positive real part, or sits on the imaginary axis with a Jordan chain > 1.
  bool has_secular_growth() const;
  bool bounded() const { return !has_secular_growth(); }
};

inline constexpr double kDefaultSpectralTolerance = 1e-9;

SpectrumReport classify_spectrum(const GeneratorMatrix& g, double tol = kDefaultSpectralTolerance);

struct EnvelopeFit {
  int degree = 0;
  std::vector<double> coefficients;  // ascending powers of t
  double residual = 0.0;             // ||fit - envelope|| / ||envelope||
  std::size_t points = 0;            // envelope samples used
};

/// Polynomial envelope of an oscillating series. Uses local maxima of |series|
/// (the series itself when it does not oscillate), drops the first 10% of the
/// time span as transient and returns the lowest degree in {0,1,2} whose
/// relative residual is below 1%. Needs >= 32 samples over >= 10 unit-frequency periods.
EnvelopeFit fit_envelope(std::span<const double> times, std::span<const double> values);

std::string basis_label(Generator g);

}  // namespace hybridlab
