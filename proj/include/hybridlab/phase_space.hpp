#pragma once

// Wave-function evolution of psi(x, y, q) on a periodic grid with a
// second-order (Strang) split-operator spectral propagator.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hybridlab/observables.hpp"
#include "hybridlab/weyl_algebra.hpp"

namespace hybridlab {

enum class Axis : std::uint8_t { x, y, q };

char axis_char(Axis a);
std::optional<Axis> axis_from_char(char c);
Axis axis_of(Generator g);
Generator position_generator(Axis a);
Generator momentum_generator(Axis a);

struct AxisSpec {
  Axis label = Axis::x;
  double half_extent = 8.0;
  std::size_t points = 64;

  double spacing() const { return 2.0 * half_extent / static_cast<double>(points); }
  double position(std::size_t j) const { return -half_extent + static_cast<double>(j) * spacing(); }
  /// Momentum of FFT slot m: (pi / L) * m for m < N/2, (pi / L) * (m - N) otherwise.
  double momentum(std::size_t m) const;
};

class GridSpec {
 public:
  /// Throws InvalidArgument: N must be a power of two >= 8, L > 0, labels unique.
  explicit GridSpec(std::vector<AxisSpec> axes);

  /// Axes (x, y, q) with a common N and L.
  static GridSpec hybrid(std::size_t points = 64, double half_extent = 8.0);
  /// Axes (x, y) only.
  static GridSpec classical(std::size_t points = 64, double half_extent = 8.0);

  const std::vector<AxisSpec>& axes() const { return axes_; }
  std::size_t rank() const { return axes_.size(); }
  std::size_t total_points() const { return total_; }
  std::size_t stride(std::size_t axis) const { return strides_[axis]; }
  double cell_volume() const;
  std::optional<std::size_t> find(Axis a) const;
  /// Throws UnknownAxis.
  std::size_t require(Axis a) const;

  friend bool operator==(const GridSpec& a, const GridSpec& b);

 private:
  std::vector<AxisSpec> axes_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

/// Row-major amplitudes, last axis fastest, always stored in the position representation.
class GridState {
 public:
  GridState(GridSpec spec, std::vector<std::complex<double>> amplitudes);

  const GridSpec& spec() const { return spec_; }
  std::span<const std::complex<double>> amplitudes() const { return amplitudes_; }
  std::span<std::complex<double>> amplitudes() { return amplitudes_; }
  /// sum |psi|^2 * cell volume.
  double norm() const;
  /// sqrt(sum |a - b|^2 * cell volume).
  double distance(const GridState& other) const;
  /// |<a, b>|^2 for normalized states.
  double fidelity(const GridState& other) const;

 private:
  GridSpec spec_;
  std::vector<std::complex<double>> amplitudes_;
};

/// Product of real Gaussians psi ~ exp(-(u - mean)^2 / (4 width^2)), so that
/// |psi|^2 has standard deviation `width` on every axis. Throws OutOfBox unless
/// |mean| + 4 width < L on every axis.
GridState gaussian_state(const GridSpec& spec, std::span<const double> means, std::span<const double> widths);

enum class Representation : std::uint8_t { position, momentum };

struct SplitTerm {
  Monomial monomial;
  double coefficient = 0.0;
  /// Per grid axis: the representation the term is diagonal in, or nothing if the axis is untouched.
  std::vector<std::optional<Representation>> requirement;
};

struct TermGroup {
  std::vector<std::size_t> terms;
  std::vector<std::optional<Representation>> representation;
  std::size_t momentum_axes() const;
};

struct StrangStep {
  std::size_t group;
  double fraction;  // of dt
};

struct PropagatorPlan {
  GridSpec spec;
  double dt = 0.0;
  std::vector<SplitTerm> terms;
  std::vector<TermGroup> groups;
  std::vector<StrangStep> sequence;  // one step: G1/2 G2/2 ... Gn ... G2/2 G1/2
  /// Per group, sum of its terms evaluated at every grid point of its representation.
  std::vector<std::vector<double>> diagonals;
};

/// Throws NonSplittableTerm for a monomial using both generators of one axis,
/// UnknownAxis for a generator without a grid axis, InvalidArgument for complex coefficients.
PropagatorPlan compile_splitting(const OperatorPolynomial& k_op, const GridSpec& spec, double dt);

struct EvolveOptions {
  std::size_t stride = 1;    // sample observers every `stride` steps
  unsigned threads = 1;      // FFT worker threads; 1 is the deterministic mode
  bool guard_boundary = true;
  double boundary_mass_limit = 1e-6;  // mass within 2 cells of the boundary
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<std::vector<double>> series;  // series[observer][sample]
  std::vector<double> imaginary_residuals;  // max over samples, per observer
  std::vector<double> norms;
  GridState final_state;
  double norm_drift = 0.0;  // max |norm(t) - norm(0)|
};

/// i dpsi/dt = K psi for t_final, with observers sampled at t = 0 and every `stride` steps.
/// Throws InvalidArgument when t_final / |dt| is not integral, BoxOverflow from the boundary guard.
EvolutionResult evolve(GridState state, const PropagatorPlan& plan, double t_final,
                       std::span<const OperatorPolynomial> observers, const EvolveOptions& options = {});

/// <psi|A|psi> by quadrature; every monomial must be splittable.
Expectation grid_expectation(const GridState& state, const OperatorPolynomial& a);
std::vector<Expectation> grid_expectations(const GridState& state, std::span<const OperatorPolynomial> ops);

struct Marginal {
  std::vector<AxisSpec> axes;
  std::vector<double> values;  // density over the kept axes, row-major

  double cell_volume() const;
  double total() const;  // sum * cell volume
};

/// |psi|^2 integrated over the dropped axes. Throws UnknownAxis.
Marginal marginal_density(const GridState& state, std::span<const Axis> keep);

struct DensityMatrix {
  Eigen::MatrixXcd matrix;  // rho(q, q') * dq, so the trace is 1
  AxisSpec axis;

  std::complex<double> trace() const { return matrix.trace(); }
  double purity() const;
  DensityValidation validate() const;
};

inline constexpr DensityTolerances kGridDensityTolerances{1e-12, 1e-10, -1e-8};

/// Partial trace over the classical axes. Throws UnknownAxis without a q axis.
DensityMatrix reduced_quantum_density(const GridState& state);

/// Matrix of a polynomial in one axis' generator pair on that axis' grid,
/// momentum factors applied spectrally; monomials keep their normal order.
Eigen::MatrixXcd discretize_axis_operator(const AxisSpec& axis, const OperatorPolynomial& a);

/// f(z, t) = f0(Phi_{-t}(z)) with Phi the Hamiltonian flow of h(x, y), integrated
/// by fixed-step RK4, f0 evaluated by trigonometric interpolation. `spec` must be (x, y).
std::vector<double> characteristics_reference(const GridSpec& spec, std::span<const double> f0,
                                              const OperatorPolynomial& h_classical, double t,
                                              double rk_step = 0.01);

/// ||U(2 pi periods) psi - psi|| for the harmonic Liouvillian y p_x - x p_y and a
/// displaced Gaussian reference state on a classical (x, y) grid.
double period_residual(const GridSpec& spec, double dt, int periods = 1);

/// Binary marginal snapshot: "HLMARG01", uint32 axis count, then per axis
/// (uint8 label char, uint32 N, float64 L), then the values; all little-endian.
void write_snapshot(std::ostream& out, const Marginal& marginal);
Marginal read_snapshot(std::istream& in);

}  // namespace hybridlab
