#include "hybridlab/phase_space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>

#include <fftw3.h>

#include "hybridlab/error.hpp"

namespace hybridlab {

namespace {

using cplx = std::complex<double>;

// The FFTW planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void init_fftw_threads() {
  static std::once_flag flag;
  std::call_once(flag, [] { fftw_init_threads(); });
}

/// In-place multi-axis transforms over a fixed row-major shape.
class FftPlans {
 public:
  FftPlans(std::vector<std::size_t> shape, unsigned threads) : shape_(std::move(shape)), threads_(std::max(1U, threads)) {
    strides_.assign(shape_.size(), 1);
    for (std::size_t k = shape_.size(); k-- > 1;) strides_[k - 1] = strides_[k] * shape_[k];
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;
  ~FftPlans() {
    const std::lock_guard lock(planner_mutex());
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  void execute(std::vector<cplx>& data, unsigned mask, int sign) {
    if (mask == 0) return;
    fftw_plan plan = get(mask, sign, data.size());
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, ptr, ptr);
  }

 private:
  fftw_plan get(unsigned mask, int sign, std::size_t total) {
    const auto key = std::make_pair(mask, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<fftw_iodim> dims;
    std::vector<fftw_iodim> loops;
    for (std::size_t k = 0; k < shape_.size(); ++k) {
      const fftw_iodim d{static_cast<int>(shape_[k]), static_cast<int>(strides_[k]), static_cast<int>(strides_[k])};
      ((mask >> k) & 1U ? dims : loops).push_back(d);
    }
    const std::lock_guard lock(planner_mutex());
    init_fftw_threads();
    fftw_plan_with_nthreads(static_cast<int>(threads_));
    auto* scratch = fftw_alloc_complex(total);
    fftw_plan plan = fftw_plan_guru_dft(static_cast<int>(dims.size()), dims.data(), static_cast<int>(loops.size()),
                                        loops.data(), scratch, scratch, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan == nullptr) throw Error("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

  std::vector<std::size_t> shape_;
  std::vector<std::size_t> strides_;
  unsigned threads_;
  std::map<std::pair<unsigned, int>, fftw_plan> plans_;
};

std::vector<std::size_t> shape_of(const GridSpec& spec) {
  std::vector<std::size_t> shape;
  for (const auto& a : spec.axes()) shape.push_back(a.points);
  return shape;
}

using Requirement = std::vector<std::optional<Representation>>;

/// Amplitudes in a mixed representation. Forward transforms are unnormalized;
/// backward transforms divide by N, so sum |phi|^2 = (prod of N over momentum axes) * sum |psi|^2.
class Workspace {
 public:
  Workspace(const GridSpec& spec, std::vector<cplx> data, unsigned threads)
      : spec_(spec), data_(std::move(data)), current_(spec.rank(), Representation::position), fft_(shape_of(spec), threads) {}

  void load(std::span<const cplx> amplitudes) {
    data_.assign(amplitudes.begin(), amplitudes.end());
    std::fill(current_.begin(), current_.end(), Representation::position);
  }

  void ensure(const Requirement& req) {
    unsigned forward = 0;
    unsigned backward = 0;
    for (std::size_t k = 0; k < req.size(); ++k) {
      if (!req[k] || *req[k] == current_[k]) continue;
      (*req[k] == Representation::momentum ? forward : backward) |= 1U << k;
      current_[k] = *req[k];
    }
    fft_.execute(data_, forward, FFTW_FORWARD);
    if (backward != 0) {
      fft_.execute(data_, backward, FFTW_BACKWARD);
      double scale = 1.0;
      for (std::size_t k = 0; k < spec_.rank(); ++k) {
        if ((backward >> k) & 1U) scale /= static_cast<double>(spec_.axes()[k].points);
      }
      for (auto& v : data_) v *= scale;
    }
  }

  void to_position() { ensure(Requirement(spec_.rank(), Representation::position)); }

  double momentum_scale() const {
    double s = 1.0;
    for (std::size_t k = 0; k < spec_.rank(); ++k) {
      if (current_[k] == Representation::momentum) s *= static_cast<double>(spec_.axes()[k].points);
    }
    return s;
  }

  std::vector<cplx>& data() { return data_; }

 private:
  const GridSpec& spec_;
  std::vector<cplx> data_;
  std::vector<Representation> current_;
  FftPlans fft_;
};

Requirement requirement_of(const Monomial& m, const GridSpec& spec) {
  Requirement req(spec.rank());
  for (Generator g : kAllGenerators) {
    if (m[g] == 0) continue;
    const Axis axis = axis_of(g);
    const auto slot = spec.find(axis);
    if (!slot) {
      throw UnknownAxis("term " + to_string(m) + " uses " + std::string(name(g)) + " but the grid has no " +
                        std::string(1, axis_char(axis)) + " axis");
    }
    const Representation r = is_momentum(g) ? Representation::momentum : Representation::position;
    if (req[*slot] && *req[*slot] != r) {
      throw NonSplittableTerm("term " + to_string(m) + " needs both representations of axis " +
                              std::string(1, axis_char(axis)));
    }
    req[*slot] = r;
  }
  return req;
}

bool compatible(const Requirement& a, const Requirement& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] && b[k] && *a[k] != *b[k]) return false;
  }
  return true;
}

void merge_into(Requirement& target, const Requirement& r) {
  for (std::size_t k = 0; k < target.size(); ++k) {
    if (r[k]) target[k] = r[k];
  }
}

std::size_t count_momentum(const Requirement& r) {
  return static_cast<std::size_t>(std::count(r.begin(), r.end(), std::optional(Representation::momentum)));
}

/// Fewest jointly diagonal groups: a minimum cover of the terms by full
/// representation assignments (at most 2^3 of them), fewest momentum axes first.
std::vector<TermGroup> group_requirements(const std::vector<Requirement>& reqs) {
  if (reqs.empty()) return {};
  const std::size_t rank = reqs.front().size();
  std::vector<Requirement> candidates;
  for (std::size_t bits = 0; bits < (std::size_t{1} << rank); ++bits) {
    Requirement c(rank);
    for (std::size_t k = 0; k < rank; ++k) {
      c[k] = (bits >> k) & 1U ? Representation::momentum : Representation::position;
    }
    candidates.push_back(std::move(c));
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Requirement& a, const Requirement& b) { return count_momentum(a) < count_momentum(b); });

  std::vector<std::vector<bool>> covers(candidates.size(), std::vector<bool>(reqs.size()));
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    for (std::size_t t = 0; t < reqs.size(); ++t) covers[c][t] = compatible(candidates[c], reqs[t]);
  }
  std::size_t best = 0;
  int best_size = std::numeric_limits<int>::max();
  for (std::size_t subset = 1; subset < (std::size_t{1} << candidates.size()); ++subset) {
    const int size = std::popcount(subset);
    if (size >= best_size) continue;
    bool all = true;
    for (std::size_t t = 0; t < reqs.size() && all; ++t) {
      bool hit = false;
      for (std::size_t c = 0; c < candidates.size() && !hit; ++c) hit = ((subset >> c) & 1U) && covers[c][t];
      all = hit;
    }
    if (all) {
      best = subset;
      best_size = size;
    }
  }

  std::vector<TermGroup> groups;
  std::vector<std::size_t> group_of(candidates.size(), SIZE_MAX);
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if ((best >> c) & 1U) {
      group_of[c] = groups.size();
      groups.push_back({{}, Requirement(rank)});
    }
  }
  for (std::size_t t = 0; t < reqs.size(); ++t) {
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (group_of[c] != SIZE_MAX && covers[c][t]) {
        groups[group_of[c]].terms.push_back(t);
        merge_into(groups[group_of[c]].representation, reqs[t]);
        break;
      }
    }
  }
  std::erase_if(groups, [](const TermGroup& g) { return g.terms.empty(); });
  std::stable_sort(groups.begin(), groups.end(), [](const TermGroup& a, const TermGroup& b) {
    return a.momentum_axes() < b.momentum_axes();
  });
  return groups;
}

/// Coordinate of slot j on `axis` for the generator `g` (position or momentum).
double coordinate(const AxisSpec& axis, Generator g, std::size_t j) {
  return is_momentum(g) ? axis.momentum(j) : axis.position(j);
}

/// Sum over (monomial, coefficient) pairs evaluated at each grid point, in the
/// representation each monomial is diagonal in.
template <typename Coeff>
std::vector<Coeff> diagonal_table(const GridSpec& spec, const std::vector<std::pair<Monomial, Coeff>>& terms) {
  std::vector<Coeff> table(spec.total_points(), Coeff{});
  // Per term and axis, the precomputed factor along that axis.
  for (const auto& [m, c] : terms) {
    std::vector<std::vector<double>> factors(spec.rank());
    for (std::size_t k = 0; k < spec.rank(); ++k) {
      const AxisSpec& ax = spec.axes()[k];
      factors[k].assign(ax.points, 1.0);
      for (Generator g : {position_generator(ax.label), momentum_generator(ax.label)}) {
        const std::uint32_t e = m[g];
        if (e == 0) continue;
        for (std::size_t j = 0; j < ax.points; ++j) factors[k][j] *= std::pow(coordinate(ax, g, j), static_cast<int>(e));
      }
    }
    for (std::size_t i = 0; i < table.size(); ++i) {
      double v = 1.0;
      for (std::size_t k = 0; k < spec.rank(); ++k) v *= factors[k][(i / spec.stride(k)) % spec.axes()[k].points];
      table[i] += c * v;
    }
  }
  return table;
}

std::vector<cplx> phase_table(const std::vector<double>& diagonal, double angle_scale) {
  std::vector<cplx> out(diagonal.size());
  for (std::size_t i = 0; i < diagonal.size(); ++i) out[i] = std::polar(1.0, -angle_scale * diagonal[i]);
  return out;
}

double norm_of(std::span<const cplx> data, double cell) {
  double s = 0.0;
  for (const auto& v : data) s += std::norm(v);
  return s * cell;
}

/// Mass within two cells of either boundary, per axis; returns the worst axis.
std::pair<double, std::size_t> boundary_mass(const GridState& state) {
  const GridSpec& spec = state.spec();
  double worst = 0.0;
  std::size_t worst_axis = 0;
  const auto amps = state.amplitudes();
  for (std::size_t k = 0; k < spec.rank(); ++k) {
    const std::size_t n = spec.axes()[k].points;
    double mass = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
      const std::size_t j = (i / spec.stride(k)) % n;
      if (j < 2 || j >= n - 2) mass += std::norm(amps[i]);
    }
    mass *= spec.cell_volume();
    if (mass > worst) {
      worst = mass;
      worst_axis = k;
    }
  }
  return {worst, worst_axis};
}

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<char, sizeof(T)> bytes{};
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  std::array<char, sizeof(T)> bytes{};
  if (!in.read(bytes.data(), sizeof(T))) throw InvalidArgument("truncated snapshot");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

constexpr char kSnapshotMagic[8] = {'H', 'L', 'M', 'A', 'R', 'G', '0', '1'};

}  // namespace

char axis_char(Axis a) {
  switch (a) {
    case Axis::x: return 'x';
    case Axis::y: return 'y';
    case Axis::q: return 'q';
  }
  return '?';
}

std::optional<Axis> axis_from_char(char c) {
  switch (c) {
    case 'x': return Axis::x;
    case 'y': return Axis::y;
    case 'q': return Axis::q;
    default: return std::nullopt;
  }
}

Axis axis_of(Generator g) {
  switch (g) {
    case Generator::q:
    case Generator::p: return Axis::q;
    case Generator::x:
    case Generator::p_x: return Axis::x;
    case Generator::y:
    case Generator::p_y: return Axis::y;
  }
  return Axis::q;
}

Generator position_generator(Axis a) {
  switch (a) {
    case Axis::x: return Generator::x;
    case Axis::y: return Generator::y;
    case Axis::q: return Generator::q;
  }
  return Generator::q;
}

Generator momentum_generator(Axis a) { return conjugate(position_generator(a)); }

double AxisSpec::momentum(std::size_t m) const {
  const double dk = std::numbers::pi / half_extent;
  const auto n = static_cast<long long>(points);
  const auto s = static_cast<long long>(m);
  return dk * static_cast<double>(s < n / 2 ? s : s - n);
}

GridSpec::GridSpec(std::vector<AxisSpec> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 3) throw InvalidArgument("a grid needs one to three axes");
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    const AxisSpec& a = axes_[k];
    if (a.points < 8 || !std::has_single_bit(a.points)) {
      throw InvalidArgument(std::string("axis ") + axis_char(a.label) + ": point count must be a power of two >= 8");
    }
    if (!(a.half_extent > 0.0) || !std::isfinite(a.half_extent)) {
      throw InvalidArgument(std::string("axis ") + axis_char(a.label) + ": half extent must be positive");
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (axes_[j].label == a.label) throw InvalidArgument(std::string("duplicate axis ") + axis_char(a.label));
    }
  }
  strides_.assign(axes_.size(), 1);
  for (std::size_t k = axes_.size(); k-- > 1;) strides_[k - 1] = strides_[k] * axes_[k].points;
  for (const auto& a : axes_) total_ *= a.points;
}

GridSpec GridSpec::hybrid(std::size_t points, double half_extent) {
  return GridSpec({{Axis::x, half_extent, points}, {Axis::y, half_extent, points}, {Axis::q, half_extent, points}});
}

GridSpec GridSpec::classical(std::size_t points, double half_extent) {
  return GridSpec({{Axis::x, half_extent, points}, {Axis::y, half_extent, points}});
}

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (const auto& a : axes_) v *= a.spacing();
  return v;
}

std::optional<std::size_t> GridSpec::find(Axis a) const {
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    if (axes_[k].label == a) return k;
  }
  return std::nullopt;
}

std::size_t GridSpec::require(Axis a) const {
  if (auto k = find(a)) return *k;
  throw UnknownAxis(std::string("grid has no ") + axis_char(a) + " axis");
}

bool operator==(const GridSpec& a, const GridSpec& b) {
  if (a.axes_.size() != b.axes_.size()) return false;
  for (std::size_t k = 0; k < a.axes_.size(); ++k) {
    const auto& l = a.axes_[k];
    const auto& r = b.axes_[k];
    if (l.label != r.label || l.points != r.points || l.half_extent != r.half_extent) return false;
  }
  return true;
}

GridState::GridState(GridSpec spec, std::vector<cplx> amplitudes) : spec_(std::move(spec)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != spec_.total_points()) throw DimensionMismatch("amplitude count does not match the grid");
}

double GridState::norm() const { return norm_of(amplitudes_, spec_.cell_volume()); }

double GridState::distance(const GridState& other) const {
  if (!(spec_ == other.spec_)) throw DimensionMismatch("states live on different grids");
  double s = 0.0;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) s += std::norm(amplitudes_[i] - other.amplitudes_[i]);
  return std::sqrt(s * spec_.cell_volume());
}

double GridState::fidelity(const GridState& other) const {
  if (!(spec_ == other.spec_)) throw DimensionMismatch("states live on different grids");
  cplx overlap{0.0, 0.0};
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) overlap += std::conj(amplitudes_[i]) * other.amplitudes_[i];
  return std::norm(overlap * spec_.cell_volume());
}

GridState gaussian_state(const GridSpec& spec, std::span<const double> means, std::span<const double> widths) {
  if (means.size() != spec.rank() || widths.size() != spec.rank()) {
    throw DimensionMismatch("gaussian_state: need one mean and one width per axis");
  }
  std::vector<std::vector<double>> factors(spec.rank());
  for (std::size_t k = 0; k < spec.rank(); ++k) {
    const AxisSpec& ax = spec.axes()[k];
    if (!(widths[k] > 0.0)) throw InvalidArgument("gaussian_state: widths must be positive");
    if (std::abs(means[k]) + 4.0 * widths[k] >= ax.half_extent) {
      throw OutOfBox(std::string("gaussian_state: packet on axis ") + axis_char(ax.label) + " does not fit inside +-" +
                     std::to_string(ax.half_extent));
    }
    factors[k].resize(ax.points);
    for (std::size_t j = 0; j < ax.points; ++j) {
      const double d = ax.position(j) - means[k];
      factors[k][j] = std::exp(-d * d / (4.0 * widths[k] * widths[k]));
    }
  }
  std::vector<cplx> amps(spec.total_points());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    double v = 1.0;
    for (std::size_t k = 0; k < spec.rank(); ++k) v *= factors[k][(i / spec.stride(k)) % spec.axes()[k].points];
    amps[i] = v;
  }
  const double scale = 1.0 / std::sqrt(norm_of(amps, spec.cell_volume()));
  for (auto& a : amps) a *= scale;
  return GridState(spec, std::move(amps));
}

std::size_t TermGroup::momentum_axes() const { return count_momentum(representation); }

PropagatorPlan compile_splitting(const OperatorPolynomial& k_op, const GridSpec& spec, double dt) {
  if (!(std::abs(dt) > 0.0) || !std::isfinite(dt)) throw InvalidArgument("compile_splitting: dt must be nonzero");
  PropagatorPlan plan{spec, dt, {}, {}, {}, {}};
  std::vector<Requirement> reqs;
  for (const auto& [m, c] : k_op.terms()) {
    if (!c.is_real()) {
      throw InvalidArgument("compile_splitting: term " + to_string(m) + " has a non-real coefficient");
    }
    Requirement req = requirement_of(m, spec);
    plan.terms.push_back({m, c.re.convert_to<double>(), req});
    reqs.push_back(std::move(req));
  }
  plan.groups = group_requirements(reqs);

  const std::size_t n = plan.groups.size();
  for (std::size_t g = 0; g + 1 < n; ++g) plan.sequence.push_back({g, 0.5});
  if (n > 0) plan.sequence.push_back({n - 1, 1.0});
  for (std::size_t g = n - 1; n > 1 && g-- > 0;) plan.sequence.push_back({g, 0.5});

  for (const auto& group : plan.groups) {
    std::vector<std::pair<Monomial, double>> terms;
    for (std::size_t t : group.terms) terms.emplace_back(plan.terms[t].monomial, plan.terms[t].coefficient);
    plan.diagonals.push_back(diagonal_table(spec, terms));
  }
  return plan;
}

EvolutionResult evolve(GridState state, const PropagatorPlan& plan, double t_final,
                       std::span<const OperatorPolynomial> observers, const EvolveOptions& options) {
  if (!(state.spec() == plan.spec)) throw DimensionMismatch("evolve: state and plan use different grids");
  if (!(t_final > 0.0)) throw InvalidArgument("evolve: t_final must be positive");
  const double ratio = t_final / std::abs(plan.dt);
  const auto steps = static_cast<std::size_t>(std::llround(ratio));
  if (steps == 0 || std::abs(ratio - static_cast<double>(steps)) > 1e-9 * std::max(1.0, ratio)) {
    throw InvalidArgument("evolve: t_final is not an integer multiple of dt");
  }
  const std::size_t stride = std::max<std::size_t>(1, options.stride);

  EvolutionResult result{{}, std::vector<std::vector<double>>(observers.size()),
                         std::vector<double>(observers.size(), 0.0), {}, state, 0.0};
  const double norm0 = state.norm();

  auto sample = [&](std::size_t step, const GridState& s) {
    const double t = static_cast<double>(step) * plan.dt;
    if (options.guard_boundary) {
      const auto [mass, axis] = boundary_mass(s);
      if (mass > options.boundary_mass_limit) {
        throw BoxOverflow("probability mass " + std::to_string(mass) + " reached the boundary of axis " +
                              std::string(1, axis_char(plan.spec.axes()[axis].label)) + " at t = " + std::to_string(t),
                          t);
      }
    }
    result.times.push_back(t);
    result.norms.push_back(s.norm());
    result.norm_drift = std::max(result.norm_drift, std::abs(result.norms.back() - norm0));
    const auto values = grid_expectations(s, observers);
    for (std::size_t o = 0; o < values.size(); ++o) {
      result.series[o].push_back(values[o].value);
      result.imaginary_residuals[o] = std::max(result.imaginary_residuals[o], std::abs(values[o].imaginary_residual));
    }
  };

  std::map<std::pair<std::size_t, double>, std::vector<cplx>> phases;
  auto phase_for = [&](std::size_t group, double fraction) -> const std::vector<cplx>& {
    auto [it, inserted] = phases.try_emplace({group, fraction});
    if (inserted) it->second = phase_table(plan.diagonals[group], fraction * plan.dt);
    return it->second;
  };

  Workspace ws(plan.spec, {}, options.threads);
  ws.load(state.amplitudes());
  sample(0, state);

  std::size_t done = 0;
  while (done < steps) {
    const std::size_t block = std::min(stride, steps - done);
    // Adjacent applications of the same group merge into one phase.
    std::vector<StrangStep> merged;
    for (std::size_t s = 0; s < block; ++s) {
      for (const auto& st : plan.sequence) {
        if (!merged.empty() && merged.back().group == st.group) {
          merged.back().fraction += st.fraction;
        } else {
          merged.push_back(st);
        }
      }
    }
    for (const auto& st : merged) {
      ws.ensure(plan.groups[st.group].representation);
      const auto& phase = phase_for(st.group, st.fraction);
      auto& data = ws.data();
      for (std::size_t i = 0; i < data.size(); ++i) data[i] *= phase[i];
    }
    ws.to_position();
    done += block;
    std::copy(ws.data().begin(), ws.data().end(), state.amplitudes().begin());
    sample(done, state);
  }
  result.final_state = std::move(state);
  return result;
}

std::vector<Expectation> grid_expectations(const GridState& state, std::span<const OperatorPolynomial> ops) {
  const GridSpec& spec = state.spec();
  struct Entry {
    std::size_t op;
    Monomial monomial;
    cplx coefficient;
  };
  std::vector<Entry> entries;
  std::vector<Requirement> reqs;
  for (std::size_t o = 0; o < ops.size(); ++o) {
    for (const auto& [m, c] : ops[o].terms()) {
      reqs.push_back(requirement_of(m, spec));
      entries.push_back({o, m, c.to_complex()});
    }
  }
  std::vector<cplx> totals(ops.size(), cplx{0.0, 0.0});
  if (!entries.empty()) {
    Workspace ws(spec, {}, 1);
    for (const auto& group : group_requirements(reqs)) {
      ws.load(state.amplitudes());
      ws.ensure(group.representation);
      const double weight = spec.cell_volume() / ws.momentum_scale();
      std::vector<double> density(ws.data().size());
      for (std::size_t i = 0; i < density.size(); ++i) density[i] = std::norm(ws.data()[i]) * weight;
      for (std::size_t t : group.terms) {
        const auto table = diagonal_table<double>(spec, {{entries[t].monomial, 1.0}});
        double s = 0.0;
        for (std::size_t i = 0; i < density.size(); ++i) s += density[i] * table[i];
        totals[entries[t].op] += entries[t].coefficient * s;
      }
    }
  }
  std::vector<Expectation> out;
  out.reserve(ops.size());
  for (const auto& t : totals) out.push_back({t.real(), t.imag()});
  return out;
}

Expectation grid_expectation(const GridState& state, const OperatorPolynomial& a) {
  return grid_expectations(state, std::span<const OperatorPolynomial>(&a, 1)).front();
}

double Marginal::cell_volume() const {
  double v = 1.0;
  for (const auto& a : axes) v *= a.spacing();
  return v;
}

double Marginal::total() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * cell_volume();
}

Marginal marginal_density(const GridState& state, std::span<const Axis> keep) {
  const GridSpec& spec = state.spec();
  std::vector<std::size_t> kept;
  for (Axis a : keep) kept.push_back(spec.require(a));
  Marginal out;
  std::size_t size = 1;
  for (std::size_t k : kept) {
    out.axes.push_back(spec.axes()[k]);
    size *= spec.axes()[k].points;
  }
  std::vector<std::size_t> out_strides(kept.size(), 1);
  for (std::size_t j = kept.size(); j-- > 1;) out_strides[j - 1] = out_strides[j] * out.axes[j].points;

  double dropped_volume = 1.0;
  for (std::size_t k = 0; k < spec.rank(); ++k) {
    if (std::find(kept.begin(), kept.end(), k) == kept.end()) dropped_volume *= spec.axes()[k].spacing();
  }
  out.values.assign(size, 0.0);
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    std::size_t target = 0;
    for (std::size_t j = 0; j < kept.size(); ++j) {
      target += ((i / spec.stride(kept[j])) % spec.axes()[kept[j]].points) * out_strides[j];
    }
    out.values[target] += std::norm(amps[i]);
  }
  for (auto& v : out.values) v *= dropped_volume;
  return out;
}

double DensityMatrix::purity() const { return (matrix * matrix).trace().real(); }

DensityValidation DensityMatrix::validate() const { return validate_density(matrix, kGridDensityTolerances); }

DensityMatrix reduced_quantum_density(const GridState& state) {
  const GridSpec& spec = state.spec();
  const std::size_t qk = spec.require(Axis::q);
  const AxisSpec& qaxis = spec.axes()[qk];
  const std::size_t nq = qaxis.points;
  const std::size_t rest = spec.total_points() / nq;
  Eigen::MatrixXcd psi(static_cast<Eigen::Index>(nq), static_cast<Eigen::Index>(rest));
  std::vector<std::size_t> column(nq, 0);
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const std::size_t j = (i / spec.stride(qk)) % nq;
    psi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(column[j]++)) = amps[i];
  }
  // Classical cell area times dq makes the matrix trace equal the norm.
  return {psi * psi.adjoint() * spec.cell_volume(), qaxis};
}

Eigen::MatrixXcd discretize_axis_operator(const AxisSpec& axis, const OperatorPolynomial& a) {
  const auto n = static_cast<Eigen::Index>(axis.points);
  const Generator pos = position_generator(axis.label);
  const Generator mom = momentum_generator(axis.label);
  Eigen::MatrixXcd position = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd fourier(n, n);
  Eigen::VectorXcd k(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    position(j, j) = axis.position(static_cast<std::size_t>(j));
    k(j) = axis.momentum(static_cast<std::size_t>(j));
    for (Eigen::Index m = 0; m < n; ++m) {
      fourier(m, j) = std::polar(1.0 / std::sqrt(static_cast<double>(n)),
                                 -2.0 * std::numbers::pi * static_cast<double>(m * j) / static_cast<double>(n));
    }
  }
  const Eigen::MatrixXcd momentum = fourier.adjoint() * k.asDiagonal() * fourier;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [m, c] : a.terms()) {
    for (Generator g : kAllGenerators) {
      if (m[g] > 0 && g != pos && g != mom) {
        throw UnknownAxis("discretize_axis_operator: " + std::string(name(g)) + " does not act on axis " +
                          std::string(1, axis_char(axis.label)));
      }
    }
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
    for (std::uint32_t e = 0; e < m[pos]; ++e) term = term * position;
    for (std::uint32_t e = 0; e < m[mom]; ++e) term = term * momentum;
    out += c.to_complex() * term;
  }
  return out;
}

std::vector<double> characteristics_reference(const GridSpec& spec, std::span<const double> f0,
                                              const OperatorPolynomial& h_classical, double t, double rk_step) {
  if (spec.rank() != 2 || spec.axes()[0].label != Axis::x || spec.axes()[1].label != Axis::y) {
    throw InvalidArgument("characteristics_reference: grid must have axes (x, y)");
  }
  if (f0.size() != spec.total_points()) throw DimensionMismatch("characteristics_reference: f0 size mismatch");
  for (Generator g : {Generator::q, Generator::p}) {
    if (h_classical.uses(g)) throw InvalidArgument("characteristics_reference: H must depend on x and y only");
  }
  if (!(rk_step > 0.0)) throw InvalidArgument("characteristics_reference: rk_step must be positive");
  const OperatorPolynomial dx = partial_derivative(h_classical, Generator::y);
  const OperatorPolynomial dy = -partial_derivative(h_classical, Generator::x);

  const AxisSpec& ax = spec.axes()[0];
  const AxisSpec& ay = spec.axes()[1];
  const std::size_t nx = ax.points;
  const std::size_t ny = ay.points;

  // Trigonometric interpolant coefficients of f0.
  std::vector<cplx> coeffs(f0.begin(), f0.end());
  {
    FftPlans fft({nx, ny}, 1);
    fft.execute(coeffs, 0b11, FFTW_FORWARD);
    for (auto& c : coeffs) c /= static_cast<double>(nx * ny);
  }

  auto velocity = [&](double x, double y) {
    const std::array<double, 6> v = {0.0, 0.0, x, 0.0, y, 0.0};
    return std::pair{evaluate(dx, v).real(), evaluate(dy, v).real()};
  };
  const auto steps = std::max<long long>(0, static_cast<long long>(std::ceil(std::abs(t) / rk_step)));
  const double h = steps > 0 ? -t / static_cast<double>(steps) : 0.0;

  std::vector<double> out(spec.total_points());
  std::vector<cplx> ex(nx);
  std::vector<cplx> ey(ny);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      double x = ax.position(i);
      double y = ay.position(j);
      for (long long s = 0; s < steps; ++s) {
        const auto [k1x, k1y] = velocity(x, y);
        const auto [k2x, k2y] = velocity(x + 0.5 * h * k1x, y + 0.5 * h * k1y);
        const auto [k3x, k3y] = velocity(x + 0.5 * h * k2x, y + 0.5 * h * k2y);
        const auto [k4x, k4y] = velocity(x + h * k3x, y + h * k3y);
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
      }
      for (std::size_t m = 0; m < nx; ++m) ex[m] = std::polar(1.0, ax.momentum(m) * (x + ax.half_extent));
      for (std::size_t m = 0; m < ny; ++m) ey[m] = std::polar(1.0, ay.momentum(m) * (y + ay.half_extent));
      cplx total{0.0, 0.0};
      for (std::size_t m = 0; m < nx; ++m) {
        cplx row{0.0, 0.0};
        const cplx* c = &coeffs[m * ny];
        for (std::size_t n = 0; n < ny; ++n) row += c[n] * ey[n];
        total += ex[m] * row;
      }
      out[i * ny + j] = total.real();
    }
  }
  return out;
}

double period_residual(const GridSpec& spec, double dt, int periods) {
  if (spec.find(Axis::q) || !spec.find(Axis::x) || !spec.find(Axis::y)) {
    throw InvalidArgument("period_residual: needs a classical (x, y) grid");
  }
  if (periods < 1) throw InvalidArgument("period_residual: periods must be >= 1");
  const OperatorPolynomial liouvillian =
      multiply(Generator::y, Generator::p_x) - multiply(Generator::x, Generator::p_y);
  std::vector<double> means(spec.rank(), 0.0);
  const std::vector<double> widths(spec.rank(), 1.0 / std::numbers::sqrt2);
  means[spec.require(Axis::x)] = spec.axes()[spec.require(Axis::x)].half_extent / 4.0;
  const GridState initial = gaussian_state(spec, means, widths);
  const PropagatorPlan plan = compile_splitting(liouvillian, spec, dt);
  EvolveOptions opts;
  opts.stride = std::numeric_limits<std::size_t>::max();
  const auto run = evolve(initial, plan, 2.0 * std::numbers::pi * periods, {}, opts);
  return run.final_state.distance(initial);
}

void write_snapshot(std::ostream& out, const Marginal& marginal) {
  out.write(kSnapshotMagic, sizeof(kSnapshotMagic));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(marginal.axes.size()));
  for (const auto& a : marginal.axes) {
    put<std::uint8_t>(out, static_cast<std::uint8_t>(axis_char(a.label)));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(a.points));
    put<double>(out, a.half_extent);
  }
  for (double v : marginal.values) put<double>(out, v);
}

Marginal read_snapshot(std::istream& in) {
  char magic[sizeof(kSnapshotMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kSnapshotMagic, sizeof(magic)) != 0) {
    throw InvalidArgument("not a marginal snapshot");
  }
  Marginal out;
  const auto count = get<std::uint32_t>(in);
  if (count == 0 || count > 3) throw InvalidArgument("snapshot: bad axis count");
  std::size_t size = 1;
  for (std::uint32_t k = 0; k < count; ++k) {
    const auto label = axis_from_char(static_cast<char>(get<std::uint8_t>(in)));
    if (!label) throw InvalidArgument("snapshot: bad axis label");
    const auto n = get<std::uint32_t>(in);
    const auto l = get<double>(in);
    out.axes.push_back({*label, l, n});
    size *= n;
  }
  out.values.resize(size);
  for (auto& v : out.values) v = get<double>(in);
  return out;
}

}  // namespace hybridlab
