#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hybridlab/expr.hpp"
#include "hybridlab/moment_dynamics.hpp"
#include "hybridlab/phase_space.hpp"
#include "hybridlab/run_io.hpp"

namespace hybridlab::cli {

/// Two oscillators with bilinear coupling k q x.
inline constexpr const char* kBenchmarkHamiltonian = "(q^2 + p^2)/2 + (x^2 + y^2)/2 + k*q*x";

enum class Mode { classical_classical, quantum_quantum, hybrid };
enum class Engine { moments, grid, both };

std::string to_string(Mode m);
std::string to_string(Engine e);

struct RunConfig {
  Mode mode = Mode::hybrid;
  std::string k = "0.2";  // kept as text so it stays exact
  std::string hamiltonian = kBenchmarkHamiltonian;
  Engine engine = Engine::moments;
  std::size_t points = 64;
  double half_extent = 8.0;
  double dt = 0.01;
  double t_final = 10.0;
  std::vector<std::string> observers = {"q", "p", "x", "y", "q^2", "p^2", "x^2", "y^2"};
  std::filesystem::path output_dir = "hybridlab-run";
  bool deterministic = true;
  unsigned threads = 1;
  std::size_t stride = 10;
  bool snapshots = false;
};

/// Throws InvalidArgument / expr errors for an inconsistent configuration.
void validate(const RunConfig& config);

/// Lowered Hamiltonian with k bound.
OperatorPolynomial hamiltonian(const RunConfig& config);
/// Generator of the run: hybridize(H) in hybrid mode, H otherwise.
OperatorPolynomial conserved_generator(const RunConfig& config);

struct EngineRun {
  io::Table table;  // t, observers..., K (or H), sqrt(<q^2>) [, norm]
  double generator_drift = 0.0;
  std::optional<EnvelopeFit> envelope;
  std::string envelope_note;
  double norm_drift = 0.0;
  double seconds = 0.0;
  std::optional<GridState> final_state;  // grid engine only
};

EngineRun run_moments(const RunConfig& config);
EngineRun run_grid(const RunConfig& config);

/// Number of worker threads: `requested`, capped by HYBRIDLAB_THREADS, 1 when deterministic.
unsigned effective_threads(const RunConfig& config);

/// Entry point: 0 success, 1 runtime failure, 2 configuration error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hybridlab::cli
