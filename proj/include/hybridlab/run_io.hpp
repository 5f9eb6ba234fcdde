#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hybridlab/moment_dynamics.hpp"
#include "hybridlab/observables.hpp"

namespace hybridlab::io {

/// 17 significant digits; round-trips every double.
std::string format_double(double v);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;  // throws InvalidArgument
  std::vector<double> values(const std::string& name) const;
};

std::string to_csv(const Table& table);
/// Throws InvalidArgument on malformed input.
Table parse_csv(const std::string& text);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

nlohmann::json to_json(const SpectrumReport& report);
nlohmann::json to_json(const EnvelopeFit& fit);
nlohmann::json to_json(const DensityValidation& v);

/// Multi-line Jordan summary, one line per eigenvalue cluster.
std::string describe(const SpectrumReport& report);

}  // namespace hybridlab::io
