#include "hybridlab/run_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hybridlab/error.hpp"

namespace hybridlab::io {

std::string format_double(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] == name) return j;
  }
  throw InvalidArgument("no column named '" + name + "'");
}

std::vector<double> Table::values(const std::string& name) const {
  const std::size_t j = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[j]);
  return out;
}

namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

std::string to_csv(const Table& table) {
  std::ostringstream out;
  for (std::size_t j = 0; j < table.columns.size(); ++j) out << (j ? "," : "") << quote(table.columns[j]);
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_double(row[j]);
    out << '\n';
  }
  return out.str();
}

Table parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Table table;
  if (!std::getline(in, line)) throw InvalidArgument("empty CSV");
  table.columns = split_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != table.columns.size()) throw InvalidArgument("CSV row has the wrong number of fields");
    std::vector<double> row;
    for (const auto& f : fields) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc{} || ptr != f.data() + f.size()) {
        // from_chars rejects "inf"/"nan" spellings of printf
        if (f == "inf") v = INFINITY;
        else if (f == "-inf") v = -INFINITY;
        else if (f == "nan" || f == "-nan") v = NAN;
        else throw InvalidArgument("bad CSV number '" + f + "'");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << contents;
    if (!out.flush()) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json to_json(const SpectrumReport& report) {
  nlohmann::json clusters = nlohmann::json::array();
  for (const auto& c : report.clusters) {
    clusters.push_back({{"eigenvalue", {{"re", c.eigenvalue.real()}, {"im", c.eigenvalue.imag()}}},
                        {"algebraic_multiplicity", c.algebraic},
                        {"geometric_multiplicity", c.geometric},
                        {"longest_jordan_chain", c.longest_chain}});
  }
  return {{"clusters", clusters},
          {"tolerance", report.tolerance},
          {"ill_conditioned", report.ill_conditioned},
          {"secular_growth", report.has_secular_growth()}};
}

nlohmann::json to_json(const EnvelopeFit& fit) {
  return {{"degree", fit.degree}, {"coefficients", fit.coefficients}, {"residual", fit.residual}, {"points", fit.points}};
}

nlohmann::json to_json(const DensityValidation& v) {
  return {{"hermiticity_residual", v.hermiticity_residual},
          {"trace_deviation", v.trace_deviation},
          {"min_eigenvalue", v.min_eigenvalue},
          {"hermitian", v.hermitian},
          {"unit_trace", v.unit_trace},
          {"positive", v.positive},
          {"passed", v.passed()}};
}

std::string describe(const SpectrumReport& report) {
  std::ostringstream out;
  for (const auto& c : report.clusters) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "lambda = %+.12f %+.12fi  algebraic %zu  geometric %zu  Jordan chain %zu\n",
                  c.eigenvalue.real(), c.eigenvalue.imag(), c.algebraic, c.geometric, c.longest_chain);
    out << buf;
  }
  out << (report.has_secular_growth() ? "secular growth: yes (defective or unstable eigenvalue)\n"
                                      : "secular growth: no (all eigenvalues imaginary and semisimple)\n");
  if (report.ill_conditioned) out << "warning: eigenvalue clustering is ambiguous at tolerance " << report.tolerance << '\n';
  return out.str();
}

}  // namespace hybridlab::io
