#pragma once

// Sweep CSV, schema icem-sweep/1:
//
//   #schema=icem-sweep/1
//   env,variant,budget,seed,cumulative_reward,success,total_evaluations,error
//   point_mass_sparse,icem,100,0,-23.5,1,5350,
//
// Rewards are written with 17 significant digits so a reload is exact.
// Fields containing a comma, quote or newline are double-quoted.

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "icem/harness/experiment.hpp"
#include "icem/harness/sweep.hpp"
#include "icem/spectrum.hpp"

namespace icem::harness {

inline constexpr const char* kSweepSchema = "#schema=icem-sweep/1";
inline constexpr const char* kSweepHeader = "env,variant,budget,seed,cumulative_reward,success,total_evaluations,error";

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Splits one CSV record; quoted fields may contain commas and doubled quotes.
inline std::vector<std::string> split_csv_record(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

}  // namespace detail

inline std::string format_row(const SweepRow& row) {
  using detail::csv_field;
  return csv_field(row.env) + ',' + csv_field(row.variant) + ',' + std::to_string(row.budget) + ',' +
         std::to_string(row.seed) + ',' + detail::format_double(row.cumulative_reward) + ',' +
         (row.success ? "1" : "0") + ',' + std::to_string(row.total_evaluations) + ',' + csv_field(row.error);
}

inline void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << kSweepSchema << '\n' << kSweepHeader << '\n';
  for (const auto& row : result.rows) out << format_row(row) << '\n';
}

inline void write_sweep_csv(const std::string& path, const SweepResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_sweep_csv(out, result);
}

inline SweepResult read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSweepSchema) {
    throw ValidationError("sweep csv: missing schema line '" + std::string(kSweepSchema) + "'");
  }
  if (!std::getline(in, line) || line != kSweepHeader) throw ValidationError("sweep csv: unexpected header");
  SweepResult result;
  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = detail::split_csv_record(line);
    if (f.size() != 8) {
      throw ValidationError("sweep csv line " + std::to_string(line_no) + ": expected 8 fields");
    }
    SweepRow row;
    row.env = f[0];
    row.variant = f[1];
    row.budget = detail::parse_count("budget", f[2]);
    row.seed = detail::parse_count("seed", f[3]);
    row.cumulative_reward = detail::parse_double("cumulative_reward", f[4]);
    row.success = detail::parse_bool("success", f[5]);
    row.total_evaluations = detail::parse_count("total_evaluations", f[6]);
    row.error = f[7];
    result.rows.push_back(std::move(row));
  }
  return result;
}

inline SweepResult read_sweep_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_sweep_csv(in);
}

/// Spectrum as "frequency,power" rows under a header.
inline void write_spectrum_csv(std::ostream& out, const SpectrumEstimate& spectrum) {
  out << "frequency,power\n";
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    out << detail::format_double(spectrum.frequencies[k]) << ',' << detail::format_double(spectrum.power[k])
        << '\n';
  }
}

}  // namespace icem::harness
