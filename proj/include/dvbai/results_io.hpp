// CSV / JSON persistence of result tables.
//
// CSV column order is fixed:
//   experiment,param_name,param_value,policy,K,sigma,c,delta,n_trials,
//   mean_tau,se_tau,mean_eta,se_eta,mean_cost,se_cost,error_rate,master_seed
// Reals are written in shortest round-trip form, so read(write(t)) == t.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dvbai/experiments.hpp"

namespace dvbai {

enum class ResultFormat { Csv, Json };

std::optional<ResultFormat> parse_result_format(std::string_view name);

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "experiment", "param_name", "param_value", "policy",   "K",       "sigma",
      "c",          "delta",      "n_trials",    "mean_tau", "se_tau",  "mean_eta",
      "se_eta",     "mean_cost",  "se_cost",     "error_rate", "master_seed"};
  return cols;
}

/// Shortest decimal text that parses back to exactly `value`.
std::string format_real(double value);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::string write_json(const std::vector<ResultRow>& rows);

std::vector<ResultRow> read_csv(std::istream& in);
std::vector<ResultRow> read_json(std::string_view text);

/// Throws std::runtime_error naming the path on I/O failure.
void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path,
                   ResultFormat format);
std::vector<ResultRow> read_results(const std::filesystem::path& path, ResultFormat format);

}  // namespace dvbai
