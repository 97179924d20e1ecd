#include "dvbai/results_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dvbai {

std::optional<ResultFormat> parse_result_format(std::string_view name) {
  if (name == "csv") return ResultFormat::Csv;
  if (name == "json") return ResultFormat::Json;
  return std::nullopt;
}

std::string format_real(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

std::string quote_csv(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

template <typename T>
T parse_number(const std::string& text, const char* column) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw std::runtime_error(std::string("results: bad value '") + text + "' in column " + column);
  return value;
}

PolicyKind parse_policy_or_throw(const std::string& name) {
  const auto kind = parse_policy_kind(name);
  if (!kind) throw std::runtime_error("results: unknown policy '" + name + "'");
  return *kind;
}

std::int64_t errors_from_rate(double rate, std::int64_t n) {
  return static_cast<std::int64_t>(std::llround(rate * static_cast<double>(n)));
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : rows) {
    out << quote_csv(r.experiment) << ',' << quote_csv(r.param_name) << ','
        << format_real(r.param_value) << ',' << to_string(r.policy) << ',' << r.K << ','
        << format_real(r.sigma) << ',' << format_real(r.c) << ',' << format_real(r.delta) << ','
        << r.stats.n_trials << ',' << format_real(r.stats.tau.mean) << ','
        << format_real(r.stats.tau.se) << ',' << format_real(r.stats.eta.mean) << ','
        << format_real(r.stats.eta.se) << ',' << format_real(r.stats.cost.mean) << ','
        << format_real(r.stats.cost.se) << ',' << format_real(r.stats.error_rate()) << ','
        << r.master_seed << '\n';
  }
}

std::vector<ResultRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("results: empty CSV");
  const auto header = split_csv_line(line);
  if (header != csv_columns()) {
    for (const auto& col : csv_columns())
      if (std::find(header.begin(), header.end(), col) == header.end())
        throw std::runtime_error("results: CSV header is missing column '" + col + "'");
    throw std::runtime_error("results: CSV header does not match the expected column order");
  }

  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != csv_columns().size())
      throw std::runtime_error("results: CSV row has " + std::to_string(f.size()) + " fields");
    ResultRow r;
    r.experiment = f[0];
    r.param_name = f[1];
    r.param_value = parse_number<double>(f[2], "param_value");
    r.policy = parse_policy_or_throw(f[3]);
    r.K = parse_number<std::size_t>(f[4], "K");
    r.sigma = parse_number<double>(f[5], "sigma");
    r.c = parse_number<double>(f[6], "c");
    r.delta = parse_number<double>(f[7], "delta");
    r.stats.n_trials = parse_number<std::int64_t>(f[8], "n_trials");
    r.stats.tau = {parse_number<double>(f[9], "mean_tau"), parse_number<double>(f[10], "se_tau")};
    r.stats.eta = {parse_number<double>(f[11], "mean_eta"),
                   parse_number<double>(f[12], "se_eta")};
    r.stats.cost = {parse_number<double>(f[13], "mean_cost"),
                    parse_number<double>(f[14], "se_cost")};
    r.stats.errors =
        errors_from_rate(parse_number<double>(f[15], "error_rate"), r.stats.n_trials);
    r.master_seed = parse_number<std::uint64_t>(f[16], "master_seed");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string write_json(const std::vector<ResultRow>& rows) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["experiment"] = r.experiment;
    o["param_name"] = r.param_name;
    o["param_value"] = r.param_value;
    o["policy"] = to_string(r.policy);
    o["K"] = r.K;
    o["sigma"] = r.sigma;
    o["c"] = r.c;
    o["delta"] = r.delta;
    o["n_trials"] = r.stats.n_trials;
    o["mean_tau"] = r.stats.tau.mean;
    o["se_tau"] = r.stats.tau.se;
    o["mean_eta"] = r.stats.eta.mean;
    o["se_eta"] = r.stats.eta.se;
    o["mean_cost"] = r.stats.cost.mean;
    o["se_cost"] = r.stats.cost.se;
    o["error_rate"] = r.stats.error_rate();
    o["master_seed"] = r.master_seed;
    doc.push_back(std::move(o));
  }
  return doc.dump(2) + "\n";
}

std::vector<ResultRow> read_json(std::string_view text) {
  std::vector<ResultRow> rows;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& o : doc) {
      ResultRow r;
      r.experiment = o.at("experiment").get<std::string>();
      r.param_name = o.at("param_name").get<std::string>();
      r.param_value = o.at("param_value").get<double>();
      r.policy = parse_policy_or_throw(o.at("policy").get<std::string>());
      r.K = o.at("K").get<std::size_t>();
      r.sigma = o.at("sigma").get<double>();
      r.c = o.at("c").get<double>();
      r.delta = o.at("delta").get<double>();
      r.stats.n_trials = o.at("n_trials").get<std::int64_t>();
      r.stats.tau = {o.at("mean_tau").get<double>(), o.at("se_tau").get<double>()};
      r.stats.eta = {o.at("mean_eta").get<double>(), o.at("se_eta").get<double>()};
      r.stats.cost = {o.at("mean_cost").get<double>(), o.at("se_cost").get<double>()};
      r.stats.errors = errors_from_rate(o.at("error_rate").get<double>(), r.stats.n_trials);
      r.master_seed = o.at("master_seed").get<std::uint64_t>();
      rows.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("results: ") + e.what());
  }
  return rows;
}

void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path,
                   ResultFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  if (format == ResultFormat::Csv)
    write_csv(out, rows);
  else
    out << write_json(rows);
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<ResultRow> read_results(const std::filesystem::path& path, ResultFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
  if (format == ResultFormat::Csv) return read_csv(in);
  std::ostringstream text;
  text << in.rdbuf();
  return read_json(text.str());
}

}  // namespace dvbai
