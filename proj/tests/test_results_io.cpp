#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "dvbai/results_io.hpp"

using namespace dvbai;

namespace {

std::string header_line() {
  std::string h;
  for (const auto& c : csv_columns()) h += (h.empty() ? "" : ",") + c;
  return h;
}

// Random rows with awkward reals and strings that need quoting.
std::vector<ResultRow> random_rows(std::mt19937_64& gen, int n) {
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  std::uniform_int_distribution<int> small(1, 50);
  const PolicyKind kinds[] = {PolicyKind::Wtcs, PolicyKind::Pswse, PolicyKind::Se,
                              PolicyKind::Lucb};
  const char* names[] = {"gap", "my,param", "quote\"d", "plain"};
  std::vector<ResultRow> rows;
  for (int i = 0; i < n; ++i) {
    ResultRow r;
    r.experiment = i % 2 ? "exp1" : "custom";
    r.param_name = names[i % 4];
    r.param_value = u(gen) / 3.0;
    r.policy = kinds[i % 4];
    r.K = static_cast<std::size_t>(small(gen));
    r.sigma = std::fabs(u(gen)) * 1e-7;
    r.c = 0.1 * small(gen);
    r.delta = 1.0 / (small(gen) + 1);
    r.stats.n_trials = small(gen);
    r.stats.errors = r.stats.n_trials / 3;
    r.stats.tau = {u(gen), std::fabs(u(gen)) / 7.0};
    r.stats.eta = {u(gen), std::fabs(u(gen)) / 11.0};
    r.stats.cost = {u(gen), 0.0};
    r.master_seed = gen();
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

TEST(Csv, EmptyTableIsHeaderOnly) {
  std::ostringstream out;
  write_csv(out, {});
  EXPECT_EQ(out.str(), header_line() + "\n");
  std::istringstream in(out.str());
  EXPECT_TRUE(read_csv(in).empty());
}

TEST(Csv, RoundTripIsExact) {
  std::mt19937_64 gen(4);
  for (int rep = 0; rep < 20; ++rep) {
    const auto rows = random_rows(gen, 1 + rep);
    std::ostringstream out;
    write_csv(out, rows);
    std::istringstream in(out.str());
    EXPECT_EQ(read_csv(in), rows);
  }
}

TEST(Json, RoundTripIsExact) {
  std::mt19937_64 gen(5);
  for (int rep = 0; rep < 20; ++rep) {
    const auto rows = random_rows(gen, 1 + rep);
    EXPECT_EQ(read_json(write_json(rows)), rows);
  }
}

TEST(Csv, GoldenRow) {
  ResultRow r;
  r.experiment = "exp1";
  r.param_name = "gap";
  r.param_value = 0.5;
  r.policy = PolicyKind::Wtcs;
  r.K = 5;
  r.sigma = 10;
  r.c = 1;
  r.delta = 0.1;
  r.stats.n_trials = 4;
  r.stats.errors = 1;
  r.stats.tau = {213, 0};
  r.stats.eta = {180, 0};
  r.stats.cost = {393, 0};
  r.master_seed = 7;
  std::ostringstream out;
  write_csv(out, {r});
  EXPECT_EQ(out.str(), header_line() + "\nexp1,gap,0.5,wtcs,5,10,1,0.1,4,213,0,180,0,393,0,0.25,7\n");
}

TEST(Csv, RejectsWrongHeaderOrWidth) {
  std::istringstream bad_header("experiment,param\n");
  EXPECT_THROW(read_csv(bad_header), std::runtime_error);
  std::istringstream short_row(header_line() + "\nexp1,gap,0.5\n");
  EXPECT_THROW(read_csv(short_row), std::runtime_error);
  std::istringstream bad_policy(header_line() +
                                "\nexp1,gap,0.5,ucb,5,10,1,0.1,4,213,0,180,0,393,0,0.25,7\n");
  EXPECT_THROW(read_csv(bad_policy), std::runtime_error);
}

TEST(Csv, MissingColumnIsNamed) {
  std::string header;
  for (const auto& c : csv_columns())
    if (c != "mean_cost") header += (header.empty() ? "" : ",") + c;
  std::istringstream in(header + "\n");
  try {
    read_csv(in);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("mean_cost"), std::string::npos) << e.what();
  }
}

TEST(Json, MissingKeyIsAnError) {
  EXPECT_THROW(read_json(R"([{"experiment": "exp1"}])"), std::runtime_error);
  EXPECT_THROW(read_json("[{"), std::runtime_error);
}

TEST(Files, RoundTripThroughDisk) {
  std::mt19937_64 gen(6);
  const auto rows = random_rows(gen, 5);
  const auto dir = std::filesystem::temp_directory_path() / "dvbai_results_io_test";
  std::filesystem::create_directories(dir);
  for (auto fmt : {ResultFormat::Csv, ResultFormat::Json}) {
    const auto path = dir / (fmt == ResultFormat::Csv ? "t.csv" : "t.json");
    write_results(rows, path, fmt);
    EXPECT_EQ(read_results(path, fmt), rows);
  }
  std::filesystem::remove_all(dir);
}

TEST(Files, ErrorsNameThePath) {
  const std::filesystem::path path = "/nonexistent-dir/sub/out.csv";
  try {
    write_results({}, path, ResultFormat::Csv);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find(path.string()), std::string::npos);
  }
  EXPECT_THROW(read_results(path, ResultFormat::Json), std::runtime_error);
}

TEST(Format, ParsesNames) {
  EXPECT_EQ(parse_result_format("csv"), ResultFormat::Csv);
  EXPECT_EQ(parse_result_format("json"), ResultFormat::Json);
  EXPECT_FALSE(parse_result_format("xml"));
  EXPECT_EQ(format_real(0.1), "0.1");
  EXPECT_EQ(format_real(393.0), "393");
}
