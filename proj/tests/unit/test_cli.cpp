#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "stochint/cli.hpp"
#include "stochint/expansion.hpp"
#include "stochint/mc.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = stochint::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json json_of(const Result& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Cli, CoeffsTable) {
  const Result r = run({"coeffs", "-k", "3", "-p", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_of(r);
  ASSERT_EQ(j["entries"].size(), 343u);
  bool found = false;
  for (const auto& e : j["entries"]) {
    if (e["j"] == std::vector<int>{1, 0, 3}) {
      found = true;
      EXPECT_EQ(e["num"], "2");
      EXPECT_EQ(e["den"], "105");
    }
  }
  EXPECT_TRUE(found);
  EXPECT_NE(r.err.find("entries 343"), std::string::npos);
}

TEST(Cli, CoeffsWeightedSingle) {
  const Result r = run({"coeffs", "-k", "1", "-w", "1", "-p", "1", "-t", "0", "-T", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_of(r);
  EXPECT_NEAR(j["entries"][0]["c"].get<double>(), -4.0, 1e-14);
  EXPECT_NEAR(j["entries"][1]["c"].get<double>(), -4.0 / std::sqrt(3.0), 1e-14);
  const Result csv = run({"coeffs", "-w", "0,0", "-p", "0", "--format", "csv"});
  ASSERT_EQ(csv.code, 0);
  EXPECT_NE(csv.out.find("j_1,j_2,num,den,c\n0,0,2,1,0.5"), std::string::npos);
}

TEST(Cli, CoeffsToFile) {
  const auto path = std::filesystem::temp_directory_path() / "stochint_cli_table.json";
  const Result r = run({"coeffs", "-k", "2", "-p", "2", "-o", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("entries 9"), std::string::npos);
  std::ifstream in(path);
  const auto table = stochint::table_from_json(nlohmann::json::parse(in));
  EXPECT_EQ(table.size(), 9u);
  std::filesystem::remove(path);
}

TEST(Cli, ErrorReports) {
  const Result r = run({"error", "-k", "3", "-p", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json_of(r)["exact"].get<double>(), 0.0195538576, 1e-10);
  const Result w = run({"error", "-w", "0,1,0", "-p", "2"});
  EXPECT_NEAR(json_of(w)["exact"].get<double>(), 0.0168348450, 1e-10);
  const Result eq = run({"error", "-k", "2", "-p", "3", "--pattern", "1,1"});
  EXPECT_EQ(json_of(eq)["exact"].get<double>(), 0.0);
  const Result sweep = run({"error", "-k", "3", "-p", "4", "--sweep"});
  ASSERT_EQ(json_of(sweep).size(), 5u);
  const Result csv = run({"error", "-k", "3", "-p", "2", "--format", "csv"});
  EXPECT_EQ(csv.out.substr(0, 20), "p,exact,bound,ratio\n");
}

TEST(Cli, Select) {
  const Result r = run({"select", "-k", "3", "--eps", "0.12"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json_of(r)["p"], 6);
  const Result none = run({"select", "-k", "3", "--eps", "1e-9", "--p-max", "8"});
  EXPECT_EQ(none.code, 1);
  EXPECT_EQ(json_of(none)["found"], false);
  EXPECT_EQ(json_of(none)["best_p"], 8);
}

TEST(Cli, SampleIsReproducible) {
  const std::vector<std::string> args = {"sample", "I_(00)", "I*_(10)", "-q", "4", "-n", "300",
                                         "--seed", "17", "--pattern", "1,1", "--workers", "3"};
  const Result a = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  std::vector<std::string> serial = args;
  serial.back() = "1";
  EXPECT_EQ(run(serial).out, a.out);
  auto other = args;
  other[8] = "18";
  EXPECT_NE(run(other).out, a.out);
}

TEST(Cli, SampleTripleCoincidingMatchesHermite) {
  const Result r = run({"sample", "I_(000)", "-q", "3", "-n", "50", "--seed", "5", "--pattern", "1,1,1",
                        "-T", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = json_of(r)["rows"];
  ASSERT_EQ(rows.size(), 50u);
  for (std::size_t s = 0; s < rows.size(); ++s) {
    const double z = stochint::zeta_variate(5, s, 1, 0);
    EXPECT_NEAR(rows[s][0].get<double>(), stochint::hermite_closed_form(3, std::sqrt(2.0) * z, 2.0), 1e-12);
  }
}

TEST(Cli, Verify) {
  const Result tables = run({"verify", "--only", "tables"});
  EXPECT_EQ(tables.code, 0) << tables.err;
  EXPECT_NE(tables.err.find("3/3 checks passed"), std::string::npos);
  const Result quick = run({"verify", "--quick"});
  EXPECT_EQ(quick.code, 0) << quick.err;
  EXPECT_EQ(json_of(quick)["pass"], true);
}

TEST(Cli, UsageErrorsNameTheFlag) {
  const Result unknown = run({"coeffs", "--bogus"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("--bogus"), std::string::npos);
  const Result mismatch = run({"coeffs", "-k", "3", "-w", "0,1"});
  EXPECT_EQ(mismatch.code, 2);
  EXPECT_NE(mismatch.err.find("-w"), std::string::npos);
  const Result fmt = run({"coeffs", "-k", "2", "--format", "xml"});
  EXPECT_EQ(fmt.code, 2);
  EXPECT_NE(fmt.err.find("--format"), std::string::npos);
  const Result basis = run({"coeffs", "-k", "2", "--basis", "haar"});
  EXPECT_NE(basis.err.find("--basis"), std::string::npos);
  const Result interval = run({"error", "-k", "2", "-t", "1", "-T", "1"});
  EXPECT_EQ(interval.code, 2);
  EXPECT_NE(interval.err.find("-T"), std::string::npos);
  const Result pattern = run({"error", "-k", "3", "--pattern", "1,0,1"});
  EXPECT_EQ(pattern.code, 2);
  EXPECT_NE(pattern.err.find("--pattern"), std::string::npos);
  const Result name = run({"sample", "I_(7)"});
  EXPECT_EQ(name.code, 2);
  EXPECT_NE(name.err.find("I_(7)"), std::string::npos);
  const Result group = run({"verify", "--only", "everything"});
  EXPECT_EQ(group.code, 2);
  EXPECT_NE(group.err.find("--only"), std::string::npos);
  EXPECT_EQ(run({}).code, 2);
}

TEST(Cli, BudgetExceeded) {
  const Result r = run({"coeffs", "-k", "10", "-p", "9"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("limit"), std::string::npos);
}

TEST(Cli, Help) {
  const Result r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("coeffs"), std::string::npos);
  EXPECT_NE(r.out.find("verify"), std::string::npos);
}
