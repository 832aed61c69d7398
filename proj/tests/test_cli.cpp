#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "exforge/cli.hpp"

using namespace exforge;
using namespace exforge::cli;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("exforge_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  static std::size_t count_lines(const std::string& text, bool skip_comments) {
    std::istringstream is(text);
    std::string line;
    std::size_t n = 0;
    while (std::getline(is, line)) {
      if (skip_comments && !line.empty() && line[0] == '#') continue;
      ++n;
    }
    return n;
  }

  fs::path dir_;
  RunConfig cfg_;
  std::ostringstream out_, err_;
};

int run_binary(const std::string& args) {
  const std::string cmd = std::string(EXFORGE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST(ConstructorSpecs, Parsing) {
  auto s = parse_constructor("lps:5,13");
  EXPECT_EQ(s.name, "lps");
  EXPECT_EQ(s.args, (std::vector<std::string>{"5", "13"}));
  EXPECT_EQ(s.augmentations, 0U);
  s = parse_constructor("complete:4+k2");
  EXPECT_EQ(s.name, "complete");
  EXPECT_EQ(s.augmentations, 1U);
  s = parse_constructor("cycle:5+k2^3+k2");
  EXPECT_EQ(s.augmentations, 4U);
  s = parse_constructor("petersen");
  EXPECT_TRUE(s.args.empty());
}

TEST_F(CliTest, SieveLinesAndExitCodes) {
  EXPECT_EQ(cmd_sieve(1000, 2000, 1, cfg_, out_, err_), kOk);
  EXPECT_EQ(count_lines(out_.str(), true), 1001U);
  EXPECT_NE(out_.str().find("1000 998 2\n"), std::string::npos);
  EXPECT_NE(out_.str().find("# records=1001 absent=0"), std::string::npos);

  std::ostringstream one;
  EXPECT_EQ(cmd_sieve(20, 20, 1, cfg_, one, err_), kOk);
  EXPECT_EQ(count_lines(one.str(), true), 1U);
  EXPECT_EQ(cmd_sieve(5, 4, 1, cfg_, out_, err_), kUsage);
  EXPECT_EQ(cmd_sieve(100, 200, 0, cfg_, out_, err_), kUsage);
}

TEST_F(CliTest, SieveWritesToOutputDirectory) {
  cfg_.output_dir = path("out");
  EXPECT_EQ(cmd_sieve(16, 100, 1, cfg_, out_, err_), kOk);
  EXPECT_EQ(count_lines(slurp(path("out/sieve_16_100_1.txt")), true), 85U);
}

TEST_F(CliTest, ConstructPaleyAndRoundTrip) {
  const auto file = path("p13.g");
  ASSERT_EQ(cmd_construct("paley:13", file, cfg_, out_, err_), kOk) << err_.str();
  const auto text = slurp(file);
  EXPECT_EQ(text.rfind("# label: paley:13\n", 0), 0U);
  EXPECT_NE(text.find("# config: tolerance=1e-10 dense_threshold=4096 budget=1000000 seed=55930"),
            std::string::npos);
  const auto g = load_graph(file);
  EXPECT_EQ(g.vertex_count(), 13U);
  EXPECT_EQ(g.degree(), 6U);
  EXPECT_EQ(g, constructions::paley_graph(13));
}

TEST_F(CliTest, ConstructErrors) {
  EXPECT_EQ(cmd_construct("lps:5,12", path("x.g"), cfg_, out_, err_), kUsage);
  EXPECT_EQ(cmd_construct("nosuch:3", path("x.g"), cfg_, out_, err_), kUsage);
  EXPECT_EQ(cmd_construct("complete:x", path("x.g"), cfg_, out_, err_), kUsage);
  EXPECT_EQ(cmd_construct("pipeline:20,paper,1", path("x.g"), cfg_, out_, err_), kUsage);
  cfg_.size_budget = 1000;
  EXPECT_EQ(cmd_construct("lps:5,13", path("x.g"), cfg_, out_, err_), kBudget);
  EXPECT_EQ(cmd_construct("complete:4+k2^10", path("x.g"), cfg_, out_, err_), kBudget);
  EXPECT_FALSE(fs::exists(path("x.g")));
}

TEST_F(CliTest, CertifyCompleteGraph) {
  const auto file = path("k4.g");
  ASSERT_EQ(cmd_construct("complete:4", file, cfg_, out_, err_), kOk);
  std::ostringstream report;
  ASSERT_EQ(cmd_certify(file, cfg_, report, err_), kOk) << err_.str();
  const auto text = report.str();
  EXPECT_NE(text.find("lambda2: -1"), std::string::npos) << text;
  EXPECT_NE(text.find("theorem2_bound_holds=true ramanujan_holds=true "
                      "theorem4_iterated_claim_holds=true exact_prediction_matches=true"),
            std::string::npos)
      << text;
  EXPECT_NE(text.find("# provenance: verified"), std::string::npos);
}

TEST_F(CliTest, CertifyPrismReportsTheorem4False) {
  const auto file = path("prism.g");
  ASSERT_EQ(cmd_construct("complete:4+k2", file, cfg_, out_, err_), kOk);
  std::ostringstream report;
  ASSERT_EQ(cmd_certify(file, cfg_, report, err_), kOk) << err_.str();
  const auto text = report.str();
  const auto at = text.find("\nlambda2: ");
  ASSERT_NE(at, std::string::npos);
  EXPECT_NEAR(std::stod(text.substr(at + 10)), 2.0, 1e-12);
  EXPECT_NE(text.find("theorem4_iterated_claim_holds=false"), std::string::npos) << text;
  EXPECT_NE(text.find("ramanujan_holds=true"), std::string::npos) << text;
}

TEST_F(CliTest, CertifyUnlabelledGraphHasNoBase) {
  const auto file = path("bare.g");
  std::ofstream(file) << "4 3\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
  std::ostringstream report;
  ASSERT_EQ(cmd_certify(file, cfg_, report, err_), kOk);
  EXPECT_NE(report.str().find("theorem4_iterated_claim_holds=n/a"), std::string::npos);
  EXPECT_NE(report.str().find("# provenance: unknown"), std::string::npos);
}

TEST_F(CliTest, CertifyForgedLabelIsNotTrusted) {
  const auto file = path("forged.g");
  std::ofstream(file) << "# label: complete:4+k2^1\n4 3\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
  std::ostringstream report;
  ASSERT_EQ(cmd_certify(file, cfg_, report, err_), kOk);
  EXPECT_NE(report.str().find("# provenance: unknown"), std::string::npos);
}

TEST_F(CliTest, CertifyErrors) {
  std::ofstream(path("bad.g")) << "3 2\n0 1\n";
  EXPECT_EQ(cmd_certify(path("bad.g"), cfg_, out_, err_), kUsage);
  EXPECT_EQ(cmd_certify(path("missing.g"), cfg_, out_, err_), kUsage);
  std::ofstream(path("split.g")) << "4 1\n0 1\n2 3\n";
  EXPECT_EQ(cmd_certify(path("split.g"), cfg_, out_, err_), kUsage);
  std::ofstream(path("k4.g")) << "4 3\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
  cfg_.tolerance = 1e-40;
  EXPECT_EQ(cmd_certify(path("k4.g"), cfg_, out_, err_), kNumerical);
}

TEST_F(CliTest, SpectrumOutput) {
  const auto file = path("c6.g");
  ASSERT_EQ(cmd_construct("cycle:6", file, cfg_, out_, err_), kOk);
  std::ostringstream spec;
  ASSERT_EQ(cmd_spectrum(file, cfg_, spec, err_), kOk);
  std::istringstream is(spec.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line.rfind("# method=dense", 0), 0U);
  std::vector<double> values;
  while (std::getline(is, line)) values.push_back(std::stod(line));
  ASSERT_EQ(values.size(), 6U);
  EXPECT_NEAR(values[0], 2.0, 1e-12);
  EXPECT_NEAR(values[5], -2.0, 1e-12);
}

TEST_F(CliTest, SurveyCsv) {
  std::ostringstream csv;
  ASSERT_EQ(cmd_survey(3, 3, "paper", cfg_, csv, err_), kOk);
  EXPECT_EQ(count_lines(csv.str(), false), 2U);
  EXPECT_NE(csv.str().find("planning-only"), std::string::npos);
  EXPECT_EQ(cmd_survey(8, 6, "lps", cfg_, out_, err_), kUsage);
  EXPECT_EQ(cmd_survey(6, 8, "zigzag", cfg_, out_, err_), kUsage);

  cfg_.output_dir = path("csv");
  cfg_.dense_threshold = 1000;
  ASSERT_EQ(cmd_survey(6, 8, "lps", cfg_, out_, err_), kOk) << err_.str();
  const auto text = slurp(path("csv/survey_6_8_lps.csv"));
  EXPECT_EQ(count_lines(text, false), 4U);
}

TEST(CliBinary, ExitCodes) {
  EXPECT_EQ(run_binary("sieve 20 20 1"), 0);
  EXPECT_EQ(run_binary("sieve 5 4 1"), 2);
  EXPECT_EQ(run_binary("survey 8 6 lps"), 2);
  EXPECT_EQ(run_binary("frobnicate"), 2);
  EXPECT_EQ(run_binary("sieve"), 2);
  EXPECT_EQ(run_binary("--budget 100 construct lps:5,13 /dev/null"), 3);
}

TEST(CliBinary, EnvironmentOverride) {
  EXPECT_EQ(run_binary("construct lps:5,13 /dev/null"), 0);
  EXPECT_EQ(std::system((std::string("EXFORGE_BUDGET=100 ") + EXFORGE_CLI_PATH +
                         " construct lps:5,13 /dev/null >/dev/null 2>&1")
                            .c_str()) >> 8,
            3);
}
