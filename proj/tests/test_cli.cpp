#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "qtrace_cli/commands.hpp"
#include "qtrace_cli/config.hpp"

namespace qtrace::cli {
namespace {

namespace fs = std::filesystem;

const char* kFlagship = R"({
  "q": 0.5,
  "P": {"-1": 1.0, "0": -2.0333333333333333, "1": 1.0},
  "k": 1
})";

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qtrace_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

int run_binary(const std::string& args) {
  const std::string cmd = std::string(QTRACE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(CliTest, ParseConfigDefaults) {
  const ProblemConfig cfg = parse_config(kFlagship);
  EXPECT_EQ(cfg.options.W, 32);
  EXPECT_EQ(cfg.options.samples, 4096);
  EXPECT_EQ(cfg.options.gram_size, 8);
  EXPECT_EQ(cfg.options.seed, 42u);
  EXPECT_EQ(cfg.options.k, 1);
  EXPECT_EQ(cfg.options.c, cplx(1.0));
}

TEST_F(CliTest, ParseConfigOverridesAndRootForm) {
  const ProblemConfig cfg = parse_config(R"({
    "q": 0.4, "P": {"roots": [1.2, 0.8333333333333334], "min_exp": -1}, "k": 0,
    "W": 24, "samples": 2048, "gram_size": 4, "seed": 7, "c": [2, 0],
    "tolerances": {"gram": 1e-9}, "free_zeros": [[1.2, 0.3]]
  })");
  EXPECT_EQ(cfg.options.W, 24);
  EXPECT_EQ(cfg.options.samples, 2048);
  EXPECT_EQ(cfg.options.tol.gram, 1e-9);
  EXPECT_EQ(cfg.options.tol.circle, 1e-8);
  ASSERT_TRUE(cfg.options.free_zeros);
  EXPECT_EQ(cfg.options.free_zeros->size(), 1u);
}

TEST_F(CliTest, ConfigErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) {
    try {
      parse_config(text, "cfg.json");
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("{\n \"q\": 1.5,\n \"P\": {\"0\": 1},\n \"k\": 0\n}"), 2);
  EXPECT_EQ(line_of("{\n \"q\": 0.5,\n \"P\": {\"0\": 1},\n \"k\": 0.5\n}"), 4);
  EXPECT_EQ(line_of("{\n \"q\": 0.5,\n \"P\": {\"0\": 1}\n \"k\": 0\n}"), 4);
  EXPECT_EQ(line_of("{\n \"q\": 0.5,\n \"P\": {\"0\": 1},\n \"k\": 0,\n \"bogus\": 1\n}"), 5);
  EXPECT_EQ(line_of("{\n \"q\": 0.5,\n \"P\": {\"1\": 1},\n \"k\": 0\n}"), 3);  // not self-conjugate
  EXPECT_EQ(line_of("{\n \"q\": 0.5,\n \"P\": {\"0\": 1},\n \"k\": 0,\n \"samples\": 1000\n}"), 5);
  EXPECT_EQ(line_of("{\n \"q\": 0.5,\n \"P\": {\"0\": 1},\n \"k\": 0,\n \"W\": 4\n}"), 5);

  try {
    parse_config("{\n \"q\": 1.5, \"P\": {\"0\": 1}, \"k\": 0}", "cfg.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_STREQ(e.what(), "cfg.json:2: q must lie in (0,1)");
  }
}

TEST_F(CliTest, ClassifyExitCodes) {
  std::ostringstream out, err;
  CommandArgs args;
  args.config_path = write("flag.json", kFlagship);
  EXPECT_EQ(cmd_classify(args, out, err), kOk);
  const auto report = nlohmann::json::parse(out.str());
  EXPECT_EQ(report["outcome"], "certified");
  EXPECT_EQ(report["config"]["seed"], 42);

  args.config_path = write("outside.json", R"({"q": 0.5, "P": {"-1": 1, "0": -2.9, "1": 1}, "k": 1})");
  EXPECT_EQ(cmd_classify(args, out, err), kInfeasible);

  args.config_path = write("bad.json", R"({"q": 0.5, "P": {"-1": 1, "0": -2.9, "1": 1}, "k": "one"})");
  std::ostringstream err2;
  EXPECT_EQ(cmd_classify(args, out, err2), kInputError);
  EXPECT_NE(err2.str().find("k must be an integer"), std::string::npos);

  args.config_path = (dir_ / "missing.json").string();
  EXPECT_EQ(cmd_classify(args, out, err), kInputError);
}

TEST_F(CliTest, ClassifyIsDeterministicAndHonoursOut) {
  CommandArgs args;
  args.config_path = write("flag.json", kFlagship);
  args.out_path = (dir_ / "a.json").string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_classify(args, out, err), kOk);
  EXPECT_TRUE(out.str().empty());
  args.out_path = (dir_ / "b.json").string();
  ASSERT_EQ(cmd_classify(args, out, err), kOk);
  EXPECT_EQ(slurp(dir_ / "a.json"), slurp(dir_ / "b.json"));

  args.seed = 99;
  args.out_path = (dir_ / "c.json").string();
  ASSERT_EQ(cmd_classify(args, out, err), kOk);
  EXPECT_EQ(nlohmann::json::parse(slurp(dir_ / "c.json"))["config"]["seed"], 99);
}

TEST_F(CliTest, MomentsCsvAndJson) {
  CommandArgs args;
  args.config_path = write("flag.json", kFlagship);
  args.max_index = 3;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_moments(args, out, err), kOk);
  std::istringstream lines(out.str());
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "i,re,im,abs");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  EXPECT_EQ(rows, 7);

  args.out_path = (dir_ / "m.json").string();
  ASSERT_EQ(cmd_moments(args, out, err), kOk);
  const auto j = nlohmann::json::parse(slurp(*args.out_path));
  EXPECT_EQ(j["W"], 3);
  const double c0 = j["c"]["0"][0], c1 = j["c"]["1"][0];
  EXPECT_NEAR(c1 / c0, 0.8775034769237618, 1e-12);

  args.max_index = 40;
  EXPECT_EQ(cmd_moments(args, out, err), kInputError);
}

TEST_F(CliTest, VerifyPassesOnFlagship) {
  CommandArgs args;
  args.config_path = write("flag.json", kFlagship);
  args.trials = 20;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_verify(args, out, err), kOk) << err.str();
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["trials"], 20);
  EXPECT_EQ(j["oracle_agreement"]["nullspace_dim"], 1);

  args.config_path = write("outside.json", R"({"q": 0.5, "P": {"-1": 1, "0": -2.9, "1": 1}, "k": 1})");
  EXPECT_EQ(cmd_verify(args, out, err), kInfeasible);
}

TEST_F(CliTest, EmitCircle) {
  CommandArgs args;
  args.config_path = write("flag.json", R"({"q": 0.5, "P": {"-1": 1.0, "0": -2.0333333333333333, "1": 1.0},
                                           "k": 1, "W": 32, "samples": 256})");
  for (const std::string f : {"w", "wP"}) {
    args.function = f;
    std::ostringstream out, err;
    ASSERT_EQ(cmd_emit_circle(args, out, err), kOk);
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "phi,re,im");
    int rows = 0;
    while (std::getline(lines, line)) {
      ++rows;
      const double re = std::stod(line.substr(line.find(',') + 1));
      EXPECT_GT(re, 0.0) << f << ": " << line;
    }
    EXPECT_EQ(rows, 256);
  }

  args.config_path = write("neg.json", R"({"q": 0.5, "P": {"-1": 1.0, "0": -2.0333333333333333, "1": 1.0},
                                          "k": 1, "W": 32, "samples": 256, "c": -1})");
  args.function = "w";
  std::ostringstream out, err;
  ASSERT_EQ(cmd_emit_circle(args, out, err), kOk);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) EXPECT_LT(std::stod(line.substr(line.find(',') + 1)), 0.0);

  args.function = "bogus";
  EXPECT_EQ(cmd_emit_circle(args, out, err), kInputError);
}

TEST_F(CliTest, BinaryExitCodesAndDeterminism) {
  const std::string cfg = write("flag.json", kFlagship);
  const std::string a = (dir_ / "a.json").string(), b = (dir_ / "b.json").string();
  EXPECT_EQ(run_binary("classify --config " + cfg + " --out " + a), 0);
  EXPECT_EQ(run_binary("classify --config " + cfg + " --out " + b), 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());

  EXPECT_EQ(run_binary("classify"), 1);
  EXPECT_EQ(run_binary("classify --config " + cfg + " --bogus"), 1);
  EXPECT_EQ(run_binary("emit-circle --config " + cfg + " --function nope"), 1);
  const std::string outside = write("outside.json", R"({"q": 0.5, "P": {"-1": 1, "0": -2.9, "1": 1}, "k": 1})");
  EXPECT_EQ(run_binary("classify --config " + outside), 3);
  EXPECT_EQ(run_binary("moments --config " + cfg + " --max-index 4"), 0);
}

}  // namespace
}  // namespace qtrace::cli
