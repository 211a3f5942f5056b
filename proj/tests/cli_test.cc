#include "cli.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "salem/scenario_io.h"

namespace salem {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::Run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string WriteScenario(const std::string& name, const Json& j) {
  std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << j.dump();
  return path;
}

std::string Slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

TEST(Cli, Presets) {
  Result r = Invoke({"presets"});
  ASSERT_EQ(r.code, 0) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_TRUE(j.contains("manifest"));
  EXPECT_EQ(j["manifest"]["command"], "presets");
  EXPECT_TRUE(j["presets"]["scenarios"].contains("jarnik_tau2"));
}

TEST(Cli, CertifyExitCodes) {
  Result ok = Invoke({"certify", "preset:jarnik_tau2"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_TRUE(Json::parse(ok.out)["certify"]["pass"].get<bool>());

  Json fail = ScenarioPreset("jarnik_tau2");
  fail["a"] = 3;
  fail["K"] = 8;
  EXPECT_EQ(Invoke({"certify", WriteScenario("cert_fail.json", fail)}).code, 1);

  Json empty = ScenarioPreset("squares_tau2");
  empty["Mset"] = {4, 8, 16};
  Result e = Invoke({"certify", WriteScenario("cert_empty.json", empty)});
  EXPECT_EQ(e.code, 2);
  EXPECT_NE(e.err.find("M = 8"), std::string::npos) << e.err;

  Result je = Invoke({"--json-errors", "certify", WriteScenario("cert_empty.json", empty)});
  EXPECT_EQ(je.code, 2);
  Json err = Json::parse(je.err)["error"];
  EXPECT_EQ(err["type"], "EmptyWindowError");
  EXPECT_EQ(err["M"], 8);
  EXPECT_EQ(err["exit_code"], 2);
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(Invoke({"certify", "/no/such/file.json"}).code, 2);
  EXPECT_EQ(Invoke({"certify", "preset:unknown"}).code, 2);
  EXPECT_EQ(Invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(Invoke({"spectrum", "preset:jarnik_tau2"}).code, 2);
  std::string bad = ::testing::TempDir() + "bad.json";
  std::ofstream(bad) << "{not json";
  Result r = Invoke({"--json-errors", "certify", bad});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(Json::parse(r.err)["error"]["type"], "InputError");
}

TEST(Cli, DimsOnMnPreset) {
  Result r = Invoke({"dims", "preset:mn_app_m4_n2_tau2"});
  ASSERT_EQ(r.code, 0) << r.err;
  Json d = Json::parse(r.out)["dims"];
  EXPECT_EQ(d["hausdorff_pred"], 6.0);
  EXPECT_NEAR(d["fourier_lower_pred"].get<double>(), 4.0 / 3, 1e-15);
  EXPECT_EQ(d["prediction"]["hausdorff"], "6");
  EXPECT_EQ(d["prediction"]["fourier_lower"], "4/3");
}

TEST(Cli, CoverAndSpectrum) {
  Result c = Invoke({"cover", "preset:jarnik_tau2", "--eta", "0.8", "--from", "100", "--to", "10000"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_GT(Json::parse(c.out)["cover"]["value"].get<double>(), 0);
  Result s = Invoke({"spectrum", "preset:jarnik_tau2", "--M", "32", "--lmax", "512"});
  ASSERT_EQ(s.code, 0) << s.err;
  Json env = Json::parse(s.out)["spectrum"]["envelope"];
  EXPECT_LE(env["max_ratio"].get<double>(), env["C1"].get<double>());
}

TEST(Cli, OutputsAreDeterministic) {
  const std::vector<std::vector<std::string>> commands = {
      {"certify", "preset:squares_tau2"},
      {"spectrum", "preset:jarnik_tau2_shifted", "--M", "16", "--lmax", "128"},
      {"measure", "preset:jarnik_tau2", "--levels", "1", "--grid", "4", "--box", "32", "--points", "4096"},
      {"dims", "preset:powers_of_two"},
  };
  for (const auto& cmd : commands) {
    std::vector<fs::path> dirs;
    for (int rep = 0; rep < 2; ++rep) {
      fs::path dir = fs::path(::testing::TempDir()) / ("det_" + cmd[0] + "_" + std::to_string(rep));
      fs::remove_all(dir);
      auto args = cmd;
      args.insert(args.begin(), {"--threads", rep == 0 ? "1" : "3"});
      args.push_back("--out");
      args.push_back(dir.string());
      Result r = Invoke(args);
      ASSERT_EQ(r.code, 0) << cmd[0] << ": " << r.err;
      dirs.push_back(dir);
    }
    Json manifest = Json::parse(Slurp(dirs[0] / "manifest.json"));
    ASSERT_GE(manifest["outputs"].size(), 2u);
    for (const auto& name : manifest["outputs"]) {
      std::string file = name.get<std::string>();
      ASSERT_TRUE(fs::exists(dirs[0] / file)) << file;
      if (file == "manifest.json") continue;
      EXPECT_EQ(Slurp(dirs[0] / file), Slurp(dirs[1] / file)) << cmd[0] << " " << file;
    }
  }
}

TEST(Cli, VerifyStructural) {
  Result r = Invoke({"verify", "--suite", "structural"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("[PASS] 1 "), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("[PASS] 3 "), std::string::npos) << r.out;
  EXPECT_EQ(Invoke({"verify", "--suite", "bogus"}).code, 2);
}

}  // namespace
}  // namespace salem
