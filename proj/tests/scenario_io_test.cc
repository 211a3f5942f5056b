#include "salem/scenario_io.h"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "salem/error.h"

namespace salem {
namespace {

Json Jarnik() {
  return Json::parse(R"({"m": 1, "n": 1, "theta": [0.5], "Q": {"kind": "all_integers"},
    "Psi": {"family": "power", "tau": 2}, "a": 0.3333333333333333,
    "h": {"family": "constant", "c": 4}, "Mset": [2, 4, 8, 16]})");
}

TEST(ScenarioJson, RoundTripAndHash) {
  Scenario s = ScenarioFromJson(Jarnik());
  EXPECT_EQ(s.theta, std::vector<double>{0.5});
  EXPECT_EQ(s.Mset.size(), 4u);
  Json back = ScenarioToJson(s);
  Scenario t = ScenarioFromJson(back);
  EXPECT_EQ(ScenarioToJson(t), back);
  EXPECT_EQ(ScenarioHash(s), ScenarioHash(t));
  EXPECT_EQ(ScenarioHash(s).size(), 16u);
  Json other = Jarnik();
  other["a"] = 0.25;
  EXPECT_NE(ScenarioHash(ScenarioFromJson(other)), ScenarioHash(s));
}

TEST(ScenarioJson, Rejections) {
  Json j = Jarnik();
  j["extra"] = 1;
  EXPECT_THROW(ScenarioFromJson(j), InputError);
  j = Jarnik();
  j.erase("theta");
  EXPECT_THROW(ScenarioFromJson(j), InputError);
  j = Jarnik();
  j.erase("Q");
  EXPECT_THROW(ScenarioFromJson(j), InputError);
  j = Jarnik();
  j["Psi"]["family"] = "gauss";
  EXPECT_THROW(ScenarioFromJson(j), InputError);
  j = Jarnik();
  j["Mset"] = {8, 4};
  EXPECT_THROW(ScenarioFromJson(j), InputError);
  j = Jarnik();
  j["m"] = "one";
  EXPECT_THROW(ScenarioFromJson(j), InputError);
}

TEST(ScenarioJson, ExplicitAndFilePayloads) {
  Json j = Jarnik();
  j["Q"] = Json{{"kind", "explicit_list"}, {"payload", {3, 5, 7}}};
  EXPECT_EQ(ScenarioFromJson(j).Q.Window(8).size(), 2u);
  std::string dir = ::testing::TempDir();
  {
    std::ofstream f(dir + "/q_payload.txt");
    f << "6\n7\n8\n";
  }
  j["Q"] = Json{{"kind", "file"}, {"path", "q_payload.txt"}};
  EXPECT_EQ(ScenarioFromJson(j, dir).Q.Window(8).size(), 3u);
  EXPECT_THROW(ScenarioFromJson(j, dir + "/nowhere"), InputError);
}

TEST(ScenarioJson, PresetsParse) {
  ASSERT_GE(ScenarioPresetNames().size(), 8u);
  for (const auto& name : ScenarioPresetNames()) {
    Json j = ScenarioPreset(name);
    EXPECT_EQ(j["name"], name);
    EXPECT_NO_THROW(ScenarioFromJson(j)) << name;
  }
  EXPECT_THROW(ScenarioPreset("nope"), InputError);
  auto p = PredictFromJson(Json::parse(R"({"predict": {"descriptor": "dodson", "params": {"lambda": "3/2"}}})"));
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->params.at("lambda"), Rational(3, 2));
  EXPECT_FALSE(PredictFromJson(Jarnik()).has_value());
}

TEST(Formatting, RealsAndHash) {
  EXPECT_EQ(FormatReal(0.1), "0.1");
  EXPECT_EQ(FormatReal(1e300), "1e+300");
  EXPECT_TRUE(RealJson(std::nan("")).is_null());
  EXPECT_EQ(Fnv1a64Hex(""), "cbf29ce484222325");
  EXPECT_EQ(Fnv1a64Hex("a"), "af63dc4c8601ec8c");
}

TEST(Formatting, SpectrumCsv) {
  Scenario s = ScenarioFromJson(Jarnik());
  SpectrumTable t = FmHatTable(s, 8, 16);
  std::ostringstream os;
  WriteSpectrumCsv(t, os);
  std::string csv = os.str();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "l1,re,im");
  std::size_t lines = std::count(csv.begin(), csv.end(), '\n');
  EXPECT_EQ(lines, t.size() + 1);
  Json meta = SpectrumMetaJson(t);
  EXPECT_EQ(meta["window_size"], 8);
}

}  // namespace
}  // namespace salem
