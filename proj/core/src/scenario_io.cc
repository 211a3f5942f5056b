#include "salem/scenario_io.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "salem/error.h"

namespace salem {
namespace {

const std::vector<std::string>& AllowedKeys() {
  static const std::vector<std::string> keys = {"m", "n", "theta", "Q", "Psi", "a", "h",
                                                "Mset", "K", "predict", "name"};
  return keys;
}

template <typename T>
T Get(const Json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("scenario is missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw InputError(std::string("scenario key '") + key + "' has the wrong type");
  }
}

std::vector<double> Reals(const Json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing '") + key + "'");
  const Json& v = j.at(key);
  if (!v.is_array()) throw InputError(std::string("'") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw InputError(std::string("'") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

QSet ParseQ(const Json& j, int n, const std::string& base_dir) {
  if (!j.is_object()) throw InputError("'Q' must be an object");
  QKind kind = ParseQKind(Get<std::string>(j, "kind"));
  if (kind == QKind::kExplicitList) {
    if (!j.contains("payload") || !j["payload"].is_array()) throw InputError("explicit_list needs a payload array");
    std::vector<IntVec> elems;
    for (const auto& e : j["payload"]) {
      if (e.is_number_integer()) {
        elems.push_back({e.get<std::int64_t>()});
      } else if (e.is_array()) {
        IntVec q;
        for (const auto& t : e) {
          if (!t.is_number_integer()) throw InputError("Q payload entries must be integers");
          q.push_back(t.get<std::int64_t>());
        }
        elems.push_back(std::move(q));
      } else {
        throw InputError("Q payload entries must be integers or integer vectors");
      }
    }
    return QSet::Explicit(n, std::move(elems));
  }
  if (kind == QKind::kFile) {
    std::filesystem::path p(Get<std::string>(j, "path"));
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    return QSet::FromFile(n, p.string());
  }
  return QSet::Preset(kind, n);
}

Psi ParsePsi(const Json& j) {
  if (!j.is_object()) throw InputError("'Psi' must be an object");
  std::string family = Get<std::string>(j, "family");
  if (family == "power") return Psi::Power(Get<double>(j, "tau"));
  if (family == "hinokuma_shiga") return Psi::HinokumaShiga(Get<double>(j, "tau"));
  if (family == "tabulated") return Psi::Tabulated(Reals(j, "table"));
  throw InputError("unknown Psi family: " + family);
}

HFunction ParseH(const Json& j) {
  if (!j.is_object()) throw InputError("'h' must be an object");
  std::string family = Get<std::string>(j, "family");
  if (family == "constant") return HFunction::Constant(Get<double>(j, "c"));
  if (family == "log") return HFunction::Log(Get<double>(j, "c"), j.contains("p") ? Get<double>(j, "p") : 1.0);
  if (family == "table") return HFunction::Table(Reals(j, "xs"), Reals(j, "ys"));
  throw InputError("unknown h family: " + family);
}

Rational ParseRational(const Json& v) {
  if (v.is_string()) return Rational::Parse(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (v.is_number()) return Rational::FromDouble(v.get<double>());
  throw InputError("predictor parameters must be numbers or \"p/q\" strings");
}

Json ScenarioDoc(int m, int n, std::vector<double> theta, Json Q, Json psi, double a, Json h,
                 std::vector<double> Mset) {
  return Json{{"m", m}, {"n", n}, {"theta", theta}, {"Q", Q}, {"Psi", psi},
              {"a", a}, {"h", h}, {"Mset", Mset}};
}

std::vector<double> Powers(int lo, int hi) {
  std::vector<double> out;
  for (int j = lo; j <= hi; ++j) out.push_back(std::ldexp(1.0, j));
  return out;
}

Json Complexes(Complex z) { return Json::array({RealJson(z.real()), RealJson(z.imag())}); }

}  // namespace

Scenario ScenarioFromJson(const Json& j, const std::string& base_dir) {
  if (!j.is_object()) throw InputError("scenario must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(AllowedKeys().begin(), AllowedKeys().end(), key) == AllowedKeys().end()) {
      throw InputError("unknown scenario key '" + key + "'");
    }
  }
  Scenario s;
  s.m = Get<int>(j, "m");
  int n = Get<int>(j, "n");
  if (s.m < 1 || n < 1) throw InputError("m and n must be positive");
  s.theta = Reals(j, "theta");
  s.Q = ParseQ(Get<Json>(j, "Q"), n, base_dir);
  s.psi = ParsePsi(Get<Json>(j, "Psi"));
  s.a = Get<double>(j, "a");
  s.h = ParseH(Get<Json>(j, "h"));
  s.Mset = Reals(j, "Mset");
  if (j.contains("K")) s.K = Get<int>(j, "K");
  s.Validate();
  return s;
}

Json ScenarioToJson(const Scenario& s) {
  Json q{{"kind", QKindName(s.Q.kind())}};
  if (s.Q.kind() == QKind::kExplicitList) {
    Json payload = Json::array();
    for (const auto& e : s.Q.payload()) payload.push_back(e);
    q["payload"] = payload;
  } else if (s.Q.kind() == QKind::kFile) {
    q["path"] = s.Q.path();
  }
  Json psi{{"family", PsiFamilyName(s.psi.family())}};
  switch (s.psi.family()) {
    case Psi::Family::kPower:
    case Psi::Family::kHinokumaShiga: psi["tau"] = s.psi.tau(); break;
    case Psi::Family::kTabulated: psi["table"] = s.psi.table(); break;
    case Psi::Family::kCustom: throw InputError("custom psi cannot be serialized");
  }
  Json h;
  switch (s.h.family()) {
    case HFunction::Family::kConstant: h = {{"family", "constant"}, {"c", s.h.c()}}; break;
    case HFunction::Family::kLog: h = {{"family", "log"}, {"c", s.h.c()}, {"p", s.h.p()}}; break;
    case HFunction::Family::kTable: h = {{"family", "table"}, {"xs", s.h.xs()}, {"ys", s.h.ys()}}; break;
  }
  Json out = ScenarioDoc(s.m, s.n(), s.theta, q, psi, s.a, h, s.Mset);
  if (s.K > 0) out["K"] = s.K;
  return out;
}

Scenario LoadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read scenario file: " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("malformed scenario JSON in " + path + ": " + e.what());
  }
  return ScenarioFromJson(j, std::filesystem::path(path).parent_path().string());
}

std::optional<PredictSpec> PredictFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("predict")) return std::nullopt;
  const Json& p = j["predict"];
  if (!p.is_object()) throw InputError("'predict' must be an object");
  PredictSpec spec;
  spec.descriptor = Get<std::string>(p, "descriptor");
  if (p.contains("params")) {
    if (!p["params"].is_object()) throw InputError("'predict.params' must be an object");
    for (const auto& [key, value] : p["params"].items()) spec.params[key] = ParseRational(value);
  }
  return spec;
}

std::string Fnv1a64Hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[i] = digits[h & 15];
  return out;
}

std::string ScenarioHash(const Scenario& s) { return Fnv1a64Hex(ScenarioToJson(s).dump()); }

const std::vector<std::string>& ScenarioPresetNames() {
  static const std::vector<std::string> names = {
      "jarnik_tau2",  "jarnik_tau2_shifted", "squares_tau2",      "primes_tau2",
      "powers_of_two", "hinokuma_shiga_tau2", "mn_app_m4_n2_tau2", "plane_m2_n1_tau1"};
  return names;
}

Json ScenarioPreset(const std::string& name) {
  const Json power2{{"family", "power"}, {"tau", 2.0}};
  auto kind = [](const char* k) { return Json{{"kind", k}}; };
  auto constant = [](double c) { return Json{{"family", "constant"}, {"c", c}}; };
  Json doc;
  if (name == "jarnik_tau2") {
    doc = ScenarioDoc(1, 1, {0.0}, kind("all_integers"), power2, 1.0 / 3, constant(4), Powers(1, 24));
  } else if (name == "jarnik_tau2_shifted") {
    doc = ScenarioDoc(1, 1, {0.5}, kind("all_integers"), power2, 1.0 / 3, constant(4), Powers(1, 24));
  } else if (name == "squares_tau2") {
    doc = ScenarioDoc(1, 1, {0.0}, kind("squares"), power2, 1.0 / 6, constant(10), Powers(4, 24));
  } else if (name == "primes_tau2") {
    doc = ScenarioDoc(1, 1, {0.0}, kind("primes"), power2, 1.0 / 3, Json{{"family", "log"}, {"c", 4.0}, {"p", 1.0}},
                      Powers(2, 24));
  } else if (name == "powers_of_two") {
    doc = ScenarioDoc(1, 1, {0.0}, kind("powers_of_two"), power2, 0.0, constant(1), Powers(1, 24));
  } else if (name == "hinokuma_shiga_tau2") {
    doc = ScenarioDoc(1, 1, {0.0}, kind("sin_threshold"), Json{{"family", "hinokuma_shiga"}, {"tau", 2.0}}, 1.0 / 3,
                      constant(8), Powers(3, 24));
  } else if (name == "mn_app_m4_n2_tau2") {
    doc = ScenarioDoc(4, 2, {0.0, 0.0, 0.0, 0.0}, kind("all_integers"), power2, 2.0 / 3, constant(1), Powers(2, 6));
  } else if (name == "plane_m2_n1_tau1") {
    doc = ScenarioDoc(2, 1, {0.0, 0.0}, kind("all_integers"), Json{{"family", "power"}, {"tau", 1.0}}, 0.5, constant(4),
                      Powers(2, 8));
  } else {
    throw InputError("unknown scenario preset '" + name + "'");
  }
  doc["name"] = name;
  return doc;
}

std::string FormatReal(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json RealJson(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

Json CertReportToJson(const CertReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json j{{"M", e.M}, {"window_size", e.window_size}, {"eps", RealJson(e.eps)}, {"lhs", RealJson(e.lhs)},
           {"rhs", RealJson(e.rhs)}, {"margin", RealJson(e.margin)}, {"pass", e.pass}};
    if (!e.reason.empty()) j["reason"] = e.reason;
    entries.push_back(j);
  }
  return Json{{"pass", r.pass}, {"entries", entries}};
}

void WriteSpectrumCsv(const SpectrumTable& t, std::ostream& out) {
  for (int i = 0; i < t.dim(); ++i) out << "l" << i + 1 << ",";
  out << "re,im\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::int64_t v : t.Ell(i)) out << v << ",";
    Complex z = t.Value(i);
    out << FormatReal(z.real()) << "," << FormatReal(z.imag()) << "\n";
  }
}

Json SpectrumMetaJson(const SpectrumTable& t) {
  return Json{{"m", t.m},     {"n", t.n},          {"M", t.M},           {"eps", RealJson(t.eps)},
              {"window_size", t.window_size},      {"L_max", t.L_max},   {"entries", t.size()}};
}

void WriteDensityCsv(const MeasureBuilder& b, int k, std::ostream& out) {
  const auto& density = b.levels().at(k).density;
  const int d = b.scenario().mn();
  for (int i = 0; i < d; ++i) out << "x" << i + 1 << ",";
  out << "density\n";
  for (std::size_t i = 0; i < density.size(); ++i) {
    for (double x : b.SpatialPoint(i)) out << FormatReal(x) << ",";
    out << FormatReal(density[i]) << "\n";
  }
}

void WriteFourierCsv(const SpectralGrid& grid, const Envelope& g, std::ostream& out) {
  for (int i = 0; i < grid.dim; ++i) out << "xi" << i + 1 << ",";
  out << "re,im,err,g,ratio\n";
  const double R = grid.R;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::int64_t j : grid.Point(i)) out << FormatReal(static_cast<double>(j) / R) << ",";
    Complex z = grid.value[i];
    double gv = g(grid.Norm(i));
    out << FormatReal(z.real()) << "," << FormatReal(z.imag()) << "," << FormatReal(grid.error[i]) << ","
        << FormatReal(gv) << "," << FormatReal(std::abs(z) / gv) << "\n";
  }
}

Json MeasureSummaryJson(const MeasureBuilder& b, const std::string& scenario_hash) {
  const auto& opts = b.options();
  Json levels = Json::array();
  for (const auto& lv : b.levels()) {
    Json trials = Json::array();
    for (const auto& t : lv.trials) {
      Json tj{{"M", t.M}, {"max_ratio", RealJson(t.max_ratio)}, {"max_raw_ratio", RealJson(t.max_raw_ratio)},
              {"worst_xi", t.worst_xi}, {"pass", t.pass}};
      if (!t.note.empty()) tj["note"] = t.note;
      trials.push_back(tj);
    }
    const SpectralGrid& f = lv.fourier;
    Complex mu0 = f.value[f.Index(IntVec(f.dim, 0))];
    levels.push_back(Json{{"k", lv.k},
                          {"M", lv.M},
                          {"delta", lv.delta},
                          {"margin", RealJson(lv.k == 0 ? 0.0 : 1.0 - lv.max_ratio)},
                          {"max_ratio", RealJson(lv.max_ratio)},
                          {"C2", RealJson(lv.C2)},
                          {"C2_heuristic", lv.C2_heuristic},
                          {"mu_hat_0", Complexes(mu0)},
                          {"trials", trials}});
  }
  return Json{{"scenario_hash", scenario_hash},
              {"M", b.Ms()},
              {"C1", RealJson(b.C1())},
              {"K", b.scenario().Smoothness()},
              {"grid", {{"R", opts.R}, {"X", opts.X}, {"spatial_points", b.has_density() ? b.spatial_points() : 0}}},
              {"levels", levels}};
}

Json ConvergenceToJson(const ConvergenceReport& r) {
  Json levels = Json::array();
  for (const auto& lc : r.levels) {
    levels.push_back(Json{{"k", lc.k},
                          {"delta", lc.delta},
                          {"max_ratio", RealJson(lc.max_ratio)},
                          {"max_raw_ratio", RealJson(lc.max_raw_ratio)},
                          {"worst_xi", lc.worst_xi},
                          {"telescoped_ratio", RealJson(lc.telescoped_ratio)},
                          {"mu_hat_0", RealJson(lc.mu0)},
                          {"pass", lc.pass}});
  }
  return Json{{"R", r.R},
              {"X", r.X},
              {"envelope_constant", RealJson(r.envelope_constant)},
              {"max_envelope_ratio", RealJson(r.max_envelope_ratio)},
              {"levels", levels},
              {"pass", r.pass}};
}

Json SupportToJson(const SupportReport& r) {
  Json ex = Json::array();
  for (const auto& v : r.examples) ex.push_back(Json{{"x", v.x}, {"level", v.level}, {"excess", v.excess}});
  return Json{{"checked", r.checked}, {"violations", r.violations}, {"outside_mass", r.outside_mass}, {"examples", ex}};
}

Json PredictionToJson(const Prediction& p) {
  Json params = Json::object();
  for (const auto& [k, v] : p.params) params[k] = v.ToString();
  Json j{{"descriptor", p.descriptor},
         {"params", params},
         {"hausdorff", p.hausdorff.ToString()},
         {"hausdorff_value", p.hausdorff.ToDouble()},
         {"note", p.note}};
  if (p.fourier_lower) {
    j["fourier_lower"] = p.fourier_lower->ToString();
    j["fourier_lower_value"] = p.fourier_lower->ToDouble();
  } else {
    j["fourier_lower"] = nullptr;
  }
  return j;
}

Json DimensionReportToJson(const DimensionReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? RealJson(*v) : Json(nullptr); };
  Json j{{"lambda_est", {{"liminf", RealJson(r.lambda_lower)}, {"limsup", RealJson(r.lambda_upper)}}},
         {"nu_est", opt(r.nu_est)},
         {"eta_est", opt(r.eta_est)},
         {"hausdorff_pred", opt(r.hausdorff_pred)},
         {"fourier_lower_pred", opt(r.fourier_lower_pred)},
         {"fourier_fit", opt(r.fourier_fit)},
         {"box_count_est", opt(r.box_count_est)},
         {"notes", r.notes}};
  j["prediction"] = r.prediction ? PredictionToJson(*r.prediction) : Json(nullptr);
  return j;
}

void WriteAnnuliCsv(const std::vector<FourierAnnulus>& annuli, std::ostream& out) {
  out << "lo,hi,count,sup,argmax\n";
  for (const auto& a : annuli) {
    out << FormatReal(a.lo) << "," << FormatReal(a.hi) << "," << a.count << "," << FormatReal(a.sup) << ","
        << FormatReal(a.argmax) << "\n";
  }
}

Json CoverSumToJson(const CoverSum& c) {
  return Json{{"value", RealJson(c.value)}, {"N", c.N},         {"N_max", c.N_max},
              {"terms", c.terms},           {"C", RealJson(c.C)}, {"note", c.note}};
}

}  // namespace salem
