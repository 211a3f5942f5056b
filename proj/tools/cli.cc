#include "cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "salem/dimension.h"
#include "salem/error.h"
#include "salem/measure.h"
#include "salem/parallel.h"
#include "salem/scenario_io.h"
#include "salem/spectrum.h"
#include "verify.h"

namespace salem::cli {
namespace {

namespace fs = std::filesystem;

struct Loaded {
  Scenario scenario;
  Json doc;
  std::string hash;
};

Loaded LoadArg(const std::string& arg) {
  Loaded l;
  std::string base_dir;
  if (arg.rfind("preset:", 0) == 0) {
    l.doc = ScenarioPreset(arg.substr(7));
  } else {
    std::ifstream in(arg);
    if (!in) throw InputError("cannot read scenario file: " + arg);
    try {
      l.doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw InputError("malformed scenario JSON in " + arg + ": " + e.what());
    }
    base_dir = fs::path(arg).parent_path().string();
  }
  l.scenario = ScenarioFromJson(l.doc, base_dir);
  l.hash = ScenarioHash(l.scenario);
  return l;
}

// Collects output files under --out, or the stdout document without it.
class Emitter {
 public:
  Emitter(std::string command, std::string out_dir, std::ostream& out)
      : command_(std::move(command)), dir_(std::move(out_dir)), out_(out), start_(std::chrono::steady_clock::now()) {
    if (!dir_.empty()) {
      std::error_code ec;
      fs::create_directories(dir_, ec);
      if (ec) throw InputError("cannot create output directory " + dir_ + ": " + ec.message());
    }
  }

  bool to_files() const { return !dir_.empty(); }
  void set_hash(std::string h) { hash_ = std::move(h); }
  void set_params(Json p) { params_ = std::move(p); }

  void Text(const std::string& name, const std::function<void(std::ostream&)>& write) {
    if (dir_.empty()) return;
    fs::path p = fs::path(dir_) / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw InputError("cannot write " + p.string());
    write(f);
    files_.push_back(name);
  }

  void Document(const std::string& name, const Json& j) {
    result_[fs::path(name).stem().string()] = j;
    Text(name, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
  }

  void Finish() {
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    Json manifest{{"command", command_},
                  {"scenario_hash", hash_.empty() ? Json(nullptr) : Json(hash_)},
                  {"parameters", params_},
                  {"tool_version", kToolVersion},
                  {"wall_time_s", wall}};
    if (dir_.empty()) {
      manifest["outputs"] = Json::array();
      Json doc = result_;
      doc["manifest"] = manifest;
      out_ << doc.dump(2) << "\n";
      return;
    }
    files_.push_back("manifest.json");
    manifest["outputs"] = files_;
    std::ofstream f(fs::path(dir_) / "manifest.json", std::ios::binary);
    f << manifest.dump(2) << "\n";
    out_ << "wrote " << files_.size() << " files to " << dir_ << "\n";
  }

 private:
  std::string command_;
  std::string dir_;
  std::ostream& out_;
  std::chrono::steady_clock::time_point start_;
  std::string hash_;
  Json params_ = Json::object();
  Json result_ = Json::object();
  std::vector<std::string> files_;
};

const char* ErrorType(const std::exception& e) {
  if (dynamic_cast<const EmptyWindowError*>(&e)) return "EmptyWindowError";
  if (dynamic_cast<const MsetExhaustedError*>(&e)) return "MsetExhaustedError";
  if (dynamic_cast<const BoxError*>(&e)) return "BoxError";
  if (dynamic_cast<const InsufficientDataError*>(&e)) return "InsufficientDataError";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  if (dynamic_cast<const InputError*>(&e)) return "InputError";
  return "Error";
}

void Report(std::ostream& err, bool json, const std::exception& e, int code) {
  if (!json) {
    err << "error: " << e.what() << "\n";
    return;
  }
  Json j{{"type", ErrorType(e)}, {"message", e.what()}, {"exit_code", code}};
  if (auto* w = dynamic_cast<const EmptyWindowError*>(&e)) j["M"] = w->M();
  if (auto* x = dynamic_cast<const MsetExhaustedError*>(&e)) {
    j["level"] = x->level();
    j["best_ratio"] = RealJson(x->best_ratio());
    j["best_M"] = x->best_M();
  }
  err << Json{{"error", j}}.dump() << "\n";
}

int Presets(Emitter& em) {
  Json scenarios = Json::object();
  for (const auto& name : ScenarioPresetNames()) scenarios[name] = ScenarioPreset(name);
  Json q = Json::array();
  for (QKind k : {QKind::kAllIntegers, QKind::kPrimes, QKind::kShiftedPrimes, QKind::kSquares, QKind::kPowersOfTwo,
                  QKind::kSinThreshold, QKind::kExplicitList, QKind::kFile}) {
    q.push_back(QKindName(k));
  }
  em.Document("presets.json", Json{{"Q", q},
                                   {"Psi", {"power", "hinokuma_shiga", "tabulated"}},
                                   {"h", {"constant", "log", "table"}},
                                   {"predictors", PredictorNames()},
                                   {"verify_suites", verify::SuiteNames()},
                                   {"scenarios", scenarios}});
  return kExitOk;
}

int Certify(Emitter& em, const Loaded& l) {
  CertReport rep = CertifyScenario(l.scenario);
  for (const auto& e : rep.entries) {
    if (!e.reason.empty()) throw EmptyWindowError(e.M, e.reason);
  }
  em.Document("certify.json", CertReportToJson(rep));
  return rep.pass ? kExitOk : kExitVerification;
}

int Spectrum(Emitter& em, const Loaded& l, double M, std::int64_t lmax, double zeta) {
  if (lmax < 1) throw InputError("--lmax must be positive");
  const Scenario& s = l.scenario;
  SpectrumTable t = FmHatTable(s, M, lmax);
  Bump bump(s.mn(), s.Smoothness());
  EnvelopeFit fit = EnvelopeCheck(t, s.a, s.h(M), zeta, bump.decay_constant());
  Json meta = SpectrumMetaJson(t);
  Json res = Json::array();
  for (const auto& a : fit.residuals) {
    res.push_back(Json{{"lo", a.lo}, {"hi", a.hi}, {"max_ratio", RealJson(a.max_ratio)}, {"count", a.count}});
  }
  meta["envelope"] = Json{{"zeta", zeta},
                          {"max_ratio", RealJson(fit.max_ratio)},
                          {"argmax", fit.argmax},
                          {"C1", RealJson(bump.decay_constant())},
                          {"L_zeta", fit.L_zeta},
                          {"tested", fit.tested},
                          {"annuli", res}};
  em.Text("spectrum.csv", [&](std::ostream& os) { WriteSpectrumCsv(t, os); });
  em.Document("spectrum.json", meta);
  return kExitOk;
}

int Measure(Emitter& em, const Loaded& l, int levels, int R, double X, std::int64_t points, std::ostream& err,
            bool json_errors) {
  if (levels < 1) throw InputError("--levels must be at least 1");
  if (R < 1) throw InputError("--grid must be positive");
  MeasureOptions opts;
  opts.R = R;
  opts.X = X;
  opts.spatial_points = points;
  MeasureBuilder b(l.scenario, opts);
  int code = kExitOk;
  Json failure = nullptr;
  try {
    b.AddLevel();
    for (int k = 1; k <= levels; ++k) b.AddLevel();
  } catch (const MsetExhaustedError& e) {
    code = kExitVerification;
    failure = Json{{"message", e.what()}, {"best_ratio", RealJson(e.best_ratio())}, {"best_M", e.best_M()}};
    Report(err, json_errors, e, code);
  }
  Envelope g(l.scenario.a, l.scenario.h);
  for (const auto& lv : b.levels()) {
    std::string k = std::to_string(lv.k);
    em.Text("fourier_" + k + ".csv", [&](std::ostream& os) { WriteFourierCsv(lv.fourier, g, os); });
    if (!lv.density.empty()) {
      em.Text("density_" + k + ".csv", [&](std::ostream& os) { WriteDensityCsv(b, lv.k, os); });
    }
  }
  Json summary = MeasureSummaryJson(b, l.hash);
  summary["requested_levels"] = levels;
  summary["failure"] = failure;
  em.Document("measure.json", summary);
  return code;
}

int Dims(Emitter& em, const Loaded& l, int levels, int R, double X, int box_levels, double nu_cutoff) {
  DimensionOptions opts;
  opts.box_levels = box_levels;
  opts.nu_cutoff = nu_cutoff;
  if (auto p = PredictFromJson(l.doc)) {
    opts.descriptor = p->descriptor;
    opts.params = p->params;
  }
  std::optional<MeasureBuilder> b;
  Json measure_note = nullptr;
  if (levels > 0) {
    MeasureOptions mo;
    mo.R = R;
    mo.X = X;
    mo.spatial = false;
    b.emplace(l.scenario, mo);
    try {
      b->AddLevel();
      for (int k = 1; k <= levels; ++k) b->AddLevel();
    } catch (const MsetExhaustedError& e) {
      measure_note = e.what();
    }
  }
  const SpectralGrid* grid = b ? &b->levels().back().fourier : nullptr;
  DimensionReport rep = AnalyzeDimensions(l.scenario, opts, grid);
  Json j = DimensionReportToJson(rep);
  if (b) {
    j["measure"] = Json{{"levels_built", static_cast<int>(b->levels().size()) - 1}, {"M", b->Ms()},
                        {"note", measure_note}};
  }
  em.Document("dims.json", j);
  if (!rep.annuli.empty()) em.Text("annuli.csv", [&](std::ostream& os) { WriteAnnuliCsv(rep.annuli, os); });
  return kExitOk;
}

int Cover(Emitter& em, const Loaded& l, double eta, std::int64_t from, std::int64_t to) {
  em.Document("cover.json", CoverSumToJson(ComputeCoverSum(l.scenario, eta, from, to)));
  return kExitOk;
}

int Verify(Emitter& em, const std::string& suite, const std::vector<int>& criteria, std::ostream& out) {
  std::vector<int> ids = criteria.empty() ? verify::SuiteCriteria(suite) : criteria;
  bool pass = true;
  Json results = Json::array();
  for (int id : ids) {
    verify::CriterionResult r = verify::RunCriterion(id);
    out << verify::FormatLine(r) << "\n" << std::flush;
    pass = pass && r.pass;
    results.push_back(Json{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"summary", r.summary},
                           {"seconds", r.seconds}, {"details", r.details}});
  }
  Json doc{{"suite", criteria.empty() ? suite : "custom"}, {"pass", pass}, {"criteria", results}};
  if (em.to_files()) em.Document("verify.json", doc);
  return pass ? kExitOk : kExitVerification;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fourier-decaying measures on Diophantine limsup sets", "salem"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  int threads = 0;
  bool json_errors = false;
  app.add_option("--threads", threads, "Worker threads (default: logical cores)")->check(CLI::NonNegativeNumber);
  app.add_flag("--json-errors", json_errors, "Report errors as JSON objects");

  std::string scenario, out_dir, suite = "all";
  double M = 0, zeta = 0.99, X = 512, eta = 0, nu_cutoff = 1e6;
  std::int64_t lmax = 0, from = 1, to = 1'000'000, points = 0;
  int levels = 1, R = 8, box_levels = 3, dims_levels = 0;
  std::vector<int> criteria;

  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output directory (default: JSON on stdout)");
  };
  auto add_scenario = [&](CLI::App* sub) {
    sub->add_option("scenario", scenario, "Scenario JSON file, or preset:NAME")->required();
  };

  auto* presets = app.add_subcommand("presets", "List Q, Psi and scenario presets");
  add_out(presets);
  auto* certify = app.add_subcommand("certify", "Check the window-density hypothesis on the Mset");
  add_scenario(certify);
  add_out(certify);
  auto* spectrum = app.add_subcommand("spectrum", "Tabulate the transform of F_M");
  add_scenario(spectrum);
  spectrum->add_option("--M", M, "Window scale")->required();
  spectrum->add_option("--lmax", lmax, "Box radius in the max norm")->required();
  spectrum->add_option("--zeta", zeta, "Envelope exponent");
  add_out(spectrum);
  auto* measure = app.add_subcommand("measure", "Build the measure levels");
  add_scenario(measure);
  measure->add_option("--levels", levels, "Number of levels k");
  measure->add_option("--grid", R, "Frequency grid resolution R");
  measure->add_option("--box", X, "Test box radius X");
  measure->add_option("--points", points, "Density points per axis (0: default by dimension)");
  add_out(measure);
  auto* dims = app.add_subcommand("dims", "Dimension estimates and closed-form predictions");
  add_scenario(dims);
  dims->add_option("--levels", dims_levels, "Measure levels to build for the Fourier fit (0: skip)");
  dims->add_option("--grid", R, "Frequency grid resolution R");
  dims->add_option("--box", X, "Test box radius X");
  dims->add_option("--box-levels", box_levels, "Levels of the box-counting approximation");
  dims->add_option("--nu-cutoff", nu_cutoff, "Largest |q| used for nu");
  add_out(dims);
  auto* cover = app.add_subcommand("cover", "Cover sum for the Hausdorff upper bound");
  add_scenario(cover);
  cover->add_option("--eta", eta, "Exponent")->required();
  cover->add_option("--from", from, "Smallest |q|")->required();
  cover->add_option("--to", to, "Truncation bound on |q|");
  add_out(cover);
  auto* verify = app.add_subcommand("verify", "Run the acceptance batteries");
  verify->add_option("--suite", suite, "Battery")->check(CLI::IsMember(verify::SuiteNames()));
  verify->add_option("--criterion", criteria, "Run these criteria instead of a suite")->check(CLI::Range(1, 8));
  add_out(verify);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    InputError wrapped(e.what());
    Report(err, json_errors, wrapped, kExitInput);
    return kExitInput;
  }

  try {
    if (threads > 0) SetThreadCount(threads);
    CLI::App* sub = app.get_subcommands().front();
    Emitter em(sub->get_name(), out_dir, out);
    Loaded l;
    if (!scenario.empty()) {
      l = LoadArg(scenario);
      em.set_hash(l.hash);
    }
    int code = kExitOk;
    if (sub == presets) {
      code = Presets(em);
    } else if (sub == certify) {
      em.set_params(Json{{"scenario", scenario}});
      code = Certify(em, l);
    } else if (sub == spectrum) {
      em.set_params(Json{{"scenario", scenario}, {"M", M}, {"lmax", lmax}, {"zeta", zeta}});
      code = Spectrum(em, l, M, lmax, zeta);
    } else if (sub == measure) {
      em.set_params(Json{{"scenario", scenario}, {"levels", levels}, {"grid", R}, {"box", X}, {"points", points}});
      code = Measure(em, l, levels, R, X, points, err, json_errors);
    } else if (sub == dims) {
      em.set_params(Json{{"scenario", scenario}, {"levels", dims_levels}, {"grid", R}, {"box", X},
                         {"box_levels", box_levels}, {"nu_cutoff", nu_cutoff}});
      code = Dims(em, l, dims_levels, R, X, box_levels, nu_cutoff);
    } else if (sub == cover) {
      em.set_params(Json{{"scenario", scenario}, {"eta", eta}, {"from", from}, {"to", to}});
      code = Cover(em, l, eta, from, to);
    } else if (sub == verify) {
      em.set_params(Json{{"suite", suite}, {"criteria", criteria}});
      code = Verify(em, suite, criteria, out);
      if (!em.to_files()) return code;
    }
    em.Finish();
    return code;
  } catch (const MsetExhaustedError& e) {
    Report(err, json_errors, e, kExitVerification);
    return kExitVerification;
  } catch (const std::exception& e) {
    Report(err, json_errors, e, kExitInput);
    return kExitInput;
  }
}

int Run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return Run(args, std::cout, std::cerr);
}

}  // namespace salem::cli
