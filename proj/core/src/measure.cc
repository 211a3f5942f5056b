#include "salem/measure.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "salem/error.h"
#include "salem/parallel.h"

namespace salem {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double GridPoints(int dim, std::int64_t N) { return std::pow(2.0 * static_cast<double>(N) + 1.0, dim); }

std::int64_t CeilDiv(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

double DistanceToInteger(double y) { return std::fabs(y - std::round(y)); }

}  // namespace

double Envelope::operator()(double s) const {
  const double e = std::numbers::e;
  if (s <= e) return 1.0;
  double ln = std::log(s);
  return std::pow(s, -a_) * std::exp(ln / std::log(ln)) * h_(4.0 * s);
}

int DefaultSpatialPoints(int mn) {
  if (mn <= 1) return 1 << 14;
  if (mn == 2) return 1 << 9;
  return 1 << 6;
}

std::int64_t TruncationMargin(double M) {
  return std::max<std::int64_t>(static_cast<std::int64_t>(std::ceil(4.0 * M)), 64);
}

SpectralChain::SpectralChain(const Scenario& s, int R, std::size_t grid_cap, std::size_t table_cap)
    : scenario_(s), R_(R), K_(s.Smoothness()), grid_cap_(grid_cap), table_cap_(table_cap), chi0_(s.mn(), s.Smoothness()) {
  if (R < 1) throw InputError("grid resolution R must be positive");
  if (K_ <= s.mn()) throw InputError("smoothness K must exceed mn");
  Stage base;
  base.C2 = chi0_.decay_constant();
  stages_.push_back(std::move(base));
}

void SpectralChain::Push(double M) {
  Stage st;
  st.M = M;
  st.fm = std::make_unique<FmFunction>(scenario_, M);
  stages_.push_back(std::move(st));
}

void SpectralChain::Pop() {
  if (stages_.size() > 1) stages_.pop_back();
}

const SpectrumTable& SpectralChain::TableFor(Stage& st, std::int64_t L) {
  if (!st.table || st.table->L_max < L) st.table = st.fm->Table(L, table_cap_);
  return *st.table;
}

double SpectralChain::TableWork(const FmFunction& fm, std::int64_t L) const {
  double total = 0.0;
  for (const auto& q : fm.window()) {
    double k = std::floor(static_cast<double>(L) / static_cast<double>(MaxNorm(q)));
    total += std::pow(2.0 * k + 1.0, scenario_.m);
  }
  return total;
}

double SpectralChain::EvaluateWork(int k, std::int64_t N) const {
  const Stage& st = stages_[k];
  if (st.grid && st.grid->N >= N) return 0.0;
  double points = GridPoints(scenario_.mn(), N);
  if (points > static_cast<double>(grid_cap_)) return kInf;
  if (k == 0) return points;
  std::int64_t L = CeilDiv(N, R_) + TruncationMargin(st.M);
  if (GridPoints(scenario_.mn(), L) > static_cast<double>(table_cap_)) return kInf;
  return points * TableWork(*st.fm, L) + EvaluateWork(k - 1, N + R_ * L);
}

double SpectralChain::DeviationWork(double M, std::int64_t N) const {
  double points = GridPoints(scenario_.mn(), N);
  if (points > static_cast<double>(grid_cap_)) return kInf;
  std::int64_t L = CeilDiv(N, R_) + TruncationMargin(M);
  if (GridPoints(scenario_.mn(), L) > static_cast<double>(table_cap_)) return kInf;
  // Upper bound on the table entries without materializing the window.
  std::size_t window = scenario_.Q.WindowSize(M);
  double qmin = std::floor(M / 2) + 1;
  double per_q = std::pow(2.0 * std::floor(static_cast<double>(L) / qmin) + 1.0, scenario_.m);
  return points * static_cast<double>(window) * per_q + EvaluateWork(depth(), N + R_ * L);
}

SpectralGrid SpectralChain::Evaluate(int k, std::int64_t N) {
  Stage& st = stages_[k];
  if (st.grid && st.grid->N >= N) return st.grid->N == N ? *st.grid : st.grid->Sub(N);
  SpectralGrid g;
  if (k == 0) {
    g = BumpHatGrid(chi0_, R_, N, grid_cap_);
  } else {
    std::int64_t L = CeilDiv(N, R_) + TruncationMargin(st.M);
    SpectralGrid prev = Evaluate(k - 1, N + R_ * L);
    const SpectrumTable& table = TableFor(st, L);
    if (GridPoints(scenario_.mn(), N) > static_cast<double>(grid_cap_)) throw BoxError("spectral grid exceeds cap");
    g = WindowedSpectrum(prev, stages_[k - 1].C2, K_, table, N, L);
  }
  st.grid = g;
  return g;
}

SpectralGrid SpectralChain::Deviation(double M, std::int64_t N) {
  FmFunction fm(scenario_, M);
  std::int64_t L = CeilDiv(N, R_) + TruncationMargin(M);
  SpectralGrid prev = Evaluate(depth(), N + R_ * L);
  SpectrumTable table = fm.Table(L, table_cap_);
  return WindowedSpectrum(prev, stages_.back().C2, K_, table, N, L, true);
}

double SpectralChain::FitDecayConstant(int k, double X) {
  std::int64_t N = static_cast<std::int64_t>(std::floor(X * R_));
  SpectralGrid g = Evaluate(k, N);
  double best = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double s = g.Norm(i);
    if (s < X / 2) continue;
    best = std::max(best, std::pow(1.0 + s, K_) * (std::abs(g.value[i]) + g.error[i]));
  }
  return 2.0 * best;
}

Selection SelectMStar(SpectralChain& chain, const Scenario& s, double delta, double M0, const MeasureOptions& opts,
                      int level) {
  if (!(delta > 0) || delta > 1) throw DomainError("delta must lie in (0, 1]");
  Envelope g(s.a, s.h);
  const std::int64_t N = static_cast<std::int64_t>(std::floor(opts.X * opts.R));
  Selection sel;
  double best_ratio = kInf, best_M = 0;
  for (double M : s.Mset) {
    if (M < M0) continue;
    SelectionTrial trial;
    trial.M = M;
    if (s.Q.WindowSize(M) == 0) {
      trial.note = "empty window";
      sel.trials.push_back(trial);
      continue;
    }
    double work = chain.DeviationWork(M, N);
    if (work > opts.work_cap) {
      std::ostringstream os;
      os << "work cap: estimated " << work << " > " << opts.work_cap;
      trial.note = os.str();
      sel.trials.push_back(trial);
      break;
    }
    SpectralGrid dev;
    try {
      dev = chain.Deviation(M, N);
    } catch (const BoxError& e) {
      trial.note = e.what();
      sel.trials.push_back(trial);
      break;
    }
    for (std::size_t i = 0; i < dev.size(); ++i) {
      double xi = dev.Norm(i);
      double bound = delta * g(xi);
      double raw = std::abs(dev.value[i]) / bound;
      double r = (std::abs(dev.value[i]) + dev.error[i]) / bound;
      trial.max_raw_ratio = std::max(trial.max_raw_ratio, raw);
      if (r > trial.max_ratio) {
        trial.max_ratio = r;
        trial.worst_xi = xi;
      }
    }
    trial.pass = trial.max_ratio <= 1.0;
    sel.trials.push_back(trial);
    if (trial.max_ratio < best_ratio) {
      best_ratio = trial.max_ratio;
      best_M = M;
    }
    if (trial.pass) {
      sel.M = M;
      sel.max_ratio = trial.max_ratio;
      return sel;
    }
  }
  std::ostringstream os;
  os << "Mset exhausted at level " << level << " (delta = " << delta << ", M0 = " << M0 << ")";
  if (best_M > 0) os << "; best sup ratio " << best_ratio << " at M = " << best_M;
  if (!sel.trials.empty() && !sel.trials.back().note.empty()) os << "; stopped: " << sel.trials.back().note;
  throw MsetExhaustedError(level, best_ratio, best_M, os.str());
}

MeasureBuilder::MeasureBuilder(const Scenario& s, MeasureOptions opts)
    : scenario_(s), opts_(opts), chain_(s, opts.R, opts.grid_cap, opts.table_cap) {
  s.Validate();
  if (!(opts.X > 0)) throw InputError("box radius must be positive");
  points_ = opts.spatial_points > 0 ? opts.spatial_points : DefaultSpatialPoints(s.mn());
}

std::vector<double> MeasureBuilder::SpatialPoint(std::size_t i) const {
  const int d = scenario_.mn();
  std::vector<double> x(d);
  const double h = spacing();
  for (int c = d - 1; c >= 0; --c) {
    x[c] = -1.0 + (static_cast<double>(i % points_) + 0.5) * h;
    i /= points_;
  }
  return x;
}

void MeasureBuilder::MultiplyDensity(const FmFunction& fm, const std::vector<double>& prev,
                                     std::vector<double>& out) const {
  out.assign(prev.size(), 0.0);
  ParallelFor(0, prev.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      if (prev[i] == 0.0) continue;
      out[i] = prev[i] * fm.Eval(SpatialPoint(i));
    }
  }, 64);
}

const MeasureLevel& MeasureBuilder::AddLevel() {
  const std::int64_t N = static_cast<std::int64_t>(std::floor(opts_.X * opts_.R));
  const int k = static_cast<int>(levels_.size());
  MeasureLevel level;
  level.k = k;
  if (k == 0) {
    level.C2 = chain_.C2(0);
    level.fourier = chain_.Evaluate(0, N);
    double total = std::pow(static_cast<double>(points_), scenario_.mn());
    if (opts_.spatial && total <= static_cast<double>(opts_.spatial_cap)) {
      density0_.assign(static_cast<std::size_t>(total), 0.0);
      ParallelFor(0, density0_.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) density0_[i] = chain_.chi0().Eval(SpatialPoint(i));
      });
      level.density = density0_;
    }
    levels_.push_back(std::move(level));
    return levels_.back();
  }
  level.delta = std::ldexp(1.0, -k - 1);
  double M0 = k == 1 ? 1.0 : 2.0 * levels_.back().M;
  Selection sel = SelectMStar(chain_, scenario_, level.delta, M0, opts_, k);
  level.M = sel.M;
  level.max_ratio = sel.max_ratio;
  level.trials = sel.trials;
  chain_.Push(sel.M);
  level.fourier = chain_.Evaluate(k, N);
  level.C2 = chain_.FitDecayConstant(k, opts_.X);
  level.C2_heuristic = true;
  chain_.SetDecayConstant(k, level.C2);
  if (!levels_.back().density.empty()) MultiplyDensity(chain_.fm(k), levels_.back().density, level.density);
  levels_.push_back(std::move(level));
  return levels_.back();
}

std::vector<double> MeasureBuilder::Ms() const {
  std::vector<double> out;
  for (std::size_t k = 1; k < levels_.size(); ++k) out.push_back(levels_[k].M);
  return out;
}

std::vector<MeasureLevel> BuildMeasure(const Scenario& s, int levels, const MeasureOptions& opts) {
  if (levels < 1) throw InputError("need at least one level");
  MeasureBuilder b(s, opts);
  b.AddLevel();
  for (int k = 1; k <= levels; ++k) {
    try {
      b.AddLevel();
    } catch (const MsetExhaustedError& e) {
      throw MsetExhaustedError(k, e.best_ratio(), e.best_M(), e.what());
    }
  }
  return b.levels();
}

ConvergenceReport ConvergenceCheck(const Scenario& s, const std::vector<double>& Ms, int R, double X,
                                   const MeasureOptions& opts) {
  ConvergenceReport rep;
  rep.R = R;
  rep.X = X;
  Envelope g(s.a, s.h);
  SpectralChain chain(s, R, opts.grid_cap, opts.table_cap);
  const std::int64_t N = static_cast<std::int64_t>(std::floor(X * R));
  SpectralGrid mu0 = chain.Evaluate(0, N);
  std::vector<double> gv(mu0.size());
  double env_const = 0.0;
  for (std::size_t i = 0; i < mu0.size(); ++i) {
    gv[i] = g(mu0.Norm(i));
    env_const = std::max(env_const, std::abs(mu0.value[i]) / gv[i]);
  }
  rep.envelope_constant = env_const + 0.5;
  rep.pass = true;
  SpectralGrid prev = mu0;
  const std::size_t origin = mu0.Index(IntVec(s.mn(), 0));
  for (std::size_t k = 1; k <= Ms.size(); ++k) {
    chain.Push(Ms[k - 1]);
    SpectralGrid cur = chain.Evaluate(static_cast<int>(k), N);
    chain.SetDecayConstant(static_cast<int>(k), chain.FitDecayConstant(static_cast<int>(k), X));
    LevelCheck lc;
    lc.k = static_cast<int>(k);
    lc.delta = std::ldexp(1.0, -static_cast<int>(k) - 1);
    const double tele = 0.5 * (1.0 - std::ldexp(1.0, -static_cast<int>(k)));
    rep.max_envelope_ratio = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      double diff = std::abs(cur.value[i] - prev.value[i]);
      double err = cur.error[i] + prev.error[i];
      double r = (diff + err) / (lc.delta * gv[i]);
      lc.max_raw_ratio = std::max(lc.max_raw_ratio, diff / (lc.delta * gv[i]));
      if (r > lc.max_ratio) {
        lc.max_ratio = r;
        lc.worst_xi = cur.Norm(i);
      }
      double t = (std::abs(cur.value[i] - mu0.value[i]) + cur.error[i]) / (tele * gv[i]);
      lc.telescoped_ratio = std::max(lc.telescoped_ratio, t);
      rep.max_envelope_ratio = std::max(rep.max_envelope_ratio, std::abs(cur.value[i]) / gv[i]);
    }
    lc.mu0 = cur.value[origin].real();
    lc.pass = lc.max_ratio <= 1.0 && lc.telescoped_ratio <= 1.0 && lc.mu0 >= 0.5 && lc.mu0 <= 1.5;
    rep.pass = rep.pass && lc.pass;
    rep.levels.push_back(lc);
    prev = std::move(cur);
  }
  return rep;
}

SupportReport SupportCheck(const MeasureBuilder& builder, int k, double slack) {
  SupportReport rep;
  const auto& levels = builder.levels();
  if (k < 0 || k >= static_cast<int>(levels.size())) throw InputError("no such level");
  const auto& density = levels[k].density;
  if (density.empty()) throw InputError("level has no density grid");
  const Scenario& s = builder.scenario();
  const int m = s.m, n = s.n();
  std::vector<std::vector<IntVec>> windows;
  std::vector<std::vector<double>> psi;
  for (int j = 1; j <= k; ++j) {
    windows.push_back(s.Q.Window(levels[j].M));
    std::vector<double> p;
    for (const auto& q : windows.back()) p.push_back(s.psi(q));
    psi.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < density.size(); ++i) {
    if (!(density[i] > 0.0)) continue;
    ++rep.checked;
    std::vector<double> x = builder.SpatialPoint(i);
    for (int j = 0; j < k; ++j) {
      double best = kInf;
      for (std::size_t w = 0; w < windows[j].size() && best > 0.0; ++w) {
        const IntVec& q = windows[j][w];
        double worst = 0.0;
        for (int r = 0; r < m; ++r) {
          double y = -s.theta[r];
          for (int c = 0; c < n; ++c) y += x[r * n + c] * static_cast<double>(q[c]);
          worst = std::max(worst, DistanceToInteger(y));
        }
        best = std::min(best, worst - psi[j][w] - slack);
      }
      if (best > 0.0) {
        ++rep.violations;
        if (rep.examples.size() < 16) rep.examples.push_back({x, j + 1, best});
      }
    }
  }
  return rep;
}

double NormalizedMass(const MeasureBuilder& builder, int k) {
  const auto& level = builder.levels().at(k);
  if (level.density.empty()) throw InputError("level has no density grid");
  double cell = std::pow(builder.spacing(), builder.scenario().mn());
  double sum = 0.0;
  for (double v : level.density) sum += v;
  const SpectralGrid& f = level.fourier;
  double mu0 = f.value[f.Index(IntVec(f.dim, 0))].real();
  return sum * cell / mu0;
}

}  // namespace salem
