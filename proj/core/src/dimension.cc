#include "salem/dimension.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "fit.h"
#include "salem/error.h"

namespace salem {
namespace {

// Number of q in Q with |q| = r, for r = 0..r_max.
std::vector<double> ShellCounts(const QSet& Q, std::int64_t r_max) {
  std::vector<double> mult(r_max + 1, 0.0);
  const int n = Q.n();
  if (Q.kind() == QKind::kExplicitList || Q.kind() == QKind::kFile) {
    for (const auto& q : Q.payload()) {
      std::int64_t r = MaxNorm(q);
      if (r >= 1 && r <= r_max) mult[r] += 1;
    }
    return mult;
  }
  if (Q.kind() == QKind::kAllIntegers) {
    for (std::int64_t r = 1; r <= r_max; ++r) {
      double x = static_cast<double>(r);
      mult[r] = std::pow(2 * x + 1, n) - std::pow(2 * x - 1, n);
    }
    return mult;
  }
  // Cartesian power of a subset of N: C(r)^n - C(r - 1)^n.
  QSet base = QSet::Preset(Q.kind(), 1);
  std::vector<double> hits(r_max + 1, 0.0);
  for (double M = 1; M / 2 < static_cast<double>(r_max); M *= 2) {
    for (const auto& q : base.Window(M)) {
      if (q[0] >= 1 && q[0] <= r_max) hits[q[0]] += 1;
    }
  }
  double prev = 0;
  for (std::int64_t r = 1; r <= r_max; ++r) {
    double cur = prev + hits[r];
    mult[r] = std::pow(cur, n) - std::pow(prev, n);
    prev = cur;
  }
  return mult;
}

Rational Approx(double x, std::int64_t den) {
  try {
    return Rational::FromDouble(x, den, 1e-9);
  } catch (const DomainError&) {
    return Rational(std::llround(x * static_cast<double>(den)), den);
  }
}

const Rational& Param(const std::map<std::string, Rational>& params, const std::string& descriptor,
                      const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) throw InputError(descriptor + " needs parameter '" + key + "'");
  return it->second;
}

std::vector<std::pair<double, double>> Merge(std::vector<std::pair<double, double>> iv) {
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<double, double>> out;
  for (const auto& v : iv) {
    if (!out.empty() && v.first <= out.back().second) {
      out.back().second = std::max(out.back().second, v.second);
    } else {
      out.push_back(v);
    }
  }
  return out;
}

// Components of {x in S : |qx - theta - k| <= psi for some k}, over the window.
std::vector<std::pair<double, double>> Restrict(const std::vector<std::pair<double, double>>& S,
                                                const std::vector<IntVec>& window, const Psi& psi,
                                                double theta) {
  std::vector<std::pair<double, double>> iv;
  for (const auto& q : window) {
    double aq = std::fabs(static_cast<double>(q[0]));
    double th = q[0] > 0 ? theta : -theta;
    double p = psi(q);
    for (const auto& [a, b] : S) {
      auto k0 = static_cast<std::int64_t>(std::ceil(aq * a - th - p));
      auto k1 = static_cast<std::int64_t>(std::floor(aq * b - th + p));
      for (std::int64_t k = k0; k <= k1; ++k) {
        double lo = std::max(a, (static_cast<double>(k) + th - p) / aq);
        double hi = std::min(b, (static_cast<double>(k) + th + p) / aq);
        if (lo <= hi) iv.emplace_back(lo, hi);
      }
    }
  }
  return Merge(std::move(iv));
}

// Dyadic boxes of side 2^-depth in [0, 1] met by the window union.
std::size_t UnionBoxes(const std::vector<IntVec>& window, const Psi& psi, double theta, int depth) {
  const double scale = std::ldexp(1.0, depth);
  const std::int64_t last = (std::int64_t{1} << depth) - 1;
  std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
  for (const auto& q : window) {
    double aq = std::fabs(static_cast<double>(q[0]));
    double th = q[0] > 0 ? theta : -theta;
    double p = psi(q);
    auto k0 = static_cast<std::int64_t>(std::ceil(-th - p));
    auto k1 = static_cast<std::int64_t>(std::floor(aq - th + p));
    for (std::int64_t k = k0; k <= k1; ++k) {
      double lo = std::max(0.0, (static_cast<double>(k) + th - p) / aq);
      double hi = std::min(1.0, (static_cast<double>(k) + th + p) / aq);
      if (lo > hi) continue;
      auto i0 = std::min(static_cast<std::int64_t>(std::floor(lo * scale)), last);
      auto i1 = std::min(static_cast<std::int64_t>(std::floor(hi * scale)), last);
      ranges.emplace_back(i0, i1);
    }
  }
  std::sort(ranges.begin(), ranges.end());
  std::size_t count = 0;
  std::int64_t covered = -1;
  for (const auto& [i0, i1] : ranges) {
    std::int64_t from = std::max(i0, covered + 1);
    if (i1 >= from) {
      count += static_cast<std::size_t>(i1 - from + 1);
      covered = i1;
    }
  }
  return count;
}

}  // namespace

std::vector<double> DefaultEtaCutoffs() {
  std::vector<double> c;
  for (int j = 10; j <= 20; ++j) c.push_back(std::ldexp(1.0, j));
  return c;
}

EtaEstimate EstimateEta(const QSet& Q, const Psi& psi, int m, const std::vector<double>& cutoffs,
                        double resolution) {
  if (psi.family() == Psi::Family::kCustom) throw InputError("eta estimate needs a radial psi");
  if (m < 1) throw InputError("m must be positive");
  if (cutoffs.size() < 3) throw InsufficientDataError("eta estimate needs at least three cutoffs");
  if (cutoffs.front() < 1e3) throw InputError("eta cutoffs must be >= 1000");
  if (!std::is_sorted(cutoffs.begin(), cutoffs.end()) ||
      std::adjacent_find(cutoffs.begin(), cutoffs.end()) != cutoffs.end()) {
    throw InputError("eta cutoffs must be strictly ascending");
  }
  if (!(resolution > 0)) throw InputError("resolution must be positive");
  auto r_max = static_cast<std::int64_t>(std::floor(cutoffs.back()));
  if (psi.family() == Psi::Family::kTabulated && psi.table().size() < static_cast<std::size_t>(r_max)) {
    throw InsufficientDataError("psi table is shorter than the largest cutoff");
  }

  std::vector<double> mult = ShellCounts(Q, r_max);
  // ln of the r-th shell term is base[r] + eta * slope[r].
  std::vector<double> base(r_max + 1, -INFINITY), slope(r_max + 1, 0.0);
  for (std::int64_t r = 1; r <= r_max; ++r) {
    if (mult[r] <= 0) continue;
    double lr = std::log(static_cast<double>(r));
    base[r] = std::log(mult[r]) + m * lr;
    slope[r] = std::log(psi.Radial(r)) - lr;
  }
  std::vector<std::int64_t> edges;
  for (double c : cutoffs) edges.push_back(static_cast<std::int64_t>(std::floor(c)));

  auto converges = [&](double eta) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      double block = 0;
      for (std::int64_t r = edges[i] + 1; r <= edges[i + 1]; ++r) {
        if (std::isfinite(base[r])) block += std::exp(base[r] + eta * slope[r]);
      }
      if (!(block > 0)) continue;
      double width = std::log(cutoffs[i + 1] / cutoffs[i]);
      x.push_back(0.5 * (std::log(cutoffs[i]) + std::log(cutoffs[i + 1])));
      y.push_back(std::log(block / width));
    }
    if (x.size() < 2) return true;
    return internal::Slope(x, y) < 0;
  };

  std::size_t filled = 0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    bool any = false;
    for (std::int64_t r = edges[i] + 1; r <= edges[i + 1] && !any; ++r) any = std::isfinite(base[r]);
    filled += any;
  }
  if (filled < 2) throw InsufficientDataError("eta estimate needs elements of Q in at least two cutoff blocks");

  EtaEstimate est;
  est.cutoffs = cutoffs;
  double lo = 0, hi = 2.0 * (m + Q.n()) + 2.0;
  if (converges(lo)) {
    est.lo = est.hi = est.eta = 0;
    return est;
  }
  while (hi - lo > resolution) {
    double mid = 0.5 * (lo + hi);
    (converges(mid) ? hi : lo) = mid;
    ++est.iterations;
  }
  est.lo = lo;
  est.hi = hi;
  est.eta = 0.5 * (lo + hi);
  return est;
}

CoverSum ComputeCoverSum(const Scenario& s, double eta, std::int64_t N, std::int64_t N_max) {
  if (s.m != 1 || s.n() != 1) throw InputError("cover sum needs m = n = 1");
  if (!(eta > 0) || eta > 1) throw DomainError("cover sum needs eta in (0, 1]");
  if (N < 1) throw DomainError("cover sum needs N >= 1");
  if (N_max < N) throw DomainError("cover sum needs N_max >= N");
  std::vector<std::pair<std::int64_t, double>> terms;  // |q|, Psi(q)
  double sup_psi = 0;
  for (double M = 1; M / 2 < static_cast<double>(N_max); M *= 2) {
    for (const auto& q : s.Q.Window(M)) {
      std::int64_t r = MaxNorm(q);
      if (r > N_max) continue;
      double p = s.psi(q);
      sup_psi = std::max(sup_psi, p);
      if (r >= N) terms.emplace_back(r, p);
    }
  }
  CoverSum out;
  out.N = N;
  out.N_max = N_max;
  out.C = std::fabs(s.theta.at(0)) + sup_psi;
  for (const auto& [r, p] : terms) {
    double rd = static_cast<double>(r);
    double count = 2 * std::floor(out.C + rd) + 1;
    out.value += count * std::pow(2 * p / rd, eta);
  }
  out.terms = terms.size();
  std::ostringstream note;
  note << "truncated at |q| <= " << N_max << "; sup Psi taken over |q| <= " << N_max;
  out.note = note.str();
  return out;
}

const std::vector<std::string>& PredictorNames() {
  static const std::vector<std::string> names = {
      "jarnik_besicovitch", "borosh_fraenkel", "dodson", "dickinson", "hinokuma_shiga",
      "rynne_1d",           "levesley",        "rynne_mn", "mn_app"};
  return names;
}

Prediction PredictDims(const std::string& descriptor, const std::map<std::string, Rational>& params) {
  const Rational one(1);
  Prediction p;
  p.descriptor = descriptor;
  auto get = [&](const std::string& key) {
    const Rational& v = Param(params, descriptor, key);
    p.params[key] = v;
    return v;
  };
  auto salem = [&](Rational exponent) {
    if (exponent < Rational(0)) throw DomainError(descriptor + ": exponent must be nonnegative");
    p.hausdorff = Min(Rational(2) / (one + exponent), one);
    p.fourier_lower = p.hausdorff;
    p.note = "Salem set";
  };
  auto density = [&](Rational nu, Rational exponent) {
    if (nu < Rational(0) || one < nu) throw DomainError(descriptor + ": nu must lie in [0, 1]");
    if (exponent < Rational(0)) throw DomainError(descriptor + ": exponent must be nonnegative");
    p.hausdorff = Min((one + nu) / (one + exponent), one);
    p.fourier_lower = Min(Rational(2) * nu / (one + exponent), one);
    p.note = nu == one ? "Salem set" : "Fourier value is a lower bound";
  };

  if (descriptor == "jarnik_besicovitch" || descriptor == "hinokuma_shiga") {
    salem(get("tau"));
  } else if (descriptor == "dodson" || descriptor == "levesley") {
    salem(get("lambda"));
  } else if (descriptor == "borosh_fraenkel") {
    Rational nu = get("nu");
    density(nu, get("tau"));
  } else if (descriptor == "dickinson") {
    Rational nu = get("nu");
    density(nu, get("lambda"));
  } else if (descriptor == "rynne_1d") {
    Rational eta = get("eta");
    p.hausdorff = Min(eta, one);
    p.note = "no Fourier value";
  } else if (descriptor == "rynne_mn" || descriptor == "mn_app") {
    Rational m = get("m"), n = get("n");
    if (m.den() != 1 || n.den() != 1 || m < one || n < one) {
      throw DomainError(descriptor + ": m and n must be positive integers");
    }
    Rational mn = m * n;
    if (descriptor == "rynne_mn") {
      Rational eta = get("eta");
      p.hausdorff = Min(m * (n - one) + eta, mn);
      p.note = "no Fourier value";
    } else {
      Rational lambda = get("lambda");
      if (lambda < Rational(0)) throw DomainError("mn_app: lambda must be nonnegative");
      p.hausdorff = Min(m * (n - one) + (m + n) / (one + lambda), mn);
      p.fourier_lower = Min(Rational(2) * n / (one + lambda), mn);
      p.note = "Fourier value is a lower bound";
    }
  } else {
    throw InputError("unknown predictor '" + descriptor + "'");
  }
  return p;
}

FourierFit FitFourierExponent(const std::vector<double>& norms, const std::vector<double>& magnitudes,
                              const HFunction& h) {
  if (norms.size() != magnitudes.size()) throw InputError("norms and magnitudes differ in length");
  double radius = 0;
  for (double r : norms) radius = std::max(radius, r);
  const double e = std::numbers::e;
  FourierFit fit;
  for (double lo = e; 2 * lo <= radius; lo *= 2) {
    FourierAnnulus ann;
    ann.lo = lo;
    ann.hi = 2 * lo;
    fit.annuli.push_back(ann);
  }
  for (std::size_t i = 0; i < norms.size(); ++i) {
    double r = norms[i];
    if (r < e) continue;
    auto j = static_cast<std::size_t>(std::floor(std::log2(r / e)));
    if (j >= fit.annuli.size()) continue;
    if (j > 0 && r < fit.annuli[j].lo) --j;
    if (j + 1 < fit.annuli.size() && r >= fit.annuli[j].hi) ++j;
    if (r >= fit.annuli[j].hi) continue;
    FourierAnnulus& ann = fit.annuli[j];
    double v = magnitudes[i] / h(4 * r);
    ++ann.count;
    if (v > ann.sup) {
      ann.sup = v;
      ann.argmax = r;
    }
  }
  std::vector<double> x, y;
  for (const auto& ann : fit.annuli) {
    if (ann.count == 0 || !(ann.sup > 0)) continue;
    x.push_back(std::log(1 + ann.argmax));
    y.push_back(std::log(ann.sup));
  }
  if (x.size() < 4) throw InsufficientDataError("Fourier fit needs four annuli beyond |xi| = e");
  fit.exponent = -internal::Slope(x, y);
  fit.dim_lower = 2 * fit.exponent;
  return fit;
}

FourierFit FitFourierExponent(const SpectralGrid& grid, const HFunction& h) {
  std::vector<double> norms(grid.size()), mags(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    norms[i] = grid.Norm(i);
    mags[i] = std::abs(grid.value[i]);
  }
  return FitFourierExponent(norms, mags, h);
}

BoxCount BoxCounting(const Scenario& s, int J, const std::vector<int>& depths) {
  if (s.m != 1 || s.n() != 1) throw InputError("box counting needs m = n = 1");
  if (J < 2 || J > 4) throw InputError("box counting needs 2 <= J <= 4");
  if (!depths.empty() && depths.size() != static_cast<std::size_t>(J)) {
    throw InputError("box counting needs one depth per level");
  }
  for (int d : depths) {
    if (d < 1 || d > 50) throw InputError("box depths must lie in [1, 50]");
  }
  const double theta = s.theta.at(0);
  auto next_scale = [&](double M) {
    for (; M <= 1e12; M *= 2) {
      if (s.Q.WindowSize(M) > 0) return M;
    }
    throw DomainError("no nonempty window below 1e12");
  };

  BoxCount out;
  std::vector<std::pair<double, double>> S{{0.0, 1.0}};
  std::vector<double> x, y;
  double M = next_scale(8);
  for (int j = 0; j < J; ++j) {
    if (j > 0) M = next_scale(8 * M);
    auto window = s.Q.Window(M);
    double eps = Epsilon(s.Q, s.psi, M);
    BoxLevel level;
    level.M = M;
    if (depths.empty()) {
      double d = std::round(std::log2(M / (2 * eps)));
      level.depth = static_cast<int>(std::clamp(d, 1.0, 50.0));
    } else {
      level.depth = depths[j];
    }
    S = Restrict(S, window, s.psi, theta);
    if (S.empty()) {
      std::ostringstream os;
      os << "empty intersection at level " << j + 1 << " (M = " << M << ")";
      throw DomainError(os.str());
    }
    level.intervals = S.size();
    for (const auto& [a, b] : S) level.intersection_length += b - a;
    level.boxes = UnionBoxes(window, s.psi, theta, level.depth);
    x.push_back(level.depth * std::numbers::ln2);
    y.push_back(std::log(static_cast<double>(level.boxes)));
    out.levels.push_back(level);
  }
  out.slope = internal::Slope(x, y);
  return out;
}

LambdaEstimate EstimateLambda(const Psi& psi, double M_hi) {
  if (psi.family() == Psi::Family::kCustom) throw InputError("lambda estimate needs a radial psi");
  if (psi.family() == Psi::Family::kTabulated) {
    M_hi = std::min(M_hi, static_cast<double>(psi.table().size()));
  }
  if (M_hi < 100) throw InsufficientDataError("lambda estimate needs psi up to at least 100");
  LambdaEstimate est;
  est.M_hi = std::floor(M_hi);
  est.M_lo = std::ceil(M_hi / 10);
  est.lower = INFINITY;
  est.upper = -INFINITY;
  std::int64_t prev = -1;
  for (int i = 0; i <= 200; ++i) {
    auto M = static_cast<std::int64_t>(std::llround(est.M_lo * std::pow(est.M_hi / est.M_lo, i / 200.0)));
    if (M == prev) continue;
    prev = M;
    double v = -std::log(psi.Radial(M)) / std::log(static_cast<double>(M));
    est.lower = std::min(est.lower, v);
    est.upper = std::max(est.upper, v);
  }
  return est;
}

std::optional<Prediction> InferPrediction(const Scenario& s, const DimensionReport& partial) {
  if (s.psi.family() == Psi::Family::kCustom) return std::nullopt;
  bool homogeneous = std::all_of(s.theta.begin(), s.theta.end(), [](double t) { return t == 0; });
  bool power = s.psi.family() == Psi::Family::kPower;
  bool integers = s.Q.kind() == QKind::kAllIntegers;
  Rational tau = Approx(s.psi.tau(), 1000);
  Rational lambda = power ? tau : Approx(partial.lambda_lower, 100);
  bool lambda_stable = partial.lambda_upper - partial.lambda_lower <= 0.05;

  if (s.mn() > 1) {
    if (!integers || !homogeneous || s.psi.family() == Psi::Family::kHinokumaShiga) return std::nullopt;
    return PredictDims("mn_app", {{"m", Rational(s.m)}, {"n", Rational(s.n())}, {"lambda", lambda}});
  }
  if (s.psi.family() == Psi::Family::kHinokumaShiga) return PredictDims("hinokuma_shiga", {{"tau", tau}});
  if (integers) {
    if (!homogeneous) return PredictDims("levesley", {{"lambda", lambda}});
    if (power) return PredictDims("jarnik_besicovitch", {{"tau", tau}});
    return PredictDims("dodson", {{"lambda", lambda}});
  }
  if (!homogeneous || !partial.nu_est) return std::nullopt;
  Rational nu = Approx(std::min(1.0, *partial.nu_est), 100);
  if (power) return PredictDims("borosh_fraenkel", {{"nu", nu}, {"tau", tau}});
  if (!lambda_stable) return std::nullopt;
  return PredictDims("dickinson", {{"nu", nu}, {"lambda", lambda}});
}

DimensionReport AnalyzeDimensions(const Scenario& s, const DimensionOptions& opts, const SpectralGrid* fourier) {
  DimensionReport rep;
  const double mn = s.mn();
  auto clamp = [mn](double v) { return std::clamp(v, 0.0, mn); };

  try {
    LambdaEstimate lam = EstimateLambda(s.psi);
    rep.lambda_lower = lam.lower;
    rep.lambda_upper = lam.upper;
    std::ostringstream os;
    os << "min and max of -ln psi(M) / ln M over " << lam.M_lo << " <= M <= " << lam.M_hi;
    rep.notes["lambda"] = os.str();
  } catch (const Error& e) {
    rep.lambda_lower = rep.lambda_upper = NAN;
    rep.notes["lambda"] = e.what();
  }

  if (s.Q.kind() != QKind::kExplicitList && s.Q.kind() != QKind::kFile) {
    try {
      QSet base = QSet::Preset(s.Q.kind(), 1);
      rep.nu_est = clamp(EstimateNu(base, DefaultNuExponents(), opts.nu_cutoff).nu);
      rep.notes["nu"] = s.n() > 1 ? "regression on the one-dimensional factor" : "joint log / log-log regression";
    } catch (const Error& e) {
      rep.notes["nu"] = e.what();
    }
  } else {
    rep.notes["nu"] = "finite Q";
  }

  try {
    EtaEstimate eta = EstimateEta(s.Q, s.psi, s.m, opts.eta_cutoffs);
    rep.eta_est = clamp(eta.eta);
    std::ostringstream os;
    os << "bisection bracket [" << eta.lo << ", " << eta.hi << "]";
    if (eta.eta > mn) os << "; raw estimate " << eta.eta << " clamped to " << mn;
    rep.notes["eta"] = os.str();
  } catch (const Error& e) {
    rep.notes["eta"] = e.what();
  }

  try {
    if (!opts.descriptor.empty()) {
      rep.prediction = PredictDims(opts.descriptor, opts.params);
    } else {
      rep.prediction = InferPrediction(s, rep);
    }
  } catch (const DomainError& e) {
    rep.notes["prediction"] = e.what();
  }
  if (rep.prediction) {
    rep.hausdorff_pred = rep.prediction->hausdorff.ToDouble();
    if (rep.prediction->fourier_lower) rep.fourier_lower_pred = rep.prediction->fourier_lower->ToDouble();
    rep.notes["prediction"] = rep.prediction->descriptor + ": " + rep.prediction->note;
  } else if (!rep.notes.count("prediction")) {
    rep.notes["prediction"] = "no closed form applies";
  }

  if (fourier) {
    try {
      FourierFit fit = FitFourierExponent(*fourier, s.h);
      rep.fourier_fit = clamp(fit.exponent);
      rep.annuli = fit.annuli;
      rep.notes["fourier_fit"] = mn > 1 ? "decay exponent of the built measure; lower-bound evidence only"
                                        : "decay exponent of the built measure";
    } catch (const Error& e) {
      rep.notes["fourier_fit"] = e.what();
    }
  }

  if (opts.box_count && s.mn() == 1) {
    try {
      BoxCount box = BoxCounting(s, opts.box_levels);
      rep.box_count_est = clamp(box.slope);
      std::ostringstream os;
      os << box.levels.size() << " lacunary levels, M_1 = " << box.levels.front().M;
      rep.notes["box_count"] = os.str();
    } catch (const Error& e) {
      rep.notes["box_count"] = e.what();
    }
  }
  return rep;
}

}  // namespace salem
