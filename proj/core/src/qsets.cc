#include "salem/qsets.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fit.h"
#include "salem/error.h"

namespace salem {
namespace {

// Integer bounds of the open-closed shell M/2 < t <= M.
struct Shell {
  std::int64_t lo;
  std::int64_t hi;
};

Shell ShellOf(double M) {
  if (!(M > 0) || !std::isfinite(M)) throw DomainError("window scale must be positive and finite");
  if (M > 9.0e15) throw InputError("window scale too large to enumerate");
  return {static_cast<std::int64_t>(std::floor(M / 2)) + 1, static_cast<std::int64_t>(std::floor(M))};
}

bool IsPrime(std::int64_t t) {
  if (t < 2) return false;
  if (t < 4) return true;
  if (t % 2 == 0 || t % 3 == 0) return false;
  for (std::int64_t d = 5; d * d <= t; d += 6) {
    if (t % d == 0 || t % (d + 2) == 0) return false;
  }
  return true;
}

// Primes in [lo, hi] by a segmented sieve.
std::vector<std::int64_t> PrimesIn(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> out;
  lo = std::max<std::int64_t>(lo, 2);
  if (hi < lo) return out;
  std::int64_t root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(hi))) + 1;
  std::vector<char> small(root + 1, 1);
  std::vector<std::int64_t> base;
  for (std::int64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::int64_t j = i * i; j <= root; j += i) small[j] = 0;
  }
  std::vector<char> mark(hi - lo + 1, 1);
  for (std::int64_t p : base) {
    std::int64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
    for (std::int64_t j = start; j <= hi; j += p) mark[j - lo] = 0;
  }
  for (std::int64_t t = lo; t <= hi; ++t) {
    if (mark[t - lo]) out.push_back(t);
  }
  return out;
}

bool SinThreshold(std::int64_t t) { return t > 0 && std::fabs(std::sin(static_cast<double>(t))) >= 0.5; }

bool InShell(std::int64_t t, Shell s) {
  std::int64_t a = t < 0 ? -t : t;
  return a >= s.lo && a <= s.hi;
}

}  // namespace

std::int64_t MaxNorm(std::span<const std::int64_t> v) {
  std::int64_t r = 0;
  for (std::int64_t x : v) r = std::max(r, x < 0 ? -x : x);
  return r;
}

const char* QKindName(QKind kind) {
  switch (kind) {
    case QKind::kAllIntegers: return "all_integers";
    case QKind::kPrimes: return "primes";
    case QKind::kShiftedPrimes: return "shifted_primes";
    case QKind::kSquares: return "squares";
    case QKind::kPowersOfTwo: return "powers_of_two";
    case QKind::kSinThreshold: return "sin_threshold";
    case QKind::kExplicitList: return "explicit_list";
    case QKind::kFile: return "file";
  }
  return "unknown";
}

QKind ParseQKind(const std::string& name) {
  for (QKind k : {QKind::kAllIntegers, QKind::kPrimes, QKind::kShiftedPrimes, QKind::kSquares,
                  QKind::kPowersOfTwo, QKind::kSinThreshold, QKind::kExplicitList, QKind::kFile}) {
    if (name == QKindName(k)) return k;
  }
  throw InputError("unknown Q kind: " + name);
}

QSet QSet::Preset(QKind kind, int n) {
  if (n < 1) throw InputError("n must be positive");
  if (kind == QKind::kExplicitList || kind == QKind::kFile) {
    throw InputError("explicit Q sets need a payload");
  }
  QSet s;
  s.n_ = n;
  s.kind_ = kind;
  return s;
}

QSet QSet::Explicit(int n, std::vector<IntVec> elements) {
  if (n < 1) throw InputError("n must be positive");
  for (const auto& q : elements) {
    if (static_cast<int>(q.size()) != n) throw InputError("explicit Q element has wrong length");
  }
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  QSet s;
  s.n_ = n;
  s.kind_ = QKind::kExplicitList;
  s.payload_ = std::move(elements);
  return s;
}

QSet QSet::FromFile(int n, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read Q file: " + path);
  std::vector<IntVec> elements;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    IntVec q;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t pos = 0;
        long long v = std::stoll(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        q.push_back(v);
      } catch (const std::logic_error&) {
        throw InputError(path + ":" + std::to_string(lineno) + ": not an integer: " + tok);
      }
    }
    if (q.empty()) continue;
    if (static_cast<int>(q.size()) != n) {
      throw InputError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(n) +
                       " integers");
    }
    elements.push_back(std::move(q));
  }
  QSet s = Explicit(n, std::move(elements));
  s.kind_ = QKind::kFile;
  s.path_ = path;
  return s;
}

bool QSet::Contains1d(std::int64_t t) const {
  switch (kind_) {
    case QKind::kAllIntegers: return true;
    case QKind::kPrimes: return IsPrime(t);
    case QKind::kShiftedPrimes: return IsPrime(t - 1);
    case QKind::kSquares: {
      if (t < 0) return false;
      auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(t))));
      for (std::int64_t c = std::max<std::int64_t>(r - 1, 0); c <= r + 1; ++c) {
        if (c * c == t) return true;
      }
      return false;
    }
    case QKind::kPowersOfTwo: return t > 0 && (t & (t - 1)) == 0;
    case QKind::kSinThreshold: return SinThreshold(t);
    default: return false;
  }
}

bool QSet::Contains(std::span<const std::int64_t> q) const {
  if (static_cast<int>(q.size()) != n_) throw InputError("dimension mismatch in Q membership");
  if (kind_ == QKind::kExplicitList || kind_ == QKind::kFile) {
    IntVec key(q.begin(), q.end());
    return std::binary_search(payload_.begin(), payload_.end(), key);
  }
  for (std::int64_t t : q) {
    if (!Contains1d(t)) return false;
  }
  return true;
}

std::vector<std::int64_t> QSet::Window1d(double M) const {
  Shell s = ShellOf(M);
  std::vector<std::int64_t> out;
  if (s.hi < s.lo) return out;
  switch (kind_) {
    case QKind::kAllIntegers: {
      std::size_t count = static_cast<std::size_t>(s.hi - s.lo + 1);
      if (2 * count > kMaxWindow) throw InputError("window too large to enumerate");
      out.reserve(2 * count);
      for (std::int64_t t = -s.hi; t <= -s.lo; ++t) out.push_back(t);
      for (std::int64_t t = s.lo; t <= s.hi; ++t) out.push_back(t);
      break;
    }
    case QKind::kPrimes:
      if (s.hi - s.lo > static_cast<std::int64_t>(4 * kMaxWindow)) throw InputError("window too large to enumerate");
      out = PrimesIn(s.lo, s.hi);
      break;
    case QKind::kShiftedPrimes:
      if (s.hi - s.lo > static_cast<std::int64_t>(4 * kMaxWindow)) throw InputError("window too large to enumerate");
      out = PrimesIn(s.lo - 1, s.hi - 1);
      for (auto& t : out) t += 1;
      break;
    case QKind::kSquares: {
      auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(s.lo)));
      while (r > 0 && r * r >= s.lo) --r;
      for (++r; r * r <= s.hi; ++r) {
        if (r * r >= s.lo) out.push_back(r * r);
      }
      break;
    }
    case QKind::kPowersOfTwo:
      for (std::int64_t t = 1; t <= s.hi && t > 0; t *= 2) {
        if (t >= s.lo) out.push_back(t);
      }
      break;
    case QKind::kSinThreshold:
      if (s.hi - s.lo > static_cast<std::int64_t>(4 * kMaxWindow)) throw InputError("window too large to enumerate");
      for (std::int64_t t = s.lo; t <= s.hi; ++t) {
        if (SinThreshold(t)) out.push_back(t);
      }
      break;
    default:
      break;
  }
  return out;
}

bool QSet::ForEachWindowNorm(double M, const std::function<void(std::int64_t)>& fn) const {
  if (kind_ == QKind::kExplicitList || kind_ == QKind::kFile) return false;
  Shell s = ShellOf(M);
  if (s.hi < s.lo) return true;
  // In a Cartesian power every 1D norm r is attained by (r, ..., r).
  if (kind_ == QKind::kAllIntegers) {
    for (std::int64_t r = s.lo; r <= s.hi; ++r) fn(r);
    return true;
  }
  for (std::int64_t t : Window1d(M)) fn(t < 0 ? -t : t);
  return true;
}

std::vector<IntVec> QSet::Window(double M) const {
  Shell s = ShellOf(M);
  std::vector<IntVec> out;
  if (kind_ == QKind::kExplicitList || kind_ == QKind::kFile) {
    for (const auto& q : payload_) {
      bool ok = true;
      for (std::int64_t t : q) ok = ok && InShell(t, s);
      if (ok) out.push_back(q);
    }
    return out;
  }
  std::vector<std::int64_t> base = Window1d(M);
  if (base.empty()) return out;
  double total = std::pow(static_cast<double>(base.size()), n_);
  if (total > static_cast<double>(kMaxWindow)) throw InputError("window too large to enumerate");
  // Odometer over the n-fold product keeps lexicographic order.
  std::vector<std::size_t> idx(n_, 0);
  out.reserve(static_cast<std::size_t>(total));
  while (true) {
    IntVec q(n_);
    for (int j = 0; j < n_; ++j) q[j] = base[idx[j]];
    out.push_back(std::move(q));
    int j = n_ - 1;
    while (j >= 0 && ++idx[j] == base.size()) idx[j--] = 0;
    if (j < 0) break;
  }
  return out;
}

std::size_t QSet::WindowSize(double M) const {
  if (kind_ == QKind::kAllIntegers) {
    Shell s = ShellOf(M);
    if (s.hi < s.lo) return 0;
    double one = 2.0 * static_cast<double>(s.hi - s.lo + 1);
    double total = std::pow(one, n_);
    if (total > 1e18) throw InputError("window size overflows");
    return static_cast<std::size_t>(total);
  }
  if (kind_ == QKind::kExplicitList || kind_ == QKind::kFile) return Window(M).size();
  std::size_t one = Window1d(M).size();
  double total = std::pow(static_cast<double>(one), n_);
  if (total > 1e18) throw InputError("window size overflows");
  return static_cast<std::size_t>(total);
}

Psi Psi::Power(double tau) {
  if (!std::isfinite(tau)) throw InputError("tau must be finite");
  Psi p;
  p.family_ = Family::kPower;
  p.tau_ = tau;
  p.name_ = "power";
  return p;
}

Psi Psi::HinokumaShiga(double tau) {
  if (!std::isfinite(tau)) throw InputError("tau must be finite");
  Psi p;
  p.family_ = Family::kHinokumaShiga;
  p.tau_ = tau;
  p.name_ = "hinokuma_shiga";
  return p;
}

Psi Psi::Tabulated(std::vector<double> table) {
  if (table.empty()) throw InputError("empty psi table");
  for (double v : table) {
    if (!(v > 0) || !std::isfinite(v)) throw InputError("psi table values must be positive and finite");
  }
  Psi p;
  p.family_ = Family::kTabulated;
  p.table_ = std::move(table);
  p.name_ = "tabulated";
  return p;
}

Psi Psi::Custom(CustomFn fn, std::string name) {
  if (!fn) throw InputError("custom psi needs a callable");
  Psi p;
  p.family_ = Family::kCustom;
  p.custom_ = std::move(fn);
  p.name_ = std::move(name);
  return p;
}

double Psi::Radial(std::int64_t r) const {
  if (r < 0) r = -r;
  if (r == 0) return 1.0;
  switch (family_) {
    case Family::kPower: return std::pow(static_cast<double>(r), -tau_);
    case Family::kHinokumaShiga:
      return std::fabs(std::sin(static_cast<double>(r))) * std::pow(static_cast<double>(r), -tau_);
    case Family::kTabulated:
      if (static_cast<std::size_t>(r) > table_.size()) {
        throw InputError("psi table does not cover |q| = " + std::to_string(r));
      }
      return table_[r - 1];
    case Family::kCustom: break;
  }
  throw InputError("custom psi has no radial form");
}

double Psi::operator()(std::span<const std::int64_t> q) const {
  if (family_ == Family::kCustom) {
    if (MaxNorm(q) == 0) return 1.0;
    return custom_(q);
  }
  return Radial(MaxNorm(q));
}

const char* PsiFamilyName(Psi::Family f) {
  switch (f) {
    case Psi::Family::kPower: return "power";
    case Psi::Family::kHinokumaShiga: return "hinokuma_shiga";
    case Psi::Family::kTabulated: return "tabulated";
    case Psi::Family::kCustom: return "custom";
  }
  return "unknown";
}

HFunction HFunction::Constant(double c) {
  if (!(c > 0) || !std::isfinite(c)) throw InputError("h constant must be positive");
  HFunction h;
  h.family_ = Family::kConstant;
  h.c_ = c;
  return h;
}

HFunction HFunction::Log(double c, double p) {
  if (!(c > 0) || !(p >= 0) || !std::isfinite(c) || !std::isfinite(p)) {
    throw InputError("h = c ln^p(x+1) needs c > 0 and p >= 0");
  }
  HFunction h;
  h.family_ = Family::kLog;
  h.c_ = c;
  h.p_ = p;
  return h;
}

HFunction HFunction::Table(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.empty()) throw InputError("h table needs matching nonempty x and y");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]) || !(ys[i] > 0)) {
      throw InputError("h table values must be finite with y > 0");
    }
    if (i > 0 && !(xs[i] > xs[i - 1])) throw InputError("h table x must be strictly ascending");
    if (i > 0 && ys[i] < ys[i - 1]) throw InputError("h table must be nondecreasing");
  }
  HFunction h;
  h.family_ = Family::kTable;
  h.xs_ = std::move(xs);
  h.ys_ = std::move(ys);
  return h;
}

double HFunction::operator()(double x) const {
  switch (family_) {
    case Family::kConstant: return c_;
    case Family::kLog: return c_ * std::pow(std::log(std::max(x, 0.0) + 1.0), p_);
    case Family::kTable: {
      if (x <= xs_.front()) return ys_.front();
      if (x >= xs_.back()) return ys_.back();
      auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      std::size_t i = static_cast<std::size_t>(it - xs_.begin());
      double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
      return ys_[i - 1] + t * (ys_[i] - ys_[i - 1]);
    }
  }
  return c_;
}

bool HFunction::IsNondecreasing() const {
  double prev = (*this)(1e-6);
  for (double x = 1e-6; x <= 1e12; x *= 1.1) {
    double v = (*this)(x);
    if (v < prev) return false;
    prev = v;
  }
  return true;
}

int Scenario::Smoothness() const {
  if (K > 0) return K;
  return static_cast<int>(std::floor(mn() + a)) + 3;
}

void Scenario::Validate() const {
  if (m < 1) throw InputError("m must be positive");
  if (static_cast<int>(theta.size()) != m) throw InputError("theta must have m entries");
  for (double t : theta) {
    if (!std::isfinite(t)) throw InputError("theta must be finite");
  }
  if (!(a >= 0) || !std::isfinite(a)) throw InputError("a must be >= 0");
  if (K != 0 && K <= mn() + a) throw InputError("K must exceed mn + a");
  for (std::size_t i = 0; i < Mset.size(); ++i) {
    if (!(Mset[i] > 0) || !std::isfinite(Mset[i])) throw InputError("Mset entries must be positive");
    if (i > 0 && !(Mset[i] > Mset[i - 1])) throw InputError("Mset must be strictly ascending");
  }
  if (!h.IsNondecreasing()) throw InputError("h must be increasing");
}

double Epsilon(const QSet& Q, const Psi& psi, double M) {
  if (psi.family() != Psi::Family::kCustom) {
    double eps = INFINITY;
    bool any = false;
    bool lazy = Q.ForEachWindowNorm(M, [&](std::int64_t r) {
      any = true;
      eps = std::min(eps, psi.Radial(r));
    });
    if (lazy) {
      if (!any) {
        std::ostringstream os;
        os << "empty window Q(M) at M = " << M;
        throw EmptyWindowError(M, os.str());
      }
      if (!(eps > 0) || !std::isfinite(eps)) throw InputError("Psi must be positive and finite on the window");
      return eps;
    }
  }
  auto window = Q.Window(M);
  if (window.empty()) {
    std::ostringstream os;
    os << "empty window Q(M) at M = " << M;
    throw EmptyWindowError(M, os.str());
  }
  double eps = INFINITY;
  for (const auto& q : window) {
    double v = psi(q);
    if (!(v > 0) || !std::isfinite(v)) throw InputError("Psi must be positive and finite on the window");
    eps = std::min(eps, v);
  }
  return eps;
}

CertReport CertifyScenario(const Scenario& s) {
  CertReport report;
  report.pass = !s.Mset.empty();
  for (double M : s.Mset) {
    CertEntry e;
    e.M = M;
    try {
      e.window_size = s.Q.WindowSize(M);
      e.eps = Epsilon(s.Q, s.psi, M);
      e.lhs = static_cast<double>(e.window_size) * std::pow(e.eps, s.a) * s.h(M);
      e.rhs = std::pow(M, s.a);
      e.margin = e.lhs - e.rhs;
      e.pass = e.margin >= 0;
    } catch (const EmptyWindowError& err) {
      e.pass = false;
      e.reason = err.what();
    }
    report.pass = report.pass && e.pass;
    report.entries.push_back(e);
  }
  return report;
}

std::vector<double> DefaultNuExponents() {
  std::vector<double> t;
  for (int i = 0; i <= 20; ++i) t.push_back(0.5 + 0.025 * i);
  return t;
}

NuEstimate EstimateNu(const QSet& Q, const std::vector<double>& exponents, double cutoff) {
  if (Q.n() != 1) throw InputError("nu estimate needs n = 1");
  if (cutoff < 1e3) throw InputError("nu estimate needs cutoff >= 1000");
  std::vector<std::int64_t> norms;
  for (double X = cutoff; X >= 1.0; X /= 2) {
    for (const auto& q : Q.Window(X)) norms.push_back(q[0] < 0 ? -q[0] : q[0]);
  }
  std::sort(norms.begin(), norms.end());
  NuEstimate est;
  std::vector<double> lx, llx, ones, ly;
  for (double t : exponents) {
    double X = std::pow(cutoff, t);
    if (X <= std::exp(1.0)) continue;
    auto count = std::upper_bound(norms.begin(), norms.end(), static_cast<std::int64_t>(std::floor(X))) - norms.begin();
    if (count == 0) continue;
    est.xs.push_back(X);
    est.counts.push_back(static_cast<double>(count));
    lx.push_back(std::log(X));
    llx.push_back(std::log(std::log(X)));
    ones.push_back(1.0);
    ly.push_back(std::log(static_cast<double>(count)));
  }
  if (ly.size() < 4 || norms.size() < 8) throw InsufficientDataError("too few elements of Q below the cutoff");
  auto beta = internal::LeastSquares({lx, llx, ones}, ly);
  est.nu = std::max(0.0, beta[0]);
  est.log_log_coefficient = beta[1];
  return est;
}

}  // namespace salem
