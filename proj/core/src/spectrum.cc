#include "salem/spectrum.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "salem/divisors.h"
#include "salem/error.h"
#include "salem/parallel.h"

namespace salem {
namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

// e^{-2 pi i s}; s is reduced with round(), which is odd, so s and -s give
// exactly conjugate results.
Complex Phase(double s) {
  double r = s - std::round(s);
  double ang = -2.0 * std::numbers::pi * r;
  return {std::cos(ang), std::sin(ang)};
}

std::uint64_t BoxCardinality(int dim, std::int64_t L, std::size_t cap) {
  double side = 2.0 * static_cast<double>(L) + 1.0;
  double total = std::pow(side, dim);
  if (total > static_cast<double>(cap)) {
    std::ostringstream os;
    os << "box too large: (2*" << L << "+1)^" << dim << " entries exceeds cap " << cap;
    throw BoxError(os.str());
  }
  return static_cast<std::uint64_t>(total);
}

}  // namespace

IntVec SpectrumTable::Ell(std::size_t i) const {
  const std::uint64_t side = static_cast<std::uint64_t>(2 * L_max + 1);
  IntVec ell(dim());
  std::uint64_t key = keys_[i];
  for (int d = dim() - 1; d >= 0; --d) {
    ell[d] = static_cast<std::int64_t>(key % side) - L_max;
    key /= side;
  }
  return ell;
}

std::uint64_t SpectrumTable::Key(std::span<const std::int64_t> ell) const {
  const std::uint64_t side = static_cast<std::uint64_t>(2 * L_max + 1);
  std::uint64_t key = 0;
  for (std::int64_t v : ell) key = key * side + static_cast<std::uint64_t>(v + L_max);
  return key;
}

Complex SpectrumTable::At(std::span<const std::int64_t> ell) const {
  if (static_cast<int>(ell.size()) != dim()) throw InputError("index has wrong dimension");
  if (MaxNorm(ell) > L_max) throw BoxError("index outside the table box");
  auto key = Key(ell);
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) return {0.0, 0.0};
  return values_[static_cast<std::size_t>(it - keys_.begin())];
}

FmFunction::FmFunction(const Scenario& s, double M)
    : scenario_(s), M_(M), eps_(Epsilon(s.Q, s.psi, M)), bump_(s.m, s.Smoothness()), window_(s.Q.Window(M)) {
  if (static_cast<int>(s.theta.size()) != s.m) throw InputError("theta must have m entries");
}

double FmFunction::Eval(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& q : window_) sum += bump_.Periodized(eps_, q, scenario_.theta, x);
  return sum / static_cast<double>(window_.size());
}

Complex FmFunction::Hat(std::span<const std::int64_t> ell) const {
  const int m = scenario_.m, n = scenario_.n();
  if (static_cast<int>(ell.size()) != m * n) throw InputError("index has wrong dimension");
  DivisorQuery query{m, n, IntVec(ell.begin(), ell.end())};
  Complex sum{0.0, 0.0};
  for (const auto& q : DivisorWindow(query, scenario_.Q, M_)) {
    // The witness k is the common column ratio l_j / q_j.
    auto k = DivisorSetContains(q, query);
    if (!k) throw Error("divisor window returned a non-member");
    for (int j = 1; j < n; ++j) {
      for (int i = 0; i < m; ++i) {
        if (static_cast<__int128>((*k)[i]) * q[j] != ell[i * n + j]) {
          throw Error("column ratio of a divisor-set member is not column independent");
        }
      }
    }
    double hat = 1.0, s = 0.0;
    for (int i = 0; i < m; ++i) {
      hat *= bump_.FactorHat(eps_ * static_cast<double>((*k)[i]));
      s += static_cast<double>((*k)[i]) * scenario_.theta[i];
    }
    sum += hat * Phase(s);
  }
  return sum / static_cast<double>(window_.size());
}

SpectrumTable FmFunction::Table(std::int64_t L_max, std::size_t box_cap) const {
  const int m = scenario_.m, n = scenario_.n(), dim = m * n;
  if (L_max < 0) throw DomainError("L_max must be nonnegative");
  BoxCardinality(dim, L_max, box_cap);
  SpectrumTable t;
  t.m = m;
  t.n = n;
  t.M = M_;
  t.eps = eps_;
  t.window_size = window_.size();
  t.L_max = L_max;
  const std::uint64_t side = static_cast<std::uint64_t>(2 * L_max + 1);
  std::uint64_t center = 0;
  for (int d = 0; d < dim; ++d) center = center * side + static_cast<std::uint64_t>(L_max);

  // Contributions to the lexicographically nonnegative half; the other
  // half is its exact conjugate mirror.
  struct Contribution {
    std::uint64_t key;
    Complex value;
  };
  std::vector<Contribution> contrib;
  std::vector<double> factor_cache;
  for (const auto& q : window_) {
    const std::int64_t qn = MaxNorm(q);
    const std::int64_t kmax = L_max / qn;
    const std::int64_t kside = 2 * kmax + 1;
    factor_cache.resize(static_cast<std::size_t>(kside));
    for (std::int64_t k = -kmax; k <= kmax; ++k) {
      factor_cache[static_cast<std::size_t>(k + kmax)] = bump_.FactorHat(eps_ * static_cast<double>(k));
    }
    IntVec k(m, -kmax);
    while (true) {
      std::uint64_t key = 0;
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) key = key * side + static_cast<std::uint64_t>(k[i] * q[j] + L_max);
      }
      if (key >= center) {
        Complex v{1.0, 0.0};
        if (key != center) {
          double hat = 1.0, s = 0.0;
          for (int i = 0; i < m; ++i) {
            hat *= factor_cache[static_cast<std::size_t>(k[i] + kmax)];
            s += static_cast<double>(k[i]) * scenario_.theta[i];
          }
          v = hat * Phase(s);
        }
        contrib.push_back({key, v});
      }
      int i = m - 1;
      while (i >= 0 && ++k[i] > kmax) k[i--] = -kmax;
      if (i < 0) break;
    }
  }
  std::stable_sort(contrib.begin(), contrib.end(),
                   [](const Contribution& a, const Contribution& b) { return a.key < b.key; });
  std::vector<std::uint64_t> keys;
  std::vector<Complex> values;
  const double inv = 1.0 / static_cast<double>(window_.size());
  for (std::size_t i = 0; i < contrib.size();) {
    std::size_t j = i;
    Complex sum{0.0, 0.0};
    while (j < contrib.size() && contrib[j].key == contrib[i].key) sum += contrib[j++].value;
    keys.push_back(contrib[i].key);
    values.push_back(contrib[i].key == center ? sum / static_cast<double>(window_.size()) : sum * inv);
    i = j;
  }
  // Mirror: key(-l) = 2 * center - key(l).
  std::size_t half = keys.size();
  t.keys_.reserve(2 * half);
  t.values_.reserve(2 * half);
  for (std::size_t i = half; i-- > 0;) {
    if (keys[i] == center) continue;
    t.keys_.push_back(2 * center - keys[i]);
    t.values_.push_back(std::conj(values[i]));
  }
  for (std::size_t i = 0; i < half; ++i) {
    t.keys_.push_back(keys[i]);
    t.values_.push_back(values[i]);
  }
  return t;
}

double FmEval(const Scenario& s, double M, std::span<const double> x) { return FmFunction(s, M).Eval(x); }

Complex FmHat(const Scenario& s, double M, std::span<const std::int64_t> ell) {
  return FmFunction(s, M).Hat(ell);
}

SpectrumTable FmHatTable(const Scenario& s, double M, std::int64_t L_max, std::size_t box_cap) {
  return FmFunction(s, M).Table(L_max, box_cap);
}

EnvelopeFit EnvelopeCheck(const SpectrumTable& table, double a, double hM, double zeta, double C1) {
  if (!(zeta > std::log(2.0)) || zeta > 1.0) throw DomainError("zeta must lie in (ln 2, 1]");
  EnvelopeFit fit;
  fit.zeta = zeta;
  std::int64_t last_above = 0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    IntVec ell = table.Ell(i);
    std::int64_t norm = MaxNorm(ell);
    if (norm < 16) continue;
    double ln = std::log(static_cast<double>(norm));
    double env = std::pow(static_cast<double>(norm), -a) * std::exp(zeta * ln / std::log(ln)) * hM;
    double ratio = std::abs(table.Value(i)) / env;
    ++fit.tested;
    if (fit.argmax.empty() || ratio > fit.max_ratio) {
      fit.max_ratio = ratio;
      fit.argmax = ell;
    }
    if (ratio > C1) last_above = std::max(last_above, norm);
    int j = static_cast<int>(std::floor(std::log2(static_cast<double>(norm))));
    std::int64_t lo = std::int64_t{1} << j;
    auto it = std::find_if(fit.residuals.begin(), fit.residuals.end(),
                           [&](const AnnulusRatio& r) { return r.lo == lo; });
    if (it == fit.residuals.end()) {
      fit.residuals.push_back({lo, 2 * lo, 0.0, 0});
      it = fit.residuals.end() - 1;
    }
    it->max_ratio = std::max(it->max_ratio, ratio);
    ++it->count;
  }
  std::sort(fit.residuals.begin(), fit.residuals.end(),
            [](const AnnulusRatio& x, const AnnulusRatio& y) { return x.lo < y.lo; });
  fit.C_fit = fit.max_ratio;
  fit.L_zeta = std::max<std::int64_t>(16, last_above + 1);
  return fit;
}

std::size_t SpectralGrid::Index(std::span<const std::int64_t> j) const {
  std::size_t idx = 0;
  const std::size_t s = static_cast<std::size_t>(side());
  for (std::int64_t v : j) idx = idx * s + static_cast<std::size_t>(v + N);
  return idx;
}

IntVec SpectralGrid::Point(std::size_t index) const {
  IntVec j(dim);
  const std::size_t s = static_cast<std::size_t>(side());
  for (int d = dim - 1; d >= 0; --d) {
    j[d] = static_cast<std::int64_t>(index % s) - N;
    index /= s;
  }
  return j;
}

double SpectralGrid::Norm(std::size_t index) const {
  return static_cast<double>(MaxNorm(Point(index))) / R;
}

SpectralGrid SpectralGrid::Sub(std::int64_t N_sub) const {
  if (N_sub > N) throw BoxError("sub-grid larger than the grid");
  SpectralGrid out;
  out.dim = dim;
  out.R = R;
  out.N = N_sub;
  const std::size_t total = static_cast<std::size_t>(std::pow(2.0 * N_sub + 1, dim));
  out.value.resize(total);
  out.error.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t src = Index(out.Point(i));
    out.value[i] = value[src];
    out.error[i] = error[src];
  }
  return out;
}

SpectralGrid MakeGrid(int dim, int R, std::int64_t N, std::size_t cap) {
  if (R < 1 || N < 0 || dim < 1) throw DomainError("bad grid parameters");
  double total = std::pow(2.0 * static_cast<double>(N) + 1.0, dim);
  if (total > static_cast<double>(cap)) {
    std::ostringstream os;
    os << "grid of radius " << static_cast<double>(N) / R << " at R = " << R << " in dimension " << dim
       << " exceeds cap " << cap;
    throw BoxError(os.str());
  }
  SpectralGrid g;
  g.dim = dim;
  g.R = R;
  g.N = N;
  g.value.assign(static_cast<std::size_t>(total), Complex{0.0, 0.0});
  g.error.assign(static_cast<std::size_t>(total), 0.0);
  return g;
}

SpectralGrid BumpHatGrid(const Bump& bump, int R, std::int64_t N, std::size_t cap) {
  SpectralGrid g = MakeGrid(bump.dim(), R, N, cap);
  std::vector<double> f(static_cast<std::size_t>(2 * N + 1));
  for (std::int64_t j = -N; j <= N; ++j) f[static_cast<std::size_t>(j + N)] = bump.FactorHat(static_cast<double>(j) / R);
  const std::size_t s = static_cast<std::size_t>(g.side());
  ParallelFor(0, g.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      std::size_t idx = i;
      double v = 1.0;
      for (int d = 0; d < g.dim; ++d) {
        v *= f[idx % s];
        idx /= s;
      }
      g.value[i] = {v, 0.0};
      g.error[i] = 4.0 * g.dim * kUnitRoundoff * std::fabs(v) + 1e-300;
    }
  });
  return g;
}

double TailBound(int dim, int K, double s, std::int64_t L) {
  if (K <= dim) throw DomainError("tail bound needs K > dim");
  const double d = dim;
  const double pre = d * std::pow(2.0, d) * std::pow(1.0 + s, d - 1.0);
  const double gap = static_cast<double>(L) - s;
  if (gap >= 1.0) return pre * std::pow(gap, d - K) / (K - d);
  // Terms with |l| <= floor(s) + 1 can be of order one; count them.
  const double r0 = std::floor(s) + 1.0;
  double near = std::pow(2.0 * r0 + 1.0, d) - std::pow(2.0 * static_cast<double>(L) + 1.0, d);
  return std::max(near, 0.0) + pre * (1.0 + 1.0 / (K - d));
}

SpectralGrid WindowedSpectrum(const SpectralGrid& chi, double C2, int K, const SpectrumTable& table,
                              std::int64_t out_N, std::int64_t L_trunc, bool exclude_origin) {
  const int dim = chi.dim;
  if (table.dim() != dim) throw InputError("table and grid dimensions differ");
  if (L_trunc > table.L_max) throw BoxError("truncation exceeds the table box");
  const std::int64_t need = out_N + static_cast<std::int64_t>(chi.R) * L_trunc;
  if (chi.N < need) {
    std::ostringstream os;
    os << "chi grid radius " << chi.radius() << " too small; needs " << static_cast<double>(need) / chi.R
       << " (enlarge by " << static_cast<double>(need - chi.N) / chi.R << ")";
    throw BoxError(os.str());
  }
  SpectralGrid out = MakeGrid(dim, chi.R, out_N, std::numeric_limits<std::size_t>::max());

  // Offsets are linear in the chi index space.
  const std::int64_t cs = chi.side();
  std::vector<std::int64_t> shift;
  std::vector<Complex> coef;
  double abs_sum = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    IntVec ell = table.Ell(i);
    std::int64_t norm = MaxNorm(ell);
    if (norm > L_trunc || (exclude_origin && norm == 0)) continue;
    std::int64_t off = 0;
    for (int d = 0; d < dim; ++d) off = off * cs + static_cast<std::int64_t>(chi.R) * ell[d];
    shift.push_back(off);
    coef.push_back(table.Value(i));
    abs_sum += std::abs(table.Value(i));
  }
  bool chi_has_error = false;
  double chi_max = 0.0;
  for (std::size_t i = 0; i < chi.size(); ++i) {
    chi_max = std::max(chi_max, std::abs(chi.value[i]));
    if (chi.error[i] > 1e-200) chi_has_error = true;
  }
  const double rounding = 8.0 * kUnitRoundoff * static_cast<double>(shift.size() + 1) * abs_sum * chi_max;

  const std::int64_t os = out.side();
  const std::int64_t rows = static_cast<std::int64_t>(out.size()) / os;
  auto row_base = [&](std::int64_t row) {
    // chi index of the first point of an output row.
    std::int64_t base = 0;
    std::int64_t r = row;
    std::vector<std::int64_t> jv(dim);
    jv[dim - 1] = -out_N;
    for (int d = dim - 2; d >= 0; --d) {
      jv[d] = r % os - out_N;
      r /= os;
    }
    for (int d = 0; d < dim; ++d) base = base * cs + (jv[d] + chi.N);
    return base;
  };
  auto run = [&](std::int64_t row, std::int64_t t0, std::int64_t t1) {
    const std::int64_t base = row_base(row);
    Complex* dst = out.value.data() + row * os;
    double* err = out.error.data() + row * os;
    for (std::size_t e = 0; e < shift.size(); ++e) {
      const Complex f = coef[e];
      const Complex* src = chi.value.data() + (base - shift[e]);
      for (std::int64_t t = t0; t < t1; ++t) dst[t] += f * src[t];
      if (chi_has_error) {
        const double af = std::abs(f);
        const double* esrc = chi.error.data() + (base - shift[e]);
        for (std::int64_t t = t0; t < t1; ++t) err[t] += af * esrc[t];
      }
    }
  };
  if (dim == 1) {
    ParallelFor(0, static_cast<std::size_t>(os), [&](std::size_t lo, std::size_t hi) {
      run(0, static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi));
    }, 256);
  } else {
    ParallelFor(0, static_cast<std::size_t>(rows), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t r = lo; r < hi; ++r) run(static_cast<std::int64_t>(r), 0, os);
    }, 1);
  }
  // Tail and rounding depend on |xi| only.
  std::vector<double> tail(static_cast<std::size_t>(out_N + 1));
  for (std::int64_t j = 0; j <= out_N; ++j) {
    tail[static_cast<std::size_t>(j)] = C2 * TailBound(dim, K, static_cast<double>(j) / chi.R, L_trunc);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.error[i] += tail[static_cast<std::size_t>(MaxNorm(out.Point(i)))] + rounding;
  }
  return out;
}

}  // namespace salem
