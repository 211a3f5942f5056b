#ifndef SALEM_SPECTRUM_H_
#define SALEM_SPECTRUM_H_

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "salem/bump.h"
#include "salem/qsets.h"

namespace salem {

using Complex = std::complex<double>;

// Sparse table of F_M^(l) over the box |l| <= L_max in Z^{mn}. Only indices
// hit by some (q, k) with l = k q^T are stored; every other entry is an
// exact zero.
class SpectrumTable {
 public:
  int m = 1;
  int n = 1;
  double M = 0;
  double eps = 0;
  std::size_t window_size = 0;
  std::int64_t L_max = 0;

  int dim() const { return m * n; }
  std::size_t size() const { return keys_.size(); }
  // Row-major l for stored entry i.
  IntVec Ell(std::size_t i) const;
  Complex Value(std::size_t i) const { return values_[i]; }
  Complex At(std::span<const std::int64_t> ell) const;

  // Linear index of l in the box; lexicographic order on l matches the
  // order on this index.
  std::uint64_t Key(std::span<const std::int64_t> ell) const;

 private:
  friend class FmFunction;
  std::vector<std::uint64_t> keys_;
  std::vector<Complex> values_;
};

// F_M(x) = |Q(M)|^{-1} sum over Q(M) of the periodized bump at xq - theta,
// with eps = eps(M).
class FmFunction {
 public:
  FmFunction(const Scenario& s, double M);

  double M() const { return M_; }
  double eps() const { return eps_; }
  const Bump& bump() const { return bump_; }
  const std::vector<IntVec>& window() const { return window_; }

  double Eval(std::span<const double> x) const;
  // Closed form through the divisor window of l.
  Complex Hat(std::span<const std::int64_t> ell) const;
  // Closed form by scattering every (q, k) with |k_i q_j| <= L_max.
  SpectrumTable Table(std::int64_t L_max, std::size_t box_cap = kDefaultBoxCap) const;

  static constexpr std::size_t kDefaultBoxCap = 10'000'000;

 private:
  Scenario scenario_;
  double M_;
  double eps_;
  Bump bump_;
  std::vector<IntVec> window_;
};

double FmEval(const Scenario& s, double M, std::span<const double> x);
Complex FmHat(const Scenario& s, double M, std::span<const std::int64_t> ell);
SpectrumTable FmHatTable(const Scenario& s, double M, std::int64_t L_max,
                         std::size_t box_cap = FmFunction::kDefaultBoxCap);

struct AnnulusRatio {
  std::int64_t lo = 0;  // annulus lo <= |l| < hi
  std::int64_t hi = 0;
  double max_ratio = 0;
  std::size_t count = 0;
};

struct EnvelopeFit {
  double zeta = 0;
  double max_ratio = 0;
  IntVec argmax;
  // Smallest L with ratio <= C1 for every stored |l| >= L (at least 16).
  std::int64_t L_zeta = 16;
  double C_fit = 0;
  std::size_t tested = 0;
  std::vector<AnnulusRatio> residuals;
};

// Ratios |F_M^(l)| / (|l|^{-a} exp(zeta ln|l| / ln ln|l|) h(M)) over stored
// entries with |l| >= 16.
EnvelopeFit EnvelopeCheck(const SpectrumTable& table, double a, double hM,
                          double zeta, double C1);

// Complex samples of a transform on (1/R) Z^dim restricted to |j| <= N,
// where xi = j / R. `error` bounds the absolute error of each sample.
struct SpectralGrid {
  int dim = 1;
  int R = 1;
  std::int64_t N = 0;
  std::vector<Complex> value;
  std::vector<double> error;

  std::int64_t side() const { return 2 * N + 1; }
  std::size_t size() const { return value.size(); }
  double radius() const { return static_cast<double>(N) / R; }
  std::size_t Index(std::span<const std::int64_t> j) const;
  IntVec Point(std::size_t index) const;
  // Max norm of xi at a flat index.
  double Norm(std::size_t index) const;
  // Restriction to |j| <= N_sub.
  SpectralGrid Sub(std::int64_t N_sub) const;
};

// Allocates a grid; throws BoxError beyond `cap` points.
SpectralGrid MakeGrid(int dim, int R, std::int64_t N, std::size_t cap);

// Exact samples of bump^ on the grid.
SpectralGrid BumpHatGrid(const Bump& bump, int R, std::int64_t N, std::size_t cap);

// Majorant of sum over l in Z^dim with |l| > L of (1 + |xi - l|)^{-K} for
// |xi| = s. Requires K > dim.
double TailBound(int dim, int K, double s, std::int64_t L);

// sum over |l| <= L_trunc of F^(l) chi^(xi - l) on |j| <= out_N, plus
// C2 * TailBound in the error channel along with the propagated error of
// chi and rounding. With exclude_origin the l = 0 term is dropped, which
// yields the deviation from chi^ directly.
SpectralGrid WindowedSpectrum(const SpectralGrid& chi, double C2, int K,
                              const SpectrumTable& table, std::int64_t out_N,
                              std::int64_t L_trunc, bool exclude_origin = false);

}  // namespace salem

#endif  // SALEM_SPECTRUM_H_
