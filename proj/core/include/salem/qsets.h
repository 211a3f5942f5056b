#ifndef SALEM_QSETS_H_
#define SALEM_QSETS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace salem {

using IntVec = std::vector<std::int64_t>;

// Max norm of an integer vector.
std::int64_t MaxNorm(std::span<const std::int64_t> v);

enum class QKind {
  kAllIntegers,
  kPrimes,
  kShiftedPrimes,
  kSquares,
  kPowersOfTwo,
  kSinThreshold,
  kExplicitList,
  kFile,
};

const char* QKindName(QKind kind);
QKind ParseQKind(const std::string& name);

// The frequency set Q in Z^n. Presets other than all_integers are subsets
// of N; for n > 1 a preset is the n-fold Cartesian power of its 1D set.
class QSet {
 public:
  QSet() = default;
  static QSet Preset(QKind kind, int n = 1);
  static QSet Explicit(int n, std::vector<IntVec> elements);
  // One whitespace-separated integer n-vector per line; '#' starts a comment.
  static QSet FromFile(int n, const std::string& path);

  int n() const { return n_; }
  QKind kind() const { return kind_; }
  const std::string& path() const { return path_; }
  const std::vector<IntVec>& payload() const { return payload_; }

  bool Contains(std::span<const std::int64_t> q) const;

  // Q(M) = {q in Q : M/2 < |q_j| <= M for all j}, lexicographically sorted.
  std::vector<IntVec> Window(double M) const;
  // |Q(M)|, without materializing the window where the kind allows it.
  std::size_t WindowSize(double M) const;
  // Calls fn once for each distinct max norm attained on Q(M). Preset kinds
  // only; returns false for explicit and file sets.
  bool ForEachWindowNorm(double M, const std::function<void(std::int64_t)>& fn) const;

  // Largest window the enumerator will materialize.
  static constexpr std::size_t kMaxWindow = 8'000'000;

 private:
  bool Contains1d(std::int64_t t) const;
  std::vector<std::int64_t> Window1d(double M) const;

  int n_ = 1;
  QKind kind_ = QKind::kAllIntegers;
  std::vector<IntVec> payload_;  // sorted, unique
  std::string path_;
};

// The approximation function. Psi(0) = 1 by convention.
class Psi {
 public:
  enum class Family { kPower, kHinokumaShiga, kTabulated, kCustom };
  using CustomFn = std::function<double(std::span<const std::int64_t>)>;

  Psi() = default;
  // |q|^{-tau}.
  static Psi Power(double tau);
  // |sin q_1 ... | style modulation: |sin |q|| * |q|^{-tau}.
  static Psi HinokumaShiga(double tau);
  // table[r - 1] = psi(r) for r = 1..table.size().
  static Psi Tabulated(std::vector<double> table);
  static Psi Custom(CustomFn fn, std::string name);

  Family family() const { return family_; }
  double tau() const { return tau_; }
  const std::vector<double>& table() const { return table_; }
  const std::string& name() const { return name_; }

  double operator()(std::span<const std::int64_t> q) const;
  // psi(r) as a function of the norm r = |q|; not available for custom Psi.
  double Radial(std::int64_t r) const;

 private:
  Family family_ = Family::kPower;
  double tau_ = 1.0;
  std::vector<double> table_;
  CustomFn custom_;
  std::string name_ = "power";
};

const char* PsiFamilyName(Psi::Family f);

// An increasing function h on (0, inf).
class HFunction {
 public:
  enum class Family { kConstant, kLog, kTable };

  HFunction() = default;
  static HFunction Constant(double c);
  // c * ln^p(x + 1).
  static HFunction Log(double c, double p);
  // Piecewise-linear through (xs, ys); constant beyond the end points.
  static HFunction Table(std::vector<double> xs, std::vector<double> ys);

  Family family() const { return family_; }
  double c() const { return c_; }
  double p() const { return p_; }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }

  double operator()(double x) const;
  // Pointwise comparison on sample points in (0, 1e12].
  bool IsNondecreasing() const;

 private:
  Family family_ = Family::kConstant;
  double c_ = 1.0;
  double p_ = 1.0;
  std::vector<double> xs_, ys_;
};

struct Scenario {
  int m = 1;
  QSet Q;
  Psi psi;
  std::vector<double> theta{0.0};
  double a = 0.0;
  HFunction h;
  std::vector<double> Mset;
  // Bump smoothness; 0 selects floor(mn + a) + 3.
  int K = 0;

  int n() const { return Q.n(); }
  int mn() const { return m * Q.n(); }
  int Smoothness() const;
  // Throws InputError on violated invariants.
  void Validate() const;
};

// eps(M) = min over Q(M) of Psi. Throws EmptyWindowError.
double Epsilon(const QSet& Q, const Psi& psi, double M);

struct CertEntry {
  double M = 0;
  std::size_t window_size = 0;
  double eps = 0;
  double lhs = 0;  // |Q(M)| eps^a h(M)
  double rhs = 0;  // M^a
  double margin = 0;
  bool pass = false;
  std::string reason;
};

struct CertReport {
  std::vector<CertEntry> entries;
  bool pass = false;
};

CertReport CertifyScenario(const Scenario& s);

struct NuEstimate {
  double nu = 0;
  double log_log_coefficient = 0;
  std::vector<double> xs;
  std::vector<double> counts;
};

// Fits ln N(X) = nu ln X + beta ln ln X + c over X = cutoff^t, t in
// exponents, where N(X) = #{q in Q : 0 < |q| <= X}.
NuEstimate EstimateNu(const QSet& Q, const std::vector<double>& exponents,
                      double cutoff);
std::vector<double> DefaultNuExponents();

}  // namespace salem

#endif  // SALEM_QSETS_H_
