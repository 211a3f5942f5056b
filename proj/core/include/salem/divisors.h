#ifndef SALEM_DIVISORS_H_
#define SALEM_DIVISORS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "salem/qsets.h"

namespace salem {

// Number of positive divisors of L by trial division. Throws DomainError
// for L = 0.
std::uint64_t Tau(std::uint64_t L);

// Positive divisors of L in ascending order.
std::vector<std::uint64_t> Divisors(std::uint64_t L);

// ln tau(L) * ln ln L / ln L; defined for L >= 16.
double WigertRatio(std::uint64_t L);

// An integer m x n matrix l, flattened row-major: ell[i * n + j] = l_ij.
struct DivisorQuery {
  int m = 1;
  int n = 1;
  IntVec ell;

  std::int64_t Norm() const { return MaxNorm(ell); }
  // First row-major index attaining the max norm.
  std::pair<int, int> Pivot() const;
};

// Returns k with l_ij = k_i q_j for all i, j, or nullopt. Throws
// DomainError when some q_j = 0.
std::optional<IntVec> DivisorSetContains(std::span<const std::int64_t> q,
                                         const DivisorQuery& query);

// Q(M) intersected with the divisor set of l, enumerated from the divisors
// of the pivot entry. For l = 0 this is all of Q(M).
std::vector<IntVec> DivisorWindow(const DivisorQuery& query, const QSet& Q,
                                  double M);

// tau(l) for 1 <= l <= limit, by a divisor sieve.
class TauSieve {
 public:
  explicit TauSieve(std::uint32_t limit);
  // Reads SALEM_CACHE_DIR/tau_<limit>.bin when present and valid, otherwise
  // builds and tries to write it. The file holds limit + 1 little-endian
  // uint32 counts, entry 0 unused.
  static TauSieve LoadOrBuild(std::uint32_t limit);

  std::uint32_t limit() const { return limit_; }
  std::uint32_t operator[](std::uint32_t l) const { return counts_[l]; }

  void Save(const std::string& path) const;
  static std::optional<TauSieve> Load(const std::string& path, std::uint32_t limit);

 private:
  TauSieve() = default;
  std::uint32_t limit_ = 0;
  std::vector<std::uint32_t> counts_;
};

struct WigertThreshold {
  double zeta = 0;
  // Smallest L with ratio(l) <= zeta for every l in [L, hi]; hi + 1 when
  // the ratio at hi already exceeds zeta.
  std::uint64_t L_zeta = 0;
};

struct WigertScan {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  double max_ratio = 0;
  std::uint64_t argmax = 0;
  std::vector<WigertThreshold> thresholds;
};

WigertScan ScanWigert(const TauSieve& sieve, std::uint64_t lo, std::uint64_t hi,
                      const std::vector<double>& zetas);

}  // namespace salem

#endif  // SALEM_DIVISORS_H_
