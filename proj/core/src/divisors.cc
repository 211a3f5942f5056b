#include "salem/divisors.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "salem/error.h"

namespace salem {

std::uint64_t Tau(std::uint64_t L) {
  if (L == 0) throw DomainError("tau(0) is undefined");
  std::uint64_t count = 1;
  for (std::uint64_t p = 2; p * p <= L; ++p) {
    std::uint64_t e = 0;
    while (L % p == 0) {
      L /= p;
      ++e;
    }
    count *= e + 1;
  }
  if (L > 1) count *= 2;
  return count;
}

std::vector<std::uint64_t> Divisors(std::uint64_t L) {
  if (L == 0) throw DomainError("divisors of 0 are undefined");
  std::vector<std::uint64_t> lo, hi;
  for (std::uint64_t d = 1; d * d <= L; ++d) {
    if (L % d != 0) continue;
    lo.push_back(d);
    if (d != L / d) hi.push_back(L / d);
  }
  lo.insert(lo.end(), hi.rbegin(), hi.rend());
  return lo;
}

double WigertRatio(std::uint64_t L) {
  if (L < 16) throw DomainError("Wigert ratio needs L >= 16");
  double ln = std::log(static_cast<double>(L));
  return std::log(static_cast<double>(Tau(L))) * std::log(ln) / ln;
}

std::pair<int, int> DivisorQuery::Pivot() const {
  std::int64_t norm = Norm();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      std::int64_t v = ell[i * n + j];
      if ((v < 0 ? -v : v) == norm) return {i, j};
    }
  }
  return {0, 0};
}

std::optional<IntVec> DivisorSetContains(std::span<const std::int64_t> q,
                                         const DivisorQuery& query) {
  if (static_cast<int>(q.size()) != query.n) throw InputError("q has wrong length");
  if (static_cast<int>(query.ell.size()) != query.m * query.n) throw InputError("ell has wrong length");
  for (std::int64_t t : q) {
    if (t == 0) throw DomainError("divisor set membership needs nonzero q coordinates");
  }
  IntVec k(query.m);
  for (int i = 0; i < query.m; ++i) {
    std::int64_t l0 = query.ell[i * query.n];
    if (l0 % q[0] != 0) return std::nullopt;
    k[i] = l0 / q[0];
    for (int j = 1; j < query.n; ++j) {
      __int128 prod = static_cast<__int128>(k[i]) * q[j];
      if (prod != query.ell[i * query.n + j]) return std::nullopt;
    }
  }
  return k;
}

std::vector<IntVec> DivisorWindow(const DivisorQuery& query, const QSet& Q, double M) {
  if (query.Norm() == 0) return Q.Window(M);
  if (query.n != Q.n()) throw InputError("query and Q disagree on n");
  const int n = query.n;
  auto [i0, j0] = query.Pivot();
  std::int64_t pivot = query.ell[i0 * n + j0];
  std::uint64_t apivot = static_cast<std::uint64_t>(pivot < 0 ? -pivot : pivot);
  double lo = M / 2;
  std::vector<IntVec> out;
  // q_{j0} runs over signed divisors d of l_{i0 j0}; then k_{i0} is forced
  // and fixes every other coordinate q_j = l_{i0 j} / k_{i0}.
  for (std::uint64_t d : Divisors(apivot)) {
    if (static_cast<double>(d) > M) break;
    if (!(static_cast<double>(d) > lo)) continue;
    for (int sign : {-1, 1}) {
      std::int64_t qj0 = sign * static_cast<std::int64_t>(d);
      std::int64_t ki0 = pivot / qj0;
      IntVec q(n);
      bool ok = true;
      for (int j = 0; j < n && ok; ++j) {
        std::int64_t v = query.ell[i0 * n + j];
        if (v % ki0 != 0) {
          ok = false;
          break;
        }
        q[j] = v / ki0;
        double aq = static_cast<double>(q[j] < 0 ? -q[j] : q[j]);
        ok = q[j] != 0 && aq > lo && aq <= M;
      }
      if (!ok) continue;
      if (!DivisorSetContains(q, query)) continue;
      if (!Q.Contains(q)) continue;
      out.push_back(std::move(q));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TauSieve::TauSieve(std::uint32_t limit) : limit_(limit), counts_(static_cast<std::size_t>(limit) + 1, 0) {
  for (std::uint64_t d = 1; d <= limit; ++d) {
    for (std::uint64_t k = d; k <= limit; k += d) ++counts_[k];
  }
}

void TauSieve::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write sieve cache: " + path);
  for (std::uint32_t v : counts_) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
  }
  if (!out) throw InputError("failed writing sieve cache: " + path);
}

std::optional<TauSieve> TauSieve::Load(const std::string& path, std::uint32_t limit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::vector<unsigned char> raw((static_cast<std::size_t>(limit) + 1) * 4);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) return std::nullopt;
  if (in.peek() != std::char_traits<char>::eof()) return std::nullopt;
  TauSieve s;
  s.limit_ = limit;
  s.counts_.resize(static_cast<std::size_t>(limit) + 1);
  for (std::size_t i = 0; i < s.counts_.size(); ++i) {
    s.counts_[i] = static_cast<std::uint32_t>(raw[4 * i]) | static_cast<std::uint32_t>(raw[4 * i + 1]) << 8 |
                   static_cast<std::uint32_t>(raw[4 * i + 2]) << 16 |
                   static_cast<std::uint32_t>(raw[4 * i + 3]) << 24;
  }
  // Spot check against trial division so a stale or foreign file is rejected.
  for (std::uint32_t l : {1u, 2u, 12u, limit / 2 + 1, limit}) {
    if (l >= 1 && l <= limit && s.counts_[l] != Tau(l)) return std::nullopt;
  }
  return s;
}

TauSieve TauSieve::LoadOrBuild(std::uint32_t limit) {
  const char* dir = std::getenv("SALEM_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return TauSieve(limit);
  std::filesystem::path path = std::filesystem::path(dir) / ("tau_" + std::to_string(limit) + ".bin");
  if (auto cached = Load(path.string(), limit)) return std::move(*cached);
  TauSieve s(limit);
  try {
    std::filesystem::create_directories(dir);
    s.Save(path.string());
  } catch (const std::exception&) {
    // A read-only cache directory only costs a rebuild next time.
  }
  return s;
}

WigertScan ScanWigert(const TauSieve& sieve, std::uint64_t lo, std::uint64_t hi,
                      const std::vector<double>& zetas) {
  if (lo < 16) throw DomainError("Wigert scan needs lo >= 16");
  if (hi > sieve.limit() || hi < lo) throw DomainError("Wigert scan range outside the sieve");
  WigertScan scan;
  scan.lo = lo;
  scan.hi = hi;
  std::vector<std::uint64_t> last_above(zetas.size(), 0);
  for (std::uint64_t l = lo; l <= hi; ++l) {
    double ln = std::log(static_cast<double>(l));
    double r = std::log(static_cast<double>(sieve[static_cast<std::uint32_t>(l)])) * std::log(ln) / ln;
    if (r > scan.max_ratio) {
      scan.max_ratio = r;
      scan.argmax = l;
    }
    for (std::size_t z = 0; z < zetas.size(); ++z) {
      if (r > zetas[z]) last_above[z] = l;
    }
  }
  for (std::size_t z = 0; z < zetas.size(); ++z) {
    scan.thresholds.push_back({zetas[z], last_above[z] == 0 ? lo : last_above[z] + 1});
  }
  return scan;
}

}  // namespace salem
