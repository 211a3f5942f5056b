#include "salem/bump.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "salem/error.h"

namespace salem {
namespace {

double CachedDecayConstant(int K) {
  static std::mutex mu;
  static std::map<int, double> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(K);
  if (it != cache.end()) return it->second;
  double c = ComputeDecayConstant(K);
  cache.emplace(K, c);
  return c;
}

}  // namespace

double Sinc(double t) {
  if (t == 0.0) return 1.0;
  double x = std::numbers::pi * t;
  return std::sin(x) / x;
}

double CardinalBSpline(int p, double t) {
  if (p < 1) throw DomainError("B-spline order must be >= 1");
  if (!(t > 0.0) || !(t < p)) return 0.0;
  int j = static_cast<int>(std::floor(t));
  if (p > 64) throw DomainError("B-spline order too large");
  // v[r] holds B_k(t - j + r) for r = 0..k-1.
  double v[64];
  v[0] = 1.0;
  for (int k = 1; k < p; ++k) {
    // Build B_{k+1}(s) = (s B_k(s) + (k + 1 - s) B_k(s - 1)) / k at
    // s = t - (j - r), r = 0..k.
    double next[64];
    for (int r = 0; r <= k; ++r) {
      double s = t - (j - r);
      double b_s = r < k ? v[r] : 0.0;
      double b_s1 = r > 0 ? v[r - 1] : 0.0;
      next[r] = (s * b_s + (k + 1 - s) * b_s1) / k;
    }
    for (int r = 0; r <= k; ++r) v[r] = std::max(next[r], 0.0);
  }
  // s = t exactly when r = j.
  return v[j];
}

double ComputeDecayConstant(int K, double per_unit) {
  if (K < 1) throw DomainError("smoothness must be positive");
  const int p = K + 2;
  const double xi_star = 10.0 * p;
  const std::int64_t steps = static_cast<std::int64_t>(std::ceil(xi_star * per_unit));
  const double h = xi_star / static_cast<double>(steps);
  auto f = [&](double t) {
    return std::pow(1.0 + t, K) * std::pow(std::fabs(Sinc(2.0 * t / p)), p);
  };
  double best = 0.0, curv = 0.0;
  double fm = f(-h), f0 = f(0.0);
  for (std::int64_t i = 0; i <= steps; ++i) {
    double fp = f((i + 1) * h);
    best = std::max(best, f0);
    curv = std::max(curv, std::fabs(fp - 2.0 * f0 + fm));
    fm = f0;
    f0 = fp;
  }
  // Between grid nodes a smooth f exceeds the larger node value by at most
  // h^2 max|f''| / 8, and h^2 f'' is the second difference.
  double grid_sup = best + curv / 8.0;
  double tail = std::pow(p / (2.0 * std::numbers::pi * xi_star), p) * std::pow(1.0 + xi_star, K);
  return std::max(grid_sup, tail);
}

Bump::Bump(int dim, int K) : dim_(dim), K_(K), p_(K + 2) {
  if (dim < 1) throw DomainError("bump dimension must be positive");
  if (K < 1) throw DomainError("bump smoothness must be positive");
  C1_ = CachedDecayConstant(K);
}

double Bump::Factor(double x) const {
  if (!(std::fabs(x) < 1.0)) return 0.0;
  return 0.5 * p_ * CardinalBSpline(p_, 0.5 * p_ * (x + 1.0));
}

double Bump::FactorHat(double xi) const { return std::pow(Sinc(2.0 * xi / p_), p_); }

double Bump::Eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) throw DomainError("bump argument has wrong dimension");
  double v = 1.0;
  for (double xi : x) {
    v *= Factor(xi);
    if (v == 0.0) return 0.0;
  }
  return v;
}

double Bump::Hat(std::span<const double> xi) const {
  if (static_cast<int>(xi.size()) != dim_) throw DomainError("bump argument has wrong dimension");
  double v = 1.0;
  for (double t : xi) v *= FactorHat(t);
  return v;
}

double Bump::PeriodizedFactor(double eps, double y) const {
  if (!(eps > 0)) throw DomainError("eps must be positive");
  double sum = 0.0;
  auto k_lo = static_cast<std::int64_t>(std::ceil(y - eps));
  auto k_hi = static_cast<std::int64_t>(std::floor(y + eps));
  for (std::int64_t k = k_lo; k <= k_hi; ++k) sum += Factor((y - static_cast<double>(k)) / eps);
  return sum / eps;
}

double Bump::Periodized(double eps, std::span<const std::int64_t> q, std::span<const double> theta,
                        std::span<const double> x) const {
  if (!(eps > 0)) throw DomainError("eps must be positive");
  const std::size_t n = q.size();
  if (theta.size() != static_cast<std::size_t>(dim_) || x.size() != dim_ * n) {
    throw DomainError("periodized bump arguments have wrong dimensions");
  }
  double v = 1.0;
  for (int i = 0; i < dim_; ++i) {
    double y = -theta[i];
    for (std::size_t j = 0; j < n; ++j) y += x[i * n + j] * static_cast<double>(q[j]);
    v *= PeriodizedFactor(eps, y);
    if (v == 0.0) return 0.0;
  }
  return v;
}

}  // namespace salem
