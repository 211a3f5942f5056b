#ifndef SALEM_BUMP_H_
#define SALEM_BUMP_H_

#include <cstdint>
#include <span>

namespace salem {

// sin(pi t) / (pi t), with sinc(0) = 1.
double Sinc(double t);

// Cardinal B-spline of order p (p-fold convolution of the indicator of
// [0, 1)), supported on [0, p]. Evaluated by the Cox-de Boor recurrence,
// which stays nonnegative in floating point.
double CardinalBSpline(int p, double t);

// sup over t >= 0 of (1 + t)^K |sinc(2t/p)|^p with p = K + 2, from a grid
// with `per_unit` points per unit length on [0, 10p], a curvature
// correction, and the tail majorant (p / (2 pi t))^p (1 + t)^K.
double ComputeDecayConstant(int K, double per_unit = 65536.0);

// Tensor-product bump on R^dim with 1D factor (p/2) B_p(p (x + 1) / 2),
// p = K + 2. It is C^K, nonnegative, supported on [-1, 1]^dim, has unit
// mass, and its transform is prod_i sinc(2 xi_i / p)^p.
class Bump {
 public:
  Bump(int dim, int K);

  int dim() const { return dim_; }
  int smoothness() const { return K_; }
  int order() const { return p_; }
  // C1 with |hat(xi)| <= C1 (1 + |xi|)^{-K} in the max norm.
  double decay_constant() const { return C1_; }

  double Factor(double x) const;
  double FactorHat(double xi) const;
  double Eval(std::span<const double> x) const;
  double Hat(std::span<const double> xi) const;

  // Periodized, rescaled bump evaluated at xq - theta:
  //   sum over k in Z^dim of eps^{-dim} phi((xq - theta - k) / eps),
  // with x an dim x n matrix flattened row-major and q in Z^n.
  double Periodized(double eps, std::span<const std::int64_t> q,
                    std::span<const double> theta,
                    std::span<const double> x) const;
  // One coordinate of the above: sum_k eps^{-1} factor((y - k) / eps).
  double PeriodizedFactor(double eps, double y) const;

 private:
  int dim_;
  int K_;
  int p_;
  double C1_;
};

}  // namespace salem

#endif  // SALEM_BUMP_H_
