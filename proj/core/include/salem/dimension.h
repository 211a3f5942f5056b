#ifndef SALEM_DIMENSION_H_
#define SALEM_DIMENSION_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "salem/qsets.h"
#include "salem/rational.h"
#include "salem/spectrum.h"

namespace salem {

struct EtaEstimate {
  double eta = 0;
  double lo = 0;  // last candidate classified divergent
  double hi = 0;  // last candidate classified convergent
  std::vector<double> cutoffs;
  int iterations = 0;
};

// Convergence exponent of sum over Q of |q|^m (Psi(q) / |q|)^eta. A candidate
// converges when the mass per unit of ln N between consecutive cutoffs has a
// negative log-log slope. Bisects to `resolution`.
EtaEstimate EstimateEta(const QSet& Q, const Psi& psi, int m, const std::vector<double>& cutoffs,
                        double resolution = 0.01);
// 2^10, 2^11, ..., 2^20.
std::vector<double> DefaultEtaCutoffs();

struct CoverSum {
  double value = 0;
  std::int64_t N = 0;
  std::int64_t N_max = 0;
  std::size_t terms = 0;
  double C = 0;
  std::string note;
};

// sum over q in Q with N <= |q| <= N_max of (2 floor(C + |q|) + 1)
// (2 Psi(q) / |q|)^eta, C = |theta| + sup Psi. Requires m = n = 1.
CoverSum ComputeCoverSum(const Scenario& s, double eta, std::int64_t N, std::int64_t N_max);

struct Prediction {
  std::string descriptor;
  std::map<std::string, Rational> params;
  Rational hausdorff;
  std::optional<Rational> fourier_lower;
  std::string note;
};

// Closed forms. Required parameters by descriptor:
//   jarnik_besicovitch, hinokuma_shiga: tau
//   borosh_fraenkel: nu, tau
//   dodson, levesley: lambda
//   dickinson: nu, lambda
//   rynne_1d: eta
//   rynne_mn: m, n, eta
//   mn_app: m, n, lambda
// Throws InputError on an unknown descriptor or a missing parameter.
Prediction PredictDims(const std::string& descriptor, const std::map<std::string, Rational>& params);
const std::vector<std::string>& PredictorNames();

struct FourierAnnulus {
  double lo = 0;
  double hi = 0;
  double sup = 0;  // sup of |mu^| / h(4|xi|) over the annulus
  double argmax = 0;
  std::size_t count = 0;
};

struct FourierFit {
  double exponent = 0;
  double dim_lower = 0;  // 2 * exponent
  std::vector<FourierAnnulus> annuli;
};

// Regresses ln sup over dyadic annuli [e 2^j, e 2^{j+1}) on ln(1 + |xi|) at
// each annulus maximiser. Needs four complete annuli.
FourierFit FitFourierExponent(const std::vector<double>& norms, const std::vector<double>& magnitudes,
                              const HFunction& h);
FourierFit FitFourierExponent(const SpectralGrid& grid, const HFunction& h);

struct BoxLevel {
  double M = 0;
  int depth = 0;
  std::size_t boxes = 0;        // boxes met by the level's union at `depth`
  std::size_t intervals = 0;    // components of the running intersection
  double intersection_length = 0;
};

struct BoxCount {
  double slope = 0;
  std::vector<BoxLevel> levels;
};

// Lacunary scales M_1 < ... < M_J (ratio 8). Level j contributes the box
// count of its union at depth round(log2(M_j / (2 eps(M_j)))) unless depths
// are given; the slope of ln N against depth ln 2 is returned. The running
// intersection is tracked and an empty one throws DomainError naming the
// level. Requires m = n = 1 and 2 <= J <= 4.
BoxCount BoxCounting(const Scenario& s, int J, const std::vector<int>& depths = {});

struct LambdaEstimate {
  double lower = 0;  // min of -ln psi(M) / ln M over the last decade
  double upper = 0;  // max over the same samples
  double M_lo = 0;
  double M_hi = 0;
};

// Samples integer M geometrically up to M_hi (1e6, or the table length).
LambdaEstimate EstimateLambda(const Psi& psi, double M_hi = 1e6);

struct DimensionReport {
  double lambda_lower = 0;
  double lambda_upper = 0;
  std::optional<double> nu_est;
  std::optional<double> eta_est;
  std::optional<Prediction> prediction;
  std::optional<double> hausdorff_pred;
  std::optional<double> fourier_lower_pred;
  std::optional<double> fourier_fit;
  std::optional<double> box_count_est;
  std::map<std::string, std::string> notes;
  std::vector<FourierAnnulus> annuli;
};

struct DimensionOptions {
  double nu_cutoff = 1e6;
  std::vector<double> eta_cutoffs = DefaultEtaCutoffs();
  int box_levels = 3;
  bool box_count = true;
  // Descriptor and parameters; empty infers one from the scenario.
  std::string descriptor;
  std::map<std::string, Rational> params;
};

// Picks a closed form matching the scenario, or nullopt.
std::optional<Prediction> InferPrediction(const Scenario& s, const DimensionReport& partial);

DimensionReport AnalyzeDimensions(const Scenario& s, const DimensionOptions& opts,
                                  const SpectralGrid* fourier = nullptr);

}  // namespace salem

#endif  // SALEM_DIMENSION_H_
