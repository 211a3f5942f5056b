#ifndef SALEM_MEASURE_H_
#define SALEM_MEASURE_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "salem/bump.h"
#include "salem/qsets.h"
#include "salem/spectrum.h"

namespace salem {

// g(xi) = 1 for |xi| <= e, else |xi|^{-a} exp(ln|xi| / ln ln|xi|) h(4|xi|).
class Envelope {
 public:
  Envelope(double a, HFunction h) : a_(a), h_(std::move(h)) {}
  double operator()(double xi_norm) const;

 private:
  double a_;
  HFunction h_;
};

struct MeasureOptions {
  int R = 8;       // xi grid spacing 1/R
  double X = 512;  // test box radius
  std::size_t grid_cap = std::size_t{1} << 23;
  std::size_t table_cap = 10'000'000;
  // Estimated complex multiply-adds allowed for one candidate scale.
  double work_cap = 4e9;
  bool spatial = true;
  // Points per axis of the density grid; 0 picks 2^14, 2^9 or 2^6 by mn.
  std::int64_t spatial_points = 0;
  std::size_t spatial_cap = std::size_t{1} << 22;
};

int DefaultSpatialPoints(int mn);

// Truncation margin beyond the test box: max(4M, 64).
std::int64_t TruncationMargin(double M);

// Lazily evaluated transforms mu_k^ of chi0 F_{M_1} ... F_{M_k} on the
// lattice (1/R) Z^{mn}, each carrying a per-sample error bound.
class SpectralChain {
 public:
  SpectralChain(const Scenario& s, int R, std::size_t grid_cap, std::size_t table_cap);

  int depth() const { return static_cast<int>(stages_.size()) - 1; }
  int R() const { return R_; }
  const Bump& chi0() const { return chi0_; }
  double M(int k) const { return stages_[k].M; }
  double C2(int k) const { return stages_[k].C2; }
  bool C2_heuristic(int k) const { return k > 0; }

  void Push(double M);
  void Pop();
  // Sets the decay constant used when level k feeds level k + 1.
  void SetDecayConstant(int k, double C2) { stages_[k].C2 = C2; }

  // mu_k^ on |j| <= N.
  SpectralGrid Evaluate(int k, std::int64_t N);
  // mu_{k-1}^ (F_M - 1)^ on |j| <= N, i.e. the deviation caused by a next
  // factor F_M, without pushing it.
  SpectralGrid Deviation(double M, std::int64_t N);

  // Estimated multiply-adds for Evaluate(k, N) and Deviation(M, N).
  double EvaluateWork(int k, std::int64_t N) const;
  double DeviationWork(double M, std::int64_t N) const;

  // sup over |xi| >= X/2 of (1 + |xi|)^K (|mu_k^| + err), doubled.
  double FitDecayConstant(int k, double X);

  const FmFunction& fm(int k) const { return *stages_[k].fm; }

 private:
  struct Stage {
    double M = 0;
    double C2 = 0;
    std::unique_ptr<FmFunction> fm;
    std::optional<SpectrumTable> table;
    std::optional<SpectralGrid> grid;
  };
  const SpectrumTable& TableFor(Stage& st, std::int64_t L);
  double TableWork(const FmFunction& fm, std::int64_t L) const;

  Scenario scenario_;
  int R_;
  int K_;
  std::size_t grid_cap_;
  std::size_t table_cap_;
  Bump chi0_;
  std::vector<Stage> stages_;
};

struct SelectionTrial {
  double M = 0;
  double max_ratio = 0;  // sup of (|D| + err) / (delta g) on the test grid
  double max_raw_ratio = 0;  // sup of |D| / (delta g)
  double worst_xi = 0;
  bool pass = false;
  std::string note;
};

struct Selection {
  double M = 0;
  double max_ratio = 0;
  std::vector<SelectionTrial> trials;
};

// Smallest M in the Mset with M >= M0 whose deviation stays below
// delta g on |xi| <= X, errors included. Throws MsetExhaustedError.
Selection SelectMStar(SpectralChain& chain, const Scenario& s, double delta, double M0,
                      const MeasureOptions& opts, int level);

struct MeasureLevel {
  int k = 0;
  double M = 0;
  double delta = 0;
  double max_ratio = 0;
  double C2 = 0;
  bool C2_heuristic = false;
  std::vector<SelectionTrial> trials;
  SpectralGrid fourier;         // mu_k^ on |xi| <= X
  std::vector<double> density;  // empty when the spatial grid is off
};

class MeasureBuilder {
 public:
  MeasureBuilder(const Scenario& s, MeasureOptions opts);

  const Scenario& scenario() const { return scenario_; }
  const MeasureOptions& options() const { return opts_; }
  const std::vector<MeasureLevel>& levels() const { return levels_; }
  double C1() const { return chain_.chi0().decay_constant(); }
  std::int64_t spatial_points() const { return points_; }
  bool has_density() const { return !density0_.empty(); }
  double spacing() const { return 2.0 / static_cast<double>(points_); }
  // Coordinates of density sample i.
  std::vector<double> SpatialPoint(std::size_t i) const;
  const std::vector<double>& density0() const { return density0_; }

  // Builds level 0 when called first, then the next level.
  const MeasureLevel& AddLevel();
  std::vector<double> Ms() const;

 private:
  void MultiplyDensity(const FmFunction& fm, const std::vector<double>& prev, std::vector<double>& out) const;

  Scenario scenario_;
  MeasureOptions opts_;
  SpectralChain chain_;
  std::vector<MeasureLevel> levels_;
  std::int64_t points_ = 0;
  std::vector<double> density0_;
};

std::vector<MeasureLevel> BuildMeasure(const Scenario& s, int levels, const MeasureOptions& opts);

struct LevelCheck {
  int k = 0;
  double delta = 0;
  double max_ratio = 0;      // sup (|mu_k - mu_{k-1}| + errors) / (delta_k g)
  double max_raw_ratio = 0;  // same without error bounds
  double worst_xi = 0;
  double telescoped_ratio = 0;  // sup |mu_k - mu_0| / ((1 - 2^-k) g / 2)
  double mu0 = 0;
  bool pass = false;
};

struct ConvergenceReport {
  int R = 0;
  double X = 0;
  std::vector<LevelCheck> levels;
  // max over the grid of |chi0^| / g, plus 1/2.
  double envelope_constant = 0;
  double max_envelope_ratio = 0;  // sup |mu_k^| / g at the last level
  bool pass = false;
};

// Rebuilds the chain for the given scales on a grid with spacing 1/R and
// checks each successive difference against 2^{-k-1} g.
ConvergenceReport ConvergenceCheck(const Scenario& s, const std::vector<double>& Ms, int R, double X,
                                   const MeasureOptions& opts);

struct SupportViolation {
  std::vector<double> x;
  int level = 0;
  double excess = 0;
};

struct SupportReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::vector<SupportViolation> examples;
  double outside_mass = 0;  // density mass outside [-1, 1]^{mn}; always zero here
};

// Checks every positive density sample of level `k` against the strips of
// levels 1..k.
SupportReport SupportCheck(const MeasureBuilder& builder, int k, double slack);

// Sum of density * cell volume divided by Re mu_k^(0).
double NormalizedMass(const MeasureBuilder& builder, int k);

}  // namespace salem

#endif  // SALEM_MEASURE_H_
