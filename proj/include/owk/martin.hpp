#pragma once

// Martin kernels of the embedded chain and of the half-plane walk.
//
// The full kernel uses the decomposition at the first return to the axis:
//   K(x, y) = E^x[visits to y before tau1] / G(0, y) + sum_z nu_x(z) K(z, y),
// with the first term by simulation and the second in closed form.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "owk/analytic.hpp"
#include "owk/green.hpp"
#include "owk/lattice.hpp"
#include "owk/simulate.hpp"

namespace owk {

// gamma(y - x) / gamma(y); NumericError when gamma(y) < 10 abs_tol.
double martin_kernel_embedded(std::int64_t x, std::int64_t y, const CfModel& model,
                              const QuadratureSpec& spec);

// I(z, y) / I(0, y) for z on the axis.
double martin_kernel_axis(std::int64_t z, const LatticePoint& y, const CfModel& model,
                          const QuadratureSpec& spec);

// sum_z nu_x(z) K(z, y) in closed form: the numerator is
//   int e^{it(y1 - x1)} D(t, -x2) D(t, -y2) / (1 - phi) dt,
// which for x on the axis is I(x1, y) (nu_x is the point mass at x).
double averaged_axis_kernel(const LatticePoint& x, const LatticePoint& y, const CfModel& model,
                            const QuadratureSpec& spec);

// Same sum for x on the axis with nu_x the law after one excursion, i.e.
// weight phi(t) in the numerator. This is the second term of the
// decomposition when x itself lies on the axis.
double excursion_averaged_kernel(std::int64_t x1, const LatticePoint& y, const CfModel& model,
                                 const QuadratureSpec& spec);

// Visits to y at times 0 <= k < tau1 from x (half-plane lattice). Exactly 0
// without simulation when x2 * y2 < 0. NumericError when more than 1e-3 of
// the episodes hit the horizon.
EstimateWithError occupation_before_return(const LatticePoint& x, const LatticePoint& y,
                                           std::int64_t n_walks, const StreamPlan& plan,
                                           std::int64_t horizon = 1000000, bool censor = true);

struct FullKernelValue {
  LatticePoint y;
  double first_term = 0.0;
  double first_term_se = 0.0;
  double second_term = 0.0;
  double value = 0.0;
  double error = 0.0;  // standard error of the first term
  double green_0y = 0.0;
};

struct FullKernelBatch {
  std::vector<FullKernelValue> values;
  std::int64_t episodes = 0;
  std::int64_t truncated = 0;
};

// Full kernel at several targets from one simulation run.
FullKernelBatch martin_kernel_full_batch(const LatticePoint& x, const std::vector<LatticePoint>& ys,
                                         const CfModel& model, const QuadratureSpec& spec,
                                         std::int64_t mc_budget, const StreamPlan& plan,
                                         std::int64_t horizon = 1000000);

FullKernelValue martin_kernel_full(const LatticePoint& x, const LatticePoint& y, const CfModel& model,
                                   const QuadratureSpec& spec, std::int64_t mc_budget,
                                   const StreamPlan& plan);

enum class SweepMode { fixed_lambda, horizontal_dominant, vertical_only };

struct DirectionSpec {
  SweepMode mode = SweepMode::fixed_lambda;
  double lambda = 0.0;                 // fixed_lambda: y1 = round(lambda y2^2)
  double exponent = 1.0 / 3.0;         // horizontal_dominant: y2 = round(y1^exponent)
  std::int64_t fixed_y1 = 0;           // vertical_only
  std::vector<LatticePoint> points;

  static DirectionSpec fixed_lambda_sweep(double lambda, const std::vector<std::int64_t>& y2s);
  static DirectionSpec horizontal_sweep(const std::vector<std::int64_t>& y1s, double exponent = 1.0 / 3.0);
  static DirectionSpec vertical_sweep(std::int64_t y1, const std::vector<std::int64_t>& y2s);
  // "lambda=<v>", "horizontal", "horizontal=<exponent>", "vertical=<y1>", with
  // points reaching |y| ~ max_norm.
  static DirectionSpec parse(const std::string& text, double max_norm);

  std::string label() const;
  // Mode invariant on the generated points.
  bool consistent() const;
};

// Geometric sequence of `count` integers from lo to hi, deduplicated.
std::vector<std::int64_t> geometric_points(double lo, double hi, int count);

struct MartinPoint {
  LatticePoint y;
  double norm = 0.0;
  bool ok = false;
  std::string failure;
  double kernel = 0.0;
  double first_term = 0.0;
  double first_term_se = 0.0;
  double second_term = 0.0;
  double error = 0.0;
  // For x at the reference point the kernel is 1 by definition; the
  // decomposition value is kept here as a consistency check.
  std::optional<double> decomposition;
};

struct SweepReport {
  DirectionSpec sweep;
  std::vector<MartinPoint> points;
  double sup_deviation = 0.0;  // max |K - 1| over the last quartile
  double tail_first_term = 0.0;  // first term at the last point
  // |K - 1| nonincreasing along the sweep within two combined error bars.
  bool deviations_decrease = false;
  bool first_term_decreases = false;
};

struct MartinReport {
  LatticePoint x;
  CfModel model;
  std::int64_t mc_budget = 0;
  std::uint64_t seed = 0;
  std::vector<SweepReport> sweeps;
  double sup_deviation = 0.0;
  std::int64_t episodes = 0;
  std::int64_t truncated = 0;
};

struct ReportOptions {
  std::int64_t mc_budget = 1000000;
  std::uint64_t seed = 1;
  std::int64_t horizon = 1000000;
};

MartinReport boundary_triviality_report(const LatticePoint& x, const std::vector<DirectionSpec>& sweeps,
                                        const CfModel& model, const QuadratureSpec& spec,
                                        const ReportOptions& opts);

}  // namespace owk
