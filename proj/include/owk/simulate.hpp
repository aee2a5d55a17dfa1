#pragma once

// Monte Carlo for walks on oriented lattices.
//
// Every episode i of an estimator draws from its own stream
// (seed, episode_stream(family, i)), and per-chunk results are reduced in
// chunk order, so an estimate depends on (seed, inputs) only, not on the
// number of worker threads.

#include <complex>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "owk/lattice.hpp"
#include "owk/rng.hpp"

namespace owk {

struct EstimateWithError {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
};

// Mean and standard error of the mean from running sums.
struct MeanAccumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t n = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  void merge(const MeanAccumulator& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    n += o.n;
  }
  EstimateWithError estimate() const;
};

using VisitMap = std::unordered_map<LatticePoint, std::int64_t, LatticePointHash>;

struct EpisodeStats {
  LatticePoint start;
  std::int64_t tau1 = 0;      // first time >= 1 with v2 = 0, or steps taken if truncated
  std::int64_t x_sigma1 = 0;  // v1 at time tau1
  VisitMap visits;            // times 0 <= k < tau1, filled when requested
  bool truncated = false;
  std::int64_t horizontal_moves = 0;
  std::int64_t vertical_moves = 0;
  std::int64_t stay_moves = 0;  // self-loops and drift stays
};

LatticePoint step(const LatticePoint& u, const Orientation& o, const WalkParams& w, SeededStream& rng);

EpisodeStats run_excursion(const LatticePoint& start, const Orientation& o, const WalkParams& w,
                           SeededStream& rng, std::int64_t horizon, bool record_visits = true);

// Worker count: OWK_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

// Runs body(begin, end, chunk) over [0, n) in fixed chunks on the worker pool.
void for_each_chunk(std::int64_t n, std::int64_t chunk,
                    const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& body);

struct StreamPlan {
  std::uint64_t seed = 0;
  std::uint64_t family = 0;

  SeededStream episode(std::int64_t i) const {
    return SeededStream(seed, episode_stream(family, static_cast<std::uint64_t>(i)));
  }
};

struct DisplacementSample {
  std::vector<std::int64_t> x;  // x_sigma1 of completed episodes, in episode order
  std::int64_t truncated = 0;
  std::int64_t episodes = 0;
  double mean_tau1 = 0.0;  // over completed episodes
};

DisplacementSample sample_displacement(const LatticePoint& start, const Orientation& o,
                                       const WalkParams& w, std::int64_t episodes,
                                       std::int64_t horizon, const StreamPlan& plan);

struct CfEstimate {
  double t = 0.0;
  std::complex<double> value;
  double se_re = 0.0;
  double se_im = 0.0;
};

// (1/N) sum e^{i t x_k} with standard errors s/sqrt(N) of the real and
// imaginary parts (for i.i.d. samples this is the jackknife error of a mean).
std::vector<CfEstimate> empirical_cf(const std::vector<std::int64_t>& samples,
                                     const std::vector<double>& t_grid);

// Mean number of visits to y in steps 0..horizon-1 from x; time 0 counts.
// Truncation at the horizon can only lower the estimate.
EstimateWithError estimate_green(const LatticePoint& x, const LatticePoint& y, std::int64_t n_walks,
                                 std::int64_t horizon, const Orientation& o, const WalkParams& w,
                                 const StreamPlan& plan);

// E^h(x^T) for the chain staying with probability 2/3 and stepping down with
// probability 1/3, T the absorption time at 0.
EstimateWithError estimate_death_chain_pgf(double x, std::int64_t h, std::int64_t n_walks,
                                           const StreamPlan& plan);

struct ConditionalEstimate {
  EstimateWithError estimate;
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
  std::int64_t truncated = 0;
};

// Half-plane lattice. From (y1, u), u >= 0: probability that the walk visits
// height y2 in column y1 before its first return to the axis (for u = 0,
// before the next return after leaving), given that the horizontal
// coordinate at that return is >= y1. The conditioning is by rejection.
// For u = y2 the answer is 1 (time-0 visit).
ConditionalEstimate estimate_hitting_prob_gu(std::int64_t u, std::int64_t y2, std::int64_t y1,
                                             std::int64_t n_walks, const StreamPlan& plan,
                                             std::int64_t horizon = 100000);

struct HittingLawSample {
  std::vector<std::int64_t> counts;  // offset k = |X - y1| for k < window
  std::int64_t beyond = 0;           // completed with offset >= window
  std::int64_t truncated = 0;
  std::int64_t episodes = 0;
};

// Half-plane lattice. Axis point reached from y. Horizontal motion is
// monotone before the axis is reached, so an episode is stopped (and counted
// in `beyond`) as soon as its offset reaches the window.
HittingLawSample sample_hitting_law(const LatticePoint& y, std::int64_t window, std::int64_t episodes,
                                    std::int64_t horizon, const StreamPlan& plan);

struct HeightLawSample {
  std::vector<std::int64_t> counts;  // height u at first entry to column y1
  std::int64_t killed = 0;           // reached the axis first
  std::int64_t truncated = 0;
  std::int64_t episodes = 0;
};

// Half-plane lattice, x2 > 0: height at the first visit to column y1, or
// killed on reaching the axis.
HeightLawSample sample_column_height(const LatticePoint& x, std::int64_t y1, std::int64_t max_height,
                                     std::int64_t episodes, std::int64_t horizon,
                                     const StreamPlan& plan);

struct OccupationSample {
  std::vector<EstimateWithError> per_target;
  std::int64_t episodes = 0;
  std::int64_t truncated = 0;
  double truncation_rate() const {
    return episodes ? static_cast<double>(truncated) / static_cast<double>(episodes) : 0.0;
  }
};

struct OccupationOptions {
  std::int64_t horizon = 100000;
  // Half-plane lattice only: stop an episode once no target can be visited
  // before the return (every target is behind the walker in its direction of
  // motion, or in the other half-plane).
  bool censor = true;
};

// Visits to each target at times 0 <= k < tau1, starting from x, on the
// half-plane lattice. A start on the axis leaves it first.
OccupationSample occupation_counts(const LatticePoint& x, const std::vector<LatticePoint>& targets,
                                   std::int64_t n_walks, const StreamPlan& plan,
                                   const OccupationOptions& opts = {});

struct VerticalMoveCounts {
  // counts[row offset][0 stay, 1 up, 2 down]
  std::vector<std::array<std::int64_t, 3>> counts;
  std::int64_t y_min = 0;
};

// Tallies vertical moves of the drifted walk for rows in [y_min, y_max].
VerticalMoveCounts sample_vertical_moves(const LatticePoint& start, const Orientation& o,
                                         const WalkParams& w, std::int64_t y_min, std::int64_t y_max,
                                         std::int64_t walks, std::int64_t steps,
                                         const StreamPlan& plan);

}  // namespace owk
