#include "owk/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

#include "owk/errors.hpp"

namespace owk {

EstimateWithError MeanAccumulator::estimate() const {
  EstimateWithError e;
  e.n_samples = n;
  if (n == 0) return e;
  const double nd = static_cast<double>(n);
  e.value = sum / nd;
  if (n > 1) {
    const double var = std::max(0.0, (sum_sq - nd * e.value * e.value) / (nd - 1.0));
    e.std_error = std::sqrt(var / nd);
  }
  return e;
}

namespace {

enum class Move { up, down, side, stay };

inline Move draw_move(const LatticePoint& u, int eps, const WalkParams& w, SeededStream& rng) {
  if (!w.drift) {
    if (eps != 0 || w.zero_row == ZeroRowRule::self_loop) {
      switch (rng.three()) {
        case 0:
          return Move::up;
        case 1:
          return Move::down;
        default:
          return eps != 0 ? Move::side : Move::stay;
      }
    }
    return rng.bit() ? Move::up : Move::down;
  }
  const RowDrift& d = w.drift->at(u.v2);
  const double r = rng.uniform();
  if (r < d.horizontal) return eps != 0 ? Move::side : Move::stay;
  if (r < d.horizontal + d.up) return Move::up;
  return Move::down;
}

inline LatticePoint apply(const LatticePoint& u, Move m, int eps) {
  switch (m) {
    case Move::up:
      return {u.v1, u.v2 + 1};
    case Move::down:
      return {u.v1, u.v2 - 1};
    case Move::side:
      return {u.v1 + eps, u.v2};
    case Move::stay:
      return u;
  }
  return u;
}

inline int sgn(std::int64_t v) { return (v > 0) - (v < 0); }

// Uniform walk on the half-plane lattice. Consumes the stream exactly as
// draw_move does (three() off the axis, bit() on it), so both paths agree.
inline void half_plane_step(LatticePoint& u, SeededStream& rng) {
  static constexpr int kDv2[3] = {1, -1, 0};
  if (u.v2 != 0) {
    const unsigned m = rng.three();
    u.v1 += (m == 2) * sgn(u.v2);
    u.v2 += kDv2[m];
  } else {
    u.v2 = rng.bit() ? 1 : -1;
  }
}

inline bool is_plain_half_plane(const Orientation& o, const WalkParams& w) {
  return o.kind() == OrientationKind::half_plane_sign && !w.drift && w.zero_row == ZeroRowRule::no_edge;
}

}  // namespace

LatticePoint step(const LatticePoint& u, const Orientation& o, const WalkParams& w, SeededStream& rng) {
  const int eps = o.epsilon(u.v2);
  return apply(u, draw_move(u, eps, w, rng), eps);
}

EpisodeStats run_excursion(const LatticePoint& start, const Orientation& o, const WalkParams& w,
                           SeededStream& rng, std::int64_t horizon, bool record_visits) {
  if (horizon < 1) throw ValidationError("horizon must be >= 1");
  EpisodeStats s;
  s.start = start;
  LatticePoint u = start;
  if (!record_visits && is_plain_half_plane(o, w)) {
    for (std::int64_t k = 0; k < horizon; ++k) {
      const std::int64_t before = u.v1;
      half_plane_step(u, rng);
      s.horizontal_moves += (u.v1 != before);
      if (u.v2 == 0) {
        s.vertical_moves = k + 1 - s.horizontal_moves;
        s.tau1 = k + 1;
        s.x_sigma1 = u.v1;
        return s;
      }
    }
    s.truncated = true;
    s.tau1 = horizon;
    s.x_sigma1 = u.v1;
    s.vertical_moves = horizon - s.horizontal_moves;
    return s;
  }
  for (std::int64_t k = 0; k < horizon; ++k) {
    if (record_visits) ++s.visits[u];
    const int eps = o.epsilon(u.v2);
    const Move m = draw_move(u, eps, w, rng);
    u = apply(u, m, eps);
    if (m == Move::side) ++s.horizontal_moves;
    else if (m == Move::stay) ++s.stay_moves;
    else ++s.vertical_moves;
    if (u.v2 == 0) {
      s.tau1 = k + 1;
      s.x_sigma1 = u.v1;
      return s;
    }
  }
  s.truncated = true;
  s.tau1 = horizon;
  s.x_sigma1 = u.v1;
  return s;
}

unsigned worker_count() {
  if (const char* env = std::getenv("OWK_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

void for_each_chunk(std::int64_t n, std::int64_t chunk,
                    const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& body) {
  if (n <= 0) return;
  if (chunk < 1) chunk = 1;
  const std::int64_t chunks = (n + chunk - 1) / chunk;
  const auto workers = static_cast<std::int64_t>(std::min<std::int64_t>(worker_count(), chunks));
  auto run = [&](std::int64_t c) { body(c * chunk, std::min(n, (c + 1) * chunk), c); };
  if (workers <= 1) {
    for (std::int64_t c = 0; c < chunks; ++c) run(c);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (std::int64_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t c = next.fetch_add(1);
        if (c >= chunks || failed.load()) return;
        try {
          run(c);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

constexpr std::int64_t kChunk = 2048;

std::int64_t chunk_count(std::int64_t n) { return (n + kChunk - 1) / kChunk; }

}  // namespace

DisplacementSample sample_displacement(const LatticePoint& start, const Orientation& o,
                                       const WalkParams& w, std::int64_t episodes,
                                       std::int64_t horizon, const StreamPlan& plan) {
  if (episodes < 1) throw ValidationError("episodes must be >= 1");
  w.validate();
  struct Part {
    std::vector<std::int64_t> x;
    std::int64_t truncated = 0;
    double tau_sum = 0.0;
  };
  std::vector<Part> parts(static_cast<std::size_t>(chunk_count(episodes)));
  for_each_chunk(episodes, kChunk, [&](std::int64_t b, std::int64_t e, std::int64_t c) {
    Part& part = parts[static_cast<std::size_t>(c)];
    part.x.reserve(static_cast<std::size_t>(e - b));
    for (std::int64_t i = b; i < e; ++i) {
      SeededStream rng = plan.episode(i);
      const EpisodeStats s = run_excursion(start, o, w, rng, horizon, false);
      if (s.truncated) {
        ++part.truncated;
      } else {
        part.x.push_back(s.x_sigma1);
        part.tau_sum += static_cast<double>(s.tau1);
      }
    }
  });
  DisplacementSample out;
  out.episodes = episodes;
  double tau_sum = 0.0;
  for (auto& part : parts) {
    out.x.insert(out.x.end(), part.x.begin(), part.x.end());
    out.truncated += part.truncated;
    tau_sum += part.tau_sum;
  }
  if (!out.x.empty()) out.mean_tau1 = tau_sum / static_cast<double>(out.x.size());
  return out;
}

std::vector<CfEstimate> empirical_cf(const std::vector<std::int64_t>& samples,
                                     const std::vector<double>& t_grid) {
  if (samples.empty()) throw ValidationError("empirical_cf needs at least one sample");
  std::vector<CfEstimate> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    CfEstimate e;
    e.t = t;
    if (t == 0.0) {
      e.value = 1.0;
      out.push_back(e);
      continue;
    }
    MeanAccumulator re, im;
    for (std::int64_t x : samples) {
      const double a = t * static_cast<double>(x);
      re.add(std::cos(a));
      im.add(std::sin(a));
    }
    const auto er = re.estimate(), ei = im.estimate();
    e.value = {er.value, ei.value};
    e.se_re = er.std_error;
    e.se_im = ei.std_error;
    out.push_back(e);
  }
  return out;
}

EstimateWithError estimate_green(const LatticePoint& x, const LatticePoint& y, std::int64_t n_walks,
                                 std::int64_t horizon, const Orientation& o, const WalkParams& w,
                                 const StreamPlan& plan) {
  if (n_walks < 1) throw ValidationError("n_walks must be >= 1");
  if (horizon < 1) throw ValidationError("horizon must be >= 1");
  w.validate();
  std::vector<MeanAccumulator> parts(static_cast<std::size_t>(chunk_count(n_walks)));
  for_each_chunk(n_walks, kChunk, [&](std::int64_t b, std::int64_t e, std::int64_t c) {
    for (std::int64_t i = b; i < e; ++i) {
      SeededStream rng = plan.episode(i);
      LatticePoint u = x;
      std::int64_t visits = 0;
      if (is_plain_half_plane(o, w)) {
        for (std::int64_t k = 0; k < horizon; ++k) {
          visits += (u == y);
          half_plane_step(u, rng);
        }
      } else {
        for (std::int64_t k = 0; k < horizon; ++k) {
          visits += (u == y);
          u = step(u, o, w, rng);
        }
      }
      parts[static_cast<std::size_t>(c)].add(static_cast<double>(visits));
    }
  });
  MeanAccumulator acc;
  for (const auto& part : parts) acc.merge(part);
  return acc.estimate();
}

EstimateWithError estimate_death_chain_pgf(double x, std::int64_t h, std::int64_t n_walks,
                                           const StreamPlan& plan) {
  if (!(x > 0.0 && x < 1.0)) throw ValidationError("estimate_death_chain_pgf needs 0 < x < 1");
  if (h < 0) throw ValidationError("h must be >= 0");
  if (n_walks < 1) throw ValidationError("n_walks must be >= 1");
  std::vector<MeanAccumulator> parts(static_cast<std::size_t>(chunk_count(n_walks)));
  for_each_chunk(n_walks, kChunk, [&](std::int64_t b, std::int64_t e, std::int64_t c) {
    for (std::int64_t i = b; i < e; ++i) {
      SeededStream rng = plan.episode(i);
      std::int64_t level = h, t = 0;
      while (level > 0) {
        ++t;
        if (rng.three() == 0) --level;
      }
      parts[static_cast<std::size_t>(c)].add(std::pow(x, static_cast<double>(t)));
    }
  });
  MeanAccumulator acc;
  for (const auto& part : parts) acc.merge(part);
  return acc.estimate();
}

ConditionalEstimate estimate_hitting_prob_gu(std::int64_t u, std::int64_t y2, std::int64_t y1,
                                             std::int64_t n_walks, const StreamPlan& plan,
                                             std::int64_t horizon) {
  if (u < 0 || y2 < 0) throw ValidationError("estimate_hitting_prob_gu needs u >= 0 and y2 >= 0");
  if (n_walks < 1) throw ValidationError("n_walks must be >= 1");
  ConditionalEstimate out;
  if (u == y2) {
    out.estimate = {1.0, 0.0, n_walks};
    out.accepted = n_walks;
    return out;
  }
  struct Part {
    MeanAccumulator acc;
    std::int64_t rejected = 0, truncated = 0;
  };
  std::vector<Part> parts(static_cast<std::size_t>(chunk_count(n_walks)));
  for_each_chunk(n_walks, kChunk, [&](std::int64_t b, std::int64_t e, std::int64_t c) {
    Part& part = parts[static_cast<std::size_t>(c)];
    for (std::int64_t i = b; i < e; ++i) {
      SeededStream rng = plan.episode(i);
      LatticePoint pos{y1, u};
      // 1 success, 0 failure (condition holds), -1 rejected, -2 truncated
      int outcome = -2;
      for (std::int64_t k = 0; k < horizon; ++k) {
        half_plane_step(pos, rng);
        if (pos.v2 > 0) {
          if (pos.v1 == y1 && pos.v2 == y2) {
            outcome = 1;
            break;
          }
          if (pos.v1 > y1) {  // column left behind; condition holds in the upper half
            outcome = 0;
            break;
          }
        } else if (pos.v2 < 0) {
          if (pos.v1 < y1) {  // return will land left of y1
            outcome = -1;
            break;
          }
        } else {
          outcome = pos.v1 >= y1 ? 0 : -1;
          break;
        }
      }
      if (outcome == -2) ++part.truncated;
      else if (outcome == -1) ++part.rejected;
      else part.acc.add(static_cast<double>(outcome));
    }
  });
  MeanAccumulator acc;
  for (const auto& part : parts) {
    acc.merge(part.acc);
    out.rejected += part.rejected;
    out.truncated += part.truncated;
  }
  out.accepted = acc.n;
  out.estimate = acc.estimate();
  const double rate = static_cast<double>(acc.n) / static_cast<double>(n_walks);
  if (rate < 1e-4)
    throw NumericError("estimate_hitting_prob_gu: acceptance rate " + std::to_string(rate) +
                       " below 1e-4; choose a less restrictive (u, y2, y1)");
  return out;
}

HittingLawSample sample_hitting_law(const LatticePoint& y, std::int64_t window, std::int64_t episodes,
                                    std::int64_t horizon, const StreamPlan& plan) {
  if (y.v2 == 0) throw ValidationError("sample_hitting_law needs a start off the axis");
  if (window < 1 || episodes < 1 || horizon < 1) throw ValidationError("window, episodes, horizon must be >= 1");
  struct Part {
    std::vector<std::int64_t> counts;
    std::int64_t beyond = 0, truncated = 0;
  };
  std::vector<Part> parts(static_cast<std::size_t>(chunk_count(episodes)));
  for_each_chunk(episodes, kChunk, [&](std::int64_t b, std::int64_t e, std::int64_t c) {
    Part& part = parts[static_cast<std::size_t>(c)];
    part.counts.assign(static_cast<std::size_t>(window), 0);
    for (std::int64_t i = b; i < e; ++i) {
      SeededStream rng = plan.episode(i);
      LatticePoint pos = y;
      bool done = false;
      for (std::int64_t k = 0; k < horizon; ++k) {
        half_plane_step(pos, rng);
        const std::int64_t offset = std::abs(pos.v1 - y.v1);
        if (offset >= window) {
          ++part.beyond;
          done = true;
          break;
        }
        if (pos.v2 == 0) {
          ++part.counts[static_cast<std::size_t>(offset)];
          done = true;
          break;
        }
      }
      if (!done) ++part.truncated;
    }
  });
  HittingLawSample out;
  out.episodes = episodes;
  out.counts.assign(static_cast<std::size_t>(window), 0);
  for (const auto& part : parts) {
    for (std::size_t k = 0; k < out.counts.size(); ++k) out.counts[k] += part.counts[k];
    out.beyond += part.beyond;
    out.truncated += part.truncated;
  }
  return out;
}

HeightLawSample sample_column_height(const LatticePoint& x, std::int64_t y1, std::int64_t max_height,
                                     std::int64_t episodes, std::int64_t horizon,
                                     const StreamPlan& plan) {
  if (x.v2 <= 0) throw ValidationError("sample_column_height needs x2 > 0");
  if (y1 <= x.v1) throw ValidationError("sample_column_height needs y1 > x1");
  if (max_height < 1 || episodes < 1 || horizon < 1) throw ValidationError("bad sampling sizes");
  struct Part {
    std::vector<std::int64_t> counts;
    std::int64_t killed = 0, truncated = 0;
  };
  std::vector<Part> parts(static_cast<std::size_t>(chunk_count(episodes)));
  for_each_chunk(episodes, kChunk, [&](std::int64_t b, std::int64_t e, std::int64_t c) {
    Part& part = parts[static_cast<std::size_t>(c)];
    part.counts.assign(static_cast<std::size_t>(max_height + 1), 0);
    for (std::int64_t i = b; i < e; ++i) {
      SeededStream rng = plan.episode(i);
      LatticePoint pos = x;
      bool done = false;
      for (std::int64_t k = 0; k < horizon; ++k) {
        half_plane_step(pos, rng);
        if (pos.v2 == 0) {
          ++part.killed;
          done = true;
          break;
        }
        if (pos.v1 == y1) {
          ++part.counts[static_cast<std::size_t>(std::min(pos.v2, max_height))];
          done = true;
          break;
        }
      }
      if (!done) ++part.truncated;
    }
  });
  HeightLawSample out;
  out.episodes = episodes;
  out.counts.assign(static_cast<std::size_t>(max_height + 1), 0);
  for (const auto& part : parts) {
    for (std::size_t k = 0; k < out.counts.size(); ++k) out.counts[k] += part.counts[k];
    out.killed += part.killed;
    out.truncated += part.truncated;
  }
  return out;
}

OccupationSample occupation_counts(const LatticePoint& x, const std::vector<LatticePoint>& targets,
                                   std::int64_t n_walks, const StreamPlan& plan,
                                   const OccupationOptions& opts) {
  if (n_walks < 1) throw ValidationError("n_walks must be >= 1");
  if (opts.horizon < 1) throw ValidationError("horizon must be >= 1");
  const std::size_t nt = targets.size();
  // Row-indexed lookup of off-axis targets.
  std::int64_t row_lo = 0, row_hi = -1;
  for (const auto& t : targets) {
    if (row_hi < row_lo) row_lo = row_hi = t.v2;
    row_lo = std::min(row_lo, t.v2);
    row_hi = std::max(row_hi, t.v2);
  }
  std::vector<std::vector<std::pair<std::int64_t, std::size_t>>> by_row(
      nt ? static_cast<std::size_t>(row_hi - row_lo + 1) : 0);
  std::int64_t upper_reach = std::numeric_limits<std::int64_t>::min();
  std::int64_t lower_reach = std::numeric_limits<std::int64_t>::max();
  for (std::size_t j = 0; j < nt; ++j) {
    const auto& t = targets[j];
    by_row[static_cast<std::size_t>(t.v2 - row_lo)].emplace_back(t.v1, j);
    if (t.v2 > 0) upper_reach = std::max(upper_reach, t.v1);
    if (t.v2 < 0) lower_reach = std::min(lower_reach, t.v1);
  }

  struct Part {
    std::vector<double> sum, sum_sq;
    std::int64_t truncated = 0;
  };
  std::vector<Part> parts(static_cast<std::size_t>(chunk_count(n_walks)));
  for_each_chunk(n_walks, kChunk, [&](std::int64_t b, std::int64_t e, std::int64_t c) {
    Part& part = parts[static_cast<std::size_t>(c)];
    part.sum.assign(nt, 0.0);
    part.sum_sq.assign(nt, 0.0);
    std::vector<std::int64_t> hits(nt, 0);
    std::vector<std::size_t> touched;
    for (std::int64_t i = b; i < e; ++i) {
      SeededStream rng = plan.episode(i);
      LatticePoint pos = x;
      bool resolved = false;
      for (std::int64_t k = 0; k < opts.horizon; ++k) {
        if (nt && pos.v2 >= row_lo && pos.v2 <= row_hi) {
          for (const auto& [col, j] : by_row[static_cast<std::size_t>(pos.v2 - row_lo)]) {
            if (col == pos.v1) {
              if (hits[j]++ == 0) touched.push_back(j);
            }
          }
        }
        half_plane_step(pos, rng);
        if (pos.v2 == 0) {
          resolved = true;
          break;
        }
        if (opts.censor) {
          const int side = sgn(pos.v2);
          if ((side > 0 && pos.v1 > upper_reach) || (side < 0 && pos.v1 < lower_reach)) {
            resolved = true;
            break;
          }
        }
      }
      if (!resolved) ++part.truncated;
      for (std::size_t j : touched) {
        const double h = static_cast<double>(hits[j]);
        part.sum[j] += h;
        part.sum_sq[j] += h * h;
        hits[j] = 0;
      }
      touched.clear();
    }
  });
  OccupationSample out;
  out.episodes = n_walks;
  std::vector<MeanAccumulator> acc(nt);
  for (const auto& part : parts) {
    out.truncated += part.truncated;
    for (std::size_t j = 0; j < nt; ++j) {
      acc[j].sum += part.sum[j];
      acc[j].sum_sq += part.sum_sq[j];
    }
  }
  for (std::size_t j = 0; j < nt; ++j) {
    acc[j].n = n_walks;
    out.per_target.push_back(acc[j].estimate());
  }
  return out;
}

VerticalMoveCounts sample_vertical_moves(const LatticePoint& start, const Orientation& o,
                                         const WalkParams& w, std::int64_t y_min, std::int64_t y_max,
                                         std::int64_t walks, std::int64_t steps,
                                         const StreamPlan& plan) {
  if (y_min > y_max || walks < 1 || steps < 1) throw ValidationError("bad vertical sampling arguments");
  w.validate();
  const auto rows = static_cast<std::size_t>(y_max - y_min + 1);
  std::vector<VerticalMoveCounts> parts(static_cast<std::size_t>(chunk_count(walks)));
  for_each_chunk(walks, kChunk, [&](std::int64_t b, std::int64_t e, std::int64_t c) {
    auto& counts = parts[static_cast<std::size_t>(c)].counts;
    counts.assign(rows, {0, 0, 0});
    for (std::int64_t i = b; i < e; ++i) {
      SeededStream rng = plan.episode(i);
      LatticePoint u = start;
      for (std::int64_t k = 0; k < steps; ++k) {
        const LatticePoint v = step(u, o, w, rng);
        if (u.v2 >= y_min && u.v2 <= y_max) {
          const int kind = v.v2 == u.v2 ? 0 : (v.v2 > u.v2 ? 1 : 2);
          ++counts[static_cast<std::size_t>(u.v2 - y_min)][kind];
        }
        u = v;
      }
    }
  });
  VerticalMoveCounts out;
  out.y_min = y_min;
  out.counts.assign(rows, {0, 0, 0});
  for (const auto& part : parts)
    for (std::size_t r = 0; r < rows; ++r)
      for (int k = 0; k < 3; ++k) out.counts[r][k] += part.counts[r][k];
  return out;
}

}  // namespace owk
