#include "owk/martin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "owk/errors.hpp"

namespace owk {

namespace {

void check_denominator(double d, const QuadratureSpec& spec, const char* what) {
  if (!(std::abs(d) >= 10.0 * spec.abs_tol)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << ": denominator " << d << " below 10 abs_tol";
    throw NumericError(msg.str(), d, true);
  }
}

double real_checked(const HalfPlaneIntegral& r, const char* what) {
  if (std::abs(r.imag) > 1e-8 * (1.0 + std::abs(r.value)))
    throw NumericError(std::string(what) + ": imaginary part too large", r.value, true);
  return r.value;
}

double euclid(const LatticePoint& y) {
  return std::hypot(static_cast<double>(y.v1), static_cast<double>(y.v2));
}

}  // namespace

double martin_kernel_embedded(std::int64_t x, std::int64_t y, const CfModel& model,
                              const QuadratureSpec& spec) {
  const double den = gamma(y, model, spec);
  check_denominator(den, spec, "martin_kernel_embedded");
  if (x == 0) return 1.0;
  return gamma(y - x, model, spec) / den;
}

double martin_kernel_axis(std::int64_t z, const LatticePoint& y, const CfModel& model,
                          const QuadratureSpec& spec) {
  const double den = green_halfplane(0, y, model, spec);
  check_denominator(den, spec, "martin_kernel_axis");
  if (z == 0) return 1.0;
  return green_halfplane(z, y, model, spec) / den;
}

double averaged_axis_kernel(const LatticePoint& x, const LatticePoint& y, const CfModel& model,
                            const QuadratureSpec& spec) {
  const double den = green_halfplane(0, y, model, spec);
  check_denominator(den, spec, "averaged_axis_kernel");
  if (x.v1 == 0 && x.v2 == 0) return 1.0;
  const std::int64_t hx = -x.v2, hy = -y.v2;
  auto w = [&](double t) { return displacement_cf(t, hx, model.p) * displacement_cf(t, hy, model.p); };
  const auto num = axis_fourier_integral(y.v1 - x.v1, w, model, spec,
                                         static_cast<double>(std::abs(hx) + std::abs(hy)));
  return real_checked(num, "averaged_axis_kernel") / den;
}

double excursion_averaged_kernel(std::int64_t x1, const LatticePoint& y, const CfModel& model,
                                 const QuadratureSpec& spec) {
  const double den = green_halfplane(0, y, model, spec);
  check_denominator(den, spec, "excursion_averaged_kernel");
  const std::int64_t hy = -y.v2;
  auto w = [&](double t) {
    return axis_cf(t, model) * displacement_cf(t, hy, model.p);
  };
  const auto num = axis_fourier_integral(y.v1 - x1, w, model, spec, static_cast<double>(std::abs(hy)));
  return real_checked(num, "excursion_averaged_kernel") / den;
}

EstimateWithError occupation_before_return(const LatticePoint& x, const LatticePoint& y,
                                           std::int64_t n_walks, const StreamPlan& plan,
                                           std::int64_t horizon, bool censor) {
  if (n_walks < 1) throw ValidationError("occupation_before_return: n_walks must be >= 1");
  if (x.v2 * y.v2 < 0) return {0.0, 0.0, n_walks};
  const OccupationSample s = occupation_counts(x, {y}, n_walks, plan, {horizon, censor});
  if (s.truncation_rate() > 1e-3) {
    std::ostringstream msg;
    msg << "occupation_before_return: truncation rate " << s.truncation_rate() << " exceeds 1e-3 at horizon "
        << horizon;
    throw NumericError(msg.str(), s.per_target[0].value, true);
  }
  return s.per_target[0];
}

FullKernelBatch martin_kernel_full_batch(const LatticePoint& x, const std::vector<LatticePoint>& ys,
                                         const CfModel& model, const QuadratureSpec& spec,
                                         std::int64_t mc_budget, const StreamPlan& plan,
                                         std::int64_t horizon) {
  if (mc_budget < 1) throw ValidationError("mc_budget must be >= 1");
  FullKernelBatch out;
  const OccupationSample occ = occupation_counts(x, ys, mc_budget, plan, {horizon, true});
  out.episodes = occ.episodes;
  out.truncated = occ.truncated;
  if (occ.truncation_rate() > 1e-3) {
    std::ostringstream msg;
    msg << "martin_kernel_full: truncation rate " << occ.truncation_rate() << " exceeds 1e-3 at horizon "
        << horizon;
    throw NumericError(msg.str());
  }
  for (std::size_t j = 0; j < ys.size(); ++j) {
    const LatticePoint& y = ys[j];
    FullKernelValue v;
    v.y = y;
    v.green_0y = green_lattice(0, y, model, spec);
    check_denominator(v.green_0y, spec, "martin_kernel_full");
    const EstimateWithError e = x.v2 * y.v2 < 0 ? EstimateWithError{0.0, 0.0, mc_budget} : occ.per_target[j];
    v.first_term = e.value / v.green_0y;
    v.first_term_se = e.std_error / v.green_0y;
    v.second_term = x.v2 == 0 ? excursion_averaged_kernel(x.v1, y, model, spec)
                              : averaged_axis_kernel(x, y, model, spec);
    v.value = v.first_term + v.second_term;
    v.error = v.first_term_se;
    out.values.push_back(v);
  }
  return out;
}

FullKernelValue martin_kernel_full(const LatticePoint& x, const LatticePoint& y, const CfModel& model,
                                   const QuadratureSpec& spec, std::int64_t mc_budget,
                                   const StreamPlan& plan) {
  return martin_kernel_full_batch(x, {y}, model, spec, mc_budget, plan).values.at(0);
}

std::vector<std::int64_t> geometric_points(double lo, double hi, int count) {
  if (!(lo >= 1.0) || !(hi >= lo) || count < 1) throw ValidationError("geometric_points: need 1 <= lo <= hi, count >= 1");
  std::vector<std::int64_t> out;
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 1.0 : static_cast<double>(i) / (count - 1);
    const auto v = static_cast<std::int64_t>(std::llround(lo * std::pow(hi / lo, f)));
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  return out;
}

DirectionSpec DirectionSpec::fixed_lambda_sweep(double lambda, const std::vector<std::int64_t>& y2s) {
  if (!(lambda >= 0.0)) throw ValidationError("lambda must be >= 0");
  DirectionSpec d;
  d.mode = SweepMode::fixed_lambda;
  d.lambda = lambda;
  for (std::int64_t y2 : y2s) {
    const double y2d = static_cast<double>(y2);
    d.points.push_back({static_cast<std::int64_t>(std::llround(lambda * y2d * y2d)), y2});
  }
  return d;
}

DirectionSpec DirectionSpec::horizontal_sweep(const std::vector<std::int64_t>& y1s, double exponent) {
  if (!(exponent >= 0.0 && exponent < 0.5)) throw ValidationError("horizontal sweep exponent must be in [0, 1/2)");
  DirectionSpec d;
  d.mode = SweepMode::horizontal_dominant;
  d.exponent = exponent;
  double prev = -1.0;
  for (std::int64_t y1 : y1s) {
    auto y2 = std::max<std::int64_t>(1, std::llround(std::pow(static_cast<double>(std::abs(y1)), exponent)));
    // rounding can make y1 / y2^2 dip; step y2 down until the ratio grows
    auto ratio = [&] { return std::abs(static_cast<double>(y1)) / static_cast<double>(y2 * y2); };
    while (y2 > 1 && !(ratio() > prev)) --y2;
    prev = ratio();
    d.points.push_back({y1, y2});
  }
  return d;
}

DirectionSpec DirectionSpec::vertical_sweep(std::int64_t y1, const std::vector<std::int64_t>& y2s) {
  DirectionSpec d;
  d.mode = SweepMode::vertical_only;
  d.fixed_y1 = y1;
  for (std::int64_t y2 : y2s) d.points.push_back({y1, y2});
  return d;
}

DirectionSpec DirectionSpec::parse(const std::string& text, double max_norm) {
  if (!(max_norm >= 4.0)) throw ValidationError("sweep max_norm must be >= 4");
  const auto eq = text.find('=');
  const std::string key = text.substr(0, eq);
  const std::string val = eq == std::string::npos ? "" : text.substr(eq + 1);
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw ValidationError("");
      return v;
    } catch (...) {
      throw ValidationError("bad sweep value in '" + text + "'");
    }
  };
  if (key == "lambda") {
    const double lambda = number(val);
    if (lambda == 0.0) return fixed_lambda_sweep(0.0, geometric_points(10.0, max_norm, 8));
    // |y| ~ lambda y2^2 at the far end
    const double y2_max = std::max(4.0, std::sqrt(max_norm / lambda));
    return fixed_lambda_sweep(lambda, geometric_points(std::max(2.0, y2_max / 8.0), y2_max, 8));
  }
  if (key == "horizontal") {
    const double exponent = val.empty() ? 1.0 / 3.0 : number(val);
    return horizontal_sweep(geometric_points(std::max(10.0, max_norm / 100.0), max_norm, 8), exponent);
  }
  if (key == "vertical") {
    const double y1 = val.empty() ? 0.0 : number(val);
    return vertical_sweep(static_cast<std::int64_t>(std::llround(y1)), geometric_points(10.0, max_norm, 8));
  }
  throw ValidationError("unknown sweep '" + text + "' (lambda=<v>, horizontal[=<e>], vertical[=<y1>])");
}

std::string DirectionSpec::label() const {
  std::ostringstream s;
  switch (mode) {
    case SweepMode::fixed_lambda:
      s << "lambda=" << lambda;
      break;
    case SweepMode::horizontal_dominant:
      s << "horizontal=" << exponent;
      break;
    case SweepMode::vertical_only:
      s << "vertical=" << fixed_y1;
      break;
  }
  return s.str();
}

bool DirectionSpec::consistent() const {
  if (points.empty()) return false;
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(euclid(points[i]) > euclid(points[i - 1]))) return false;
  switch (mode) {
    case SweepMode::fixed_lambda: {
      // rounding error of y1 relative to y2^2 shrinks along the sweep
      for (const auto& y : points) {
        const double y2 = static_cast<double>(y.v2);
        if (y2 == 0.0 || std::abs(static_cast<double>(y.v1) - lambda * y2 * y2) > 0.5) return false;
      }
      return true;
    }
    case SweepMode::horizontal_dominant: {
      double prev = -1.0;
      for (const auto& y : points) {
        const double y2 = static_cast<double>(y.v2);
        const double ratio = std::abs(static_cast<double>(y.v1)) / (y2 * y2);
        if (!(ratio > prev)) return false;
        prev = ratio;
      }
      return true;
    }
    case SweepMode::vertical_only:
      return std::all_of(points.begin(), points.end(), [&](const LatticePoint& y) { return y.v1 == fixed_y1; });
  }
  return false;
}

MartinReport boundary_triviality_report(const LatticePoint& x, const std::vector<DirectionSpec>& sweeps,
                                        const CfModel& model, const QuadratureSpec& spec,
                                        const ReportOptions& opts) {
  if (sweeps.empty()) throw ValidationError("boundary_triviality_report: no sweeps");
  MartinReport rep;
  rep.x = x;
  rep.model = model;
  rep.mc_budget = opts.mc_budget;
  rep.seed = opts.seed;
  const bool reference = x.v1 == 0 && x.v2 == 0;
  for (std::size_t s = 0; s < sweeps.size(); ++s) {
    SweepReport sr;
    sr.sweep = sweeps[s];
    const StreamPlan plan{opts.seed, 0x4D000000ULL + s};
    // One simulation per sweep; quadrature failures are attached per point.
    OccupationSample occ;
    std::string occ_failure;
    try {
      occ = occupation_counts(x, sr.sweep.points, opts.mc_budget, plan, {opts.horizon, true});
      rep.episodes += occ.episodes;
      rep.truncated += occ.truncated;
      if (occ.truncation_rate() > 1e-3) occ_failure = "truncation rate above 1e-3";
    } catch (const std::exception& e) {
      occ_failure = e.what();
    }
    for (std::size_t j = 0; j < sr.sweep.points.size(); ++j) {
      MartinPoint mp;
      mp.y = sr.sweep.points[j];
      mp.norm = euclid(mp.y);
      if (!occ_failure.empty()) {
        mp.failure = occ_failure;
        sr.points.push_back(mp);
        continue;
      }
      try {
        const double g0y = green_lattice(0, mp.y, model, spec);
        check_denominator(g0y, spec, "boundary_triviality_report");
        const EstimateWithError e =
            x.v2 * mp.y.v2 < 0 ? EstimateWithError{0.0, 0.0, opts.mc_budget} : occ.per_target[j];
        mp.first_term = e.value / g0y;
        mp.first_term_se = e.std_error / g0y;
        mp.second_term = x.v2 == 0 ? excursion_averaged_kernel(x.v1, mp.y, model, spec)
                                   : averaged_axis_kernel(x, mp.y, model, spec);
        mp.error = mp.first_term_se;
        const double sum = mp.first_term + mp.second_term;
        if (reference) {
          mp.decomposition = sum;
          mp.kernel = 1.0;
        } else {
          mp.kernel = sum;
        }
        mp.ok = std::isfinite(mp.kernel);
        if (!mp.ok) mp.failure = "non-finite kernel";
      } catch (const std::exception& e) {
        mp.failure = e.what();
      }
      sr.points.push_back(mp);
    }

    std::vector<const MartinPoint*> good;
    for (const auto& mp : sr.points)
      if (mp.ok) good.push_back(&mp);
    if (!good.empty()) {
      const std::size_t n = good.size();
      const std::size_t q = std::min(n, std::max<std::size_t>(2, (n + 3) / 4));
      for (std::size_t i = n - q; i < n; ++i)
        sr.sup_deviation = std::max(sr.sup_deviation, std::abs(good[i]->kernel - 1.0));
      sr.deviations_decrease = true;
      for (std::size_t i = n - q + 1; i < n; ++i) {
        const double a = std::abs(good[i - 1]->kernel - 1.0), b = std::abs(good[i]->kernel - 1.0);
        if (b > a + 2.0 * (good[i - 1]->error + good[i]->error)) sr.deviations_decrease = false;
      }
      sr.first_term_decreases = true;
      for (std::size_t i = 1; i < n; ++i)
        if (good[i]->first_term > good[i - 1]->first_term + 2.0 * (good[i - 1]->first_term_se + good[i]->first_term_se))
          sr.first_term_decreases = false;
      sr.tail_first_term = good.back()->first_term;
    } else {
      sr.sup_deviation = std::nan("");
    }
    rep.sup_deviation = std::max(rep.sup_deviation, sr.sup_deviation);
    if (std::isnan(sr.sup_deviation)) rep.sup_deviation = sr.sup_deviation;
    rep.sweeps.push_back(std::move(sr));
  }
  return rep;
}

}  // namespace owk
