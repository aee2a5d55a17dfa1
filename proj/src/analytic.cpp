#include "owk/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace owk {

SingularityEstimate extract_singularity(double p, CfForm form) {
  check_p(p);
  constexpr int k_min = 4, k_max = 40;
  SingularityEstimate est;
  for (int k = k_min; k <= k_max; ++k) {
    const double t = std::numbers::pi * std::ldexp(1.0, -k);
    est.t.push_back(t);
    est.samples.push_back(std::sqrt(t) / one_minus_axis_cf(t, p, form));
  }
  // Column j removes the term sqrt(t)^j; consecutive grid points differ by a
  // factor 2 in t, i.e. sqrt(2) in sqrt(t).
  est.richardson.push_back(est.samples);
  for (int j = 1; j <= 3; ++j) {
    const auto& prev = est.richardson.back();
    const double rho = std::pow(std::sqrt(0.5), j);
    std::vector<double> col(prev.size(), std::nan(""));
    for (std::size_t i = j; i < prev.size(); ++i) col[i] = (prev[i] - rho * prev[i - 1]) / (1.0 - rho);
    est.richardson.push_back(std::move(col));
  }
  const auto& last = est.richardson.back();
  const std::size_t n = last.size();
  const double a = last[n - 3], b = last[n - 2], c = last[n - 1];
  est.c = c;
  est.spread = (std::max({a, b, c}) - std::min({a, b, c})) / std::abs(c);
  if (!(est.spread <= 1e-3) || !(c > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "extract_singularity: extrapolation did not settle (spread " << est.spread
        << "); table tail:";
    for (std::size_t i = n - 3; i < n; ++i) msg << ' ' << last[i];
    throw NumericError(msg.str(), c, true);
  }
  est.c_prime = est.c * std::sqrt(std::numbers::pi / 2.0);

  // Least-squares slope of log|sample - c| against log t over the ten
  // smallest t whose residual stays well above rounding.
  const double floor = 1e4 * 2.220446049250313e-16 * std::abs(est.c);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < est.samples.size(); ++i)
    if (std::abs(est.samples[i] - est.c) > floor) idx.push_back(i);
  if (idx.size() > 10) idx.erase(idx.begin(), idx.end() - 10);
  if (idx.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i : idx) {
      const double x = std::log(est.t[i]);
      const double y = std::log(std::abs(est.samples[i] - est.c));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double m = static_cast<double>(idx.size());
    est.residual_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  } else {
    est.residual_slope = std::nan("");
  }
  return est;
}

ClosedFormReport compare_closed_form(double p, int n, double tol) {
  check_p(p);
  if (n < 1) throw ValidationError("compare_closed_form needs n >= 1");
  ClosedFormReport rep;
  rep.p = p;
  rep.points = n;
  const double q = 1.0 - p;
  for (int j = 1; j <= n; ++j) {
    const double t = std::numbers::pi * j / n;
    const double ref = embedded_cf(t, p);
    const double pub = embedded_cf_closed(t, p, ClosedFormVariant::as_published);
    const double cor = embedded_cf_closed(t, p, ClosedFormVariant::corrected);
    const double dp = std::abs(pub - ref);
    if (dp > rep.max_diff_published) {
      rep.max_diff_published = dp;
      rep.argmax_published = t;
      const double re_z2 = (1.0 - 2 * q * std::cos(t) + q * q * std::cos(2 * t)) / (p * p);
      rep.modulus_ratio = (pub - re_z2) / (ref - re_z2);
    }
    rep.max_diff_corrected = std::max(rep.max_diff_corrected, std::abs(cor - ref));
    if (std::abs(p - 1.0 / 3.0) < 1e-15)
      rep.max_diff_printed_third = std::max(rep.max_diff_printed_third, std::abs(printed_phi_third(t) - ref));
  }
  rep.published_agrees = rep.max_diff_published <= tol;
  rep.corrected_agrees = rep.max_diff_corrected <= tol;
  return rep;
}

}  // namespace owk
