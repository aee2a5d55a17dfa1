#include "owk/green.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unsupported/Eigen/FFT>

#include "owk/analytic.hpp"
#include "owk/errors.hpp"

namespace owk {

namespace {

constexpr double kPi = std::numbers::pi;

std::int64_t initial_panels(int nodes, double phase) {
  const auto base = static_cast<std::int64_t>(std::max(1, nodes / kPanelOrder));
  const auto by_phase = static_cast<std::int64_t>(std::ceil(phase / 2.0));
  return std::max(base, by_phase);
}

}  // namespace

double gamma(std::int64_t x, const CfModel& model, const QuadratureSpec& spec) {
  spec.validate();
  check_p(model.p);
  const double ax = std::abs(static_cast<double>(x));
  const double s = std::sqrt(spec.split);
  auto sing = [&](double u) {
    const double t = u * u;
    return 2.0 * u * std::cos(static_cast<double>(x) * t) / one_minus_axis_cf(t, model);
  };
  auto reg = [&](double t) { return std::cos(static_cast<double>(x) * t) / one_minus_axis_cf(t, model); };
  const std::string what = "gamma(" + std::to_string(x) + ")";
  const auto a = adaptive_gauss<double>(sing, 0.0, s, initial_panels(spec.nodes_singular, ax * spec.split),
                                        spec.abs_tol / 2, spec.rel_tol, spec.max_panels, what);
  const auto b = adaptive_gauss<double>(reg, spec.split, kPi,
                                        initial_panels(spec.nodes_regular, ax * (kPi - spec.split)),
                                        spec.abs_tol / 2, spec.rel_tol, spec.max_panels, what);
  return a.value + b.value;
}

BruteForceGamma gamma_brute_force(std::int64_t x, const CfModel& model, double delta,
                                  std::int64_t panels) {
  check_p(model.p);
  if (!(delta > 0.0 && delta < kPi)) throw ValidationError("delta must lie in (0, pi)");
  auto reg = [&](double t) { return std::cos(static_cast<double>(x) * t) / one_minus_axis_cf(t, model); };
  const double body = composite_gauss<double>(reg, delta, kPi, panels);
  // On [0, delta], 1/(1 - phi) = c t^{-1/2} (1 + O(t)) and cos(x t) = 1 + O(x^2 t^2).
  const double c = std::sqrt(model.p / (1.0 - model.p));
  BruteForceGamma out;
  out.head_bound = c * 2.0 * std::sqrt(delta);
  out.value = body + out.head_bound;
  return out;
}

double green_embedded(std::int64_t x, std::int64_t y, const CfModel& model, const QuadratureSpec& spec,
                      GreenNormalization norm) {
  const double g = gamma(y - x, model, spec);
  switch (norm) {
    case GreenNormalization::raw:
      return g;
    case GreenNormalization::inverse_pi:
    case GreenNormalization::lattice:
      return g / kPi;
  }
  return g;
}

HalfPlaneIntegral axis_fourier_integral(std::int64_t m,
                                        const std::function<std::complex<double>(double)>& weight,
                                        const CfModel& model, const QuadratureSpec& spec,
                                        double depth) {
  spec.validate();
  check_p(model.p);
  const double md = static_cast<double>(m);
  auto folded = [&](double t) {
    const double inv = 1.0 / one_minus_axis_cf(t, model);
    const std::complex<double> plus = std::polar(1.0, md * t) * weight(t);
    const std::complex<double> minus = std::polar(1.0, -md * t) * weight(-t);
    return (plus + minus) * inv;
  };
  auto sing = [&](double u) { return 2.0 * u * folded(u * u); };
  const double s = std::sqrt(spec.split);
  const double am = std::abs(md);
  const double level_phase = 1.5 * std::abs(depth);
  const std::string what = "half-plane integral (m=" + std::to_string(m) + ")";
  const auto a = adaptive_gauss<std::complex<double>>(
      sing, 0.0, s, initial_panels(spec.nodes_singular, am * spec.split + 2.0 * level_phase * s),
      spec.abs_tol / 2, spec.rel_tol, spec.max_panels, what);
  const auto b = adaptive_gauss<std::complex<double>>(
      folded, spec.split, kPi,
      initial_panels(spec.nodes_regular, am * (kPi - spec.split) + level_phase * (std::sqrt(kPi) - s)),
      spec.abs_tol / 2, spec.rel_tol, spec.max_panels, what);
  const std::complex<double> v = a.value + b.value;
  return {v.real(), v.imag(), a.panels + b.panels};
}

HalfPlaneIntegral green_halfplane_detail(std::int64_t z, const LatticePoint& y, const CfModel& model,
                                         const QuadratureSpec& spec) {
  const std::int64_t h = -y.v2;
  auto w = [&](double t) { return displacement_cf(t, h, model.p); };
  return axis_fourier_integral(y.v1 - z, w, model, spec, static_cast<double>(std::abs(h)));
}

double green_halfplane(std::int64_t z, const LatticePoint& y, const CfModel& model,
                       const QuadratureSpec& spec) {
  const HalfPlaneIntegral r = green_halfplane_detail(z, y, model, spec);
  if (std::abs(r.imag) > 1e-8 * (1.0 + std::abs(r.value)))
    throw NumericError("green_halfplane: imaginary part " + std::to_string(r.imag) + " too large",
                       r.value, true);
  return r.value;
}

double green_lattice(std::int64_t z, const LatticePoint& y, const CfModel& model,
                     const QuadratureSpec& spec) {
  const double ratio = y.v2 == 0 ? 1.0 : 1.5;
  return ratio * green_halfplane(z, y, model, spec) / (2.0 * kPi);
}

GreenTable embedded_green_table(const std::vector<std::int64_t>& xs,
                                const std::vector<std::int64_t>& ys, const CfModel& model,
                                const QuadratureSpec& spec, GreenNormalization norm) {
  GreenTable table;
  table.normalization = norm;
  for (std::int64_t x : xs)
    for (std::int64_t y : ys)
      table.entries.push_back({{x, 0}, {y, 0}, green_embedded(x, y, model, spec, norm)});
  return table;
}

double ProbabilityTable::total() const {
  double s = tail_bound;
  for (double m : masses) s += m;
  return s;
}

double ProbabilityTable::mass_at(std::int64_t v) const {
  if (support.empty()) return 0.0;
  if (support.size() == 1) return support[0] == v ? masses[0] : 0.0;
  const std::int64_t step = support[1] - support[0];
  if (step == 1 || step == -1) {
    const std::int64_t k = (v - support[0]) * step;
    if (k < 0 || k >= static_cast<std::int64_t>(support.size())) return 0.0;
    return masses[static_cast<std::size_t>(k)];
  }
  for (std::size_t i = 0; i < support.size(); ++i)
    if (support[i] == v) return masses[i];
  return 0.0;
}

ProbabilityTable hitting_distribution(const LatticePoint& y, double p, double tail_tol,
                                      const HittingOptions& opts) {
  check_p(p);
  if (!(tail_tol > 0.0)) throw ValidationError("tail_tol must be positive");
  ProbabilityTable out;
  if (y.v2 == 0) {
    out.support = {y.v1};
    out.masses = {1.0};
    return out;
  }
  const std::int64_t h = std::abs(y.v2);
  const std::int64_t dir = y.v2 > 0 ? 1 : -1;
  std::int64_t window = 1;
  while (window < opts.min_window) window *= 2;

  Eigen::FFT<double> fft;
  for (;; window *= 2) {
    if (window > opts.max_window)
      throw NumericError("hitting_distribution: support window would exceed " +
                         std::to_string(opts.max_window) + " before the tail drops below tail_tol");
    const std::int64_t n = 4 * window;
    const double nd = static_cast<double>(n);
    const double rho = std::pow(opts.damping, 1.0 / nd);
    std::vector<std::complex<double>> values(static_cast<std::size_t>(n)), spectrum;
    std::complex<double> cdf_sum = 0.0;
    const std::int64_t edge = window - 1;
    for (std::int64_t j = 0; j < n; ++j) {
      const double theta = 2.0 * kPi * static_cast<double>(j) / nd;
      const std::complex<double> z = std::polar(rho, theta);
      // 1 - z = (1 - rho) + rho (1 - e^{i theta})
      const std::complex<double> one_minus_z = (1.0 - rho) + rho * detail::one_minus_expit(theta);
      const std::complex<double> w = detail::level_root(z, one_minus_z, p);
      const std::complex<double> g = geom_pgf(z, p) / (1.0 + w);
      std::complex<double> gh(1.0);
      for (std::int64_t k = 0; k < h; ++k) gh *= g;
      values[static_cast<std::size_t>(j)] = gh;
      // coefficient `edge` of G(z) / (1 - z): multiply by e^{-i theta edge}
      const double phase = -2.0 * kPi * static_cast<double>((j * edge) % n) / nd;
      cdf_sum += gh / one_minus_z * std::polar(1.0, phase);
    }
    fft.fwd(spectrum, values);
    std::vector<double> masses(static_cast<std::size_t>(window));
    for (std::int64_t k = 0; k < window; ++k) {
      const double scale = std::pow(rho, -static_cast<double>(k)) / nd;
      double m = spectrum[static_cast<std::size_t>(k)].real() * scale;
      if (m < -1e-8)
        throw NumericError("hitting_distribution: mass " + std::to_string(m) + " at offset " +
                           std::to_string(k) + " is below -1e-8");
      if (m < 0.0) m = 0.0;
      masses[static_cast<std::size_t>(k)] = m;
    }
    const double cdf = cdf_sum.real() * std::pow(rho, -static_cast<double>(edge)) / nd;
    const double tail = std::max(0.0, 1.0 - cdf);
    if (tail < tail_tol) {
      out.support.resize(static_cast<std::size_t>(window));
      for (std::int64_t k = 0; k < window; ++k) out.support[static_cast<std::size_t>(k)] = y.v1 + dir * k;
      out.masses = std::move(masses);
      out.tail_bound = tail;
      return out;
    }
  }
}

namespace {

double column_factor(double c, MuVariant variant) {
  return variant == MuVariant::published ? death_chain_pgf(c, 1) : 1.0 / (3.0 - 2.0 * c);
}

double column_power(double c, std::int64_t n, MuVariant variant) {
  if (variant == MuVariant::published) return death_chain_pgf(c, n);
  const double f = column_factor(c, variant);
  double out = 1.0;
  for (std::int64_t k = 0; k < n; ++k) out *= f;
  return out;
}

void check_mu_args(std::int64_t u, const LatticePoint& x, std::int64_t y1) {
  if (y1 <= x.v1) throw ValidationError("mu_x needs y1 > x1");
  if (x.v2 < 0) throw ValidationError("mu_x needs x2 >= 0");
  if (u < 0) throw ValidationError("mu_x needs u >= 0");
}

}  // namespace

double mu_x(std::int64_t u, const LatticePoint& x, std::int64_t y1, const QuadratureSpec& spec,
            MuVariant variant) {
  spec.validate();
  check_mu_args(u, x, y1);
  if (x.v2 == 0 || u == 0) return 0.0;
  const std::int64_t n = y1 - x.v1;
  const double a = static_cast<double>(x.v2), b = static_cast<double>(u);
  auto f = [&](double t) {
    return column_power(std::cos(t), n, variant) * std::sin(t * a) * std::sin(t * b);
  };
  const auto r = adaptive_gauss<double>(f, 0.0, kPi, initial_panels(spec.nodes_regular, (a + b) * kPi),
                                        spec.abs_tol, spec.rel_tol, spec.max_panels, "mu_x");
  return 2.0 / kPi * r.value;
}

std::complex<double> mu_x_complex(std::int64_t u, const LatticePoint& x, std::int64_t y1,
                                  const QuadratureSpec& spec, MuVariant variant) {
  spec.validate();
  check_mu_args(u, x, y1);
  const std::int64_t n = y1 - x.v1;
  const double a = static_cast<double>(x.v2), b = static_cast<double>(u);
  auto f = [&](double t) {
    return column_power(std::cos(t), n, variant) * std::complex<double>(0.0, 2.0 * std::sin(t * a)) *
           std::polar(1.0, -t * b);
  };
  const auto r = adaptive_gauss<std::complex<double>>(
      f, -kPi, kPi, initial_panels(2 * spec.nodes_regular, (a + b) * 2 * kPi), spec.abs_tol,
      spec.rel_tol, spec.max_panels, "mu_x_complex");
  return r.value / (2.0 * kPi);
}

}  // namespace owk
