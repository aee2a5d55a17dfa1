#pragma once

// Characteristic and generating functions of the half-plane walk.
//
//   r(t)  = p / (1 - q e^{it})           geometric run length
//   g(z)  = (1 - sqrt(1 - z^2)) / z      first return of a lazy vertical walk
//   phi(t) = Re[g(r(t)) / r(t)]          horizontal jump between axis visits
//
// With w = sqrt(1 - r^2) (principal branch, Re w >= 0) one has
// g(r) = r / (1 + w) and g(r)/r = 1 / (1 + w), which is how everything below
// is evaluated: 1 - r and 1 + r are formed without cancellation, so the
// square-root singularity of 1/(1 - phi) at t = 0 keeps full relative accuracy.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "owk/errors.hpp"

namespace owk {

template <typename Scalar>
void check_p(Scalar p) {
  if (!(p > Scalar(0) && p < Scalar(1))) throw ValidationError("p must lie in (0, 1)");
}

template <typename Scalar>
std::complex<Scalar> geom_cf(Scalar t, Scalar p) {
  check_p(p);
  const Scalar q = Scalar(1) - p;
  return p / (Scalar(1) - q * std::polar(Scalar(1), t));
}

// p / (1 - q z) for complex z, |z| <= 1.
template <typename Scalar>
std::complex<Scalar> geom_pgf(std::complex<Scalar> z, Scalar p) {
  check_p(p);
  return p / (Scalar(1) - (Scalar(1) - p) * z);
}

template <typename Scalar>
std::complex<Scalar> first_return_pgf(std::complex<Scalar> z) {
  const Scalar one(1);
  const std::complex<Scalar> w = std::sqrt((one - z) * (one + z));
  // Principal sqrt has Re w >= 0, so |1 + w| >= 1 and this root has |g| <= |z|.
  const std::complex<Scalar> g = z / (one + w);
  if (std::abs(g) > one + Scalar(1e-10)) throw NumericError("first_return_pgf: no root with |g| <= 1");
  return g;
}

namespace detail {

// sqrt(1 - R^2) for R = p / (1 - q z), from 1 - R = q(1 - z)/(1 - q z) and
// 1 + R = (1 + p - q z)/(1 - q z). one_minus_z is passed separately so callers
// on the unit circle can supply it without cancellation.
template <typename Scalar>
std::complex<Scalar> level_root(std::complex<Scalar> z, std::complex<Scalar> one_minus_z, Scalar p) {
  const Scalar q = Scalar(1) - p;
  const std::complex<Scalar> den = Scalar(1) - q * z;
  const std::complex<Scalar> s = q * one_minus_z * (Scalar(1) + p - q * z) / (den * den);
  return std::sqrt(s);
}

// 1 - e^{it} = -2i sin(t/2) e^{it/2}
template <typename Scalar>
std::complex<Scalar> one_minus_expit(Scalar t) {
  return std::complex<Scalar>(0, -2) * std::sin(t / 2) * std::polar(Scalar(1), t / 2);
}

template <typename Scalar>
std::complex<Scalar> circle_root(Scalar t, Scalar p) {
  return level_root(std::polar(Scalar(1), t), one_minus_expit(t), p);
}

}  // namespace detail

// g(r(t)), the characteristic function of the horizontal displacement of one
// level of the vertical walk.
template <typename Scalar>
std::complex<Scalar> level_step_cf(Scalar t, Scalar p) {
  check_p(p);
  const std::complex<Scalar> w = detail::circle_root(t, p);
  return geom_cf(t, p) / (Scalar(1) + w);
}

template <typename Scalar>
Scalar embedded_cf(Scalar t, Scalar p) {
  check_p(p);
  const std::complex<Scalar> w = detail::circle_root(t, p);
  return std::real(Scalar(1) / (Scalar(1) + w));
}

// 1 - phi(t) = Re[w / (1 + w)], accurate near t = 0.
template <typename Scalar>
Scalar one_minus_embedded_cf(Scalar t, Scalar p) {
  check_p(p);
  const std::complex<Scalar> w = detail::circle_root(t, p);
  return std::real(w / (Scalar(1) + w));
}

// Two forms of the axis-to-axis characteristic function.
//   published: phi(t) = Re[g(r(t)) / r(t)]
//   lattice:   phi(t) = Re[g(r(t))], the law of the displacement of one
//              excursion of the half-plane walk (leave the axis vertically,
//              then a geometric run on every row visited before returning).
// With p = 2/3 the lattice form is what the half-plane walk produces, and it
// is consistent with level_cf: phi = Re level_cf(t, 1).
enum class CfForm { published, lattice };

struct CfModel {
  double p = 1.0 / 3.0;
  CfForm form = CfForm::published;

  CfModel() = default;
  CfModel(double p_, CfForm form_ = CfForm::published) : p(p_), form(form_) {}  // NOLINT

  // The half-plane walk itself: runs stop with probability 2/3.
  static CfModel half_plane_walk() { return {2.0 / 3.0, CfForm::lattice}; }
};

template <typename Scalar>
Scalar axis_cf(Scalar t, Scalar p, CfForm form) {
  if (form == CfForm::published) return embedded_cf(t, p);
  return std::real(level_step_cf(t, p));
}

// 1 - phi for either form, without cancellation near t = 0. For the lattice
// form 1 - Re[r/(1 + w)] = Re[(w + (1 - r))/(1 + w)].
template <typename Scalar>
Scalar one_minus_axis_cf(Scalar t, Scalar p, CfForm form) {
  if (form == CfForm::published) return one_minus_embedded_cf(t, p);
  check_p(p);
  const Scalar q = Scalar(1) - p;
  const std::complex<Scalar> w = detail::circle_root(t, p);
  const std::complex<Scalar> one_minus_r =
      q * detail::one_minus_expit(t) / (Scalar(1) - q * std::polar(Scalar(1), t));
  return std::real((w + one_minus_r) / (Scalar(1) + w));
}

inline double axis_cf(double t, const CfModel& m) { return axis_cf(t, m.p, m.form); }
inline double one_minus_axis_cf(double t, const CfModel& m) { return one_minus_axis_cf(t, m.p, m.form); }

enum class ClosedFormVariant {
  as_published,  // modulus term uses |z|, as printed
  corrected,     // modulus term uses |z|/p, from expanding Re[(z/p)^2 - (z/p) sqrt(z^2/p^2 - 1)]
};

// Explicit modulus/arctan expansion of phi. Here z = 1 - q e^{it}, so
// 1/r = z/p, and phi = Re[(z/p)^2 - (z/p) sqrt((z/p - 1)(z/p + 1))]. The
// square root is expanded as |.|^{1/2} times cos/sin of half the summed
// arguments; every real part inside the arctans is >= 0, so atan gives the
// principal argument. Not defined at t = 0.
template <typename Scalar>
Scalar embedded_cf_closed(Scalar t, Scalar p,
                          ClosedFormVariant variant = ClosedFormVariant::as_published) {
  check_p(p);
  using std::atan;
  using std::cos;
  using std::pow;
  using std::sin;
  using std::sqrt;
  if (t == Scalar(0)) throw ValidationError("embedded_cf_closed is undefined at t = 0; the limit is 1");
  const Scalar q = Scalar(1) - p;
  const Scalar c = cos(t), s = sin(t), c2 = cos(2 * t);
  const Scalar sgn = t > 0 ? Scalar(1) : Scalar(-1);

  // Re(z^2)/p^2 with z = 1 - q e^{it}
  const Scalar re_z2 = (Scalar(1) - 2 * q * c + q * q * c2) / (p * p);
  const Scalar mod_z = sqrt(Scalar(1) - 2 * q * c + q * q);
  // |z/p - 1| = (q/p) sqrt(2 - 2 cos t),  |z/p + 1| = sqrt((1 + p)^2 - 2(1 + p) q cos t + q^2) / p
  const Scalar mod_minus = (q / p) * sqrt(2 * (Scalar(1) - c));
  const Scalar mod_plus = sqrt((1 + p) * (1 + p) - 2 * (1 + p) * q * c + q * q) / p;
  // Arguments: z has arg atan(-q sin t / (1 - q cos t));
  // z/p - 1 = (q/p)(1 - e^{it}) has arg -sgn(t) pi/2 + t/2;
  // z/p + 1 = (1 + p - q e^{it})/p has arg atan(-q sin t / (1 + p - q cos t)).
  const Scalar pi = Scalar(3.14159265358979323846264338327950288L);
  const Scalar arg_z = atan(-q * s / (Scalar(1) - q * c));
  const Scalar arg_minus = -sgn * pi / 2 + t / 2;
  const Scalar arg_plus = atan(-q * s / (Scalar(1) + p - q * c));

  const Scalar modulus = variant == ClosedFormVariant::as_published ? mod_z : mod_z / p;
  return re_z2 - modulus * sqrt(mod_minus) * sqrt(mod_plus) * cos(arg_z + (arg_minus + arg_plus) / 2);
}

// The expression printed for p = 1/3, transcribed term by term:
// (9 - 12 cos t + 4 cos 2t) - sqrt(13 - 12 cos t)/3 * 8^{1/4} (1 - cos t)^{1/4}
//   * 4^{1/4} (5 - 4 cos t)^{1/4} * cos[atan(-2 sin t/(3 - 2 cos t))
//   + (1/2)(atan(-2 sin t/(2 - 2 cos t)) + atan(-2 sin t/(4 - 2 cos t)))]
// The middle arctan is -sgn(t) pi/2 + t/2 in closed form.
template <typename Scalar>
Scalar printed_phi_third(Scalar t) {
  using std::atan;
  using std::cos;
  using std::pow;
  using std::sin;
  using std::sqrt;
  const Scalar c = cos(t), s = sin(t);
  const Scalar first = 9 - 12 * c + 4 * cos(2 * t);
  const Scalar amp = sqrt(13 - 12 * c) / 3 * pow(Scalar(8), Scalar(0.25)) *
                     pow(1 - c, Scalar(0.25)) * pow(Scalar(4), Scalar(0.25)) *
                     pow(5 - 4 * c, Scalar(0.25));
  const Scalar angle = atan(-2 * s / (3 - 2 * c)) +
                       (atan(-2 * s / (2 - 2 * c)) + atan(-2 * s / (4 - 2 * c))) / 2;
  return first - amp * cos(angle);
}

// g(r(t))^{|y2|}, by repeated multiplication so that
// level_cf(t, n + 1) == level_cf(t, n) * g(r(t)) holds exactly.
template <typename Scalar>
std::complex<Scalar> level_cf(Scalar t, std::int64_t y2, Scalar p) {
  const std::complex<Scalar> g = level_step_cf(t, p);
  std::complex<Scalar> out(1);
  const std::int64_t n = y2 < 0 ? -y2 : y2;
  for (std::int64_t k = 0; k < n; ++k) out *= g;
  return out;
}

// Characteristic function of the signed horizontal displacement accumulated
// before the first visit to the axis from height h on the half-plane lattice.
// Rows above the axis move right, rows below move left, so for h < 0 this is
// the complex conjugate of level_cf.
template <typename Scalar>
std::complex<Scalar> displacement_cf(Scalar t, std::int64_t h, Scalar p) {
  const std::complex<Scalar> v = level_cf(t, h, p);
  return h >= 0 ? v : std::conj(v);
}

// Generating function E[z^S] of the unsigned displacement from height |h|,
// i.e. g(p / (1 - q z))^{|h|}, for |z| < 1.
template <typename Scalar>
std::complex<Scalar> level_pgf(std::complex<Scalar> z, std::int64_t h, Scalar p) {
  check_p(p);
  const std::complex<Scalar> w = detail::level_root(z, Scalar(1) - z, p);
  const std::complex<Scalar> g = geom_pgf(z, p) / (Scalar(1) + w);
  std::complex<Scalar> out(1);
  const std::int64_t n = h < 0 ? -h : h;
  for (std::int64_t k = 0; k < n; ++k) out *= g;
  return out;
}

// E^h(x^T) for the chain that stays with probability 2/3 and steps down with
// probability 1/3: (x / (3 - 2x))^h.
template <typename Scalar>
Scalar death_chain_pgf(Scalar x, std::int64_t h) {
  if (h < 0) throw ValidationError("death_chain_pgf needs h >= 0");
  if (!(x >= Scalar(0) || x < Scalar(0))) throw ValidationError("death_chain_pgf: x is NaN");
  if (x >= Scalar(1.5)) throw ValidationError("death_chain_pgf: x must be below 3/2");
  const Scalar f = x / (Scalar(3) - 2 * x);
  Scalar out(1);
  for (std::int64_t k = 0; k < h; ++k) out *= f;
  return out;
}

struct SingularityEstimate {
  double c = 0.0;        // 1/(1 - phi(t)) ~ c / sqrt(|t|)
  double c_prime = 0.0;  // sqrt(x) gamma(x) -> c sqrt(pi / 2)
  double residual_slope = 0.0;
  std::vector<double> t;                         // grid
  std::vector<double> samples;                   // sqrt(t) / (1 - phi(t))
  std::vector<std::vector<double>> richardson;   // columns 0..3
  double spread = 0.0;  // relative spread of the last three extrapolated values
};

// Richardson extrapolation of sqrt(t)/(1 - phi(t)) over t_k = pi 2^{-k},
// k = 4..40, eliminating powers sqrt(t), t, t^{3/2}.
SingularityEstimate extract_singularity(double p, CfForm form = CfForm::published);

struct ClosedFormReport {
  double p = 0.0;
  int points = 0;
  double max_diff_published = 0.0;
  double argmax_published = 0.0;
  double max_diff_corrected = 0.0;
  double max_diff_printed_third = 0.0;  // only for p = 1/3
  bool published_agrees = false;
  bool corrected_agrees = false;
  // Ratio (phi_closed - Re z^2/p^2) / (phi - Re z^2/p^2) at the worst point;
  // a constant p here means the modulus factor is off by 1/p.
  double modulus_ratio = 0.0;
};

// Compares embedded_cf with both closed-form variants on t_j = pi j / n, j = 1..n.
ClosedFormReport compare_closed_form(double p, int n, double tol = 1e-9);

}  // namespace owk
