#pragma once

// Fourier integrals of the half-plane walk: gamma, the embedded Green
// function, the half-plane integral, and the inversions for the hitting law
// of the axis and the height law at a column.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "owk/analytic.hpp"
#include "owk/lattice.hpp"
#include "owk/quadrature.hpp"

namespace owk {

// gamma(x) = int_0^pi cos(x t) / (1 - phi(t)) dt
double gamma(std::int64_t x, const CfModel& model, const QuadratureSpec& spec);

// Same integral with a plain composite rule on [delta, pi] and the bound
// c * 2 sqrt(delta) for [0, delta]; no substitution. Slow reference.
struct BruteForceGamma {
  double value = 0.0;   // regular part plus the head estimate c * 2 sqrt(delta)
  double head_bound = 0.0;
};
BruteForceGamma gamma_brute_force(std::int64_t x, const CfModel& model, double delta, std::int64_t panels);

enum class GreenNormalization {
  raw,         // gamma itself, or the bare half-plane integral
  inverse_pi,  // gamma / pi: expected visits of the embedded chain
  lattice,     // expected visits of the lattice walk (half-plane integral / 2 pi times d(y)/d(z))
};

// Expected visits of the embedded chain: gamma(y - x) / pi, or raw gamma.
double green_embedded(std::int64_t x, std::int64_t y, const CfModel& model, const QuadratureSpec& spec,
                      GreenNormalization norm = GreenNormalization::inverse_pi);

struct HalfPlaneIntegral {
  double value = 0.0;  // real part
  double imag = 0.0;   // diagnostic, should vanish
  std::int64_t panels = 0;
};

// I(z, y) = int_{-pi}^{pi} e^{it(y1 - z)} D(t, -y2) / (1 - phi(t)) dt, where
// D(t, h) = displacement_cf(t, h, p). The target's orientation enters through
// the sign of y2: time reversal of the walk from y to the axis flips the
// horizontal direction, hence D(t, -y2). Folded onto [0, pi] by evaluating
// the integrand at t and -t separately; the imaginary part is a check.
HalfPlaneIntegral green_halfplane_detail(std::int64_t z, const LatticePoint& y, const CfModel& model,
                                         const QuadratureSpec& spec);

// Real part of I(z, y); throws NumericError if |imag| > 1e-8 (1 + |value|).
double green_halfplane(std::int64_t z, const LatticePoint& y, const CfModel& model,
                       const QuadratureSpec& spec);

// Lattice Green function G((z, 0), y) = (d(y) / d(z)) I(z, y) / (2 pi), with
// out-degrees d = 3 off the axis and 2 on it. Degree is an invariant measure
// of the half-plane walk, which gives the reversal factor.
// Meaningful for CfModel::half_plane_walk().
double green_lattice(std::int64_t z, const LatticePoint& y, const CfModel& model,
                     const QuadratureSpec& spec);

// Generic folded integral int_{-pi}^{pi} e^{i m t} W(t) / (1 - phi(t)) dt for
// a weight W with W(-t) = conj(W(t)). omega and depth size the initial panel
// count (oscillation frequency and the |g|^depth decay).
HalfPlaneIntegral axis_fourier_integral(std::int64_t m,
                                        const std::function<std::complex<double>(double)>& weight,
                                        const CfModel& model, const QuadratureSpec& spec,
                                        double depth);

struct GreenEntry {
  LatticePoint x;
  LatticePoint y;
  double value = 0.0;
};

struct GreenTable {
  GreenNormalization normalization = GreenNormalization::inverse_pi;
  std::vector<GreenEntry> entries;
};

// Embedded Green values for all pairs (x, y) of axis points.
GreenTable embedded_green_table(const std::vector<std::int64_t>& xs,
                                const std::vector<std::int64_t>& ys, const CfModel& model,
                                const QuadratureSpec& spec,
                                GreenNormalization norm = GreenNormalization::inverse_pi);

struct ProbabilityTable {
  std::vector<std::int64_t> support;
  std::vector<double> masses;
  double tail_bound = 0.0;  // mass outside the support

  double total() const;
  double mass_at(std::int64_t v) const;  // 0 outside the support
};

struct HittingOptions {
  std::int64_t min_window = 1024;
  std::int64_t max_window = 1000000;
  double damping = 1e-12;  // rho^N
};

// Law of the first axis point reached from y. Support is y1 + [0, W) for
// y2 > 0 and y1 - [0, W) for y2 < 0. The masses come from the damped DFT of
// level_pgf on N = 4W points; tail_bound is 1 minus the CDF at the window
// edge, extracted separately as a single coefficient of G(z)/(1 - z).
ProbabilityTable hitting_distribution(const LatticePoint& y, double p, double tail_tol,
                                      const HittingOptions& opts = {});

enum class MuVariant {
  published,  // per-column factor F(c) = c / (3 - 2c)
  lattice,    // per-column factor 1 / (3 - 2c)
};

// Height law at the first visit to column y1 from x, killed at the axis:
//   mu(u) = (1/2pi) int F(cos t)^n 2i sin(t x2) e^{-itu} dt,  n = y1 - x1.
// F(cos t)^n is even in t, sin(t x2) odd, so only the odd part of e^{-itu}
// survives: e^{-itu} -> -i sin(tu), and 2i * (-i) = 2. Folding [-pi, 0] onto
// [0, pi] doubles once more:
//   mu(u) = (2/pi) int_0^pi F(cos t)^n sin(t x2) sin(t u) dt.
double mu_x(std::int64_t u, const LatticePoint& x, std::int64_t y1, const QuadratureSpec& spec,
            MuVariant variant = MuVariant::lattice);

// The same integral taken over [-pi, pi] in complex arithmetic, without the
// reduction. Returns (real, imag).
std::complex<double> mu_x_complex(std::int64_t u, const LatticePoint& x, std::int64_t y1,
                                  const QuadratureSpec& spec, MuVariant variant = MuVariant::lattice);

}  // namespace owk
