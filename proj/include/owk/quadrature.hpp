#pragma once

// Composite Gauss-Legendre quadrature with panel doubling.

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "owk/errors.hpp"

namespace owk {

struct QuadratureSpec {
  double split = 0.25;        // [0, split] is integrated in u with t = u^2
  int nodes_singular = 128;   // initial node count on the singular range
  int nodes_regular = 256;    // initial node count on [split, pi]
  double abs_tol = 1e-11;
  double rel_tol = 1e-9;
  int max_panels = 1 << 17;   // per range

  void validate() const;
};

struct GaussRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// n-point rule by Newton iteration on P_n. Cached for the panel order used here.
GaussRule gauss_legendre(int n);
const GaussRule& panel_rule();  // 16 points
constexpr int kPanelOrder = 16;

template <typename T>
double magnitude(const T& v) {
  return std::abs(v);
}

template <typename T, typename F>
T composite_gauss(F&& f, double a, double b, std::int64_t panels) {
  const GaussRule& g = panel_rule();
  const double h = (b - a) / static_cast<double>(panels);
  T total{};
  for (std::int64_t k = 0; k < panels; ++k) {
    const double lo = a + h * static_cast<double>(k);
    const double mid = lo + h / 2;
    T part{};
    for (int i = 0; i < kPanelOrder; ++i) part += g.w[i] * f(mid + h / 2 * g.x[i]);
    total += part * (h / 2);
  }
  return total;
}

template <typename T>
struct RangeIntegral {
  T value{};
  double error = 0.0;
  std::int64_t panels = 0;
};

// Doubles the panel count from `panels` until two successive values differ by
// at most max(abs_tol, rel_tol |I|); past max_panels it throws NumericError
// carrying the last value.
template <typename T, typename F>
RangeIntegral<T> adaptive_gauss(F&& f, double a, double b, std::int64_t panels, double abs_tol,
                                double rel_tol, std::int64_t max_panels, const std::string& what) {
  if (panels < 1) panels = 1;
  T coarse = composite_gauss<T>(f, a, b, panels);
  for (;;) {
    const std::int64_t fine_panels = 2 * panels;
    if (fine_panels > max_panels) {
      double partial = 0.0;
      if constexpr (std::is_same_v<T, double>) partial = coarse;
      else partial = std::real(coarse);
      throw NumericError(what + ": panel budget exhausted", partial, true);
    }
    const T fine = composite_gauss<T>(f, a, b, fine_panels);
    const double err = magnitude(fine - coarse);
    if (err <= std::max(abs_tol, rel_tol * magnitude(fine))) return {fine, err, fine_panels};
    coarse = fine;
    panels = fine_panels;
  }
}

}  // namespace owk
