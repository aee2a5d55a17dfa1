#include "owk/quadrature.hpp"

#include <numbers>

namespace owk {

void QuadratureSpec::validate() const {
  if (!(split > 0.0 && split < std::numbers::pi)) throw ValidationError("split must lie in (0, pi)");
  if (nodes_singular < 16 || nodes_regular < 16) throw ValidationError("node counts must be >= 16");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ValidationError("tolerances must be positive");
  if (max_panels < 2) throw ValidationError("max_panels must be >= 2");
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw ValidationError("gauss_legendre needs n >= 1");
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  return r;
}

const GaussRule& panel_rule() {
  static const GaussRule rule = gauss_legendre(kPanelOrder);
  return rule;
}

}  // namespace owk
