#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "owk/analytic.hpp"

using namespace owk;
using std::numbers::pi;

namespace {

// c_k = (1/N) sum_j f(2 pi j / N) e^{-i k t_j}; aliasing error is the
// coefficient mass beyond N.
template <typename F>
std::vector<std::complex<double>> dft_coefficients(F&& f, int n, int kmax) {
  std::vector<std::complex<double>> vals(n);
  for (int j = 0; j < n; ++j) vals[j] = f(2 * pi * j / n);
  std::vector<std::complex<double>> out;
  for (int k = -kmax; k <= kmax; ++k) {
    std::complex<double> s = 0;
    for (int j = 0; j < n; ++j) s += vals[j] * std::polar(1.0, -2 * pi * j * k / n);
    out.push_back(s / double(n));
  }
  return out;
}

}  // namespace

TEST_SUITE("analytic") {
  TEST_CASE("geom_cf values") {
    CHECK(std::abs(geom_cf(0.0, 0.3) - 1.0) < 1e-15);
    CHECK(std::abs(geom_cf(pi, 1.0 / 3.0) - 0.2) < 1e-15);
    CHECK_THROWS_AS(geom_cf(0.1, 0.0), ValidationError);
    CHECK_THROWS_AS(geom_cf(0.1, 1.0), ValidationError);
  }

  TEST_CASE("Fourier coefficients of geom_cf are p q^k") {
    const double p = 0.4, q = 0.6;
    const int kmax = 20;
    const auto c = dft_coefficients([&](double t) { return geom_cf(t, p); }, 256, kmax);
    for (int k = -kmax; k <= kmax; ++k) {
      const double expect = k >= 0 ? p * std::pow(q, k) : 0.0;
      CHECK(std::abs(c[k + kmax] - expect) < 1e-12);
    }
  }

  TEST_CASE("first_return_pgf values") {
    CHECK(std::abs(first_return_pgf(std::complex<double>(1.0)) - 1.0) < 1e-15);
    CHECK(std::abs(first_return_pgf(std::complex<double>(0.5)) - (2.0 - std::sqrt(3.0))) < 1e-15);
    CHECK(std::abs(first_return_pgf(std::complex<double>(0.5)) - 0.2679491924) < 1e-10);
    // g solves z g^2 - 2 g + z = 0
    for (const auto z : {std::complex<double>(0.3, 0.4), std::complex<double>(-0.7, 0.1), std::polar(1.0, 2.0)}) {
      const auto g = first_return_pgf(z);
      CHECK(std::abs(z * g * g - 2.0 * g + z) < 1e-14);
      CHECK(std::abs(g) <= 1.0 + 1e-12);
    }
  }

  TEST_CASE("embedded_cf values") {
    CHECK(embedded_cf(0.0, 1.0 / 3.0) == doctest::Approx(1.0).epsilon(1e-15));
    const double oracle = 1.0 / (1.0 + std::sqrt(0.96));  // g(1/5) / (1/5)
    CHECK(std::abs(embedded_cf(pi, 1.0 / 3.0) - oracle) < 1e-15);
    CHECK(std::abs(embedded_cf(pi, 1.0 / 3.0) - 0.5051025722) < 1e-10);
    // Against the plain composition Re[g(r)/r].
    for (double t : {0.3, 1.0, 2.5, -1.7}) {
      const auto r = geom_cf(t, 1.0 / 3.0);
      CHECK(std::abs(embedded_cf(t, 1.0 / 3.0) - std::real(first_return_pgf(r) / r)) < 1e-14);
    }
  }

  TEST_CASE("embedded_cf is a symmetric characteristic function") {
    for (double p : {1.0 / 3.0, 2.0 / 3.0, 0.1}) {
      for (int j = 0; j <= 400; ++j) {
        const double t = pi * j / 400;
        const double v = embedded_cf(t, p);
        REQUIRE(std::abs(v) <= 1.0 + 1e-15);
        REQUIRE(v == embedded_cf(-t, p));
        REQUIRE(std::abs((1 - v) - one_minus_embedded_cf(t, p)) < 1e-14);
      }
    }
  }

  TEST_CASE("inverse Fourier coefficients of phi are nonnegative") {
    for (CfForm form : {CfForm::published, CfForm::lattice}) {
      const int n = 4096;
      std::vector<double> vals(n);
      for (int j = 0; j < n; ++j) vals[j] = axis_cf(2 * pi * j / n, 1.0 / 3.0, form);
      double total = 0, worst = 0;
      for (int k = 0; k < 64; ++k) {
        double s = 0;
        for (int j = 0; j < n; ++j) s += vals[j] * std::cos(2 * pi * double(j) * k / n);
        s /= n;
        worst = std::min(worst, s);
        total += k ? 2 * s : s;
      }
      CHECK(worst >= -1e-8);
      CHECK(total <= 1.0 + 1e-8);
    }
  }

  TEST_CASE("lattice form is Re level_cf at height 1") {
    for (double t : {0.01, 0.5, 2.0, pi}) {
      CHECK(axis_cf(t, 2.0 / 3.0, CfForm::lattice) == std::real(level_cf(t, 1, 2.0 / 3.0)));
      CHECK(std::abs(1 - axis_cf(t, CfModel::half_plane_walk()) - one_minus_axis_cf(t, CfModel::half_plane_walk())) <
            1e-14);
    }
    // Relative accuracy of 1 - phi near 0: it behaves like c sqrt(t).
    const double a = one_minus_axis_cf(1e-20, 2.0 / 3.0, CfForm::lattice);
    const double b = one_minus_axis_cf(4e-20, 2.0 / 3.0, CfForm::lattice);
    CHECK(b / a == doctest::Approx(2.0).epsilon(1e-6));
  }

  TEST_CASE("closed form against the direct evaluation") {
    const double p = 1.0 / 3.0;
    for (int j = 1; j <= 200; ++j) {
      const double t = pi * j / 200;
      REQUIRE(std::abs(embedded_cf_closed(t, p, ClosedFormVariant::corrected) - embedded_cf(t, p)) < 1e-9);
      REQUIRE(std::abs(embedded_cf_closed(-t, p, ClosedFormVariant::corrected) - embedded_cf(t, p)) < 1e-9);
      REQUIRE(std::abs(printed_phi_third(t) - embedded_cf_closed(t, p)) < 1e-9);
    }
    CHECK(embedded_cf_closed(1e-9, p, ClosedFormVariant::corrected) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK_THROWS_AS(embedded_cf_closed(0.0, p), ValidationError);
  }

  TEST_CASE("closed-form discrepancy report") {
    const auto r = compare_closed_form(1.0 / 3.0, 512);
    CHECK(r.corrected_agrees);
    CHECK_FALSE(r.published_agrees);
    CHECK(r.max_diff_corrected < 1e-9);
    CHECK(r.max_diff_printed_third == doctest::Approx(r.max_diff_published).epsilon(1e-9));
    CHECK(r.modulus_ratio == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK_THROWS_AS(compare_closed_form(0.5, 0), ValidationError);
  }

  TEST_CASE("level_cf") {
    const double p = 1.0 / 3.0;
    for (double t : {-2.0, 0.3, 1.0}) {
      CHECK(level_cf(t, 0, p) == std::complex<double>(1.0));
      CHECK(level_cf(t, 4, p) == level_cf(t, -4, p));
      for (int n = 0; n < 6; ++n) CHECK(level_cf(t, n + 1, p) == level_cf(t, n, p) * level_step_cf(t, p));
      CHECK(displacement_cf(t, -3, p) == std::conj(displacement_cf(t, 3, p)));
    }
    CHECK(std::abs(level_cf(0.0, 7, p) - 1.0) < 1e-14);
  }

  TEST_CASE("level_pgf") {
    const double p = 2.0 / 3.0;
    for (double t : {0.4, 1.5}) {
      const auto z = std::polar(1.0 - 1e-12, t);
      CHECK(std::abs(level_pgf(z, 3, p) - level_cf(t, 3, p)) < 1e-6);
    }
    const double g = (1.0 - std::sqrt(1.0 - p * p)) / p;
    CHECK(std::abs(level_pgf(std::complex<double>(0.0), 2, p) - g * g) < 1e-15);
    CHECK(std::abs(level_pgf(std::complex<double>(0.5), 0, p) - 1.0) < 1e-15);
  }

  TEST_CASE("death_chain_pgf") {
    CHECK(death_chain_pgf(1.0, 5) == 1.0);
    CHECK(death_chain_pgf(0.5, 1) == 0.25);
    CHECK(death_chain_pgf(0.5, 3) == 0.015625);
    CHECK(death_chain_pgf(0.7, 0) == 1.0);
    CHECK_THROWS_AS(death_chain_pgf(1.5, 2), ValidationError);
    CHECK_THROWS_AS(death_chain_pgf(0.5, -1), ValidationError);
  }

  TEST_CASE("extract_singularity") {
    const auto a = extract_singularity(1.0 / 3.0);
    const auto b = extract_singularity(1.0 / 3.0);
    CHECK(a.c > 0.0);
    CHECK(a.spread <= 1e-3);
    CHECK(a.c == b.c);
    CHECK(a.c_prime == b.c_prime);
    CHECK((a.residual_slope == b.residual_slope || (std::isnan(a.residual_slope) && std::isnan(b.residual_slope))));
    CHECK(a.c_prime == doctest::Approx(a.c * std::sqrt(pi / 2)));
    // Direct check at a small t.
    const double t = 1e-10;
    CHECK(std::sqrt(t) / one_minus_embedded_cf(t, 1.0 / 3.0) == doctest::Approx(a.c).epsilon(1e-4));
  }
}
