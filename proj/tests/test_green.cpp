#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "owk/green.hpp"
#include "owk/simulate.hpp"

using namespace owk;

TEST_SUITE("green") {
  TEST_CASE("gamma against the brute-force rule") {
    const QuadratureSpec spec;
    const CfModel m;
    const double g0 = gamma(0, m, spec);
    CHECK(g0 > 0.0);
    CHECK(std::isfinite(g0));
    const auto b = gamma_brute_force(0, m, 1e-6, 1000000);
    CHECK(std::abs(b.value - g0) < 1e-8);
    const auto b5 = gamma_brute_force(5, m, 1e-6, 200000);
    CHECK(std::abs(b5.value - gamma(5, m, spec)) < 1e-7);
  }

  TEST_CASE("gamma is even") {
    const QuadratureSpec spec;
    for (const auto& m : {CfModel(), CfModel::half_plane_walk()})
      for (std::int64_t x : {1, 5, 50}) CHECK(std::abs(gamma(x, m, spec) - gamma(-x, m, spec)) <= 1e-12);
  }

  TEST_CASE("gamma is stable under node doubling") {
    const CfModel m;
    QuadratureSpec a, b;
    b.nodes_singular *= 2;
    b.nodes_regular *= 2;
    for (std::int64_t x : {0, 7, 300}) {
      const double va = gamma(x, m, a), vb = gamma(x, m, b);
      CHECK(std::abs(va - vb) <= 10 * std::max(a.abs_tol, a.rel_tol * std::abs(vb)));
    }
  }

  TEST_CASE("sqrt(x) gamma(x) settles") {
    const QuadratureSpec spec;
    const CfModel m;
    const double a = std::sqrt(2000.0) * gamma(2000, m, spec);
    const double b = std::sqrt(8000.0) * gamma(8000, m, spec);
    CHECK(std::abs(a / b - 1) < 0.02);
  }

  TEST_CASE("embedded Green function") {
    const QuadratureSpec spec;
    const CfModel m;
    std::mt19937_64 gen(11);
    std::uniform_int_distribution<std::int64_t> d(-200, 200);
    for (int i = 0; i < 20; ++i) {
      const auto x = d(gen), y = d(gen);
      CHECK(std::abs(green_embedded(x, y, m, spec) - green_embedded(0, y - x, m, spec)) <= 1e-12);
    }
    CHECK(green_embedded(0, 0, m, spec) >= 1 - 1e-6);
    CHECK(green_embedded(0, 0, m, spec, GreenNormalization::raw) == doctest::Approx(std::numbers::pi * green_embedded(0, 0, m, spec)));
    const double g2 = green_embedded(0, 100, m, spec), g3 = green_embedded(0, 1000, m, spec),
                 g4 = green_embedded(0, 10000, m, spec);
    CHECK(g2 > g3);
    CHECK(g3 > g4);
    CHECK(g4 > 0.0);

    const auto t = embedded_green_table({0, 1}, {0, 2, 4}, m, spec);
    CHECK(t.entries.size() == 6);
    for (const auto& e : t.entries) CHECK(e.value == green_embedded(e.x.v1, e.y.v1, m, spec));
  }

  TEST_CASE("expected visits to the start, by simulation") {
    // Same streams at every horizon, so the counts can only grow.
    const auto hw = CfModel::half_plane_walk();
    const QuadratureSpec spec;
    const double g = green_lattice(0, {0, 0}, hw, spec);
    CHECK(g == doctest::Approx(green_embedded(0, 0, hw, spec)).epsilon(1e-10));
    double last = 0.0;
    for (std::int64_t h : {100, 1000, 10000}) {
      const auto e = estimate_green({0, 0}, {0, 0}, 20000, h, Orientation::half_plane(), WalkParams{}, {1, 5});
      CHECK(e.value >= last);
      CHECK(e.value >= 1.0);
      CHECK(e.value <= g + 3 * e.std_error);
      last = e.value;
    }
    CHECK(last >= g - 0.05);
  }

  TEST_CASE("half-plane integral") {
    const QuadratureSpec spec;
    const CfModel m;
    for (std::int64_t y1 : {0, 3, 40})
      CHECK(green_halfplane(0, {y1, 0}, m, spec) == doctest::Approx(2 * gamma(y1, m, spec)).epsilon(1e-10));
    const auto d = green_halfplane_detail(1, {3, 2}, m, spec);
    CHECK(std::abs(d.imag) <= 1e-8 * (1 + std::abs(d.value)));
    // Translation along the axis.
    CHECK(green_halfplane(4, {9, 3}, m, spec) == doctest::Approx(green_halfplane(0, {5, 3}, m, spec)).epsilon(1e-10));
  }

  TEST_CASE("|y2| I(0, y) settles along y1 = y2^2") {
    const QuadratureSpec spec;
    const CfModel m;
    double prev = 0.0;
    for (std::int64_t y2 : {20, 40, 80}) {
      const double v = static_cast<double>(y2) * green_halfplane(0, {y2 * y2, y2}, m, spec);
      if (prev != 0.0) CHECK(std::abs(v / prev - 1) < 0.05);
      prev = v;
    }
  }

  TEST_CASE("hitting distribution basics") {
    const auto point = hitting_distribution({7, 0}, 2.0 / 3.0, 1e-3);
    CHECK(point.support == std::vector<std::int64_t>{7});
    CHECK(point.masses == std::vector<double>{1.0});

    const auto a = hitting_distribution({0, 1}, 2.0 / 3.0, 1e-2);
    const auto b = hitting_distribution({5, 1}, 2.0 / 3.0, 1e-2);
    const auto c = hitting_distribution({0, -1}, 2.0 / 3.0, 1e-2);
    REQUIRE(a.masses.size() == b.masses.size());
    for (std::size_t k = 0; k < a.masses.size(); ++k) {
      CHECK(b.support[k] == a.support[k] + 5);
      CHECK(b.masses[k] == a.masses[k]);
      CHECK(c.support[k] == -a.support[k]);
      CHECK(c.masses[k] == a.masses[k]);
      CHECK(a.masses[k] >= 0.0);
    }
    CHECK(std::abs(a.total() - 1) < 1e-8);
    CHECK(a.tail_bound < 1e-2);
    CHECK(a.mass_at(-1) == 0.0);
    CHECK(a.mass_at(0) == a.masses[0]);
    CHECK_THROWS_AS(hitting_distribution({0, 1}, 2.0 / 3.0, 0.0), ValidationError);
    HittingOptions small;
    small.max_window = 2048;
    CHECK_THROWS_AS(hitting_distribution({0, 1}, 2.0 / 3.0, 1e-8, small), NumericError);
  }

  TEST_CASE("hitting distribution against simulation") {
    const auto nu = hitting_distribution({0, 1}, 2.0 / 3.0, 1e-2);
    const std::int64_t window = static_cast<std::int64_t>(nu.masses.size());
    const std::int64_t n = 200000;
    const auto s = sample_hitting_law({0, 1}, window, n, 100 * window + 1000000, {3, 0x51});
    double tv = 0.5 * std::abs(nu.tail_bound - static_cast<double>(s.beyond + s.truncated) / n);
    for (std::int64_t k = 0; k < window; ++k) tv += 0.5 * std::abs(nu.masses[k] - static_cast<double>(s.counts[k]) / n);
    // Dyadic bins: the per-cell noise of a heavy tail would swamp the raw sum.
    double binned = 0.0;
    for (std::int64_t lo = 0; lo < window; lo = lo ? 2 * lo : 1) {
      double m = 0, e = 0;
      for (std::int64_t k = lo; k < std::min(window, lo ? 2 * lo : 1); ++k) {
        m += nu.masses[k];
        e += static_cast<double>(s.counts[k]) / n;
      }
      binned += 0.5 * std::abs(m - e);
    }
    CHECK(binned < 0.01);
    CHECK(tv < 0.05);
  }

  TEST_CASE("mu_x") {
    const QuadratureSpec spec;
    for (std::int64_t u : {0, 1, 4}) CHECK(mu_x(u, {0, 0}, 5, spec) == 0.0);
    CHECK_THROWS_AS(mu_x(1, {3, 1}, 3, spec), ValidationError);
    CHECK_THROWS_AS(mu_x(1, {0, -1}, 3, spec), ValidationError);
    CHECK_THROWS_AS(mu_x(-1, {0, 1}, 3, spec), ValidationError);

    const LatticePoint xs[] = {{0, 1}, {0, 2}, {1, 3}, {-2, 1}, {0, 5}};
    const std::int64_t y1s[] = {3, 5, 2, 4, 1};
    int triples = 0;
    for (int i = 0; i < 5; ++i)
      for (std::int64_t u : {1, 3}) {
        for (auto v : {MuVariant::lattice, MuVariant::published}) {
          const auto z = mu_x_complex(u, xs[i], y1s[i], spec, v);
          CHECK(std::abs(z.real() - mu_x(u, xs[i], y1s[i], spec, v)) < 1e-10);
          CHECK(std::abs(z.imag()) < 1e-10);
        }
        ++triples;
      }
    CHECK(triples == 10);

    double total = 0.0;
    for (std::int64_t u = 0; u <= 200; ++u) {
      const double m = mu_x(u, {0, 2}, 5, spec);
      CHECK(m >= -1e-12);
      total += m;
    }
    CHECK(total <= 1 + 1e-8);
  }

  TEST_CASE("mu_x against simulated column heights") {
    const QuadratureSpec spec;
    for (const auto& [x, y1] : {std::pair<LatticePoint, std::int64_t>{{0, 1}, 3}, {{0, 2}, 5}}) {
      const std::int64_t n = 200000, hmax = 200;
      const auto s = sample_column_height(x, y1, hmax, n, 1000000, {9, 0x52});
      double tv = 0.0, mass = 0.0;
      for (std::int64_t u = 0; u <= hmax; ++u) {
        const double m = mu_x(u, x, y1, spec);
        mass += m;
        tv += 0.5 * std::abs(m - static_cast<double>(s.counts[u]) / n);
      }
      tv += 0.5 * std::abs((1 - mass) - static_cast<double>(s.killed + s.truncated) / n);
      CHECK(tv <= 0.02);
    }
  }
}
