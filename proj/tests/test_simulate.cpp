#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "owk/errors.hpp"
#include "owk/simulate.hpp"

using namespace owk;

TEST_SUITE("simulate") {
  TEST_CASE("step stays on out-neighbors") {
    const auto h = Orientation::half_plane();
    const WalkParams w;
    SeededStream rng(3, 0);
    for (int i = 0; i < 2000; ++i) {
      const auto a = step({0, 0}, h, w, rng);
      REQUIRE((a == LatticePoint{0, 1} || a == LatticePoint{0, -1}));
      const auto b = step({0, 5}, h, w, rng);
      REQUIRE((b == LatticePoint{0, 6} || b == LatticePoint{0, 4} || b == LatticePoint{1, 5}));
    }
  }

  TEST_CASE("step is deterministic per stream") {
    SeededStream a(7, 0), b(7, 0);
    LatticePoint u{0, 0}, v{0, 0};
    for (int i = 0; i < 500; ++i) {
      u = step(u, Orientation::half_plane(), WalkParams{}, a);
      v = step(v, Orientation::half_plane(), WalkParams{}, b);
      REQUIRE(u == v);
    }
  }

  TEST_CASE("step hits every neighbor at the kernel frequencies") {
    WalkParams w;
    DriftProfile d;
    d.rows[3] = {0.5, 0.25};
    w.drift = d;
    SeededStream rng(1, 2);
    int side = 0, up = 0, n = 40000;
    for (int i = 0; i < n; ++i) {
      const auto v = step({0, 3}, Orientation::half_plane(), w, rng);
      side += v == LatticePoint{1, 3};
      up += v == LatticePoint{0, 4};
    }
    CHECK(std::abs(side / double(n) - 0.5) < 4 * std::sqrt(0.25 / n));
    CHECK(std::abs(up / double(n) - 0.25) < 4 * std::sqrt(0.1875 / n));
  }

  TEST_CASE("excursions from the origin") {
    const auto h = Orientation::half_plane();
    for (int i = 0; i < 3000; ++i) {
      SeededStream rng(5, episode_stream(1, i));
      const auto s = run_excursion({0, 0}, h, WalkParams{}, rng, 100000);
      if (s.truncated) continue;
      REQUIRE(s.tau1 >= 2);
      std::int64_t total = 0;
      for (const auto& [v, c] : s.visits) total += c;
      REQUIRE(total == s.tau1);
      REQUIRE(s.visits.at({0, 0}) == 1);
      REQUIRE(s.horizontal_moves + s.vertical_moves + s.stay_moves == s.tau1);
    }
    SeededStream rng(5, 9);
    const auto t = run_excursion({0, 4}, h, WalkParams{}, rng, 1);
    CHECK(t.truncated);
    CHECK(t.tau1 == 1);
    CHECK_THROWS_AS(run_excursion({0, 0}, h, WalkParams{}, rng, 0), ValidationError);
  }

  TEST_CASE("fast and generic excursions consume the stream identically") {
    const auto h = Orientation::half_plane();
    for (int i = 0; i < 500; ++i) {
      SeededStream a(8, i), b(8, i);
      const auto fast = run_excursion({2, 3}, h, WalkParams{}, a, 20000, false);
      const auto slow = run_excursion({2, 3}, h, WalkParams{}, b, 20000, true);
      REQUIRE(fast.tau1 == slow.tau1);
      REQUIRE(fast.x_sigma1 == slow.x_sigma1);
      REQUIRE(fast.truncated == slow.truncated);
      REQUIRE(fast.horizontal_moves == slow.horizontal_moves);
      REQUIRE(a.next_u64() == b.next_u64());
    }
  }

  TEST_CASE("displacement from the origin is symmetric") {
    const auto s = sample_displacement({0, 0}, Orientation::half_plane(), WalkParams{}, 200000, 100000, {2, 0x40});
    // Heavy tails: compare a bounded statistic, the sign.
    double pos = 0, neg = 0;
    for (auto x : s.x) {
      pos += x > 0;
      neg += x < 0;
    }
    const double n = static_cast<double>(s.x.size());
    CHECK(std::abs(pos - neg) / n < 3 * std::sqrt((pos + neg) / (n * n)));
    CHECK(s.episodes == 200000);
    CHECK(static_cast<std::int64_t>(s.x.size()) + s.truncated == s.episodes);
    // Same inputs, same sample.
    const auto again = sample_displacement({0, 0}, Orientation::half_plane(), WalkParams{}, 5000, 100000, {2, 0x40});
    CHECK(std::equal(again.x.begin(), again.x.end(), s.x.begin()));
  }

  TEST_CASE("empirical_cf") {
    const auto a = empirical_cf({3, -7, 12, 0}, {0.0, 1.0});
    CHECK(a[0].value == std::complex<double>(1.0, 0.0));
    const auto z = empirical_cf({0, 0, 0}, {0.7, 2.0});
    for (const auto& e : z) CHECK(e.value == std::complex<double>(1.0, 0.0));
    const auto b = empirical_cf({1, -1}, {1.0});
    CHECK(b[0].value.real() == doctest::Approx(std::cos(1.0)));
    CHECK(std::abs(b[0].value.imag()) < 1e-15);
    CHECK_THROWS_AS(empirical_cf({}, {1.0}), ValidationError);
  }

  TEST_CASE("estimate_green") {
    const auto h = Orientation::half_plane();
    const auto e = estimate_green({0, 1}, {0, 1}, 2000, 1000, h, WalkParams{}, {1, 3});
    CHECK(e.value >= 1.0);
    const auto f = estimate_green({0, 1}, {-1, 1}, 2000, 1000, h, WalkParams{}, {1, 3});
    CHECK(f.value >= 0.0);
    CHECK(std::isfinite(f.value));
  }

  TEST_CASE("death chain generating function") {
    const auto z = estimate_death_chain_pgf(0.5, 0, 100, {1, 4});
    CHECK(z.value == 1.0);
    const auto a = estimate_death_chain_pgf(0.5, 1, 200000, {1, 4});
    CHECK(std::abs(a.value - 0.25) <= 3 * a.std_error);
    const auto b = estimate_death_chain_pgf(0.5, 2, 200000, {1, 5});
    CHECK(std::abs(b.value - 0.0625) <= 3 * b.std_error);
    CHECK_THROWS_AS(estimate_death_chain_pgf(1.0, 1, 10, {1, 4}), ValidationError);
  }

  TEST_CASE("conditional hitting probabilities") {
    const auto one = estimate_hitting_prob_gu(4, 4, 0, 100, {1, 6});
    CHECK(one.estimate.value == 1.0);
    const auto e = estimate_hitting_prob_gu(0, 3, 0, 20000, {1, 6});
    CHECK(e.estimate.value > 0.0);
    CHECK(e.estimate.value < 1.0);
    CHECK(e.accepted + e.rejected + e.truncated == 20000);
    const auto far = estimate_hitting_prob_gu(0, 12, 0, 20000, {1, 6});
    CHECK(far.estimate.value < e.estimate.value);
  }

  TEST_CASE("results do not depend on the worker count") {
    const auto a = sample_hitting_law({0, 2}, 64, 30000, 100000, {4, 7});
    const auto b = occupation_counts({1, 2}, {{3, 2}, {1, 5}}, 30000, {4, 8});
    setenv("OWK_THREADS", "3", 1);
    const auto c = sample_hitting_law({0, 2}, 64, 30000, 100000, {4, 7});
    const auto d = occupation_counts({1, 2}, {{3, 2}, {1, 5}}, 30000, {4, 8});
    unsetenv("OWK_THREADS");
    CHECK(a.counts == c.counts);
    CHECK(a.beyond == c.beyond);
    for (int i = 0; i < 2; ++i) {
      CHECK(b.per_target[i].value == d.per_target[i].value);
      CHECK(b.per_target[i].std_error == d.per_target[i].std_error);
    }
  }

  TEST_CASE("vertical move tallies follow the drift") {
    WalkParams w;
    DriftProfile d;
    d.fallback = {0.2, 0.5};
    w.drift = d;
    const auto v = sample_vertical_moves({0, 0}, Orientation::half_plane(), w, -5, 5, 200, 500, {1, 9});
    std::int64_t stay = 0, up = 0, down = 0;
    for (const auto& row : v.counts) {
      stay += row[0];
      up += row[1];
      down += row[2];
    }
    const double n = double(stay + up + down);
    CHECK(n > 0);
    CHECK(std::abs(stay / n - 0.2) < 0.03);
    CHECK(std::abs(up / n - 0.5) < 0.03);
  }
}
