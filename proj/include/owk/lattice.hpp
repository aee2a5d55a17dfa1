#pragma once

// Oriented lattices on Z^2 and the walk kernels defined on them.
//
// Row y carries an orientation eps_y in {-1, 0, +1}. A site u = (v1, v2) has
// out-neighbors (v1, v2 +- 1) and, when eps_{v2} != 0, the horizontal
// neighbor (v1 + eps_{v2}, v2). The half-plane lattice uses eps_y = sgn(y).

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace owk {

struct LatticePoint {
  std::int64_t v1 = 0;
  std::int64_t v2 = 0;

  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& u) const noexcept {
    const auto a = static_cast<std::uint64_t>(u.v1) * 0x9E3779B97F4A7C15ull;
    const auto b = static_cast<std::uint64_t>(u.v2);
    return static_cast<std::size_t>(a ^ (b + 0x7F4A7C159E3779B9ull + (a << 6) + (a >> 2)));
  }
};

enum class OrientationKind { half_plane_sign, constant, alternating, iid_random, table };

class Orientation {
 public:
  static Orientation half_plane();
  static Orientation constant(int sign);
  // eps_y = +1 on even rows, -1 on odd rows.
  static Orientation alternating();
  // eps_y = +1 with probability f, else -1, fixed per row by (seed, y).
  static Orientation iid_random(double f, std::uint64_t seed);
  // Rows missing from the table carry eps = 0.
  static Orientation table(std::map<std::int64_t, int> rows);

  int epsilon(std::int64_t y) const;
  OrientationKind kind() const { return kind_; }
  int constant_sign() const { return sign_; }
  double fraction() const { return fraction_; }
  std::uint64_t seed() const { return seed_; }
  const std::map<std::int64_t, int>& rows() const { return rows_; }

 private:
  OrientationKind kind_ = OrientationKind::half_plane_sign;
  int sign_ = 0;
  double fraction_ = 0.5;
  std::uint64_t seed_ = 0;
  std::map<std::int64_t, int> rows_;
};

// What happens on a row with eps = 0. The half-plane lattice has no
// horizontal edge there; the variant replaces it by a self-loop.
enum class ZeroRowRule { no_edge, self_loop };

// p_y = P(horizontal), q_y = P(up), 1 - p_y - q_y = P(down).
struct RowDrift {
  double horizontal = 1.0 / 3.0;
  double up = 1.0 / 3.0;

  double down() const { return 1.0 - horizontal - up; }
};

// Per-row drift profile; rows absent from the map use the fallback.
struct DriftProfile {
  RowDrift fallback;
  std::map<std::int64_t, RowDrift> rows;

  const RowDrift& at(std::int64_t y) const;
  void validate() const;
};

struct WalkParams {
  double p = 1.0 / 3.0;  // geometric parameter of the horizontal runs
  std::optional<DriftProfile> drift;
  ZeroRowRule zero_row = ZeroRowRule::no_edge;

  double q() const { return 1.0 - p; }
  void validate() const;
};

std::vector<LatticePoint> out_neighbors(const LatticePoint& u, const Orientation& o,
                                        ZeroRowRule rule = ZeroRowRule::no_edge);

using Transition = std::pair<LatticePoint, double>;

// One-step law from u. Without drift it is uniform over out_neighbors. With
// drift the row's (p_y, q_y, 1 - p_y - q_y) go to (horizontal, up, down); on a
// row without a horizontal edge the horizontal mass stays at u, so the
// vertical coordinate follows vertical_projection_chain exactly.
std::vector<Transition> transition_kernel(const LatticePoint& u, const Orientation& o,
                                          const WalkParams& w);

// Finite-window check: true iff both +1 and -1 occur among eps_y for
// y in [y_min, y_max]. Needs y_min <= y_max.
bool is_transitive(const Orientation& o, std::int64_t y_min, std::int64_t y_max);

// Kernel of the vertical coordinate under a drift profile:
// k(y, y) = p_y, k(y, y + 1) = q_y, k(y, y - 1) = 1 - p_y - q_y.
struct VerticalKernel {
  DriftProfile drift;

  double operator()(std::int64_t from, std::int64_t to) const;
  // (stay, up, down) masses of row y.
  std::array<double, 3> row(std::int64_t y) const;
};

VerticalKernel vertical_projection_chain(const WalkParams& w);

}  // namespace owk
