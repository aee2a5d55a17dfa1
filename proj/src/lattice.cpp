#include "owk/lattice.hpp"

#include <cmath>
#include <string>

#include "owk/errors.hpp"
#include "owk/rng.hpp"

namespace owk {

Orientation Orientation::half_plane() { return Orientation{}; }

Orientation Orientation::constant(int sign) {
  if (sign < -1 || sign > 1) throw ValidationError("constant orientation sign must be -1, 0 or +1");
  Orientation o;
  o.kind_ = OrientationKind::constant;
  o.sign_ = sign;
  return o;
}

Orientation Orientation::alternating() {
  Orientation o;
  o.kind_ = OrientationKind::alternating;
  return o;
}

Orientation Orientation::iid_random(double f, std::uint64_t seed) {
  if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("iid orientation needs f in [0, 1]");
  Orientation o;
  o.kind_ = OrientationKind::iid_random;
  o.fraction_ = f;
  o.seed_ = seed;
  return o;
}

Orientation Orientation::table(std::map<std::int64_t, int> rows) {
  for (const auto& [y, e] : rows) {
    if (e < -1 || e > 1)
      throw ValidationError("orientation table entry for row " + std::to_string(y) +
                            " must be -1, 0 or +1");
  }
  Orientation o;
  o.kind_ = OrientationKind::table;
  o.rows_ = std::move(rows);
  return o;
}

int Orientation::epsilon(std::int64_t y) const {
  switch (kind_) {
    case OrientationKind::half_plane_sign:
      return (y > 0) - (y < 0);
    case OrientationKind::constant:
      return sign_;
    case OrientationKind::alternating:
      return (y % 2 == 0) ? 1 : -1;
    case OrientationKind::iid_random: {
      // Hash of (seed, y) through one Philox block; stream tag keeps it apart
      // from walk streams that share the seed.
      const auto uy = static_cast<std::uint64_t>(y);
      const PhiloxBlock out = philox4x32(
          {static_cast<std::uint32_t>(uy), static_cast<std::uint32_t>(uy >> 32), 0x0E1E0E1Eu, 0u},
          {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
      const std::uint64_t bits = (static_cast<std::uint64_t>(out[1]) << 32 | out[0]) >> 11;
      const double u = (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
      return u < fraction_ ? 1 : -1;
    }
    case OrientationKind::table: {
      const auto it = rows_.find(y);
      return it == rows_.end() ? 0 : it->second;
    }
  }
  return 0;
}

const RowDrift& DriftProfile::at(std::int64_t y) const {
  const auto it = rows.find(y);
  return it == rows.end() ? fallback : it->second;
}

namespace {

void validate_row(const RowDrift& d, const std::string& where) {
  if (!(d.horizontal >= 0.0 && d.horizontal < 1.0))
    throw ValidationError("drift " + where + ": p_y must lie in [0, 1)");
  if (!(d.up > 0.0)) throw ValidationError("drift " + where + ": q_y must be positive");
  if (!(d.up < 1.0 - d.horizontal))
    throw ValidationError("drift " + where + ": q_y must be below 1 - p_y");
}

}  // namespace

void DriftProfile::validate() const {
  validate_row(fallback, "fallback");
  for (const auto& [y, d] : rows) validate_row(d, "row " + std::to_string(y));
}

void WalkParams::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("p must lie in (0, 1)");
  if (drift) drift->validate();
}

std::vector<LatticePoint> out_neighbors(const LatticePoint& u, const Orientation& o,
                                        ZeroRowRule rule) {
  std::vector<LatticePoint> out;
  out.reserve(3);
  out.push_back({u.v1, u.v2 + 1});
  out.push_back({u.v1, u.v2 - 1});
  const int e = o.epsilon(u.v2);
  if (e != 0) {
    out.push_back({u.v1 + e, u.v2});
  } else if (rule == ZeroRowRule::self_loop) {
    out.push_back(u);
  }
  return out;
}

std::vector<Transition> transition_kernel(const LatticePoint& u, const Orientation& o,
                                          const WalkParams& w) {
  w.validate();
  if (!w.drift) {
    const auto nb = out_neighbors(u, o, w.zero_row);
    if (nb.empty())
      throw StructuralError("site (" + std::to_string(u.v1) + "," + std::to_string(u.v2) +
                            ") has no out-neighbors");
    const double m = 1.0 / static_cast<double>(nb.size());
    std::vector<Transition> out;
    out.reserve(nb.size());
    for (const auto& v : nb) out.emplace_back(v, m);
    return out;
  }
  const RowDrift& d = w.drift->at(u.v2);
  const int e = o.epsilon(u.v2);
  const LatticePoint side = e != 0 ? LatticePoint{u.v1 + e, u.v2} : u;
  // The down mass is the complement of the two others, so the sum is 1 up to
  // one rounding of (p_y + q_y).
  const double down = 1.0 - (d.horizontal + d.up);
  std::vector<Transition> out;
  out.reserve(3);
  if (d.horizontal > 0.0) out.emplace_back(side, d.horizontal);
  out.emplace_back(LatticePoint{u.v1, u.v2 + 1}, d.up);
  out.emplace_back(LatticePoint{u.v1, u.v2 - 1}, down);
  return out;
}

bool is_transitive(const Orientation& o, std::int64_t y_min, std::int64_t y_max) {
  if (y_min > y_max) throw ValidationError("probe range is empty");
  bool plus = false, minus = false;
  for (std::int64_t y = y_min; y <= y_max; ++y) {
    const int e = o.epsilon(y);
    plus = plus || e == 1;
    minus = minus || e == -1;
    if (plus && minus) return true;
  }
  return false;
}

double VerticalKernel::operator()(std::int64_t from, std::int64_t to) const {
  const auto r = row(from);
  if (to == from) return r[0];
  if (to == from + 1) return r[1];
  if (to == from - 1) return r[2];
  return 0.0;
}

std::array<double, 3> VerticalKernel::row(std::int64_t y) const {
  const RowDrift& d = drift.at(y);
  return {d.horizontal, d.up, 1.0 - (d.horizontal + d.up)};
}

VerticalKernel vertical_projection_chain(const WalkParams& w) {
  if (!w.drift) throw ValidationError("vertical projection needs a drift profile");
  w.validate();
  return VerticalKernel{*w.drift};
}

}  // namespace owk
