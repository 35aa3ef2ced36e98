#pragma once

// Reidemeister moves on CrossingDiagram. R1 and R2 delete crossings; R3 flips
// a triangular face and keeps the crossing count.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "rknot/core/rng.hpp"
#include "rknot/knots/diagram.hpp"

namespace rknot {

/// Deletes the crossings in `doomed` and splices every strand through them.
inline CrossingDiagram remove_crossings(const CrossingDiagram& d, const std::vector<int>& doomed) {
  const int c = static_cast<int>(d.crossing_count());
  std::vector<char> gone(static_cast<std::size_t>(c), 0);
  for (int x : doomed) gone[static_cast<std::size_t>(x)] = 1;
  std::vector<int> new_index(static_cast<std::size_t>(c), -1);
  int kept = 0;
  for (int x = 0; x < c; ++x)
    if (!gone[static_cast<std::size_t>(x)]) new_index[static_cast<std::size_t>(x)] = kept++;
  if (kept == 0) return CrossingDiagram{};

  auto alive = [&](int dd) { return !gone[static_cast<std::size_t>(dart::crossing(dd))]; };
  auto renumber = [&](int dd) { return dart::make(new_index[static_cast<std::size_t>(dart::crossing(dd))], dart::pos(dd)); };

  std::vector<int> mate(static_cast<std::size_t>(4 * kept), -1);
  std::vector<int> over_in(static_cast<std::size_t>(kept));
  for (int x = 0; x < c; ++x) {
    if (gone[static_cast<std::size_t>(x)]) continue;
    over_in[static_cast<std::size_t>(new_index[static_cast<std::size_t>(x)])] = d.over_in(x);
    for (int p = 0; p < 4; ++p) {
      const int from = dart::make(x, p);
      int cur = d.mate(from);
      for (int guard = 0; !alive(cur); ++guard) {
        if (guard > 4 * c) throw Error(ErrorKind::inconsistent_diagram, "strand splice does not terminate");
        cur = d.mate(dart::partner(cur));
      }
      mate[static_cast<std::size_t>(renumber(from))] = renumber(cur);
    }
  }
  return CrossingDiagram(std::move(mate), std::move(over_in));
}

/// First kink (monogon face), if any.
inline std::optional<int> find_r1(const CrossingDiagram& d) {
  for (int dd = 0; dd < static_cast<int>(4 * d.crossing_count()); ++dd) {
    const int m = d.mate(dd);
    if (dart::crossing(m) == dart::crossing(dd) && ((dart::pos(m) + dart::pos(dd)) & 1)) return dart::crossing(dd);
  }
  return std::nullopt;
}

/// First bigon face whose bounding strands lie one above the other.
inline std::optional<std::array<int, 2>> find_r2(const CrossingDiagram& d) {
  for (const auto& f : d.faces()) {
    if (f.size() != 2) continue;
    const int x = dart::crossing(f[0]), y = dart::crossing(f[1]);
    if (x == y) continue;
    if (dart::over(f[0]) == dart::over(d.mate(f[0]))) return std::array<int, 2>{x, y};
  }
  return std::nullopt;
}

inline std::optional<CrossingDiagram> apply_r1(const CrossingDiagram& d) {
  if (auto x = find_r1(d)) return remove_crossings(d, {*x});
  return std::nullopt;
}

inline std::optional<CrossingDiagram> apply_r2(const CrossingDiagram& d) {
  if (auto xy = find_r2(d)) return remove_crossings(d, {(*xy)[0], (*xy)[1]});
  return std::nullopt;
}

/// Triangular faces (as their three darts) where some strand is over, or
/// under, at both of its triangle crossings.
inline std::vector<std::array<int, 3>> r3_candidates(const CrossingDiagram& d) {
  std::vector<std::array<int, 3>> out;
  for (const auto& f : d.faces()) {
    if (f.size() != 3) continue;
    const int a = dart::crossing(f[0]), b = dart::crossing(f[1]), c = dart::crossing(f[2]);
    if (a == b || b == c || a == c) continue;
    bool movable = false;
    for (int dd : f) movable = movable || dart::over(dd) == dart::over(d.mate(dd));
    if (movable) out.push_back({f[0], f[1], f[2]});
  }
  return out;
}

/// Slides one strand of the triangle across the opposite crossing. The local
/// rotation at each crossing is unchanged; along each strand the order of its
/// two triangle crossings is reversed.
inline CrossingDiagram apply_r3(const CrossingDiagram& d, const std::array<int, 3>& face) {
  std::vector<int> mate = d.mates();
  std::array<int, 6> ext{}, rep{};
  std::array<int, 3> tri_far{};
  for (std::size_t k = 0; k < 3; ++k) {
    const int near = face[k];           // triangle dart at X
    const int far = d.mate(near);       // triangle dart at Y
    ext[2 * k] = dart::partner(near);   // outside dart on X's side
    rep[2 * k] = far;
    ext[2 * k + 1] = dart::partner(far);
    rep[2 * k + 1] = near;
    tri_far[k] = far;
  }
  auto ext_slot = [&](int dd) {
    for (std::size_t i = 0; i < 6; ++i)
      if (ext[i] == dd) return static_cast<int>(i);
    return -1;
  };
  auto link = [&](int a, int b) {
    mate[static_cast<std::size_t>(a)] = b;
    mate[static_cast<std::size_t>(b)] = a;
  };
  std::array<int, 6> old_mate{};
  for (std::size_t i = 0; i < 6; ++i) old_mate[i] = d.mate(ext[i]);
  for (std::size_t i = 0; i < 6; ++i) {
    const int o = old_mate[i];
    const int slot = ext_slot(o);
    link(rep[i], slot >= 0 ? rep[static_cast<std::size_t>(slot)] : o);
  }
  for (std::size_t k = 0; k < 3; ++k) link(ext[2 * k], ext[2 * k + 1]);
  return CrossingDiagram(std::move(mate), d.over_ins());
}

struct SimplifyOptions {
  std::size_t r3_budget_per_crossing = 8;
  std::uint64_t seed = 0x5eed;
};

/// Greedy R1/R2 reduction; when stuck, random R3 moves (at most
/// budget * crossings per round) until an R1 or R2 opens up.
inline CrossingDiagram simplify(const CrossingDiagram& input, const SimplifyOptions& opts = {}) {
  CrossingDiagram d = input;
  Stream rng(opts.seed);
  for (;;) {
    for (;;) {
      if (auto r = apply_r1(d)) {
        d = std::move(*r);
      } else if (auto r2 = apply_r2(d)) {
        d = std::move(*r2);
      } else {
        break;
      }
    }
    if (d.crossing_count() == 0) return d;
    const std::size_t budget = opts.r3_budget_per_crossing * d.crossing_count();
    bool opened = false;
    CrossingDiagram trial = d;
    for (std::size_t step = 0; step < budget && !opened; ++step) {
      const auto cands = r3_candidates(trial);
      if (cands.empty()) break;
      const auto pick = static_cast<std::size_t>(rng.bits() % cands.size());
      trial = apply_r3(trial, cands[pick]);
      opened = find_r1(trial).has_value() || find_r2(trial).has_value();
    }
    if (!opened) return d;
    d = std::move(trial);
  }
}

}  // namespace rknot
