#pragma once

// Oriented single-component knot diagram stored as a rotation system.
//
// Each crossing x owns four darts 4x + p, p = 0..3, listed counterclockwise
// starting from the incoming under-strand (the PD convention). Positions 0
// and 2 are the under passage (0 in, 2 out); positions 1 and 3 are the over
// passage, and over_in(x) records which of them is incoming. mate(d) is the
// dart at the other end of the edge leaving d.

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rknot/core/error.hpp"

namespace rknot {

namespace dart {
constexpr int crossing(int d) { return d >> 2; }
constexpr int pos(int d) { return d & 3; }
constexpr int make(int x, int p) { return 4 * x + (p & 3); }
constexpr int partner(int d) { return make(crossing(d), pos(d) + 2); }  // other end of the passage
constexpr int rot(int d) { return make(crossing(d), pos(d) + 1); }      // next counterclockwise
constexpr bool over(int d) { return (pos(d) & 1) != 0; }
}  // namespace dart

using PdCrossing = std::array<int, 4>;

class CrossingDiagram {
 public:
  CrossingDiagram() = default;

  /// Builds from raw darts and validates every invariant.
  CrossingDiagram(std::vector<int> mate, std::vector<int> over_in) : mate_(std::move(mate)), over_in_(std::move(over_in)) {
    validate();
  }

  static CrossingDiagram from_pd(const std::vector<PdCrossing>& pd);

  /// Signed Gauss code: one entry per passage along the knot, `crossing` is
  /// 0-based, `over` marks the over passage, sign is the crossing sign (both
  /// passages of a crossing must carry the same sign).
  struct GaussEntry {
    int crossing;
    bool over;
    int sign;
  };
  static CrossingDiagram from_gauss(const std::vector<GaussEntry>& code);

  std::size_t crossing_count() const { return over_in_.size(); }
  std::size_t arc_count() const { return 2 * crossing_count(); }
  int mate(int d) const { return mate_[static_cast<std::size_t>(d)]; }
  int over_in(int x) const { return over_in_[static_cast<std::size_t>(x)]; }
  int sign(int x) const { return over_in(x) == 3 ? 1 : -1; }
  bool incoming(int d) const { return dart::pos(d) == 0 || dart::pos(d) == over_in(dart::crossing(d)); }
  const std::vector<int>& mates() const { return mate_; }
  const std::vector<int>& over_ins() const { return over_in_; }

  /// Face boundaries as dart orbits of d -> rot(mate(d)).
  std::vector<std::vector<int>> faces() const {
    const int n = static_cast<int>(mate_.size());
    std::vector<char> seen(mate_.size(), 0);
    std::vector<std::vector<int>> out;
    for (int d = 0; d < n; ++d) {
      if (seen[static_cast<std::size_t>(d)]) continue;
      std::vector<int> face;
      for (int cur = d; !seen[static_cast<std::size_t>(cur)]; cur = dart::rot(mate(cur))) {
        seen[static_cast<std::size_t>(cur)] = 1;
        face.push_back(cur);
      }
      out.push_back(std::move(face));
    }
    return out;
  }

  /// Passages in knot order starting at the under passage of crossing 0,
  /// as the incoming dart of each passage.
  std::vector<int> traversal() const {
    std::vector<int> seq;
    if (crossing_count() == 0) return seq;
    int out = dart::make(0, 2);
    do {
      const int in = mate(out);
      seq.push_back(in);
      out = dart::partner(in);
      if (seq.size() > 2 * crossing_count()) break;
    } while (out != dart::make(0, 2));
    return seq;
  }

  /// Throws inconsistent-diagram unless the dart data form one closed,
  /// consistently oriented, planar component.
  void validate() const {
    const std::size_t c = crossing_count();
    auto fail = [](const std::string& why) { throw Error(ErrorKind::inconsistent_diagram, why); };
    if (mate_.size() != 4 * c) fail("dart count does not match crossing count");
    if (c == 0) return;
    for (std::size_t x = 0; x < c; ++x)
      if (over_in_[x] != 1 && over_in_[x] != 3) fail("over-strand entry must be position 1 or 3");
    const int n = static_cast<int>(mate_.size());
    for (int d = 0; d < n; ++d) {
      const int m = mate(d);
      if (m < 0 || m >= n || m == d || mate(m) != d) fail("edge pairing is not an involution");
      if (incoming(d) == incoming(m)) fail("edge joins two darts of the same direction");
    }
    if (traversal().size() != 2 * c) fail("diagram has more than one component");
    if (faces().size() != c + 2) fail("diagram is not planar (Euler characteristic)");
  }

  /// PD code with 1-based edge labels increasing along the orientation.
  std::vector<PdCrossing> pd_code() const {
    std::vector<PdCrossing> pd(crossing_count());
    if (crossing_count() == 0) return pd;
    std::vector<int> label(mate_.size(), 0);
    int next = 1;
    for (int in : traversal()) {
      label[static_cast<std::size_t>(in)] = next;
      label[static_cast<std::size_t>(mate(in))] = next;
      ++next;
    }
    for (std::size_t x = 0; x < crossing_count(); ++x)
      for (int p = 0; p < 4; ++p) pd[x][static_cast<std::size_t>(p)] = label[4 * x + static_cast<std::size_t>(p)];
    return pd;
  }

 private:
  std::vector<int> mate_;
  std::vector<int> over_in_;
};

inline CrossingDiagram CrossingDiagram::from_pd(const std::vector<PdCrossing>& pd) {
  const int c = static_cast<int>(pd.size());
  auto fail = [](const std::string& why) { throw Error(ErrorKind::inconsistent_diagram, why); };
  if (c == 0) return CrossingDiagram{};
  std::map<int, std::vector<int>> where;
  for (int x = 0; x < c; ++x)
    for (int p = 0; p < 4; ++p) where[pd[static_cast<std::size_t>(x)][static_cast<std::size_t>(p)]].push_back(dart::make(x, p));
  if (where.size() != static_cast<std::size_t>(2 * c)) fail("PD code must use exactly 2c distinct labels");
  std::vector<int> mate(static_cast<std::size_t>(4 * c), -1);
  for (const auto& [lbl, ds] : where) {
    if (ds.size() != 2) fail("label " + std::to_string(lbl) + " does not appear exactly twice");
    mate[static_cast<std::size_t>(ds[0])] = ds[1];
    mate[static_cast<std::size_t>(ds[1])] = ds[0];
  }
  // Orientation of each over passage follows from walking the knot.
  std::vector<int> over_in(static_cast<std::size_t>(c), 0);
  int out = dart::make(0, 2);
  std::size_t passages = 0;
  do {
    const int in = mate[static_cast<std::size_t>(out)];
    const int x = dart::crossing(in);
    if (dart::pos(in) == 2) fail("strand enters crossing through its outgoing under edge");
    if (dart::over(in)) {
      auto& oi = over_in[static_cast<std::size_t>(x)];
      if (oi != 0 && oi != dart::pos(in)) fail("over strand traversed in both directions");
      oi = dart::pos(in);
    }
    out = dart::partner(in);
    if (++passages > static_cast<std::size_t>(2 * c)) fail("traversal does not close");
  } while (out != dart::make(0, 2));
  if (passages != static_cast<std::size_t>(2 * c)) fail("diagram has more than one component");
  return CrossingDiagram(std::move(mate), std::move(over_in));
}

inline CrossingDiagram CrossingDiagram::from_gauss(const std::vector<GaussEntry>& code) {
  const std::size_t len = code.size();
  auto fail = [](const std::string& why) { throw Error(ErrorKind::inconsistent_diagram, why); };
  if (len == 0) return CrossingDiagram{};
  if (len % 2) fail("Gauss code has odd length");
  const std::size_t c = len / 2;
  std::vector<int> over_in(c, 0);
  std::vector<int> seen_over(c, 0), seen_under(c, 0);
  for (const auto& e : code) {
    if (e.crossing < 0 || static_cast<std::size_t>(e.crossing) >= c) fail("crossing index out of range");
    auto x = static_cast<std::size_t>(e.crossing);
    (e.over ? seen_over : seen_under)[x]++;
    const int oi = e.sign > 0 ? 3 : 1;
    if (over_in[x] != 0 && over_in[x] != oi) fail("inconsistent crossing sign");
    over_in[x] = oi;
  }
  for (std::size_t x = 0; x < c; ++x)
    if (seen_over[x] != 1 || seen_under[x] != 1) fail("each crossing needs one over and one under passage");
  auto in_dart = [&](const GaussEntry& e) { return dart::make(e.crossing, e.over ? over_in[static_cast<std::size_t>(e.crossing)] : 0); };
  std::vector<int> mate(4 * c, -1);
  for (std::size_t k = 0; k < len; ++k) {
    const int out = dart::partner(in_dart(code[k]));
    const int in = in_dart(code[(k + 1) % len]);
    mate[static_cast<std::size_t>(out)] = in;
    mate[static_cast<std::size_t>(in)] = out;
  }
  return CrossingDiagram(std::move(mate), std::move(over_in));
}

// PD text: one crossing per line "X a,b,c,d", '#' comments.

inline std::vector<PdCrossing> read_pd(std::istream& is) {
  std::vector<PdCrossing> pd;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head != "X") throw Error(ErrorKind::io, "line " + std::to_string(lineno) + ": expected 'X a,b,c,d'");
    std::string rest;
    std::getline(ls, rest);
    for (auto& ch : rest)
      if (ch == ',') ch = ' ';
    std::istringstream rs(rest);
    PdCrossing x{};
    for (auto& v : x)
      if (!(rs >> v)) throw Error(ErrorKind::io, "line " + std::to_string(lineno) + ": crossing needs 4 labels");
    std::string extra;
    if (rs >> extra) throw Error(ErrorKind::io, "line " + std::to_string(lineno) + ": trailing tokens");
    pd.push_back(x);
  }
  return pd;
}

inline void write_pd(std::ostream& os, const std::vector<PdCrossing>& pd) {
  for (const auto& x : pd) os << "X " << x[0] << ',' << x[1] << ',' << x[2] << ',' << x[3] << '\n';
}

}  // namespace rknot
