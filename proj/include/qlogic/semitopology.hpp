#pragma once

// Finite semitopologies over points 0..N-1, the AllBut(N,f) family, and the
// antiseparation queries (dense, nonempty open interior, n-twined). Point
// sets are bitmasks; canonical open order is cardinality-then-lexicographic
// on the sorted element lists, so tables and reports are reproducible.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "qlogic/errors.hpp"

namespace qlogic {

using PointSet = std::uint32_t;

inline constexpr int kMaxPoints = 31;

inline int set_size(PointSet s) { return std::popcount(s); }

inline PointSet full_set(int point_count) {
  return point_count == 0 ? 0u : (point_count == 32 ? ~0u : ((1u << point_count) - 1u));
}

inline bool set_contains(PointSet s, int p) { return (s >> p) & 1u; }

inline std::vector<int> set_members(PointSet s) {
  std::vector<int> out;
  for (int p = 0; s != 0; ++p, s >>= 1)
    if (s & 1u) out.push_back(p);
  return out;
}

// Cardinality first, then lexicographic on the sorted member sequence.
inline bool canonical_less(PointSet a, PointSet b) {
  int ca = set_size(a), cb = set_size(b);
  if (ca != cb) return ca < cb;
  while (a != 0 && b != 0) {
    int pa = std::countr_zero(a), pb = std::countr_zero(b);
    if (pa != pb) return pa < pb;
    a &= a - 1;
    b &= b - 1;
  }
  return false;  // equal
}

class Semitopology {
 public:
  Semitopology() : point_count_(0), opens_{0u} {}

  // Validates the invariants: empty and full sets open, closure under binary
  // unions (which on a finite family gives arbitrary unions).
  static Semitopology validate(int point_count, std::vector<PointSet> opens) {
    if (point_count < 0 || point_count > kMaxPoints)
      fail(ErrorKind::InvalidParams, "point count must be in 0.." + std::to_string(kMaxPoints));
    const PointSet full = full_set(point_count);
    for (PointSet o : opens)
      if ((o & ~full) != 0)
        fail(ErrorKind::InvalidParams, "open set mentions a point >= point count");
    std::sort(opens.begin(), opens.end(), canonical_less);
    opens.erase(std::unique(opens.begin(), opens.end()), opens.end());
    if (opens.empty() || opens.front() != 0u)
      fail(ErrorKind::MissingEmptySet, "the empty union must be open");
    for (size_t i = 0; i < opens.size(); ++i)
      for (size_t j = i + 1; j < opens.size(); ++j) {
        PointSet u = opens[i] | opens[j];
        if (std::find(opens.begin(), opens.end(), u) == opens.end())
          fail(ErrorKind::NotUnionClosed,
               "union of {" + set_to_string(opens[i]) + "} and {" + set_to_string(opens[j]) +
                   "} is not open");
      }
    if (std::find(opens.begin(), opens.end(), full) == opens.end())
      fail(ErrorKind::MissingFullSet, "the set of all points must be open");
    Semitopology st;
    st.point_count_ = point_count;
    st.opens_ = std::move(opens);
    return st;
  }

  // AllBut(N,f): points 0..N-1; nonempty opens are exactly the sets of
  // cardinality at least N-f.
  static Semitopology all_but(int n, int f) {
    if (n < 0 || f < 0 || f > n)
      fail(ErrorKind::InvalidParams, "all_but requires 0 <= f <= N");
    if (n > kMaxPoints) fail(ErrorKind::InvalidParams, "all_but: N too large");
    std::vector<PointSet> opens{0u};
    const PointSet full = full_set(n);
    for (PointSet s = 1; s <= full && full != 0; ++s)
      if (set_size(s) >= n - f) opens.push_back(s);
    if (n == 0) return validate(0, {0u});
    return validate(n, std::move(opens));
  }

  int point_count() const { return point_count_; }
  PointSet points() const { return full_set(point_count_); }
  const std::vector<PointSet>& opens() const { return opens_; }

  // All opens except the empty set, in canonical order.
  std::vector<PointSet> nonempty_opens() const {
    std::vector<PointSet> out;
    for (PointSet o : opens_)
      if (o != 0u) out.push_back(o);
    return out;
  }

  // P is dense when every nonempty open meets it.
  bool dense(PointSet p) const {
    check_subset(p);
    for (PointSet o : opens_)
      if (o != 0u && (o & p) == 0u) return false;
    return true;
  }

  // P has a nonempty open interior when some nonempty open is contained in it.
  bool noi(PointSet p) const {
    check_subset(p);
    for (PointSet o : opens_)
      if (o != 0u && (o & ~p) == 0u) return true;
    return false;
  }

  // Every collection of n nonempty opens (with repetition) has nonempty
  // intersection. Repetition is idempotent, so it suffices to scan subsets of
  // size exactly min(n, #opens). n = 0 asks that the point set be nonempty.
  bool is_n_twined(int n) const {
    if (n < 0) fail(ErrorKind::InvalidParams, "n must be nonnegative");
    if (n == 0) return point_count_ > 0;
    std::vector<PointSet> ne = nonempty_opens();
    if (ne.empty()) return true;
    int k = std::min<int>(n, static_cast<int>(ne.size()));
    std::vector<int> pick(k);
    for (int i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      PointSet inter = points();
      for (int i : pick) inter &= ne[i];
      if (inter == 0u) return false;
      int i = k - 1;
      while (i >= 0 && pick[i] == static_cast<int>(ne.size()) - k + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
    return true;
  }

  static std::string set_to_string(PointSet s) {
    std::string out;
    for (int p : set_members(s)) {
      if (!out.empty()) out += ',';
      out += std::to_string(p);
    }
    return out;
  }

  bool operator==(const Semitopology& other) const {
    return point_count_ == other.point_count_ && opens_ == other.opens_;
  }

 private:
  void check_subset(PointSet p) const {
    if ((p & ~points()) != 0u) fail(ErrorKind::InvalidParams, "point set not within the space");
  }

  int point_count_;
  std::vector<PointSet> opens_;
};

}  // namespace qlogic
