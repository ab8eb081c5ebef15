#pragma once

// Dense truth-value table over the quotient context space (stage, point,
// nonempty-open index) of one valuation. Stage lookups past the horizon wrap
// into the final loop copy, which the stabilization check certifies.

#include <cstddef>
#include <vector>

#include "qlogic/truth.hpp"

namespace qlogic {

struct ContextTable {
  int stages = 0;
  int points = 0;
  int opens = 0;
  int loop_period = 1;  // p of the quotient this table was computed over
  std::vector<TruthValue> cells;

  ContextTable() = default;
  ContextTable(int s, int p, int o, int period, TruthValue init = tvF)
      : stages(s), points(p), opens(o), loop_period(period),
        cells(static_cast<size_t>(s) * p * o, init) {}

  int wrap_stage(int s) const {
    if (s < stages) return s;
    int base = stages - loop_period;
    return base + (s - base) % loop_period;
  }

  TruthValue at(int s, int p, int o) const {
    s = wrap_stage(s);
    return cells[(static_cast<size_t>(s) * points + p) * opens + o];
  }

  TruthValue& cell(int s, int p, int o) {
    return cells[(static_cast<size_t>(s) * points + p) * opens + o];
  }

  bool operator==(const ContextTable& other) const {
    return stages == other.stages && points == other.points && opens == other.opens &&
           cells == other.cells;
  }
};

}  // namespace qlogic
