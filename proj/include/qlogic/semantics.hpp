#pragma once

// Models, lasso-shaped valuations, the finite quotient of the context space,
// the denotation function (with Knaster-Tarski fixedpoints), the direct
// evaluator for the sugar operators, and the validity-judgement family.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qlogic/errors.hpp"
#include "qlogic/printer.hpp"
#include "qlogic/semitopology.hpp"
#include "qlogic/syntax.hpp"
#include "qlogic/table.hpp"
#include "qlogic/truth.hpp"

namespace qlogic {

struct ValueDomain {
  std::vector<std::string> names;

  ValueDomain() = default;
  explicit ValueDomain(std::vector<std::string> n) : names(std::move(n)) {
    if (names.empty()) fail(ErrorKind::BadInput, "value domain must be nonempty");
    for (size_t i = 0; i < names.size(); ++i)
      for (size_t j = i + 1; j < names.size(); ++j)
        if (names[i] == names[j]) fail(ErrorKind::BadInput, "duplicate value " + names[i]);
  }

  int size() const { return static_cast<int>(names.size()); }

  int index(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<int>(i);
    fail(ErrorKind::UnknownValue, "value " + name + " is not in the model's value domain");
  }

  bool has(const std::string& name) const {
    for (const auto& n : names)
      if (n == name) return true;
    return false;
  }
};

struct Model {
  Semitopology st;
  ValueDomain values;
};

// Lasso time: stages 0..L-1 with the loop starting at loop_index; stage(n) for
// n >= L is loop_index + (n - loop_index) mod period. Stutter = loop on the
// last stage (loop_index = L-1).
struct TimeStructure {
  int prefix_len = 1;
  int loop_index = 0;

  TimeStructure() = default;
  TimeStructure(int prefix, int loop) : prefix_len(prefix), loop_index(loop) {
    if (prefix_len < 1 || loop_index < 0 || loop_index >= prefix_len)
      fail(ErrorKind::BadInput, "time structure requires 0 <= loop < prefix");
  }

  static TimeStructure stutter(int prefix) { return TimeStructure(prefix, prefix - 1); }

  int period() const { return prefix_len - loop_index; }
};

// Quotient of the infinite timeline: enough loop copies that every denotation
// of past-depth d stabilizes, with a back-edge closing the final copy.
struct Quotient {
  int L = 1;
  int loop = 0;
  int period = 1;
  int stage_count = 2;  // S

  Quotient() = default;
  Quotient(const TimeStructure& t, int past_depth_d) {
    L = t.prefix_len;
    loop = t.loop_index;
    period = t.period();
    stage_count = loop + std::max(2, past_depth_d + 2) * period;
  }

  int tomorrow(int s) const { return s < stage_count - 1 ? s + 1 : stage_count - period; }
  int yesterday(int s) const { return s - 1; }  // -1 at stage 0; callers apply the F convention
  int underlying(int s) const { return s < L ? s : loop + (s - loop) % period; }
};

class Valuation {
 public:
  Valuation() = default;

  Valuation(Model model, Signature sig, TimeStructure time,
            std::map<std::string, TruthValue> defaults = {})
      : model_(std::move(model)), sig_(std::move(sig)), time_(time) {
    for (const auto& [name, arity] : sig_.symbols) {
      SymData d;
      d.arity = arity;
      auto it = defaults.find(name);
      d.def = it == defaults.end() ? tvF : it->second;
      d.cells.assign(cell_count(arity), d.def);
      data_.emplace(name, std::move(d));
    }
    for (const auto& [name, tv] : defaults)
      if (!sig_.find(name)) fail(ErrorKind::UnknownSymbol, "default for undeclared symbol " + name);
  }

  const Model& model() const { return model_; }
  const Signature& signature() const { return sig_; }
  const TimeStructure& time() const { return time_; }

  int points() const { return model_.st.point_count(); }
  int values() const { return model_.values.size(); }

  int tuple_count(int arity) const {
    int n = 1;
    for (int i = 0; i < arity; ++i) n *= values();
    return n;
  }

  int tuple_index(const std::vector<int>& vals) const {
    int idx = 0;
    for (int v : vals) idx = idx * values() + v;
    return idx;
  }

  TruthValue lookup(const std::string& sym, int stage, int point, int tuple) const {
    const SymData& d = sym_data(sym);
    return d.cells[cell_index(d.arity, stage, point, tuple)];
  }

  void set(const std::string& sym, int stage, int point, const std::vector<std::string>& args,
           TruthValue tv) {
    SymData& d = sym_data_mut(sym);
    if (static_cast<int>(args.size()) != d.arity)
      fail(ErrorKind::ArityMismatch, sym + " expects " + std::to_string(d.arity) + " arguments");
    std::vector<int> idxs;
    idxs.reserve(args.size());
    for (const std::string& a : args) idxs.push_back(model_.values.index(a));
    d.cells[cell_index(d.arity, stage, point, tuple_index(idxs))] = tv;
  }

  void set_all_args(const std::string& sym, int stage, int point, TruthValue tv) {
    SymData& d = sym_data_mut(sym);
    for (int t = 0; t < tuple_count(d.arity); ++t)
      d.cells[cell_index(d.arity, stage, point, t)] = tv;
  }

  // Crash shorthand: every symbol returns B at this point from the stage on.
  void crash(int point, int from_stage) {
    for (auto& [name, d] : data_)
      for (int s = std::max(0, from_stage); s < time_.prefix_len; ++s)
        for (int t = 0; t < tuple_count(d.arity); ++t)
          d.cells[cell_index(d.arity, s, point, t)] = tvB;
  }

  // Restriction to a sub-signature (used to run SPax over Pax traces).
  Valuation restricted(const Signature& sub) const {
    if (!sig_.extends(sub))
      fail(ErrorKind::UnknownSymbol, "valuation does not cover the requested signature");
    Valuation out;
    out.model_ = model_;
    out.sig_ = sub;
    out.time_ = time_;
    for (const auto& [name, arity] : sub.symbols) out.data_.emplace(name, data_.at(name));
    return out;
  }

  // Flat mutable view over every table cell, in deterministic order; the
  // countermodel search enumerates and perturbs valuations through this.
  std::vector<TruthValue*> flat_cells() {
    std::vector<TruthValue*> out;
    for (auto& [name, arity] : sig_.symbols) {
      SymData& d = data_.at(name);
      for (TruthValue& c : d.cells) out.push_back(&c);
    }
    return out;
  }

  long double table_size_log3() const {
    long double cells = 0;
    for (const auto& [name, d] : data_) cells += static_cast<long double>(d.cells.size());
    return cells;
  }

  bool operator==(const Valuation& other) const {
    if (!(time_.prefix_len == other.time_.prefix_len && time_.loop_index == other.time_.loop_index))
      return false;
    if (data_.size() != other.data_.size()) return false;
    for (const auto& [name, d] : data_) {
      auto it = other.data_.find(name);
      if (it == other.data_.end() || it->second.cells != d.cells) return false;
    }
    return true;
  }

  struct SymData {
    int arity = 0;
    TruthValue def = tvF;
    std::vector<TruthValue> cells;  // [stage][point][tuple]
  };

  const std::map<std::string, SymData>& tables() const { return data_; }

 private:
  size_t cell_count(int arity) const {
    return static_cast<size_t>(time_.prefix_len) * std::max(points(), 1) * tuple_count(arity);
  }

  size_t cell_index(int arity, int stage, int point, int tuple) const {
    if (stage < 0 || stage >= time_.prefix_len) fail(ErrorKind::BadInput, "stage out of range");
    if (point < 0 || point >= points()) fail(ErrorKind::BadInput, "point out of range");
    return (static_cast<size_t>(stage) * points() + point) * tuple_count(arity) + tuple;
  }

  const SymData& sym_data(const std::string& sym) const {
    auto it = data_.find(sym);
    if (it == data_.end()) fail(ErrorKind::UnknownSymbol, "symbol " + sym + " has no table");
    return it->second;
  }

  SymData& sym_data_mut(const std::string& sym) {
    return const_cast<SymData&>(sym_data(sym));
  }

  Model model_;
  Signature sig_;
  TimeStructure time_;
  std::map<std::string, SymData> data_;
};

struct Context {
  int stage = 0;
  int point = 0;
  int open_index = 0;
};

namespace eval_detail {

// Keyed by shared_ptr so cached nodes stay alive: transient substitution
// results must not free addresses that a later allocation could reuse.
inline bool node_fix_closed(const Pred& p, std::map<Pred, bool>& memo) {
  auto it = memo.find(p);
  if (it != memo.end()) return it->second;
  bool ok = true;
  if (p->kind == NodeKind::FixVar) ok = false;
  else if (p->kind == NodeKind::Fix) ok = true;  // the single variable is rebound
  else
    for (const Pred& k : p->kids)
      if (!node_fix_closed(k, memo)) { ok = false; break; }
  memo[p] = ok;
  return ok;
}

class Evaluator {
 public:
  Evaluator(const Valuation& val, const Quotient& q, bool direct)
      : val_(val), q_(q), direct_(direct) {
    opens_ = val.model().st.nonempty_opens();
    points_ = val.points();
  }

  ContextTable eval(const Pred& p) {
    bool cacheable = node_fix_closed(p, closed_memo_);
    if (cacheable) {
      auto it = cache_.find(p);
      if (it != cache_.end()) return it->second;
    }
    ContextTable t = eval_uncached(p);
    if (cacheable) cache_.emplace(p, t);
    return t;
  }

  int stages() const { return q_.stage_count; }
  int opens() const { return static_cast<int>(opens_.size()); }
  int points() const { return points_; }
  const Quotient& quotient() const { return q_; }

 private:
  // Real dimensions; a pointless model has an empty context space and every
  // universally quantified judgement over it is vacuous.
  ContextTable fresh(TruthValue init = tvF) const {
    return ContextTable(q_.stage_count, points_, opens(), q_.period, init);
  }

  ContextTable eval_uncached(const Pred& p) {
    switch (p->kind) {
      case NodeKind::BLit: return fresh(tvB);
      case NodeKind::TLit: return fresh(tvT);
      case NodeKind::FLit: return fresh(tvF);
      case NodeKind::Eq: return eval_eq(p);
      case NodeKind::Atom: return eval_atom(p);
      case NodeKind::Neg: return map1(p, UnaryConnective::Neg);
      case NodeKind::ModT: return map1(p, UnaryConnective::ModT);
      case NodeKind::Or: return map2(p, BinaryConnective::Or);
      case NodeKind::Someone: return eval_someone(p);
      case NodeKind::Quorum: return eval_quorum(p, FoldKind::Sup);
      case NodeKind::Exists: return eval_value_quantifier(p, FoldKind::Sup);
      case NodeKind::Yesterday: return eval_yesterday(p);
      case NodeKind::Tomorrow: return eval_tomorrow(p);
      case NodeKind::Fix: return eval_fix(p);
      case NodeKind::KappaLit: return eval_kappa(p);
      case NodeKind::FixVar:
        fail(ErrorKind::NotClosed, "free fixedpoint variable reached the evaluator");
      default: break;
    }
    if (!direct_)
      fail(ErrorKind::BadInput, "sugar node reached the core evaluator: " + pretty_print(p));
    switch (p->kind) {
      case NodeKind::ModF: return map1(p, UnaryConnective::ModF);
      case NodeKind::ModB: return map1(p, UnaryConnective::ModB);
      case NodeKind::ModTB: return map1(p, UnaryConnective::ModTB);
      case NodeKind::ModTF: return map1(p, UnaryConnective::ModTF);
      case NodeKind::ModFB: return map1(p, UnaryConnective::ModFB);
      case NodeKind::And: return map2(p, BinaryConnective::And);
      case NodeKind::Notor: return map2(p, BinaryConnective::Notor);
      case NodeKind::Impc: return map2(p, BinaryConnective::Impc);
      case NodeKind::Equiv: return map2(p, BinaryConnective::Equiv);
      case NodeKind::Forall: return eval_value_quantifier(p, FoldKind::Inf);
      case NodeKind::Everyone: return eval_everyone(p);
      case NodeKind::Coquorum: return eval_quorum(p, FoldKind::Inf);
      case NodeKind::QuorumBox: return eval_compound(p, FoldKind::Sup, FoldKind::Inf);
      case NodeKind::CoquorumDiamond: return eval_compound(p, FoldKind::Inf, FoldKind::Sup);
      case NodeKind::SomeoneAll: return eval_compound(p, FoldKind::Sup, FoldKind::Sup);
      case NodeKind::EveryoneAll: return eval_compound(p, FoldKind::Inf, FoldKind::Inf);
      case NodeKind::Forever: return eval_future(p, FoldKind::Inf);
      case NodeKind::Sometime: return eval_future(p, FoldKind::Sup);
      case NodeKind::Infinitely: return eval_loop(p, FoldKind::Sup);
      case NodeKind::Finally: return eval_loop(p, FoldKind::Inf);
      case NodeKind::Recent: return eval_past(p, false);
      case NodeKind::URecent: return eval_past(p, true);
      case NodeKind::Mru: return eval_mru(p);
      case NodeKind::ExistsUnique: return eval_unique(p, true);
      case NodeKind::ExistsAffine: return eval_unique(p, false);
      case NodeKind::CorrectSym: return eval_correct_sym(p);
      case NodeKind::Pointwise: return eval_pointwise(p);
      default: break;
    }
    fail(ErrorKind::BadInput, "unhandled node kind in evaluator");
  }

  ContextTable eval_eq(const Pred& p) {
    const Term& a = p->terms[0];
    const Term& b = p->terms[1];
    if (a.is_var || b.is_var)
      fail(ErrorKind::NotClosed, "free variable in equality: " + pretty_print(p));
    val_.model().values.index(a.name);
    val_.model().values.index(b.name);
    return fresh(a.name == b.name ? tvT : tvF);
  }

  ContextTable eval_atom(const Pred& p) {
    std::vector<int> args;
    args.reserve(p->terms.size());
    for (const Term& t : p->terms) {
      if (t.is_var) fail(ErrorKind::NotClosed, "free variable in atom: " + pretty_print(p));
      args.push_back(val_.model().values.index(t.name));
    }
    int arity = val_.signature().arity(p->name);
    if (arity != static_cast<int>(args.size()))
      fail(ErrorKind::ArityMismatch, p->name + " arity mismatch");
    int tuple = val_.tuple_index(args);
    ContextTable t = fresh();
    for (int s = 0; s < stages(); ++s) {
      int u = q_.underlying(s);
      for (int pt = 0; pt < points_; ++pt) {
        TruthValue v = val_.lookup(p->name, u, pt, tuple);
        for (int o = 0; o < opens(); ++o) t.cell(s, pt, o) = v;
      }
    }
    return t;
  }

  ContextTable map1(const Pred& p, UnaryConnective c) {
    ContextTable a = eval(p->kids[0]);
    for (TruthValue& v : a.cells) v = transform(c, v);
    return a;
  }

  ContextTable map2(const Pred& p, BinaryConnective c) {
    ContextTable a = eval(p->kids[0]);
    ContextTable b = eval(p->kids[1]);
    for (size_t i = 0; i < a.cells.size(); ++i) a.cells[i] = combine(c, a.cells[i], b.cells[i]);
    return a;
  }

  ContextTable eval_someone(const Pred& p) {
    ContextTable a = eval(p->kids[0]);
    ContextTable t = fresh();
    for (int s = 0; s < stages(); ++s)
      for (int o = 0; o < opens(); ++o) {
        TruthValue acc = tvF;
        for (int m : set_members(opens_[o])) acc = tv_sup(acc, a.at(s, m, o));
        for (int pt = 0; pt < points_; ++pt) t.cell(s, pt, o) = acc;
      }
    return t;
  }

  ContextTable eval_everyone(const Pred& p) {
    ContextTable a = eval(p->kids[0]);
    ContextTable t = fresh();
    for (int s = 0; s < stages(); ++s)
      for (int o = 0; o < opens(); ++o) {
        TruthValue acc = tvT;
        for (int m : set_members(opens_[o])) acc = tv_inf(acc, a.at(s, m, o));
        for (int pt = 0; pt < points_; ++pt) t.cell(s, pt, o) = acc;
      }
    return t;
  }

  ContextTable eval_quorum(const Pred& p, FoldKind k) {
    ContextTable a = eval(p->kids[0]);
    ContextTable t = fresh();
    for (int s = 0; s < stages(); ++s)
      for (int pt = 0; pt < points_; ++pt) {
        TruthValue acc = k == FoldKind::Sup ? tvF : tvT;
        for (int o = 0; o < opens(); ++o)
          acc = k == FoldKind::Sup ? tv_sup(acc, a.at(s, pt, o)) : tv_inf(acc, a.at(s, pt, o));
        for (int o = 0; o < opens(); ++o) t.cell(s, pt, o) = acc;
      }
    return t;
  }

  // quorum/coquorum of someone/everyone: value independent of point and open.
  ContextTable eval_compound(const Pred& p, FoldKind outer, FoldKind inner) {
    ContextTable a = eval(p->kids[0]);
    ContextTable t = fresh();
    for (int s = 0; s < stages(); ++s) {
      TruthValue acc = outer == FoldKind::Sup ? tvF : tvT;
      for (int o = 0; o < opens(); ++o) {
        TruthValue row = inner == FoldKind::Sup ? tvF : tvT;
        for (int m : set_members(opens_[o]))
          row = inner == FoldKind::Sup ? tv_sup(row, a.at(s, m, o)) : tv_inf(row, a.at(s, m, o));
        acc = outer == FoldKind::Sup ? tv_sup(acc, row) : tv_inf(acc, row);
      }
      for (int pt = 0; pt < points_; ++pt)
        for (int o = 0; o < opens(); ++o) t.cell(s, pt, o) = acc;
    }
    return t;
  }

  ContextTable eval_value_quantifier(const Pred& p, FoldKind k) {
    ContextTable t = fresh(k == FoldKind::Sup ? tvF : tvT);
    for (const std::string& v : val_.model().values.names) {
      ContextTable a = eval(substitute(p->kids[0], p->name, v));
      for (size_t i = 0; i < t.cells.size(); ++i)
        t.cells[i] = k == FoldKind::Sup ? tv_sup(t.cells[i], a.cells[i])
                                        : tv_inf(t.cells[i], a.cells[i]);
    }
    return t;
  }

  ContextTable eval_yesterday(const Pred& p) {
    ContextTable a = eval(p->kids[0]);
    ContextTable t = fresh();
    for (int s = 0; s < stages(); ++s) {
      int y = q_.yesterday(s);
      for (int pt = 0; pt < points_; ++pt)
        for (int o = 0; o < opens(); ++o)
          t.cell(s, pt, o) = y < 0 ? tvF : a.at(y, pt, o);
    }
    return t;
  }

  ContextTable eval_tomorrow(const Pred& p) {
    ContextTable a = eval(p->kids[0]);
    ContextTable t = fresh();
    for (int s = 0; s < stages(); ++s) {
      int n = q_.tomorrow(s);
      for (int pt = 0; pt < points_; ++pt)
        for (int o = 0; o < opens(); ++o) t.cell(s, pt, o) = a.at(n, pt, o);
    }
    return t;
  }

  // Least fixedpoint by Knaster-Tarski iteration from the all-F table.
  ContextTable eval_fix(const Pred& p) {
    ContextTable kappa = fresh(tvF);
    size_t max_iters = 2 * kappa.cells.size() + 2;
    for (size_t i = 0; i < max_iters; ++i) {
      Pred body = substitute_kappa(p->kids[0], std::make_shared<ContextTable>(kappa));
      ContextTable next = eval(body);
      if (next.cells == kappa.cells) return kappa;
      kappa = std::move(next);
    }
    fail(ErrorKind::StabilizationFailure, "fixedpoint iteration did not converge");
  }

  ContextTable eval_kappa(const Pred& p) {
    const ContextTable& k = *p->kappa;
    if (k.points != points_ || k.opens != opens())
      fail(ErrorKind::BadInput, "context-table literal has mismatched dimensions");
    ContextTable t = fresh();
    for (int s = 0; s < stages(); ++s)
      for (int pt = 0; pt < points_; ++pt)
        for (int o = 0; o < opens(); ++o) t.cell(s, pt, o) = k.at(s, pt, o);
    return t;
  }

  // --- direct (right-column) evaluation of the sugar ---------------------

  ContextTable eval_future(const Pred& p, FoldKind k) {
    ContextTable a = eval(p->kids[0]);
    ContextTable t = fresh();
    int loop_start = stages() - q_.period;
    for (int s = 0; s < stages(); ++s) {
      int from = std::min(s + 1, loop_start);
      for (int pt = 0; pt < points_; ++pt)
        for (int o = 0; o < opens(); ++o) {
          TruthValue acc = k == FoldKind::Sup ? tvF : tvT;
          for (int n = from; n < stages(); ++n)
            acc = k == FoldKind::Sup ? tv_sup(acc, a.at(n, pt, o)) : tv_inf(acc, a.at(n, pt, o));
          t.cell(s, pt, o) = acc;
        }
    }
    return t;
  }

  // infinitely / finally read the stabilized loop copy and are stage-free.
  ContextTable eval_loop(const Pred& p, FoldKind k) {
    ContextTable a = eval(p->kids[0]);
    ContextTable t = fresh();
    int loop_start = stages() - q_.period;
    for (int pt = 0; pt < points_; ++pt)
      for (int o = 0; o < opens(); ++o) {
        TruthValue acc = k == FoldKind::Sup ? tvF : tvT;
        for (int n = loop_start; n < stages(); ++n)
          acc = k == FoldKind::Sup ? tv_sup(acc, a.at(n, pt, o)) : tv_inf(acc, a.at(n, pt, o));
        for (int s = 0; s < stages(); ++s) t.cell(s, pt, o) = acc;
      }
    return t;
  }

  ContextTable eval_past(const Pred& p, bool include_today) {
    ContextTable a = eval(p->kids[0]);
    ContextTable t = fresh();
    for (int pt = 0; pt < points_; ++pt)
      for (int o = 0; o < opens(); ++o) {
        TruthValue acc = tvF;
        for (int s = 0; s < stages(); ++s) {
          TruthValue today = a.at(s, pt, o);
          t.cell(s, pt, o) = include_today ? tv_sup(acc, today) : acc;
          acc = tv_sup(acc, today);
        }
      }
    return t;
  }

  ContextTable eval_mru(const Pred& p) {
    const Term& tm = p->terms[0];
    if (tm.is_var) fail(ErrorKind::NotClosed, "free variable in mru: " + pretty_print(p));
    ContextTable inst = eval(substitute(p->kids[0], p->name, tm.name));
    ContextTable ex = fresh(tvF);
    for (const std::string& v : val_.model().values.names) {
      ContextTable a = eval(substitute(p->kids[0], p->name, v));
      for (size_t i = 0; i < ex.cells.size(); ++i) ex.cells[i] = tv_sup(ex.cells[i], a.cells[i]);
    }
    ContextTable t = fresh();
    for (int pt = 0; pt < points_; ++pt)
      for (int o = 0; o < opens(); ++o) {
        int last_true = -1;
        for (int s = 0; s < stages(); ++s) {
          t.cell(s, pt, o) =
              last_true < 0 ? tvF
                            : transform(UnaryConnective::ModT, inst.at(last_true, pt, o));
          if (ex.at(s, pt, o) == tvT) last_true = s;
        }
      }
    return t;
  }

  ContextTable eval_unique(const Pred& p, bool unique) {
    std::vector<ContextTable> per_value;
    for (const std::string& v : val_.model().values.names)
      per_value.push_back(eval(substitute(p->kids[0], p->name, v)));
    int n = static_cast<int>(per_value.size());
    ContextTable t = fresh();
    for (size_t i = 0; i < t.cells.size(); ++i) {
      // affine: inf over value pairs of (phi_v & phi_v') ~> (v == v')
      TruthValue aff = tvT;
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          TruthValue both = tv_and(per_value[x].cells[i], per_value[y].cells[i]);
          TruthValue same = x == y ? tvT : tvF;
          aff = tv_inf(aff, combine(BinaryConnective::Notor, both, same));
        }
      if (unique) {
        TruthValue ex = tvF;
        for (int x = 0; x < n; ++x) ex = tv_sup(ex, per_value[x].cells[i]);
        t.cells[i] = tv_and(ex, aff);
      } else {
        t.cells[i] = aff;
      }
    }
    return t;
  }

  ContextTable eval_correct_sym(const Pred& p) {
    int arity = val_.signature().arity(p->name);
    if (arity != 1)
      fail(ErrorKind::ArityMismatch, "correct[" + p->name + "] needs a unary symbol");
    ContextTable t = fresh(tvT);
    for (int s = 0; s < stages(); ++s) {
      int u = q_.underlying(s);
      for (int pt = 0; pt < points_; ++pt) {
        TruthValue acc = tvT;
        for (int v = 0; v < val_.values(); ++v)
          acc = tv_inf(acc, transform(UnaryConnective::ModTF, val_.lookup(p->name, u, pt, v)));
        for (int o = 0; o < opens(); ++o) t.cell(s, pt, o) = acc;
      }
    }
    return t;
  }

  ContextTable eval_pointwise(const Pred& p) {
    ContextTable a = eval(p->kids[0]);
    ContextTable t = fresh();
    for (int s = 0; s < stages(); ++s) {
      TruthValue all = tvT;
      for (int o = 0; o < opens(); ++o) {
        for (int m : set_members(opens_[o])) {
          TruthValue hi = tvF, lo = tvT;
          for (int o2 = 0; o2 < opens(); ++o2) {
            hi = tv_sup(hi, a.at(s, m, o2));
            lo = tv_inf(lo, a.at(s, m, o2));
          }
          all = tv_inf(all, combine(BinaryConnective::Equiv, hi, lo));
        }
      }
      for (int pt = 0; pt < points_; ++pt)
        for (int o = 0; o < opens(); ++o) t.cell(s, pt, o) = all;
    }
    return t;
  }

  const Valuation& val_;
  Quotient q_;
  bool direct_;
  std::vector<PointSet> opens_;
  int points_;
  std::map<Pred, ContextTable> cache_;
  std::map<Pred, bool> closed_memo_;
};

inline void check_denote_preconditions(const Pred& p, const Pred& desugared) {
  FreeInfo fi = free_info(p);
  if (!fi.free_vars.empty()) {
    std::string names;
    for (const std::string& v : fi.free_vars) names += (names.empty() ? "" : ", ") + v;
    fail(ErrorKind::NotClosed, "free variables: " + names);
  }
  if (!fi.fix_closed) fail(ErrorKind::NotClosed, "free fixedpoint variable");
  if (!all_fix_bodies_positive(desugared))
    fail(ErrorKind::NotPositive, "a fixedpoint body is not positive");
}

inline void assert_stabilized(const ContextTable& t, const Quotient& q) {
  int from = t.stages - 2 * q.period;
  for (int s = from; s < t.stages - q.period; ++s)
    for (int pt = 0; pt < t.points; ++pt)
      for (int o = 0; o < t.opens; ++o)
        if (t.at(s, pt, o) != t.at(s + q.period, pt, o))
          fail(ErrorKind::StabilizationFailure,
               "denotation not periodic at stage " + std::to_string(s) + ", point " +
                   std::to_string(pt) + ", open " + std::to_string(o));
}

}  // namespace eval_detail

// Stage count, tomorrow and yesterday maps of the quotient used for phi.
inline Quotient quotient_for(const Pred& phi, const TimeStructure& time) {
  return Quotient(time, past_depth(desugar(phi)));
}

// Denotation by structural recursion on the core AST; sugar is desugared
// away first and mu is evaluated by least-fixedpoint iteration.
inline ContextTable denote(const Pred& phi, const Valuation& val) {
  Pred core = desugar(phi);
  eval_detail::check_denote_preconditions(phi, core);
  Quotient q(val.time(), past_depth(core));
  eval_detail::Evaluator ev(val, q, /*direct=*/false);
  ContextTable t = ev.eval(core);
  eval_detail::assert_stabilized(t, q);
  return t;
}

// Same contract as denote, with sugar evaluated by its right-column clauses.
inline ContextTable direct_eval(const Pred& phi, const Valuation& val) {
  Pred core = desugar(phi);
  eval_detail::check_denote_preconditions(phi, core);
  Quotient q(val.time(), past_depth(core));
  eval_detail::Evaluator ev(val, q, /*direct=*/true);
  ContextTable t = ev.eval(phi);
  eval_detail::assert_stabilized(t, q);
  return t;
}

enum class HoldsAt { Everywhere, Stage, StagePoint, Context };

struct HoldsQuery {
  HoldsAt at = HoldsAt::Everywhere;
  int stage = 0;
  int point = 0;
  int open_index = 0;
};

inline bool holds_in_table(const ContextTable& t, const HoldsQuery& query) {
  auto check_stage = [&](int s) {
    if (s < 0 || s >= t.stages) fail(ErrorKind::BadInput, "stage out of range");
  };
  auto valid_at = [&](int s, int pt, int o) { return is_valid(t.at(s, pt, o)); };
  switch (query.at) {
    case HoldsAt::Context:
      check_stage(query.stage);
      if (query.point < 0 || query.point >= t.points || query.open_index < 0 ||
          query.open_index >= t.opens)
        fail(ErrorKind::BadInput, "context coordinates out of range");
      return valid_at(query.stage, query.point, query.open_index);
    case HoldsAt::StagePoint: {
      check_stage(query.stage);
      if (query.point < 0 || query.point >= t.points)
        fail(ErrorKind::BadInput, "point out of range");
      for (int o = 0; o < t.opens; ++o)
        if (!valid_at(query.stage, query.point, o)) return false;
      return true;
    }
    case HoldsAt::Stage: {
      check_stage(query.stage);
      for (int pt = 0; pt < t.points; ++pt)
        for (int o = 0; o < t.opens; ++o)
          if (!valid_at(query.stage, pt, o)) return false;
      return true;
    }
    case HoldsAt::Everywhere: {
      for (const TruthValue& v : t.cells)
        if (!is_valid(v)) return false;
      return true;
    }
  }
  return false;
}

// Validity of phi, universally quantified over every omitted coordinate.
// Stage quantification ranges over quotient stages, which by stabilization
// covers the whole timeline.
inline bool holds(const Pred& phi, const Valuation& val, const HoldsQuery& query = {}) {
  return holds_in_table(direct_eval(phi, val), query);
}

// True when the denotation at this stage is constant across the nonempty
// opens at every point; agrees with holds(pointwise phi) at that stage.
inline bool is_pointwise(const Pred& phi, const Valuation& val, int stage) {
  ContextTable t = direct_eval(phi, val);
  for (int pt = 0; pt < t.points; ++pt)
    for (int o = 1; o < t.opens; ++o)
      if (t.at(stage, pt, o) != t.at(stage, pt, 0)) return false;
  return true;
}

}  // namespace qlogic
