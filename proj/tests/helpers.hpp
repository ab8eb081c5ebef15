#pragma once

// Shared fixtures for the unit and acceptance suites: small models, random
// valuations, and a brute-force reference evaluator over the unrolled
// timeline that stays independent of the quotient machinery.

#include <random>
#include <string>
#include <vector>

#include "qlogic/qlogic.hpp"

namespace qtest {

using namespace qlogic;

inline Signature sig_pq() {
  Signature sig;
  sig.add("P", 1);
  sig.add("Q", 0);
  return sig;
}

inline Model model_2pt_2val() {
  return Model{Semitopology::all_but(2, 1), ValueDomain({"v1", "v2"})};
}

inline Valuation random_valuation(const Model& model, const Signature& sig,
                                  const TimeStructure& time, std::mt19937& rng) {
  Valuation val(model, sig, time);
  for (TruthValue* c : val.flat_cells()) *c = static_cast<TruthValue>(rng() % 3);
  return val;
}

// Tables computed from predicates of different past-depths have different
// horizons; as functions on the infinite timeline they agree when the
// wrapped lookups agree everywhere up to the longer horizon.
inline bool tables_agree(const ContextTable& a, const ContextTable& b) {
  if (a.points != b.points || a.opens != b.opens) return false;
  int stages = std::max(a.stages, b.stages);
  for (int s = 0; s < stages; ++s)
    for (int pt = 0; pt < a.points; ++pt)
      for (int o = 0; o < a.opens; ++o)
        if (a.at(s, pt, o) != b.at(s, pt, o)) return false;
  return true;
}

// Random closed AST generator covering every printable node kind. Atoms and
// value literals come from the supplied signature and domain.
struct Generator {
  std::mt19937 rng;
  Signature sig;
  std::vector<std::string> values;
  std::vector<std::string> bound;
  int fix_depth = 0;

  Generator(unsigned seed, Signature s, std::vector<std::string> vals)
      : rng(seed), sig(std::move(s)), values(std::move(vals)) {}

  int pick(int n) { return static_cast<int>(rng() % n); }

  Term term() {
    if (!bound.empty() && pick(2) == 0) return Term::var(bound[pick((int)bound.size())]);
    return Term::val(values[pick((int)values.size())]);
  }

  std::string fresh_var() {
    static const char* names[] = {"x", "y", "z"};
    return names[pick(3)];
  }

  const std::pair<std::string, int>& random_symbol() {
    return sig.symbols[pick((int)sig.symbols.size())];
  }

  std::string random_unary_symbol() {
    while (true) {
      const auto& [name, arity] = random_symbol();
      if (arity == 1) return name;
    }
  }

  Pred leaf() {
    switch (pick(6)) {
      case 0: return blit();
      case 1: return tlit();
      case 2: return flit();
      case 3: return eq(term(), term());
      default: {
        const auto& [name, arity] = random_symbol();
        std::vector<Term> args;
        for (int i = 0; i < arity; ++i) args.push_back(term());
        return atom(name, std::move(args));
      }
    }
  }

  Pred gen(int depth) {
    if (depth <= 0) {
      if (fix_depth > 0 && pick(4) == 0) return fixvar();
      return leaf();
    }
    switch (pick(24)) {
      case 0: return neg(gen(depth - 1));
      case 1: return mod_t(gen(depth - 1));
      case 2: return un(NodeKind::ModF, gen(depth - 1));
      case 3: return un(NodeKind::ModB, gen(depth - 1));
      case 4: return un(NodeKind::ModTB, gen(depth - 1));
      case 5: return un(NodeKind::ModTF, gen(depth - 1));
      case 6: return un(NodeKind::Someone, gen(depth - 1));
      case 7: return un(NodeKind::Everyone, gen(depth - 1));
      case 8: return un(NodeKind::Quorum, gen(depth - 1));
      case 9: return un(NodeKind::QuorumBox, gen(depth - 1));
      case 10: return un(NodeKind::Yesterday, gen(depth - 1));
      case 11: return un(NodeKind::Tomorrow, gen(depth - 1));
      case 12: return un(NodeKind::Recent, gen(depth - 1));
      case 13:
        return un(pick(2) ? NodeKind::Finally : NodeKind::Pointwise, gen(depth - 1));
      case 14: return or_(gen(depth - 1), gen(depth - 1));
      case 15: return and_(gen(depth - 1), gen(depth - 1));
      case 16: return notor(gen(depth - 1), gen(depth - 1));
      case 17: return impc(gen(depth - 1), gen(depth - 1));
      case 18: return equiv(gen(depth - 1), gen(depth - 1));
      case 19: {
        std::string v = fresh_var();
        bound.push_back(v);
        Pred body = gen(depth - 1);
        bound.pop_back();
        NodeKind k = pick(2) ? NodeKind::Exists : NodeKind::Forall;
        return binder(k, v, body);
      }
      case 20: {
        std::string v = fresh_var();
        bound.push_back(v);
        Pred body = gen(depth - 1);
        bound.pop_back();
        NodeKind k = pick(2) ? NodeKind::ExistsUnique : NodeKind::ExistsAffine;
        return binder(k, v, body);
      }
      case 21: {
        ++fix_depth;
        Pred body = gen(depth - 1);
        --fix_depth;
        return fix(un(NodeKind::Tomorrow, or_(body, fixvar())));
      }
      case 22: {
        std::string v = fresh_var();
        bound.push_back(v);
        Pred body = gen(depth - 1);
        bound.pop_back();
        return mru(v, body, term());
      }
      default: return correct_sym(random_unary_symbol());
    }
  }

  // For evaluation-based suites: closed predicates whose fixedpoint bodies
  // survive the positivity precondition after desugaring.
  Pred gen_positive(int depth) {
    while (true) {
      Pred p = gen(depth);
      if (all_fix_bodies_positive(desugar(p))) return p;
    }
  }
};

// ---------------------------------------------------------------------------
// Reference evaluator. Works on the sugared AST, reading the infinite
// timeline through the valuation's lasso; future operators fold far enough
// past the prefix that ultimately periodic behaviour makes the fold exact.

class Oracle {
 public:
  explicit Oracle(const Valuation& val) : val_(val) {
    opens_ = val.model().st.nonempty_opens();
    L_ = val.time().prefix_len;
    period_ = val.time().period();
    horizon_ = L_ + 8 * period_;
  }

  // Far enough for up to three nested future operators at stages < L + 2p.
  TruthValue eval(const Pred& p, int n, int point, int open_idx) const {
    switch (p->kind) {
      case NodeKind::BLit: return tvB;
      case NodeKind::TLit: return tvT;
      case NodeKind::FLit: return tvF;
      case NodeKind::Eq: return p->terms[0].name == p->terms[1].name ? tvT : tvF;
      case NodeKind::Atom: {
        std::vector<int> args;
        for (const Term& t : p->terms) args.push_back(val_.model().values.index(t.name));
        return val_.lookup(p->name, stage(n), point, val_.tuple_index(args));
      }
      case NodeKind::Neg: return tv_neg(eval(p->kids[0], n, point, open_idx));
      case NodeKind::ModT:
      case NodeKind::ModF:
      case NodeKind::ModB:
      case NodeKind::ModTB:
      case NodeKind::ModTF:
      case NodeKind::ModFB: {
        UnaryConnective c = p->kind == NodeKind::ModT    ? UnaryConnective::ModT
                            : p->kind == NodeKind::ModF  ? UnaryConnective::ModF
                            : p->kind == NodeKind::ModB  ? UnaryConnective::ModB
                            : p->kind == NodeKind::ModTB ? UnaryConnective::ModTB
                            : p->kind == NodeKind::ModTF ? UnaryConnective::ModTF
                                                         : UnaryConnective::ModFB;
        return transform(c, eval(p->kids[0], n, point, open_idx));
      }
      case NodeKind::Or:
        return tv_or(eval(p->kids[0], n, point, open_idx), eval(p->kids[1], n, point, open_idx));
      case NodeKind::And:
        return tv_and(eval(p->kids[0], n, point, open_idx), eval(p->kids[1], n, point, open_idx));
      case NodeKind::Notor:
        return combine(BinaryConnective::Notor, eval(p->kids[0], n, point, open_idx),
                       eval(p->kids[1], n, point, open_idx));
      case NodeKind::Impc:
        return combine(BinaryConnective::Impc, eval(p->kids[0], n, point, open_idx),
                       eval(p->kids[1], n, point, open_idx));
      case NodeKind::Equiv:
        return combine(BinaryConnective::Equiv, eval(p->kids[0], n, point, open_idx),
                       eval(p->kids[1], n, point, open_idx));
      case NodeKind::Exists: return quant_vals(p, n, point, open_idx, FoldKind::Sup);
      case NodeKind::Forall: return quant_vals(p, n, point, open_idx, FoldKind::Inf);
      case NodeKind::Someone: return fold_members(p, n, open_idx, open_idx, FoldKind::Sup);
      case NodeKind::Everyone: return fold_members(p, n, open_idx, open_idx, FoldKind::Inf);
      case NodeKind::Quorum: {
        TruthValue acc = tvF;
        for (size_t o = 0; o < opens_.size(); ++o)
          acc = tv_sup(acc, eval(p->kids[0], n, point, static_cast<int>(o)));
        return acc;
      }
      case NodeKind::Coquorum: {
        TruthValue acc = tvT;
        for (size_t o = 0; o < opens_.size(); ++o)
          acc = tv_inf(acc, eval(p->kids[0], n, point, static_cast<int>(o)));
        return acc;
      }
      case NodeKind::QuorumBox: return compound(p, n, FoldKind::Sup, FoldKind::Inf);
      case NodeKind::CoquorumDiamond: return compound(p, n, FoldKind::Inf, FoldKind::Sup);
      case NodeKind::SomeoneAll: return compound(p, n, FoldKind::Sup, FoldKind::Sup);
      case NodeKind::EveryoneAll: return compound(p, n, FoldKind::Inf, FoldKind::Inf);
      case NodeKind::Yesterday:
        return n == 0 ? tvF : eval(p->kids[0], n - 1, point, open_idx);
      case NodeKind::Tomorrow: return eval(p->kids[0], n + 1, point, open_idx);
      case NodeKind::Forever: {
        TruthValue acc = tvT;
        for (int m = n + 1; m < horizon(n); ++m)
          acc = tv_inf(acc, eval(p->kids[0], m, point, open_idx));
        return acc;
      }
      case NodeKind::Sometime: {
        TruthValue acc = tvF;
        for (int m = n + 1; m < horizon(n); ++m)
          acc = tv_sup(acc, eval(p->kids[0], m, point, open_idx));
        return acc;
      }
      case NodeKind::Infinitely: {
        TruthValue acc = tvT;
        for (int m = n + 1; m < horizon(n); ++m) {
          TruthValue tail = tvF;
          for (int k = m + 1; k < horizon(m); ++k)
            tail = tv_sup(tail, eval(p->kids[0], k, point, open_idx));
          acc = tv_inf(acc, tail);
        }
        return acc;
      }
      case NodeKind::Finally: {
        TruthValue acc = tvF;
        for (int m = n + 1; m < horizon(n); ++m) {
          TruthValue tail = tvT;
          for (int k = m + 1; k < horizon(m); ++k)
            tail = tv_inf(tail, eval(p->kids[0], k, point, open_idx));
          acc = tv_sup(acc, tail);
        }
        return acc;
      }
      case NodeKind::Recent: {
        TruthValue acc = tvF;
        for (int m = 0; m < n; ++m) acc = tv_sup(acc, eval(p->kids[0], m, point, open_idx));
        return acc;
      }
      case NodeKind::URecent: {
        TruthValue acc = tvF;
        for (int m = 0; m <= n; ++m) acc = tv_sup(acc, eval(p->kids[0], m, point, open_idx));
        return acc;
      }
      case NodeKind::Mru: {
        Pred ex = exists(p->name, p->kids[0]);
        int last = -1;
        for (int m = 0; m < n; ++m)
          if (eval(ex, m, point, open_idx) == tvT) last = m;
        if (last < 0) return tvF;
        Pred inst = substitute(p->kids[0], p->name, p->terms[0].name);
        return transform(UnaryConnective::ModT, eval(inst, last, point, open_idx));
      }
      case NodeKind::ExistsUnique:
      case NodeKind::ExistsAffine: {
        const auto& names = val_.model().values.names;
        std::vector<TruthValue> xs;
        for (const std::string& v : names)
          xs.push_back(eval(substitute(p->kids[0], p->name, v), n, point, open_idx));
        TruthValue aff = tvT;
        for (size_t i = 0; i < xs.size(); ++i)
          for (size_t j = 0; j < xs.size(); ++j)
            aff = tv_inf(aff, combine(BinaryConnective::Notor, tv_and(xs[i], xs[j]),
                                      i == j ? tvT : tvF));
        if (p->kind == NodeKind::ExistsAffine) return aff;
        TruthValue ex = tvF;
        for (TruthValue x : xs) ex = tv_sup(ex, x);
        return tv_and(ex, aff);
      }
      case NodeKind::CorrectSym: {
        TruthValue acc = tvT;
        for (const std::string& v : val_.model().values.names)
          acc = tv_inf(acc, transform(UnaryConnective::ModTF,
                                      eval(atom(p->name, {Term::val(v)}), n, point, open_idx)));
        return acc;
      }
      case NodeKind::Pointwise: {
        Pred body = equiv(un(NodeKind::Quorum, p->kids[0]), un(NodeKind::Coquorum, p->kids[0]));
        return compound(make_node(NodeKind::EveryoneAll, {body}), n, FoldKind::Inf, FoldKind::Inf);
      }
      default:
        throw std::logic_error("oracle: unsupported node");
    }
  }

 private:
  int stage(int n) const {
    return n < L_ ? n : val_.time().loop_index + (n - val_.time().loop_index) % period_;
  }

  int horizon(int n) const { return std::max(n + 1, L_) + 3 * period_; }

  TruthValue quant_vals(const Pred& p, int n, int point, int open_idx, FoldKind k) const {
    TruthValue acc = k == FoldKind::Sup ? tvF : tvT;
    for (const std::string& v : val_.model().values.names) {
      TruthValue x = eval(substitute(p->kids[0], p->name, v), n, point, open_idx);
      acc = k == FoldKind::Sup ? tv_sup(acc, x) : tv_inf(acc, x);
    }
    return acc;
  }

  TruthValue fold_members(const Pred& p, int n, int open_idx, int eval_open, FoldKind k) const {
    TruthValue acc = k == FoldKind::Sup ? tvF : tvT;
    for (int m : set_members(opens_[open_idx])) {
      TruthValue x = eval(p->kids[0], n, m, eval_open);
      acc = k == FoldKind::Sup ? tv_sup(acc, x) : tv_inf(acc, x);
    }
    return acc;
  }

  TruthValue compound(const Pred& p, int n, FoldKind outer, FoldKind inner) const {
    TruthValue acc = outer == FoldKind::Sup ? tvF : tvT;
    for (size_t o = 0; o < opens_.size(); ++o) {
      TruthValue row = fold_members(p, n, static_cast<int>(o), static_cast<int>(o), inner);
      acc = outer == FoldKind::Sup ? tv_sup(acc, row) : tv_inf(acc, row);
    }
    return acc;
  }

  const Valuation& val_;
  std::vector<PointSet> opens_;
  int L_;
  int period_;
  int horizon_;
};

}  // namespace qtest
