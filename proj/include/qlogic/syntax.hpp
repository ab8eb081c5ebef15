#pragma once

// Signatures, terms and the predicate AST: the core grammar plus the derived
// sugar nodes, with substitution, free-variable info, positivity checking and
// desugaring to the core fragment.

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qlogic/errors.hpp"
#include "qlogic/table.hpp"

namespace qlogic {

struct Signature {
  // name -> arity; insertion order preserved for reports and files.
  std::vector<std::pair<std::string, int>> symbols;

  void add(const std::string& name, int arity) {
    if (arity < 0) fail(ErrorKind::BadInput, "negative arity for " + name);
    if (find(name)) fail(ErrorKind::BadInput, "duplicate predicate symbol " + name);
    symbols.emplace_back(name, arity);
  }

  const int* find(const std::string& name) const {
    for (const auto& [n, a] : symbols)
      if (n == name) return &a;
    return nullptr;
  }

  int arity(const std::string& name) const {
    const int* a = find(name);
    if (!a) fail(ErrorKind::UnknownSymbol, "predicate symbol " + name + " not in signature");
    return *a;
  }

  // True when every symbol of `other` is declared here with the same arity.
  bool extends(const Signature& other) const {
    for (const auto& [n, a] : other.symbols) {
      const int* mine = find(n);
      if (!mine || *mine != a) return false;
    }
    return true;
  }
};

struct Term {
  bool is_var = false;
  std::string name;

  static Term var(std::string n) { return Term{true, std::move(n)}; }
  static Term val(std::string n) { return Term{false, std::move(n)}; }

  bool operator==(const Term& other) const {
    return is_var == other.is_var && name == other.name;
  }
};

enum class NodeKind {
  // core
  BLit,
  Eq,
  Atom,
  Neg,
  ModT,
  Someone,
  Quorum,
  Exists,
  Or,
  Yesterday,
  Tomorrow,
  FixVar,
  Fix,
  KappaLit,
  // sugar
  FLit,
  TLit,
  ModF,
  ModB,
  ModTB,
  ModTF,
  ModFB,
  And,
  Notor,
  Impc,
  Equiv,
  Forall,
  Everyone,
  Coquorum,
  QuorumBox,
  CoquorumDiamond,
  SomeoneAll,
  EveryoneAll,
  Forever,
  Sometime,
  Infinitely,
  Finally,
  Recent,
  URecent,
  Mru,          // Mru(var, body, term)
  ExistsUnique,
  ExistsAffine,
  CorrectSym,   // correct[P] for a unary symbol P
  Pointwise,
};

struct Predicate;
using Pred = std::shared_ptr<const Predicate>;

struct Predicate {
  NodeKind kind;
  std::string name;          // Atom/CorrectSym: symbol; binders: bound variable
  std::vector<Term> terms;   // Atom: arguments; Eq: [lhs, rhs]; Mru: [the @-term]
  std::vector<Pred> kids;
  std::shared_ptr<const ContextTable> kappa;  // KappaLit only
};

inline Pred make_node(NodeKind k, std::vector<Pred> kids = {}, std::string name = {},
                      std::vector<Term> terms = {}) {
  auto p = std::make_shared<Predicate>();
  p->kind = k;
  p->name = std::move(name);
  p->terms = std::move(terms);
  p->kids = std::move(kids);
  return p;
}

// Leaf and combinator builders used by theories, tests and the parser.
inline Pred blit() { return make_node(NodeKind::BLit); }
inline Pred tlit() { return make_node(NodeKind::TLit); }
inline Pred flit() { return make_node(NodeKind::FLit); }
inline Pred eq(Term a, Term b) { return make_node(NodeKind::Eq, {}, {}, {std::move(a), std::move(b)}); }
inline Pred atom(std::string sym, std::vector<Term> args = {}) {
  return make_node(NodeKind::Atom, {}, std::move(sym), std::move(args));
}
inline Pred kappa_lit(std::shared_ptr<const ContextTable> table) {
  auto p = std::make_shared<Predicate>();
  p->kind = NodeKind::KappaLit;
  p->kappa = std::move(table);
  return p;
}
inline Pred un(NodeKind k, Pred a) { return make_node(k, {std::move(a)}); }
inline Pred bin(NodeKind k, Pred a, Pred b) { return make_node(k, {std::move(a), std::move(b)}); }
inline Pred neg(Pred a) { return un(NodeKind::Neg, std::move(a)); }
inline Pred mod_t(Pred a) { return un(NodeKind::ModT, std::move(a)); }
inline Pred or_(Pred a, Pred b) { return bin(NodeKind::Or, std::move(a), std::move(b)); }
inline Pred and_(Pred a, Pred b) { return bin(NodeKind::And, std::move(a), std::move(b)); }
inline Pred notor(Pred a, Pred b) { return bin(NodeKind::Notor, std::move(a), std::move(b)); }
inline Pred impc(Pred a, Pred b) { return bin(NodeKind::Impc, std::move(a), std::move(b)); }
inline Pred equiv(Pred a, Pred b) { return bin(NodeKind::Equiv, std::move(a), std::move(b)); }
inline Pred binder(NodeKind k, std::string var, Pred body) {
  return make_node(k, {std::move(body)}, std::move(var));
}
inline Pred exists(std::string var, Pred body) { return binder(NodeKind::Exists, std::move(var), std::move(body)); }
inline Pred forall(std::string var, Pred body) { return binder(NodeKind::Forall, std::move(var), std::move(body)); }
inline Pred fix(Pred body) { return un(NodeKind::Fix, std::move(body)); }
inline Pred fixvar() { return make_node(NodeKind::FixVar); }
inline Pred mru(std::string var, Pred body, Term t) {
  return make_node(NodeKind::Mru, {std::move(body)}, std::move(var), {std::move(t)});
}
inline Pred correct_sym(std::string sym) { return make_node(NodeKind::CorrectSym, {}, std::move(sym)); }

inline bool is_binder(NodeKind k) {
  return k == NodeKind::Exists || k == NodeKind::Forall || k == NodeKind::ExistsUnique ||
         k == NodeKind::ExistsAffine || k == NodeKind::Mru;
}

inline bool is_core(NodeKind k) {
  switch (k) {
    case NodeKind::BLit:
    case NodeKind::Eq:
    case NodeKind::Atom:
    case NodeKind::Neg:
    case NodeKind::ModT:
    case NodeKind::Someone:
    case NodeKind::Quorum:
    case NodeKind::Exists:
    case NodeKind::Or:
    case NodeKind::Yesterday:
    case NodeKind::Tomorrow:
    case NodeKind::FixVar:
    case NodeKind::Fix:
    case NodeKind::KappaLit:
      return true;
    default:
      return false;
  }
}

inline bool equal(const Pred& a, const Pred& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->name != b->name || !(a->terms == b->terms)) return false;
  if (a->kind == NodeKind::KappaLit) {
    if (!a->kappa || !b->kappa) return a->kappa == b->kappa;
    return *a->kappa == *b->kappa;
  }
  if (a->kids.size() != b->kids.size()) return false;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (!equal(a->kids[i], b->kids[i])) return false;
  return true;
}

struct FreeInfo {
  std::set<std::string> free_vars;
  bool fix_closed = true;
};

namespace detail {

inline void free_info_walk(const Pred& p, std::set<std::string>& bound, int fix_depth,
                           FreeInfo& out) {
  switch (p->kind) {
    case NodeKind::FixVar:
      if (fix_depth == 0) out.fix_closed = false;
      return;
    case NodeKind::Fix:
      free_info_walk(p->kids[0], bound, fix_depth + 1, out);
      return;
    default:
      break;
  }
  for (const Term& t : p->terms)
    if (t.is_var && !bound.count(t.name)) out.free_vars.insert(t.name);
  if (is_binder(p->kind)) {
    bool fresh = bound.insert(p->name).second;
    free_info_walk(p->kids[0], bound, fix_depth, out);
    if (fresh) bound.erase(p->name);
    return;
  }
  for (const Pred& k : p->kids) free_info_walk(k, bound, fix_depth, out);
}

}  // namespace detail

inline FreeInfo free_info(const Pred& p) {
  FreeInfo out;
  std::set<std::string> bound;
  detail::free_info_walk(p, bound, 0, out);
  return out;
}

inline bool is_closed(const Pred& p) {
  FreeInfo fi = free_info(p);
  return fi.free_vars.empty() && fi.fix_closed;
}

namespace detail {

inline void collect_names(const Pred& p, std::set<std::string>& names) {
  if (is_binder(p->kind)) names.insert(p->name);
  for (const Term& t : p->terms) names.insert(t.name);
  for (const Pred& k : p->kids) collect_names(k, names);
}

inline std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  std::string cand = base + "'";
  while (taken.count(cand)) cand += "'";
  return cand;
}

inline Pred subst_term(const Pred& p, const std::string& var, const Term& replacement);

inline Pred rebuild(const Pred& p, std::vector<Pred> kids) {
  bool same = true;
  for (size_t i = 0; i < kids.size(); ++i)
    if (kids[i].get() != p->kids[i].get()) same = false;
  if (same) return p;
  auto q = std::make_shared<Predicate>(*p);
  q->kids = std::move(kids);
  return q;
}

inline Pred subst_term(const Pred& p, const std::string& var, const Term& replacement) {
  bool term_hit = false;
  for (const Term& t : p->terms)
    if (t.is_var && t.name == var) term_hit = true;
  std::vector<Term> new_terms = p->terms;
  if (term_hit)
    for (Term& t : new_terms)
      if (t.is_var && t.name == var) t = replacement;

  if (is_binder(p->kind)) {
    if (p->name == var) {
      // Bound occurrences in the body stay; Mru's @-term sits outside the binder.
      if (!term_hit) return p;
      auto q = std::make_shared<Predicate>(*p);
      q->terms = std::move(new_terms);
      return q;
    }
    Pred body = p->kids[0];
    std::string bound = p->name;
    if (replacement.is_var && bound == replacement.name) {
      // Rename the binder so the substituted variable is not captured.
      std::set<std::string> taken;
      collect_names(body, taken);
      taken.insert(var);
      taken.insert(replacement.name);
      std::string fresh = fresh_name(bound, taken);
      body = subst_term(body, bound, Term::var(fresh));
      bound = fresh;
    }
    Pred new_body = subst_term(body, var, replacement);
    if (new_body.get() == p->kids[0].get() && bound == p->name && !term_hit) return p;
    auto q = std::make_shared<Predicate>(*p);
    q->name = bound;
    q->terms = std::move(new_terms);
    q->kids = {new_body};
    return q;
  }

  std::vector<Pred> kids;
  kids.reserve(p->kids.size());
  bool changed = term_hit;
  for (const Pred& k : p->kids) {
    Pred nk = subst_term(k, var, replacement);
    if (nk.get() != k.get()) changed = true;
    kids.push_back(std::move(nk));
  }
  if (!changed) return p;
  auto q = std::make_shared<Predicate>(*p);
  q->terms = std::move(new_terms);
  q->kids = std::move(kids);
  return q;
}

}  // namespace detail

// phi[var := value]: every free occurrence of var becomes the value literal.
inline Pred substitute(const Pred& p, const std::string& var, const std::string& value) {
  return detail::subst_term(p, var, Term::val(value));
}

// General term substitution (capture-avoiding); used by desugaring.
inline Pred substitute_term(const Pred& p, const std::string& var, const Term& t) {
  return detail::subst_term(p, var, t);
}

// phi[X := kappa]: every free fixedpoint variable becomes a table literal.
inline Pred substitute_kappa(const Pred& p, std::shared_ptr<const ContextTable> table) {
  if (p->kind == NodeKind::FixVar) return kappa_lit(std::move(table));
  if (p->kind == NodeKind::Fix) return p;  // bound inside
  std::vector<Pred> kids;
  kids.reserve(p->kids.size());
  bool changed = false;
  for (const Pred& k : p->kids) {
    Pred nk = substitute_kappa(k, table);
    if (nk.get() != k.get()) changed = true;
    kids.push_back(std::move(nk));
  }
  if (!changed) return p;
  return detail::rebuild(p, std::move(kids));
}

namespace detail {

inline bool positive_walk(const Pred& p, int negations) {
  switch (p->kind) {
    case NodeKind::FixVar:
      return negations % 2 == 0;
    case NodeKind::Fix:
      return true;  // rebound; the inner body is checked separately
    case NodeKind::Neg:
      return positive_walk(p->kids[0], negations + 1);
    default: {
      for (const Pred& k : p->kids)
        if (!positive_walk(k, negations)) return false;
      return true;
    }
  }
}

}  // namespace detail

// Every free fixedpoint-variable occurrence sits under an even number of
// negations. Runs on core ASTs (sugar is desugared first).
inline bool check_positive(const Pred& p) { return detail::positive_walk(p, 0); }

// Every Fix body inside p is positive with respect to its own binder.
inline bool all_fix_bodies_positive(const Pred& p) {
  if (p->kind == NodeKind::Fix) {
    if (!check_positive(p->kids[0])) return false;
  }
  for (const Pred& k : p->kids)
    if (!all_fix_bodies_positive(k)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Desugaring to the core fragment, per the derived-expressions table.

namespace detail {

inline Pred desugar_node(const Pred& p);

inline Pred d(const Pred& p) { return desugar_node(p); }

inline Pred core_sometime(Pred body) {
  // sometime phi = mu X. tomorrow(phi | X)
  return fix(un(NodeKind::Tomorrow, or_(std::move(body), fixvar())));
}

inline Pred desugar_node(const Pred& p) {
  switch (p->kind) {
    // core nodes: rebuild children
    case NodeKind::BLit:
    case NodeKind::Eq:
    case NodeKind::Atom:
    case NodeKind::FixVar:
    case NodeKind::KappaLit:
      return p;
    case NodeKind::Neg:
    case NodeKind::ModT:
    case NodeKind::Someone:
    case NodeKind::Quorum:
    case NodeKind::Or:
    case NodeKind::Yesterday:
    case NodeKind::Tomorrow:
    case NodeKind::Fix:
    case NodeKind::Exists: {
      std::vector<Pred> kids;
      kids.reserve(p->kids.size());
      for (const Pred& k : p->kids) kids.push_back(d(k));
      return rebuild(p, std::move(kids));
    }

    case NodeKind::FLit:
      return mod_t(blit());  // F = isT B
    case NodeKind::TLit:
      return neg(mod_t(blit()));  // T = !F
    case NodeKind::ModF:
      return mod_t(neg(d(p->kids[0])));
    case NodeKind::ModB: {
      Pred a = d(p->kids[0]);
      // modB phi = !(isT phi) & !(isF phi), with & itself rewritten
      return d(and_(neg(mod_t(a)), neg(mod_t(neg(a)))));
    }
    case NodeKind::ModTB:
      return neg(mod_t(neg(d(p->kids[0]))));
    case NodeKind::ModTF: {
      Pred a = d(p->kids[0]);
      return or_(mod_t(a), mod_t(neg(a)));
    }
    case NodeKind::ModFB: {
      Pred a = d(p->kids[0]);
      // modFB phi = isF phi | isB phi
      return d(or_(un(NodeKind::ModF, a), un(NodeKind::ModB, a)));
    }
    case NodeKind::And:
      return neg(or_(neg(d(p->kids[0])), neg(d(p->kids[1]))));
    case NodeKind::Notor:
      return or_(neg(d(p->kids[0])), d(p->kids[1]));
    case NodeKind::Impc:
      // phi ==> psi = phi ~> isT psi
      return or_(neg(d(p->kids[0])), mod_t(d(p->kids[1])));
    case NodeKind::Equiv: {
      Pred a = d(p->kids[0]), b = d(p->kids[1]);
      Pred tt = and_(mod_t(a), mod_t(b));
      Pred bb = and_(un(NodeKind::ModB, a), un(NodeKind::ModB, b));
      Pred ff = and_(un(NodeKind::ModF, a), un(NodeKind::ModF, b));
      return d(or_(or_(tt, bb), ff));
    }
    case NodeKind::Forall:
      return neg(exists(p->name, neg(d(p->kids[0]))));
    case NodeKind::Everyone:
      return neg(un(NodeKind::Someone, neg(d(p->kids[0]))));
    case NodeKind::Coquorum:
      return neg(un(NodeKind::Quorum, neg(d(p->kids[0]))));
    case NodeKind::QuorumBox:
      return d(un(NodeKind::Quorum, un(NodeKind::Everyone, p->kids[0])));
    case NodeKind::CoquorumDiamond:
      return d(un(NodeKind::Coquorum, un(NodeKind::Someone, p->kids[0])));
    case NodeKind::SomeoneAll:
      return d(un(NodeKind::Quorum, un(NodeKind::Someone, p->kids[0])));
    case NodeKind::EveryoneAll:
      return d(un(NodeKind::Coquorum, un(NodeKind::Everyone, p->kids[0])));
    case NodeKind::Sometime:
      return core_sometime(d(p->kids[0]));
    case NodeKind::Forever:
      // forever phi = !sometime !phi. The figure's mu X. tomorrow(phi & X)
      // has all-F as its least fixedpoint, so the de Morgan form is the one
      // whose least fixedpoint matches the intended future-infimum reading.
      return neg(core_sometime(neg(d(p->kids[0]))));
    case NodeKind::Infinitely:
      return d(un(NodeKind::Forever, un(NodeKind::Sometime, p->kids[0])));
    case NodeKind::Finally:
      return d(un(NodeKind::Sometime, un(NodeKind::Forever, p->kids[0])));
    case NodeKind::Recent:
      // mu X. yesterday(phi | X)
      return fix(un(NodeKind::Yesterday, or_(d(p->kids[0]), fixvar())));
    case NodeKind::URecent:
      // mu X. (phi | yesterday X)
      return fix(or_(d(p->kids[0]), un(NodeKind::Yesterday, fixvar())));
    case NodeKind::Mru: {
      // mu X. yesterday(isT phi[a:=t] | (!isT exists a. phi & X))
      Pred body = d(p->kids[0]);
      Pred inst = substitute_term(body, p->name, p->terms[0]);
      Pred no_witness = neg(mod_t(exists(p->name, body)));
      return fix(un(NodeKind::Yesterday,
                    or_(mod_t(inst), d(and_(no_witness, fixvar())))));
    }
    case NodeKind::ExistsAffine: {
      // forall a,a'. (phi & phi[a:=a']) ~> a = a'
      Pred body = d(p->kids[0]);
      std::set<std::string> taken;
      collect_names(p->kids[0], taken);
      taken.insert(p->name);
      std::string other = fresh_name(p->name, taken);
      Pred renamed = substitute_term(body, p->name, Term::var(other));
      Pred pair = and_(body, renamed);
      Pred concl = eq(Term::var(p->name), Term::var(other));
      return d(forall(p->name, forall(other, notor(pair, concl))));
    }
    case NodeKind::ExistsUnique: {
      Pred e = exists(p->name, p->kids[0]);
      Pred aff = binder(NodeKind::ExistsAffine, p->name, p->kids[0]);
      return d(and_(e, aff));
    }
    case NodeKind::CorrectSym: {
      std::string var = "a";
      Pred body = un(NodeKind::ModTF, atom(p->name, {Term::var(var)}));
      return d(forall(var, body));
    }
    case NodeKind::Pointwise: {
      Pred a = p->kids[0];
      Pred body = equiv(un(NodeKind::Quorum, a), un(NodeKind::Coquorum, a));
      return d(un(NodeKind::EveryoneAll, body));
    }
  }
  fail(ErrorKind::BadInput, "unhandled node in desugar");
}

}  // namespace detail

inline Pred desugar(const Pred& p) { return detail::desugar_node(p); }

inline bool is_core_only(const Pred& p) {
  if (!is_core(p->kind)) return false;
  for (const Pred& k : p->kids)
    if (!is_core_only(k)) return false;
  return true;
}

// Past-operator nesting depth over {Yesterday, Recent, URecent, Mru, Fix};
// drives the quotient horizon.
inline int past_depth(const Pred& p) {
  int self = 0;
  switch (p->kind) {
    case NodeKind::Yesterday:
    case NodeKind::Recent:
    case NodeKind::URecent:
    case NodeKind::Mru:
    case NodeKind::Fix:
      self = 1;
      break;
    default:
      break;
  }
  int deepest = 0;
  for (const Pred& k : p->kids) deepest = std::max(deepest, past_depth(k));
  return self + deepest;
}

}  // namespace qlogic
