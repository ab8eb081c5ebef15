#pragma once

// Canonical text rendering of predicates. parse(pretty_print(phi)) == phi for
// every KappaLit-free AST; the parser treats parentheses as transparent.

#include <string>

#include "qlogic/errors.hpp"
#include "qlogic/syntax.hpp"

namespace qlogic {

namespace detail {

// Precedence levels: 0 binder body / top, 1 ==, 2 ~> ==>, 3 |, 4 &, 5 unary.
inline const char* unary_keyword(NodeKind k) {
  switch (k) {
    case NodeKind::ModT: return "isT";
    case NodeKind::ModF: return "isF";
    case NodeKind::ModB: return "isB";
    case NodeKind::ModTB: return "isTB";
    case NodeKind::ModTF: return "isTF";
    case NodeKind::ModFB: return "isFB";
    case NodeKind::Someone: return "someone";
    case NodeKind::Everyone: return "everyone";
    case NodeKind::Quorum: return "quorum";
    case NodeKind::Coquorum: return "coquorum";
    case NodeKind::SomeoneAll: return "someoneall";
    case NodeKind::EveryoneAll: return "everyoneall";
    case NodeKind::QuorumBox: return "quorumbox";
    case NodeKind::CoquorumDiamond: return "coquorumdiamond";
    case NodeKind::Yesterday: return "yesterday";
    case NodeKind::Tomorrow: return "tomorrow";
    case NodeKind::Forever: return "forever";
    case NodeKind::Sometime: return "sometime";
    case NodeKind::Infinitely: return "infinitely";
    case NodeKind::Finally: return "finally";
    case NodeKind::Recent: return "recent";
    case NodeKind::URecent: return "urecent";
    case NodeKind::Pointwise: return "pointwise";
    default: return nullptr;
  }
}

inline const char* binder_keyword(NodeKind k) {
  switch (k) {
    case NodeKind::Exists: return "exists";
    case NodeKind::Forall: return "forall";
    case NodeKind::ExistsUnique: return "exists1";
    case NodeKind::ExistsAffine: return "exists01";
    default: return nullptr;
  }
}

inline std::string print_node(const Pred& p, int min_prec);

inline std::string parenthesize(std::string s, bool needed) {
  return needed ? "(" + std::move(s) + ")" : std::move(s);
}

inline std::string print_node(const Pred& p, int min_prec) {
  switch (p->kind) {
    case NodeKind::BLit: return "B";
    case NodeKind::TLit: return "T";
    case NodeKind::FLit: return "F";
    case NodeKind::FixVar: return "X";
    case NodeKind::KappaLit:
      fail(ErrorKind::UnprintableKappa, "context-table literals have no surface syntax");
    case NodeKind::Eq: {
      std::string s = p->terms[0].name + " = " + p->terms[1].name;
      return parenthesize(std::move(s), min_prec > 3);
    }
    case NodeKind::Atom: {
      if (p->terms.empty()) return p->name;
      std::string s = p->name + "(";
      for (size_t i = 0; i < p->terms.size(); ++i) {
        if (i) s += ", ";
        s += p->terms[i].name;
      }
      return s + ")";
    }
    case NodeKind::CorrectSym:
      return "correct[" + p->name + "]";
    case NodeKind::Neg:
      return "! " + print_node(p->kids[0], 5);
    case NodeKind::Or: {
      std::string s = print_node(p->kids[0], 3) + " | " + print_node(p->kids[1], 4);
      return parenthesize(std::move(s), min_prec > 3);
    }
    case NodeKind::And: {
      std::string s = print_node(p->kids[0], 4) + " & " + print_node(p->kids[1], 5);
      return parenthesize(std::move(s), min_prec > 4);
    }
    case NodeKind::Notor: {
      std::string s = print_node(p->kids[0], 3) + " ~> " + print_node(p->kids[1], 2);
      return parenthesize(std::move(s), min_prec > 2);
    }
    case NodeKind::Impc: {
      std::string s = print_node(p->kids[0], 3) + " ==> " + print_node(p->kids[1], 2);
      return parenthesize(std::move(s), min_prec > 2);
    }
    case NodeKind::Equiv: {
      std::string s = print_node(p->kids[0], 2) + " == " + print_node(p->kids[1], 1);
      return parenthesize(std::move(s), min_prec > 1);
    }
    case NodeKind::Fix: {
      std::string s = "mu X. " + print_node(p->kids[0], 0);
      return parenthesize(std::move(s), min_prec > 0);
    }
    case NodeKind::Mru: {
      std::string s = "mru " + p->name + ". " + print_node(p->kids[0], 0) + " @ " +
                      p->terms[0].name;
      return parenthesize(std::move(s), min_prec > 0);
    }
    default:
      break;
  }
  if (const char* kw = unary_keyword(p->kind))
    return std::string(kw) + " " + print_node(p->kids[0], 5);
  if (const char* kw = binder_keyword(p->kind)) {
    std::string s = std::string(kw) + " " + p->name + ". " + print_node(p->kids[0], 0);
    return parenthesize(std::move(s), min_prec > 0);
  }
  fail(ErrorKind::BadInput, "unhandled node in pretty_print");
}

}  // namespace detail

inline std::string pretty_print(const Pred& p) { return detail::print_node(p, 0); }

}  // namespace qlogic
