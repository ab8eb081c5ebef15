#pragma once

// The three-element truth-value lattice F < B < T and the connectives,
// modalities and classifiers defined on it. Tables are transcribed, not
// derived; the derivation identities live in the test suite.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qlogic {

enum class TruthValue : std::uint8_t { F = 0, B = 1, T = 2 };

inline constexpr TruthValue tvF = TruthValue::F;
inline constexpr TruthValue tvB = TruthValue::B;
inline constexpr TruthValue tvT = TruthValue::T;

inline constexpr std::array<TruthValue, 3> all_truth_values{tvF, tvB, tvT};

constexpr int idx(TruthValue v) { return static_cast<int>(v); }

constexpr bool operator<(TruthValue a, TruthValue b) { return idx(a) < idx(b); }
constexpr bool operator<=(TruthValue a, TruthValue b) { return idx(a) <= idx(b); }

constexpr TruthValue tv_sup(TruthValue a, TruthValue b) { return a < b ? b : a; }
constexpr TruthValue tv_inf(TruthValue a, TruthValue b) { return a < b ? a : b; }

enum class BinaryConnective : std::uint8_t {
  And,
  Or,
  Notor,       // weak implication
  Impc,        // strong implication
  Imp,         // "valid implies valid"
  Leq,         // internalised lattice order
  LatticeIff,  // mutual weak implication
  IffCc,       // mutual strong implication
  Equiv,       // literal equivalence
};

enum class UnaryConnective : std::uint8_t {
  Neg,
  ModT,
  ModF,
  ModB,
  ModTB,
  ModTF,
  ModFB,
};

namespace detail {

using Row3 = std::array<TruthValue, 3>;
using Table3x3 = std::array<Row3, 3>;

// Index order is F, B, T on both axes.
inline constexpr Table3x3 kAnd{{
    {tvF, tvF, tvF},
    {tvF, tvB, tvB},
    {tvF, tvB, tvT},
}};
inline constexpr Table3x3 kOr{{
    {tvF, tvB, tvT},
    {tvB, tvB, tvT},
    {tvT, tvT, tvT},
}};
inline constexpr Table3x3 kNotor{{
    {tvT, tvT, tvT},
    {tvB, tvB, tvT},
    {tvF, tvB, tvT},
}};
inline constexpr Table3x3 kImpc{{
    {tvT, tvT, tvT},
    {tvB, tvB, tvT},
    {tvF, tvF, tvT},
}};
inline constexpr Table3x3 kImp{{
    {tvT, tvT, tvT},
    {tvF, tvB, tvT},
    {tvF, tvB, tvT},
}};
inline constexpr Table3x3 kLeq{{
    {tvT, tvT, tvT},
    {tvF, tvB, tvT},
    {tvF, tvF, tvT},
}};
inline constexpr Table3x3 kLatticeIff{{
    {tvT, tvB, tvF},
    {tvB, tvB, tvB},
    {tvF, tvB, tvT},
}};
inline constexpr Table3x3 kIffCc{{
    {tvT, tvB, tvF},
    {tvB, tvB, tvF},
    {tvF, tvF, tvT},
}};
inline constexpr Table3x3 kEquiv{{
    {tvT, tvF, tvF},
    {tvF, tvT, tvF},
    {tvF, tvF, tvT},
}};

inline constexpr Row3 kNeg{tvT, tvB, tvF};
inline constexpr Row3 kModT{tvF, tvF, tvT};
inline constexpr Row3 kModF{tvT, tvF, tvF};
inline constexpr Row3 kModB{tvF, tvT, tvF};
inline constexpr Row3 kModTB{tvF, tvT, tvT};
inline constexpr Row3 kModTF{tvT, tvF, tvT};
inline constexpr Row3 kModFB{tvT, tvT, tvF};

}  // namespace detail

constexpr TruthValue combine(BinaryConnective conn, TruthValue a, TruthValue b) {
  using detail::Table3x3;
  const Table3x3* t = nullptr;
  switch (conn) {
    case BinaryConnective::And: t = &detail::kAnd; break;
    case BinaryConnective::Or: t = &detail::kOr; break;
    case BinaryConnective::Notor: t = &detail::kNotor; break;
    case BinaryConnective::Impc: t = &detail::kImpc; break;
    case BinaryConnective::Imp: t = &detail::kImp; break;
    case BinaryConnective::Leq: t = &detail::kLeq; break;
    case BinaryConnective::LatticeIff: t = &detail::kLatticeIff; break;
    case BinaryConnective::IffCc: t = &detail::kIffCc; break;
    case BinaryConnective::Equiv: t = &detail::kEquiv; break;
  }
  return (*t)[idx(a)][idx(b)];
}

constexpr TruthValue transform(UnaryConnective conn, TruthValue a) {
  switch (conn) {
    case UnaryConnective::Neg: return detail::kNeg[idx(a)];
    case UnaryConnective::ModT: return detail::kModT[idx(a)];
    case UnaryConnective::ModF: return detail::kModF[idx(a)];
    case UnaryConnective::ModB: return detail::kModB[idx(a)];
    case UnaryConnective::ModTB: return detail::kModTB[idx(a)];
    case UnaryConnective::ModTF: return detail::kModTF[idx(a)];
    case UnaryConnective::ModFB: return detail::kModFB[idx(a)];
  }
  return tvF;  // unreachable
}

constexpr TruthValue tv_and(TruthValue a, TruthValue b) { return combine(BinaryConnective::And, a, b); }
constexpr TruthValue tv_or(TruthValue a, TruthValue b) { return combine(BinaryConnective::Or, a, b); }
constexpr TruthValue tv_neg(TruthValue a) { return transform(UnaryConnective::Neg, a); }

enum class TvClass : std::uint8_t { Valid, Correct, True, False };

constexpr bool classify(TvClass which, TruthValue a) {
  switch (which) {
    case TvClass::Valid: return a == tvT || a == tvB;
    case TvClass::Correct: return a == tvT || a == tvF;
    case TvClass::True: return a == tvT;
    case TvClass::False: return a == tvF;
  }
  return false;  // unreachable
}

constexpr bool is_valid(TruthValue a) { return classify(TvClass::Valid, a); }
constexpr bool is_correct(TruthValue a) { return classify(TvClass::Correct, a); }
constexpr bool is_true(TruthValue a) { return classify(TvClass::True, a); }

enum class FoldKind : std::uint8_t { Sup, Inf };

// sup of the empty multiset is the lattice bottom F; inf of it is the top T.
template <typename It>
constexpr TruthValue fold(FoldKind kind, It first, It last) {
  TruthValue acc = kind == FoldKind::Sup ? tvF : tvT;
  for (; first != last; ++first)
    acc = kind == FoldKind::Sup ? tv_sup(acc, *first) : tv_inf(acc, *first);
  return acc;
}

template <typename Range>
constexpr TruthValue fold(FoldKind kind, const Range& r) {
  return fold(kind, r.begin(), r.end());
}

inline char tv_char(TruthValue v) { return v == tvT ? 'T' : v == tvB ? 'B' : 'F'; }

inline TruthValue tv_from_char(char c) {
  switch (c) {
    case 'T': return tvT;
    case 'B': return tvB;
    case 'F': return tvF;
    default: throw std::invalid_argument(std::string("not a truth value: ") + c);
  }
}

inline std::string to_string(TruthValue v) { return std::string(1, tv_char(v)); }

}  // namespace qlogic
