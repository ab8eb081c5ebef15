#pragma once

// Recursive-descent parser for the predicate grammar. Precedence, loosest to
// tightest: == ; ~> and ==> (right-assoc) ; | ; & ; prefix operators. Binders
// extend maximally to the right. The fixedpoint variable is the reserved
// identifier X. Unbound identifiers in term position parse as free variables;
// supplying a value domain resolves matching names to value literals instead.

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qlogic/errors.hpp"
#include "qlogic/syntax.hpp"

namespace qlogic {

namespace parser_detail {

struct Token {
  enum Type { Ident, Punct, End } type = End;
  std::string text;
  size_t pos = 0;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

inline std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  size_t i = 0;
  auto two = [&](size_t j) { return text.substr(j, 2); };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') {  // comment to end of line
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (ident_start(c)) {
      size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      out.push_back({Token::Ident, text.substr(i, j - i), i});
      i = j;
      continue;
    }
    if (text.compare(i, 3, "==>") == 0) {
      out.push_back({Token::Punct, "==>", i});
      i += 3;
      continue;
    }
    if (i + 1 < text.size() && (two(i) == "==" || two(i) == "~>" || two(i) == ":=")) {
      out.push_back({Token::Punct, two(i), i});
      i += 2;
      continue;
    }
    if (std::string("!&|()[],.@=").find(c) != std::string::npos) {
      out.push_back({Token::Punct, std::string(1, c), i});
      ++i;
      continue;
    }
    fail(ErrorKind::SyntaxError, "unexpected character '" + std::string(1, c) + "' at position " +
                                     std::to_string(i));
  }
  out.push_back({Token::End, "", text.size()});
  return out;
}

inline const std::set<std::string>& keywords() {
  static const std::set<std::string> kw{
      "someone", "everyone", "quorum", "coquorum", "someoneall", "everyoneall",
      "quorumbox", "coquorumdiamond", "yesterday", "tomorrow", "forever", "sometime",
      "infinitely", "finally", "recent", "urecent", "isT", "isF", "isB", "isTB", "isTF",
      "isFB", "pointwise", "exists", "forall", "exists1", "exists01", "mu", "mru",
      "correct", "T", "B", "F", "X"};
  return kw;
}

inline std::optional<NodeKind> unary_kind(const std::string& kw) {
  static const std::map<std::string, NodeKind> m{
      {"isT", NodeKind::ModT}, {"isF", NodeKind::ModF}, {"isB", NodeKind::ModB},
      {"isTB", NodeKind::ModTB}, {"isTF", NodeKind::ModTF}, {"isFB", NodeKind::ModFB},
      {"someone", NodeKind::Someone}, {"everyone", NodeKind::Everyone},
      {"quorum", NodeKind::Quorum}, {"coquorum", NodeKind::Coquorum},
      {"someoneall", NodeKind::SomeoneAll}, {"everyoneall", NodeKind::EveryoneAll},
      {"quorumbox", NodeKind::QuorumBox}, {"coquorumdiamond", NodeKind::CoquorumDiamond},
      {"yesterday", NodeKind::Yesterday}, {"tomorrow", NodeKind::Tomorrow},
      {"forever", NodeKind::Forever}, {"sometime", NodeKind::Sometime},
      {"infinitely", NodeKind::Infinitely}, {"finally", NodeKind::Finally},
      {"recent", NodeKind::Recent}, {"urecent", NodeKind::URecent},
      {"pointwise", NodeKind::Pointwise}};
  auto it = m.find(kw);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

inline std::optional<NodeKind> binder_kind(const std::string& kw) {
  if (kw == "exists") return NodeKind::Exists;
  if (kw == "forall") return NodeKind::Forall;
  if (kw == "exists1") return NodeKind::ExistsUnique;
  if (kw == "exists01") return NodeKind::ExistsAffine;
  return std::nullopt;
}

class Parser {
 public:
  Parser(const std::string& text, const Signature& sig, const std::vector<std::string>* values)
      : tokens_(lex(text)), sig_(sig) {
    if (values)
      for (const std::string& v : *values) value_names_.insert(v);
    has_domain_ = values != nullptr;
  }

  Pred parse_predicate() {
    Pred p = parse_equiv();
    expect_end();
    return p;
  }

 private:
  const Token& tok(int ahead = 0) const {
    size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }

  bool at_punct(const std::string& s, int ahead = 0) const {
    return tok(ahead).type == Token::Punct && tok(ahead).text == s;
  }

  void advance() { ++pos_; }

  [[noreturn]] void err(const std::string& msg) const {
    fail(ErrorKind::SyntaxError, msg + " at position " + std::to_string(tok().pos));
  }

  void expect_punct(const std::string& s) {
    if (!at_punct(s)) err("expected '" + s + "'");
    advance();
  }

  void expect_end() {
    if (tok().type != Token::End) err("trailing input");
  }

  Pred parse_equiv() {
    Pred lhs = parse_impl();
    if (at_punct("==")) {
      advance();
      return equiv(std::move(lhs), parse_equiv());
    }
    return lhs;
  }

  Pred parse_impl() {
    Pred lhs = parse_or();
    if (at_punct("~>")) {
      advance();
      return notor(std::move(lhs), parse_impl());
    }
    if (at_punct("==>")) {
      advance();
      return impc(std::move(lhs), parse_impl());
    }
    return lhs;
  }

  Pred parse_or() {
    Pred lhs = parse_and();
    while (at_punct("|")) {
      advance();
      lhs = or_(std::move(lhs), parse_and());
    }
    return lhs;
  }

  Pred parse_and() {
    Pred lhs = parse_unary();
    while (at_punct("&")) {
      advance();
      lhs = and_(std::move(lhs), parse_unary());
    }
    return lhs;
  }

  Pred parse_unary() {
    if (at_punct("!")) {
      advance();
      return neg(parse_unary());
    }
    if (tok().type == Token::Ident) {
      const std::string& w = tok().text;
      if (auto k = unary_kind(w)) {
        advance();
        return un(*k, parse_unary());
      }
      if (w == "mu") return parse_mu();
      if (w == "mru") return parse_mru();
      if (auto b = binder_kind(w)) return parse_binder(*b, w);
      if (w == "correct") return parse_correct();
    }
    return parse_atom();
  }

  Pred parse_mu() {
    advance();  // mu
    if (!(tok().type == Token::Ident && tok().text == "X"))
      err("the fixedpoint binder is written 'mu X.'");
    advance();
    expect_punct(".");
    ++fix_depth_;
    Pred body = parse_equiv();
    --fix_depth_;
    return fix(std::move(body));
  }

  Pred parse_mru() {
    advance();  // mru
    std::string var;
    Pred body;
    if (tok().type == Token::Ident && at_punct(".", 1) && !keywords().count(tok().text)) {
      var = tok().text;
      advance();
      advance();
      bound_.push_back(var);
      body = parse_equiv();
      bound_.pop_back();
    } else {
      var = fresh_var();
      body = parse_elided_chain(var);
    }
    expect_punct("@");
    Term t = parse_term();
    return mru(std::move(var), std::move(body), std::move(t));
  }

  Pred parse_binder(NodeKind kind, const std::string& kw) {
    advance();  // the binder keyword
    if (tok().type == Token::Ident && at_punct(".", 1)) {
      if (keywords().count(tok().text)) err("cannot bind reserved word " + tok().text);
      std::string var = tok().text;
      advance();
      advance();
      bound_.push_back(var);
      Pred body = parse_equiv();
      bound_.pop_back();
      return binder(kind, std::move(var), std::move(body));
    }
    // functional elision: "exists propose" stands for "exists a. propose(a)"
    std::string var = fresh_var();
    Pred body = parse_elided_chain(var);
    (void)kw;
    return binder(kind, std::move(var), std::move(body));
  }

  // chain := predsym | unary-keyword chain | '(' chain ')'
  Pred parse_elided_chain(const std::string& var) {
    if (at_punct("(")) {
      advance();
      Pred inner = parse_elided_chain(var);
      expect_punct(")");
      return inner;
    }
    if (tok().type != Token::Ident) err("expected a unary predicate symbol");
    const std::string w = tok().text;
    if (auto k = unary_kind(w)) {
      advance();
      return un(*k, parse_elided_chain(var));
    }
    const int* ar = sig_.find(w);
    if (!ar) fail(ErrorKind::UnknownSymbol, "predicate symbol " + w + " not in signature");
    if (*ar != 1)
      fail(ErrorKind::ArityMismatch, "functional notation needs a unary symbol, " + w +
                                         " has arity " + std::to_string(*ar));
    advance();
    return atom(w, {Term::var(var)});
  }

  Pred parse_correct() {
    advance();  // correct
    expect_punct("[");
    std::vector<Pred> parts;
    while (true) {
      if (tok().type != Token::Ident) err("expected a predicate symbol in correct[...]");
      const std::string w = tok().text;
      const int* ar = sig_.find(w);
      if (!ar) fail(ErrorKind::UnknownSymbol, "predicate symbol " + w + " not in signature");
      if (*ar != 1)
        fail(ErrorKind::ArityMismatch, "correct[...] takes unary symbols, " + w + " has arity " +
                                           std::to_string(*ar));
      advance();
      parts.push_back(correct_sym(w));
      if (at_punct(",")) {
        advance();
        continue;
      }
      break;
    }
    expect_punct("]");
    Pred out = parts.back();
    for (size_t i = parts.size() - 1; i-- > 0;) out = and_(parts[i], out);
    return out;
  }

  Pred parse_atom() {
    if (at_punct("(")) {
      advance();
      Pred p = parse_equiv();
      expect_punct(")");
      return p;
    }
    if (tok().type != Token::Ident) err("expected a predicate");
    const std::string w = tok().text;
    if (w == "B") {
      advance();
      return blit();
    }
    if (w == "T") {
      advance();
      return tlit();
    }
    if (w == "F") {
      advance();
      return flit();
    }
    if (w == "X") {
      if (fix_depth_ == 0)
        fail(ErrorKind::StrayFixVar, "fixedpoint variable outside mu at position " +
                                         std::to_string(tok().pos));
      advance();
      return fixvar();
    }
    if (keywords().count(w)) err("unexpected keyword " + w);
    if (at_punct("(", 1)) {
      advance();
      advance();
      std::vector<Term> args;
      if (!at_punct(")")) {
        while (true) {
          args.push_back(parse_term());
          if (at_punct(",")) {
            advance();
            continue;
          }
          break;
        }
      }
      expect_punct(")");
      const int* ar = sig_.find(w);
      if (!ar) fail(ErrorKind::UnknownSymbol, "predicate symbol " + w + " not in signature");
      if (static_cast<size_t>(*ar) != args.size())
        fail(ErrorKind::ArityMismatch, w + " expects " + std::to_string(*ar) + " arguments, got " +
                                           std::to_string(args.size()));
      return atom(w, std::move(args));
    }
    if (at_punct("=", 1)) {
      Term lhs = parse_term();
      expect_punct("=");
      Term rhs = parse_term();
      return eq(std::move(lhs), std::move(rhs));
    }
    const int* ar = sig_.find(w);
    if (ar) {
      if (*ar != 0)
        fail(ErrorKind::ArityMismatch,
             w + " expects " + std::to_string(*ar) + " arguments, got 0");
      advance();
      return atom(w);
    }
    fail(ErrorKind::UnknownSymbol, "predicate symbol " + w + " not in signature");
  }

  Term parse_term() {
    if (tok().type != Token::Ident || keywords().count(tok().text))
      err("expected a term");
    std::string w = tok().text;
    advance();
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
      if (*it == w) return Term::var(w);
    if (has_domain_) {
      if (value_names_.count(w)) return Term::val(w);
      return Term::var(w);  // leave free; closure checks report it
    }
    return Term::var(w);
  }

  std::string fresh_var() {
    std::string base = "a";
    for (int i = 0;; ++i) {
      std::string cand = i == 0 ? base : base + std::to_string(i - 1);
      bool clash = false;
      for (const std::string& b : bound_)
        if (b == cand) clash = true;
      if (!clash && !value_names_.count(cand) && !sig_.find(cand)) return cand;
    }
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
  const Signature& sig_;
  std::set<std::string> value_names_;
  bool has_domain_ = false;
  std::vector<std::string> bound_;
  int fix_depth_ = 0;
};

}  // namespace parser_detail

inline Pred parse(const std::string& text, const Signature& sig) {
  return parser_detail::Parser(text, sig, nullptr).parse_predicate();
}

// Unbound identifiers whose names are in `values` become value literals.
inline Pred parse(const std::string& text, const Signature& sig,
                  const std::vector<std::string>& values) {
  return parser_detail::Parser(text, sig, &values).parse_predicate();
}

// Rewrites free variables whose names are declared values into value
// literals; any remaining free variable is reported by closure checks.
inline Pred resolve_values(const Pred& p, const std::vector<std::string>& values) {
  Pred out = p;
  for (const std::string& v : values) out = substitute(out, v, v);
  return out;
}

namespace parser_detail {

// A block-start line looks like "Name := ...". Names are arbitrary
// non-whitespace (so PaxSend! and PaxDecideL? work); bodies may span lines.
inline std::optional<std::pair<std::string, std::string>> split_block_start(
    const std::string& line) {
  size_t at = line.find(":=");
  if (at == std::string::npos) return std::nullopt;
  size_t b = 0;
  while (b < at && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
  size_t e = at;
  while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
  if (e <= b) return std::nullopt;
  std::string name = line.substr(b, e - b);
  if (name.find_first_of(" \t") != std::string::npos) return std::nullopt;
  return std::make_pair(name, line.substr(at + 2));
}

}  // namespace parser_detail

// Named predicate blocks: "name := predicate", one or more per file.
inline std::vector<std::pair<std::string, Pred>> parse_blocks(
    const std::string& text, const Signature& sig,
    const std::vector<std::string>* values = nullptr) {
  std::vector<std::pair<std::string, std::string>> raw;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (auto blk = parser_detail::split_block_start(line)) {
      raw.push_back(*blk);
    } else if (!raw.empty()) {
      raw.back().second += "\n" + line;
    } else if (line.find_first_not_of(" \t\r") != std::string::npos) {
      fail(ErrorKind::SyntaxError, "expected 'name := predicate' block");
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  if (raw.empty()) fail(ErrorKind::SyntaxError, "no 'name := predicate' block found");
  std::vector<std::pair<std::string, Pred>> out;
  for (auto& [name, body] : raw) {
    Pred p = values ? parse(body, sig, *values) : parse(body, sig);
    out.emplace_back(name, std::move(p));
  }
  return out;
}

}  // namespace qlogic
