#pragma once

// Theories as named axiom sets, validity of a theory under a valuation,
// bounded entailment search over valuation space, and GSLT.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qlogic/parser.hpp"
#include "qlogic/semantics.hpp"

namespace qlogic {

struct Axiom {
  std::string name;
  Pred pred;
  bool forward = false;  // finally-wrapped progress rule, participates in GSLT
};

struct Theory {
  std::string name;
  Signature sig;
  std::vector<Axiom> axioms;
  // Value names the axioms mention; they must exist in any checked model.
  std::vector<std::string> value_names;

  void add(std::string axiom_name, Pred p, bool forward = false) {
    axioms.push_back({std::move(axiom_name), std::move(p), forward});
  }

  const Axiom* find(const std::string& axiom_name) const {
    for (const Axiom& a : axioms)
      if (a.name == axiom_name) return &a;
    return nullptr;
  }
};

struct ViolatedContext {
  int stage = 0;
  int point = 0;
  int open_index = 0;
  TruthValue value = tvF;
};

struct AxiomVerdict {
  std::string name;
  bool valid = true;
  std::vector<ViolatedContext> violations;  // capped
  long total_violations = 0;
};

inline constexpr int kViolationCap = 50;

struct CheckReport {
  std::vector<AxiomVerdict> axioms;
  bool overall = true;
};

namespace theory_detail {

inline void require_compatible(const Theory& theory, const Valuation& val) {
  if (!val.signature().extends(theory.sig))
    fail(ErrorKind::BadInput,
         "valuation signature does not cover the symbols of theory " + theory.name);
  for (const std::string& v : theory.value_names) val.model().values.index(v);
}

}  // namespace theory_detail

// Each axiom is checked for validity at every context of its quotient space;
// violations list every failing (stage, point, open) with the truth value.
inline CheckReport check_theory(const Theory& theory, const Valuation& val) {
  theory_detail::require_compatible(theory, val);
  CheckReport report;
  for (const Axiom& ax : theory.axioms) {
    AxiomVerdict verdict;
    verdict.name = ax.name;
    ContextTable t = direct_eval(ax.pred, val);
    for (int s = 0; s < t.stages; ++s)
      for (int pt = 0; pt < t.points; ++pt)
        for (int o = 0; o < t.opens; ++o) {
          TruthValue v = t.at(s, pt, o);
          if (!is_valid(v)) {
            verdict.valid = false;
            ++verdict.total_violations;
            if (static_cast<int>(verdict.violations.size()) < kViolationCap)
              verdict.violations.push_back({s, pt, o, v});
          }
        }
    report.overall = report.overall && verdict.valid;
    report.axioms.push_back(std::move(verdict));
  }
  return report;
}

inline bool theory_valid(const Theory& theory, const Valuation& val) {
  theory_detail::require_compatible(theory, val);
  for (const Axiom& ax : theory.axioms)
    if (!holds(ax.pred, val)) return false;
  return true;
}

struct SearchBudget {
  enum class Mode { Exhaustive, Sampled } mode = Mode::Exhaustive;
  std::uint64_t max_valuations = 1u << 20;
  std::uint64_t seed = 0;
};

struct EntailmentVerdict {
  enum class Kind { Countermodel, NoCountermodelFound } kind = Kind::NoCountermodelFound;
  std::uint64_t examined = 0;
  bool exhaustive = false;
  std::optional<Valuation> countermodel;
};

// Searches valuations over the given finite model and time for one where the
// theory holds everywhere but phi does not. Exhaustive mode over the full
// table space is a proof of entailment for that model and time only.
inline EntailmentVerdict entails(const Theory& theory, const Pred& phi, const Model& model,
                                 const TimeStructure& time, const SearchBudget& budget) {
  Valuation val(model, theory.sig, time);
  theory_detail::require_compatible(theory, val);
  std::vector<TruthValue*> cells = val.flat_cells();

  auto is_countermodel = [&](const Valuation& v) {
    return theory_valid(theory, v) && !holds(phi, v);
  };

  EntailmentVerdict verdict;
  if (budget.mode == SearchBudget::Mode::Exhaustive) {
    long double space = 1;
    bool overflow = false;
    for (size_t i = 0; i < cells.size(); ++i) {
      space *= 3;
      if (space > static_cast<long double>(budget.max_valuations)) {
        overflow = true;
        break;
      }
    }
    if (overflow)
      fail(ErrorKind::BudgetExceeded,
           "exhaustive valuation space 3^" + std::to_string(cells.size()) +
               " exceeds the budget of " + std::to_string(budget.max_valuations));
    for (TruthValue* c : cells) *c = tvF;
    while (true) {
      ++verdict.examined;
      if (is_countermodel(val)) {
        verdict.kind = EntailmentVerdict::Kind::Countermodel;
        verdict.countermodel = val;
        return verdict;
      }
      // odometer in base 3 over the flattened cells
      size_t i = 0;
      for (; i < cells.size(); ++i) {
        if (*cells[i] == tvT) {
          *cells[i] = tvF;
        } else {
          *cells[i] = *cells[i] == tvF ? tvB : tvT;
          break;
        }
      }
      if (i == cells.size()) break;
    }
    verdict.exhaustive = true;
    return verdict;
  }

  std::mt19937_64 rng(budget.seed);
  for (std::uint64_t n = 0; n < budget.max_valuations; ++n) {
    for (TruthValue* c : cells) *c = static_cast<TruthValue>(rng() % 3);
    ++verdict.examined;
    if (is_countermodel(val)) {
      verdict.kind = EntailmentVerdict::Kind::Countermodel;
      verdict.countermodel = val;
      return verdict;
    }
  }
  return verdict;
}

// Least quotient stage from which every forward (finally-wrapped) axiom body
// is valid at every later stage; absent when a body fails on the loop.
inline std::optional<int> gslt(const Theory& theory, const Valuation& val) {
  theory_detail::require_compatible(theory, val);
  std::vector<Pred> bodies;
  for (const Axiom& ax : theory.axioms) {
    if (!ax.forward) continue;
    if (ax.pred->kind != NodeKind::Finally)
      fail(ErrorKind::BadInput, "forward axiom " + ax.name + " is not finally-wrapped");
    bodies.push_back(ax.pred->kids[0]);
  }
  if (bodies.empty()) return 0;

  int d = 0;
  for (const Pred& b : bodies) d = std::max(d, past_depth(desugar(b)));
  Quotient q(val.time(), d);
  // fail_before[s] = some body is invalid at a stage >= s
  int S = q.stage_count;
  std::vector<bool> bad(S, false);
  for (const Pred& b : bodies) {
    Pred wrapped = b;
    ContextTable t = eval_detail::Evaluator(val, q, /*direct=*/true).eval(wrapped);
    for (int s = 0; s < S; ++s)
      for (int pt = 0; pt < t.points && !bad[s]; ++pt)
        for (int o = 0; o < t.opens; ++o)
          if (!is_valid(t.at(s, pt, o))) {
            bad[s] = true;
            break;
          }
  }
  // a bad loop stage can never be outrun
  for (int s = S - q.period; s < S; ++s)
    if (bad[s]) return std::nullopt;
  int first_good = 0;
  for (int s = S - 1; s >= 0; --s)
    if (bad[s]) {
      first_good = s + 1;
      break;
    }
  return first_good;
}

// ---------------------------------------------------------------------------
// Theory files: "theory NAME", "signature P:arity ...", optional
// "values v1 v2 ...", then axiom blocks, each optionally flagged @forward.

inline std::string theory_to_text(const Theory& theory);
inline Theory theory_from_text(const std::string& text);

inline std::string theory_to_text(const Theory& theory) {
  std::string out = "theory " + theory.name + "\n";
  out += "signature";
  for (const auto& [name, arity] : theory.sig.symbols)
    out += " " + name + ":" + std::to_string(arity);
  out += "\n";
  if (!theory.value_names.empty()) {
    out += "values";
    for (const std::string& v : theory.value_names) out += " " + v;
    out += "\n";
  }
  for (const Axiom& ax : theory.axioms) {
    if (ax.forward) out += "@forward ";
    out += "axiom " + ax.name + " := " + pretty_print(ax.pred) + "\n";
  }
  return out;
}

namespace theory_detail {

inline std::vector<std::string> split_words(const std::string& line) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace theory_detail

inline Theory theory_from_text(const std::string& text) {
  Theory theory;
  bool have_sig = false;
  std::vector<std::string> lines;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    if (end == text.size()) break;
    start = end + 1;
  }
  for (const std::string& raw : lines) {
    std::string line = raw;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto words = theory_detail::split_words(line);
    if (words.empty()) continue;
    if (words[0] == "theory") {
      if (words.size() != 2) fail(ErrorKind::SyntaxError, "expected: theory NAME");
      theory.name = words[1];
      continue;
    }
    if (words[0] == "signature") {
      for (size_t i = 1; i < words.size(); ++i) {
        size_t colon = words[i].find(':');
        if (colon == std::string::npos)
          fail(ErrorKind::SyntaxError, "signature entries look like name:arity");
        theory.sig.add(words[i].substr(0, colon), std::stoi(words[i].substr(colon + 1)));
      }
      have_sig = true;
      continue;
    }
    if (words[0] == "values") {
      for (size_t i = 1; i < words.size(); ++i) theory.value_names.push_back(words[i]);
      continue;
    }
    bool forward = false;
    size_t w = 0;
    if (words[w] == "@forward") {
      forward = true;
      ++w;
    }
    if (w >= words.size() || words[w] != "axiom")
      fail(ErrorKind::SyntaxError, "expected an axiom line, got: " + line);
    ++w;
    if (!have_sig) fail(ErrorKind::SyntaxError, "signature must precede axioms");
    if (w + 1 >= words.size() || words[w + 1] != ":=")
      fail(ErrorKind::SyntaxError, "expected: axiom NAME := predicate");
    std::string name = words[w];
    size_t at = line.find(":=");
    std::string body = line.substr(at + 2);
    Pred p = parse(body, theory.sig, theory.value_names);
    theory.add(name, std::move(p), forward);
  }
  if (!have_sig) fail(ErrorKind::SyntaxError, "theory file has no signature");
  return theory;
}

}  // namespace qlogic
