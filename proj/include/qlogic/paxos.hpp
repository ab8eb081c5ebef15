#pragma once

// Executable theories: the four Simple-protocol axiomatisations, Declarative
// Paxos, Simpler Declarative Paxos, their correctness goals, the recipe that
// derives forward rules from backward rules, and hand-scheduled scenario
// traces that the checker verifies end to end.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qlogic/theory.hpp"

namespace qlogic {

enum class SimpleVariant {
  ReliableNoCrash,
  ReliableCrash,
  LossyNoCrash,
  LossyCrash,
};

inline const char* simple_variant_name(SimpleVariant v) {
  switch (v) {
    case SimpleVariant::ReliableNoCrash: return "simple-reliable";
    case SimpleVariant::ReliableCrash: return "simple-crash";
    case SimpleVariant::LossyNoCrash: return "simple-lossy";
    case SimpleVariant::LossyCrash: return "simple-lossy-crash";
  }
  return "simple";
}

namespace paxos_detail {

inline Pred P(const Theory& th, const std::string& text) {
  return parse(text, th.sig, th.value_names);
}

}  // namespace paxos_detail

// The Simple protocol: propose/accept/decide as predicate constants, with the
// four failure-assumption axiom blocks.
inline Theory build_simple(SimpleVariant variant) {
  using paxos_detail::P;
  Theory th;
  th.name = simple_variant_name(variant);
  th.sig.add("propose", 0);
  th.sig.add("accept", 0);
  th.sig.add("decide", 0);

  th.add("SimpAccept?", P(th, "accept ==> someoneall propose"));
  switch (variant) {
    case SimpleVariant::LossyNoCrash:
      th.add("SimpDecide?", P(th, "decide ==> propose & quorumbox accept"));
      break;
    default:
      th.add("SimpDecide?", P(th, "decide ==> propose & someoneall accept"));
      break;
  }

  switch (variant) {
    case SimpleVariant::ReliableNoCrash:
      th.add("SimpAccept!", P(th, "someoneall propose ==> accept"));
      th.add("SimpDecide!", P(th, "propose & someoneall accept ==> decide"));
      th.add("Correct", P(th, "isTF propose & isTF accept & isTF decide"));
      break;
    case SimpleVariant::ReliableCrash:
      th.add("SimpAccept!", P(th, "someoneall propose ~> accept"));
      th.add("SimpDecide!", P(th, "propose & someoneall accept ~> decide"));
      for (const char* s : {"propose", "accept", "decide"})
        th.add("Uncrashed[" + std::string(s) + "]",
               P(th, "quorumbox isTB " + std::string(s) + " ~> someoneall isT " + s));
      break;
    case SimpleVariant::LossyNoCrash:
      th.add("SimpAccept!", P(th, "finally (someoneall propose ==> accept)"), true);
      th.add("SimpDecide!", P(th, "finally ((propose & someoneall accept) ==> decide)"), true);
      th.add("Correct", P(th, "isTF propose & isTF accept & isTF decide"));
      break;
    case SimpleVariant::LossyCrash:
      th.add("SimpAccept!", P(th, "finally (someoneall propose ~> accept)"), true);
      th.add("SimpDecide!", P(th, "finally ((propose & someoneall accept) ~> decide)"), true);
      for (const char* s : {"propose", "accept", "decide"})
        th.add("Uncrashed[" + std::string(s) + "]",
               P(th, "isTB quorumbox " + std::string(s) + " ~> isT someoneall " + s));
      break;
  }
  return th;
}

// Declarative Paxos. The LdrExt axiom scheme is instantiated over the atomic
// predicates of the signature at all value tuples, plus the universal write
// instance LdrExt'; the value names are the instantiation family's domain.
inline Theory build_thy_pax(std::vector<std::string> values = {"v1", "v2", "udfn"}) {
  using paxos_detail::P;
  Theory th;
  th.name = "pax";
  th.value_names = std::move(values);
  th.sig.add("leader", 0);
  th.sig.add("propose", 1);
  th.sig.add("send", 1);
  th.sig.add("write", 1);
  th.sig.add("accept", 1);
  th.sig.add("decide", 1);

  // backward rules
  th.add("PaxPropose?", P(th, "forall v. propose(v) ==> leader & ! (v = udfn)"));
  th.add("PaxSend?",
         P(th,
           "forall v. send(v) ==> someoneall exists propose & "
           "((mru accept @ v) | (! isT recent exists accept & v = udfn))"));
  th.add("PaxWrite?",
         P(th,
           "forall v. write(v) ==> leader & quorum (everyone exists send & "
           "((mru someone accept @ v) | (propose(v) & ! isT recent exists someone accept)))"));
  th.add("PaxAccept?", P(th, "forall v. accept(v) ==> someoneall write(v)"));
  th.add("PaxDecideL?", P(th, "forall v. leader ==> decide(v) ==> quorumbox accept(v)"));
  th.add("PaxDecide~L?",
         P(th, "forall v. ! leader ==> decide(v) ==> someoneall (leader & decide(v))"));

  // forward rules; all but PaxPropose! are finally-wrapped and drive GSLT
  th.add("PaxPropose!", P(th, "leader ~> exists propose"));
  th.add("PaxSend!", P(th, "finally (someoneall exists propose ~> exists send)"), true);
  th.add("PaxWrite!",
         P(th, "finally ((leader & quorumbox exists send & exists propose) ~> exists write)"),
         true);
  th.add("PaxAccept!", P(th, "finally (exists someoneall write ~> exists accept)"), true);
  th.add("PaxDecideL!", P(th, "finally ((leader & exists quorumbox accept) ~> exists decide)"),
         true);
  th.add("PaxDecide~L!",
         P(th,
           "finally ((! leader & someoneall (leader & exists decide)) ~> exists decide)"),
         true);

  // other rules, for correctness and liveness
  th.add("LdrExist", P(th, "isTF leader & isT someoneall leader"));
  th.add("LdrExt[leader]", P(th, "leader ==> someoneall (leader & leader) ==> leader"));
  for (const char* s : {"propose", "send", "write", "accept", "decide"})
    for (const std::string& v : th.value_names) {
      std::string a = std::string(s) + "(" + v + ")";
      th.add("LdrExt[" + a + "]",
             P(th, "leader ==> someoneall (leader & " + a + ") ==> " + a));
    }
  th.add("LdrExt'",
         P(th, "forall v. leader ==> someoneall (leader & write(v)) ==> write(v)"));
  th.add("LdrCorrect", P(th, "infinitely (leader ==> correct[propose, write, decide])"));
  th.add("PaxPCorrect",
         P(th,
           "quorumbox correct[propose] & quorumbox correct[send] & quorumbox correct[accept] & "
           "quorumbox correct[write] & quorumbox correct[decide]"));
  th.add("PaxPropose01", P(th, "exists01 propose"));
  th.add("PaxWrite01", P(th, "exists01 write"));
  th.add("Pax2Twined", P(th, "forall v. quorumbox accept(v) ==> coquorumdiamond accept(v)"));
  return th;
}

// Simpler Declarative Paxos: no send symbol, eleven axioms.
inline Theory build_thy_spax() {
  using paxos_detail::P;
  Theory th;
  th.name = "spax";
  th.sig.add("leader", 0);
  th.sig.add("propose", 1);
  th.sig.add("write", 1);
  th.sig.add("accept", 1);
  th.sig.add("decide", 1);

  th.add("SPaxPropose?", P(th, "forall v. propose(v) ==> leader"));
  th.add("SPaxWrite?",
         P(th,
           "forall v. write(v) ==> leader & quorum "
           "((mru someone accept @ v) | (propose(v) & ! isT recent exists someone accept))"));
  th.add("SPaxAccept?", P(th, "forall v. accept(v) ==> someoneall write(v)"));
  th.add("SPaxDecide?", P(th, "forall v. decide(v) ==> quorumbox accept(v)"));

  th.add("SPaxWrite!", P(th, "finally (leader ~> exists write)"), true);
  th.add("SPaxAccept!", P(th, "finally (exists someoneall write ~> exists accept)"), true);
  th.add("SPaxDecide!", P(th, "finally (exists quorumbox accept ~> exists decide)"), true);

  th.add("SLdrExist", P(th, "isTF leader & isT someoneall leader"));
  th.add("SLdrCorrect",
         P(th, "infinitely someoneall (leader & correct[propose, write, decide])"));
  th.add("SPaxPCorrect", P(th, "quorumbox correct[accept]"));
  th.add("SPaxWrite01", P(th, "exists01 someoneall write"));
  return th;
}

enum class PaxosFlavor { Pax, SPax };

// The three correctness-theorem statements as checkable formulas.
inline std::vector<std::pair<std::string, Pred>> correctness_goals(PaxosFlavor flavor) {
  Theory th = flavor == PaxosFlavor::Pax ? build_thy_pax() : build_thy_spax();
  using paxos_detail::P;
  std::vector<std::pair<std::string, Pred>> goals;
  goals.emplace_back(
      "Validity",
      P(th, "forall v. decide(v) ==> urecent someoneall (leader & propose(v))"));
  goals.emplace_back(
      "Agreement",
      P(th, "forall v. forall v'. urecent someoneall decide(v) ==> someoneall decide(v') "
            "==> v' = v"));
  goals.emplace_back("Termination", P(th, "infinitely everyoneall exists decide"));
  return goals;
}

// ---------------------------------------------------------------------------
// Recipe for deriving forward rules from backward rules. A backward rule
// "forall v. chi ==> post(v) ==> pre(v)" generates the forward rule
// "(exists v. chi & pre(v)) ~> exists v. post(v)", finally-wrapped for every
// pair except Propose.

struct RulePair {
  std::string backward_name;
  std::string forward_name;
  std::string var;
  Pred chi;  // may be null
  Pred post;
  Pred pre;
  bool wrap_finally = true;
};

inline Pred recipe_forward(const RulePair& pair) {
  Pred lhs = pair.chi ? and_(pair.chi, pair.pre) : pair.pre;
  Pred body = notor(exists(pair.var, std::move(lhs)), exists(pair.var, pair.post));
  return pair.wrap_finally ? un(NodeKind::Finally, std::move(body)) : body;
}

inline std::vector<RulePair> pax_rule_pairs(const Theory& pax) {
  auto p = [&](const std::string& s) { return parse(s, pax.sig, pax.value_names); };
  std::vector<RulePair> pairs;
  pairs.push_back({"PaxPropose?", "PaxPropose!", "v", nullptr, p("propose(v)"),
                   p("leader & ! (v = udfn)"), false});
  pairs.push_back({"PaxSend?", "PaxSend!", "v", nullptr, p("send(v)"),
                   p("someoneall exists propose & "
                     "((mru accept @ v) | (! isT recent exists accept & v = udfn))"),
                   true});
  pairs.push_back({"PaxWrite?", "PaxWrite!", "v", nullptr, p("write(v)"),
                   p("leader & quorum (everyone exists send & ((mru someone accept @ v) | "
                     "(propose(v) & ! isT recent exists someone accept)))"),
                   true});
  pairs.push_back({"PaxAccept?", "PaxAccept!", "v", nullptr, p("accept(v)"),
                   p("someoneall write(v)"), true});
  pairs.push_back({"PaxDecideL?", "PaxDecideL!", "v", p("leader"), p("decide(v)"),
                   p("quorumbox accept(v)"), true});
  pairs.push_back({"PaxDecide~L?", "PaxDecide~L!", "v", p("! leader"), p("decide(v)"),
                   p("someoneall (leader & decide(v))"), true});
  return pairs;
}

// ---------------------------------------------------------------------------
// Scenario traces.

enum class ScenarioKind { Happy, Crash, ConflictingDecide, PreSync };

struct ScenarioParams {
  int n = 3;                 // all_but(n, f) semitopology
  int f = 1;
  std::vector<std::string> values = {"v1", "v2", "udfn"};
  int prefix_len = 8;        // stutter lasso length
  int sync_stage = 3;        // pre_sync only; happy/crash/conflict sync at 1
  int crash_from = 5;        // crash only
  int conflict_from = 4;     // conflicting_decide only
};

struct Scenario {
  std::string label;
  Valuation valuation;
  bool expected_axioms_valid = true;
  std::vector<std::pair<std::string, bool>> expected_goals;
  std::optional<int> expected_gslt;
  std::vector<std::string> expected_violated;  // must appear among the violations
};

namespace paxos_detail {

// The happy schedule: a full Paxos round at every stage >= sync, first round
// sending udfn, later rounds carrying the decided value forward.
inline Valuation happy_valuation(const Theory& pax, const ScenarioParams& prm, int sync) {
  Semitopology st = Semitopology::all_but(prm.n, prm.f);
  if (!st.is_n_twined(2))
    fail(ErrorKind::InfeasibleParams,
         "Pax2Twined is unsatisfiable on a semitopology that is not 2-twined");
  bool has_udfn = false;
  for (const std::string& v : prm.values) has_udfn = has_udfn || v == "udfn";
  if (!has_udfn || prm.values.size() < 2)
    fail(ErrorKind::InfeasibleParams, "values must include udfn and at least one real value");
  if (sync < 0 || sync >= prm.prefix_len - 1)
    fail(ErrorKind::InfeasibleParams, "sync stage must leave room for the decided loop state");

  Model model{st, ValueDomain(prm.values)};
  Valuation val(model, pax.sig, TimeStructure::stutter(prm.prefix_len));

  std::string v1;
  for (const std::string& v : prm.values)
    if (v != "udfn") {
      v1 = v;
      break;
    }

  const int leader_point = 0;
  for (int s = 0; s < prm.prefix_len; ++s) {
    val.set("leader", s, leader_point, {}, tvT);
    val.set("propose", s, leader_point, {v1}, tvT);
    if (s < sync) continue;
    for (int pt = 0; pt < prm.n; ++pt) {
      val.set("send", s, pt, {s == sync ? std::string("udfn") : v1}, tvT);
      val.set("accept", s, pt, {v1}, tvT);
      val.set("decide", s, pt, {v1}, tvT);
    }
    val.set("write", s, leader_point, {v1}, tvT);
  }
  return val;
}

}  // namespace paxos_detail

inline Scenario build_scenario(ScenarioKind kind, const ScenarioParams& prm = {},
                               const Theory* pax_theory = nullptr) {
  Theory pax = pax_theory ? *pax_theory : build_thy_pax(prm.values);
  Scenario sc;
  std::string v1, v2;
  for (const std::string& v : prm.values)
    if (v != "udfn") {
      if (v1.empty()) v1 = v;
      else if (v2.empty()) v2 = v;
    }

  switch (kind) {
    case ScenarioKind::Happy: {
      sc.label = "pax-happy";
      sc.valuation = paxos_detail::happy_valuation(pax, prm, 1);
      sc.expected_axioms_valid = true;
      sc.expected_goals = {{"Validity", true}, {"Agreement", true}, {"Termination", true}};
      sc.expected_gslt = 1;
      break;
    }
    case ScenarioKind::PreSync: {
      sc.label = "pax-gslt";
      sc.valuation = paxos_detail::happy_valuation(pax, prm, prm.sync_stage);
      sc.expected_axioms_valid = true;
      sc.expected_goals = {{"Validity", true}, {"Agreement", true}, {"Termination", true}};
      sc.expected_gslt = prm.sync_stage;
      break;
    }
    case ScenarioKind::Crash: {
      sc.label = "pax-crash";
      if (prm.crash_from <= 1 || prm.crash_from >= prm.prefix_len)
        fail(ErrorKind::InfeasibleParams, "crash stage must fall after the first round");
      Valuation val = paxos_detail::happy_valuation(pax, prm, 1);
      int crashed = prm.n - 1;  // a non-leader point
      for (int s = prm.crash_from; s < prm.prefix_len; ++s) {
        for (const char* sym : {"propose", "send", "write", "accept"})
          val.set_all_args(sym, s, crashed, tvB);
        // A crashed decide is B exactly at the decided value. Smashing every
        // value to B would break PaxDecide~L?: with a correct leader flag the
        // chain evaluates T ==> (B ==> F) = F at values no leader decides.
        val.set_all_args("decide", s, crashed, tvF);
        val.set("decide", s, crashed, {v1}, tvB);
      }
      sc.valuation = std::move(val);
      sc.expected_axioms_valid = true;
      sc.expected_goals = {{"Validity", true}, {"Agreement", true}, {"Termination", true}};
      sc.expected_gslt = 1;
      break;
    }
    case ScenarioKind::ConflictingDecide: {
      sc.label = "pax-conflict";
      if (v2.empty())
        fail(ErrorKind::InfeasibleParams, "conflicting_decide needs two distinct real values");
      if (prm.conflict_from <= 1 || prm.conflict_from >= prm.prefix_len)
        fail(ErrorKind::InfeasibleParams, "conflict stage must fall after the first round");
      Valuation val = paxos_detail::happy_valuation(pax, prm, 1);
      for (int s = prm.conflict_from; s < prm.prefix_len; ++s)
        val.set("decide", s, 0, {v2}, tvT);  // the leader decides a second value
      sc.valuation = std::move(val);
      sc.expected_axioms_valid = false;
      sc.expected_violated = {"PaxDecideL?"};
      sc.expected_goals = {{"Validity", false}, {"Agreement", false}, {"Termination", true}};
      sc.expected_gslt = 1;
      break;
    }
  }
  return sc;
}

// Scenario traces for the Simple-protocol demos; self-verifying like the
// Paxos ones. Points: all_but(3,1); pt0 proposes and decides.
inline Scenario build_simple_scenario(SimpleVariant variant) {
  Theory th = build_simple(variant);
  Model model{Semitopology::all_but(3, 1), ValueDomain({"unit"})};
  TimeStructure time = TimeStructure::stutter(4);
  Valuation val(model, th.sig, time);

  bool lossy = variant == SimpleVariant::LossyNoCrash || variant == SimpleVariant::LossyCrash;
  bool crash = variant == SimpleVariant::ReliableCrash || variant == SimpleVariant::LossyCrash;
  int accept_from = lossy ? 2 : 1;  // the lossy network drops the first round
  int crash_from = variant == SimpleVariant::ReliableCrash ? 2 : 0;

  for (int s = 1; s < time.prefix_len; ++s) {
    val.set("propose", s, 0, {}, tvT);
    if (s >= accept_from) {
      for (int pt = 0; pt < 3; ++pt) val.set("accept", s, pt, {}, tvT);
      val.set("decide", s, 0, {}, tvT);
    }
  }
  if (crash) val.crash(2, crash_from);

  Scenario sc;
  sc.label = simple_variant_name(variant);
  sc.valuation = std::move(val);
  sc.expected_axioms_valid = true;
  sc.expected_gslt = lossy ? 2 : 0;
  return sc;
}

}  // namespace qlogic
