// Command-line front end: evaluate predicates over traces, check theories,
// search for countermodels, compute GSLT, run the bundled demos, and answer
// semitopology queries. Exit codes: 0 all expected/valid, 1 violation or
// countermodel found, 2 usage or input error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlogic/qlogic.hpp"

namespace {

using namespace qlogic;

Theory load_theory(const std::string& name_or_path) {
  if (name_or_path == "pax") return build_thy_pax();
  if (name_or_path == "spax") return build_thy_spax();
  for (auto v : {SimpleVariant::ReliableNoCrash, SimpleVariant::ReliableCrash,
                 SimpleVariant::LossyNoCrash, SimpleVariant::LossyCrash})
    if (name_or_path == simple_variant_name(v)) return build_simple(v);
  return theory_from_text(read_file(name_or_path));
}

std::optional<std::vector<int>> parse_coords(const std::string& s) {
  std::vector<int> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t comma = s.find(',', start);
    std::string part = s.substr(start, comma == std::string::npos ? std::string::npos
                                                                  : comma - start);
    if (part.empty()) return std::nullopt;
    out.push_back(std::stoi(part));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void print_table(const ContextTable& t, const Valuation& val) {
  auto opens = val.model().st.nonempty_opens();
  std::cout << "quotient stages: " << t.stages << "\nopens:";
  for (size_t i = 0; i < opens.size(); ++i)
    std::cout << " " << i << "={" << Semitopology::set_to_string(opens[i]) << "}";
  std::cout << "\n";
  for (int s = 0; s < t.stages; ++s) {
    std::cout << "s=" << s << ":";
    for (int pt = 0; pt < t.points; ++pt) {
      std::cout << " p" << pt << "=[";
      for (int o = 0; o < t.opens; ++o) std::cout << tv_char(t.at(s, pt, o));
      std::cout << "]";
    }
    std::cout << "\n";
  }
}

Json table_to_json(const ContextTable& t) {
  Json rows = Json::array();
  for (int s = 0; s < t.stages; ++s) {
    Json points = Json::array();
    for (int pt = 0; pt < t.points; ++pt) {
      std::string os;
      for (int o = 0; o < t.opens; ++o) os += tv_char(t.at(s, pt, o));
      points.push_back(os);
    }
    rows.push_back(points);
  }
  return Json{{"stages", t.stages}, {"points", t.points}, {"opens", t.opens}, {"table", rows}};
}

void print_report(const CheckReport& rep, bool json) {
  if (json) {
    std::cout << check_report_to_json(rep).dump(2) << "\n";
    return;
  }
  for (const AxiomVerdict& a : rep.axioms) {
    std::cout << (a.valid ? "  valid   " : "  VIOLATED") << "  " << a.name;
    if (!a.valid) {
      std::cout << "  (" << a.total_violations << " failing contexts;";
      int shown = 0;
      for (const ViolatedContext& c : a.violations) {
        if (shown++ == 4) {
          std::cout << " ...";
          break;
        }
        std::cout << " " << c.stage << "," << c.point << "," << c.open_index << "="
                  << tv_char(c.value);
      }
      std::cout << ")";
    }
    std::cout << "\n";
  }
  std::cout << (rep.overall ? "all axioms valid" : "theory violated") << "\n";
}

struct DemoResult {
  Json json;
  bool as_expected = true;
};

DemoResult run_demo(const std::string& name, const std::string& export_dir) {
  Theory theory;
  Scenario sc;
  std::vector<std::pair<std::string, Pred>> goals;
  if (name == "pax-happy" || name == "pax-crash" || name == "pax-conflict" ||
      name == "pax-gslt") {
    theory = build_thy_pax();
    ScenarioKind kind = name == "pax-happy"     ? ScenarioKind::Happy
                        : name == "pax-crash"   ? ScenarioKind::Crash
                        : name == "pax-conflict" ? ScenarioKind::ConflictingDecide
                                                 : ScenarioKind::PreSync;
    sc = build_scenario(kind);
    goals = correctness_goals(PaxosFlavor::Pax);
  } else if (name == "spax-happy") {
    theory = build_thy_spax();
    sc = build_scenario(ScenarioKind::Happy);
    sc.label = "spax-happy";
    sc.valuation = sc.valuation.restricted(theory.sig);
    goals = correctness_goals(PaxosFlavor::SPax);
  } else {
    bool found = false;
    for (auto v : {SimpleVariant::ReliableNoCrash, SimpleVariant::ReliableCrash,
                   SimpleVariant::LossyNoCrash, SimpleVariant::LossyCrash})
      if (name == simple_variant_name(v)) {
        theory = build_simple(v);
        sc = build_simple_scenario(v);
        found = true;
      }
    if (!found) fail(ErrorKind::BadInput, "unknown demo " + name);
  }

  DemoResult result;
  CheckReport rep = check_theory(theory, sc.valuation);
  bool ok = rep.overall == sc.expected_axioms_valid;
  for (const std::string& want : sc.expected_violated) {
    bool seen = false;
    for (const AxiomVerdict& a : rep.axioms) seen = seen || (a.name == want && !a.valid);
    ok = ok && seen;
  }
  Json jgoals = Json::object();
  for (auto& [gname, goal] : goals) {
    bool actual = holds(goal, sc.valuation);
    jgoals[gname] = actual;
    for (auto& [ename, expected] : sc.expected_goals)
      if (ename == gname) ok = ok && actual == expected;
  }
  auto g = gslt(theory, sc.valuation);
  if (sc.expected_gslt) ok = ok && g && *g == *sc.expected_gslt;

  result.as_expected = ok;
  result.json["demo"] = sc.label;
  result.json["theory"] = theory.name;
  result.json["check"] = check_report_to_json(rep);
  result.json["goals"] = jgoals;
  result.json["gslt"] = g ? Json(*g) : Json(nullptr);
  result.json["as_expected"] = ok;

  if (!export_dir.empty()) {
    write_file(export_dir + "/" + sc.label + ".thy", theory_to_text(theory));
    write_file(export_dir + "/" + sc.label + ".json", valuation_to_json(sc.valuation).dump(2));
  }
  return result;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QLogic: three-valued modal fixed-point logic over semitopologies"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "structured JSON output");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a predicate over a trace");
  std::string eval_formula, eval_trace, eval_at;
  bool eval_denote = false;
  eval_cmd->add_option("--formula", eval_formula, "predicate text")->required();
  eval_cmd->add_option("--trace", eval_trace, "trace JSON file")->required();
  eval_cmd->add_option("--at", eval_at, "context as stage,point,open-index");
  eval_cmd->add_flag("--denote", eval_denote, "evaluate via desugar + core denotation");

  // check
  auto* check_cmd = app.add_subcommand("check", "check a theory against a trace");
  std::string check_theory_name, check_trace;
  check_cmd->add_option("--theory", check_theory_name, "theory name or file")->required();
  check_cmd->add_option("--trace", check_trace, "trace JSON file")->required();

  // search
  auto* search_cmd = app.add_subcommand("search", "countermodel search for an entailment");
  std::string search_theory, search_goal, search_goal_name, search_model, search_time = "2";
  std::vector<std::string> search_values;
  std::string search_mode = "exhaustive";
  std::uint64_t search_max = 1u << 22;
  std::uint64_t search_seed = 0;
  std::string search_out;
  search_cmd->add_option("--theory", search_theory, "theory name or file")->required();
  search_cmd->add_option("--goal", search_goal, "goal predicate text");
  search_cmd->add_option("--goal-name", search_goal_name,
                         "bundled goal: Validity, Agreement or Termination");
  search_cmd->add_option("--model", search_model, "semitopology JSON file")->required();
  search_cmd->add_option("--values", search_values, "value names")->required();
  search_cmd->add_option("--time", search_time, "lasso as prefix[,loop] (default stutter)");
  search_cmd->add_option("--mode", search_mode, "exhaustive or sampled");
  search_cmd->add_option("--max", search_max, "budget: max valuations");
  search_cmd->add_option("--seed", search_seed, "sampling seed");
  search_cmd->add_option("--out", search_out, "write a found countermodel trace here");

  // gslt
  auto* gslt_cmd = app.add_subcommand("gslt", "global stabilisation of logical time");
  std::string gslt_theory, gslt_trace;
  gslt_cmd->add_option("--theory", gslt_theory, "theory name or file")->required();
  gslt_cmd->add_option("--trace", gslt_trace, "trace JSON file")->required();

  // demo
  auto* demo_cmd = app.add_subcommand("demo", "run a named bundled demo end to end");
  std::string demo_name, demo_export;
  demo_cmd
      ->add_option("--name,name", demo_name,
                   "simple-reliable | simple-crash | simple-lossy | simple-lossy-crash | "
                   "pax-happy | pax-crash | pax-conflict | pax-gslt | spax-happy")
      ->required();
  demo_cmd->add_option("--export", demo_export, "directory for theory/trace export");

  // twined
  auto* twined_cmd = app.add_subcommand("twined", "semitopology queries");
  std::string twined_model, twined_dense, twined_noi;
  int twined_n = -1;
  twined_cmd->add_option("--model", twined_model, "semitopology JSON file")->required();
  twined_cmd->add_option("--n", twined_n, "check the n-twined property");
  twined_cmd->add_option("--dense", twined_dense, "comma-separated point set");
  twined_cmd->add_option("--noi", twined_noi, "comma-separated point set");

  CLI11_PARSE(app, argc, argv);

  try {
    if (const char* env_seed = std::getenv("QLOGIC_SEED")) search_seed = std::stoull(env_seed);

    if (*eval_cmd) {
      Valuation val = valuation_from_json(Json::parse(read_file(eval_trace)));
      Pred p = parse(eval_formula, val.signature(), val.model().values.names);
      ContextTable t = eval_denote ? denote(p, val) : direct_eval(p, val);
      if (!eval_at.empty()) {
        auto coords = parse_coords(eval_at);
        if (!coords || coords->size() != 3)
          fail(ErrorKind::BadInput, "--at wants stage,point,open-index");
        if ((*coords)[0] < 0 || (*coords)[0] >= t.stages || (*coords)[1] < 0 ||
            (*coords)[1] >= t.points || (*coords)[2] < 0 || (*coords)[2] >= t.opens)
          fail(ErrorKind::BadInput, "--at coordinates out of range");
        TruthValue v = t.at((*coords)[0], (*coords)[1], (*coords)[2]);
        if (json)
          std::cout << Json{{"at", eval_at}, {"tv", to_string(v)}}.dump(2) << "\n";
        else
          std::cout << tv_char(v) << "\n";
      } else if (json) {
        std::cout << table_to_json(t).dump(2) << "\n";
      } else {
        print_table(t, val);
      }
      return 0;
    }

    if (*check_cmd) {
      Theory theory = load_theory(check_theory_name);
      Valuation val = valuation_from_json(Json::parse(read_file(check_trace)));
      CheckReport rep = check_theory(theory, val);
      print_report(rep, json);
      return rep.overall ? 0 : 1;
    }

    if (*search_cmd) {
      Theory theory = load_theory(search_theory);
      if (search_goal.empty() == search_goal_name.empty())
        fail(ErrorKind::BadInput, "give exactly one of --goal and --goal-name");
      Pred goal;
      if (!search_goal_name.empty()) {
        auto flavor = theory.name == "spax" ? PaxosFlavor::SPax : PaxosFlavor::Pax;
        for (auto& [n, g] : correctness_goals(flavor))
          if (n == search_goal_name) goal = g;
        if (!goal) fail(ErrorKind::BadInput, "unknown goal name " + search_goal_name);
      } else {
        goal = parse(search_goal, theory.sig, search_values);
      }
      Semitopology st = semitopology_from_json(Json::parse(read_file(search_model)));
      Model model{st, ValueDomain(search_values)};
      auto tm = parse_coords(search_time);
      if (!tm || tm->empty() || tm->size() > 2)
        fail(ErrorKind::BadInput, "--time wants prefix or prefix,loop");
      TimeStructure time = tm->size() == 1 ? TimeStructure::stutter((*tm)[0])
                                           : TimeStructure((*tm)[0], (*tm)[1]);
      SearchBudget budget;
      budget.mode = search_mode == "sampled" ? SearchBudget::Mode::Sampled
                                             : SearchBudget::Mode::Exhaustive;
      budget.max_valuations = search_max;
      budget.seed = search_seed;
      EntailmentVerdict verdict = entails(theory, goal, model, time, budget);
      bool counter = verdict.kind == EntailmentVerdict::Kind::Countermodel;
      if (json) {
        Json j{{"verdict", counter ? "Countermodel" : "NoCountermodelFound"},
               {"examined", verdict.examined},
               {"exhaustive", verdict.exhaustive},
               {"mode", search_mode},
               {"seed", search_seed}};
        if (counter) j["countermodel"] = valuation_to_json(*verdict.countermodel);
        std::cout << j.dump(2) << "\n";
      } else if (counter) {
        std::cout << "Countermodel found after " << verdict.examined << " valuations ("
                  << search_mode << ")\n";
        if (search_out.empty())
          std::cout << valuation_to_json(*verdict.countermodel).dump(2) << "\n";
      } else {
        std::cout << "NoCountermodelFound: examined " << verdict.examined << " valuations ("
                  << (verdict.exhaustive ? "exhaustive" : "sampled") << ")\n";
      }
      if (counter && !search_out.empty())
        write_file(search_out, valuation_to_json(*verdict.countermodel).dump(2));
      return counter ? 1 : 0;
    }

    if (*gslt_cmd) {
      Theory theory = load_theory(gslt_theory);
      Valuation val = valuation_from_json(Json::parse(read_file(gslt_trace)));
      auto g = gslt(theory, val);
      if (json)
        std::cout << Json{{"gslt", g ? Json(*g) : Json(nullptr)}}.dump(2) << "\n";
      else
        std::cout << (g ? std::to_string(*g) : "none") << "\n";
      return g ? 0 : 1;
    }

    if (*demo_cmd) {
      DemoResult result = run_demo(demo_name, demo_export);
      if (json) {
        std::cout << result.json.dump(2) << "\n";
      } else {
        std::cout << "demo " << demo_name << "\n";
        std::cout << "  axioms valid: " << result.json["check"]["overall"] << "\n";
        for (auto& [gname, v] : result.json["goals"].items())
          std::cout << "  goal " << gname << ": " << v << "\n";
        std::cout << "  gslt: " << result.json["gslt"].dump() << "\n";
        std::cout << "  as expected: " << (result.as_expected ? "yes" : "NO") << "\n";
      }
      return result.as_expected ? 0 : 1;
    }

    if (*twined_cmd) {
      Semitopology st = semitopology_from_json(Json::parse(read_file(twined_model)));
      Json j;
      if (twined_n >= 0) j["twined"] = {{"n", twined_n}, {"result", st.is_n_twined(twined_n)}};
      auto to_set = [&](const std::string& s) {
        PointSet out = 0;
        if (auto coords = parse_coords(s))
          for (int p : *coords) out |= 1u << p;
        return out;
      };
      if (!twined_dense.empty())
        j["dense"] = {{"set", twined_dense}, {"result", st.dense(to_set(twined_dense))}};
      if (!twined_noi.empty())
        j["noi"] = {{"set", twined_noi}, {"result", st.noi(to_set(twined_noi))}};
      if (json) {
        std::cout << j.dump(2) << "\n";
      } else {
        if (j.contains("twined"))
          std::cout << twined_n << "-twined: "
                    << (j["twined"]["result"].get<bool>() ? "true" : "false") << "\n";
        if (j.contains("dense"))
          std::cout << "dense({" << twined_dense
                    << "}): " << (j["dense"]["result"].get<bool>() ? "true" : "false") << "\n";
        if (j.contains("noi"))
          std::cout << "noi({" << twined_noi
                    << "}): " << (j["noi"]["result"].get<bool>() ? "true" : "false") << "\n";
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
