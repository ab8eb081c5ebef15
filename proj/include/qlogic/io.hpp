#pragma once

// JSON forms: semitopologies ({"all_but":{...}} or explicit opens) and trace
// files (model + values + lasso time + defaults + entries + crash marks).
// ordered_json keeps field order stable so output is byte-deterministic.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlogic/semantics.hpp"
#include "qlogic/theory.hpp"

namespace qlogic {

using Json = nlohmann::ordered_json;

inline Json semitopology_to_json(const Semitopology& st) {
  Json j;
  j["points"] = st.point_count();
  Json opens = Json::array();
  for (PointSet o : st.opens()) {
    Json members = Json::array();
    for (int p : set_members(o)) members.push_back(p);
    opens.push_back(members);
  }
  j["opens"] = opens;
  return j;
}

inline Semitopology semitopology_from_json(const Json& j) {
  if (j.contains("all_but")) {
    const Json& ab = j.at("all_but");
    return Semitopology::all_but(ab.at("n").get<int>(), ab.at("f").get<int>());
  }
  if (!j.contains("points") || !j.contains("opens"))
    fail(ErrorKind::BadInput, "semitopology JSON needs all_but or points+opens");
  int points = j.at("points").get<int>();
  std::vector<PointSet> opens;
  for (const Json& members : j.at("opens")) {
    PointSet s = 0;
    for (const Json& m : members) {
      int p = m.get<int>();
      if (p < 0 || p >= kMaxPoints) fail(ErrorKind::BadInput, "point index out of range");
      s |= 1u << p;
    }
    opens.push_back(s);
  }
  return Semitopology::validate(points, std::move(opens));
}

inline Json valuation_to_json(const Valuation& val) {
  Json j;
  j["model"] = semitopology_to_json(val.model().st);
  j["values"] = val.model().values.names;
  j["time"] = {{"prefix", val.time().prefix_len}, {"loop", val.time().loop_index}};
  Json signature = Json::object();
  for (const auto& [name, arity] : val.signature().symbols) signature[name] = arity;
  j["signature"] = signature;
  Json defaults = Json::object();
  for (const auto& [name, arity] : val.signature().symbols)
    defaults[name] = to_string(val.tables().at(name).def);
  j["defaults"] = defaults;
  Json entries = Json::array();
  for (const auto& [name, arity] : val.signature().symbols) {
    const auto& data = val.tables().at(name);
    int tuples = val.tuple_count(arity);
    for (int s = 0; s < val.time().prefix_len; ++s)
      for (int pt = 0; pt < val.points(); ++pt)
        for (int t = 0; t < tuples; ++t) {
          TruthValue v = val.lookup(name, s, pt, t);
          if (v == data.def) continue;
          Json e;
          e["pred"] = name;
          e["stage"] = s;
          e["point"] = pt;
          Json args = Json::array();
          int rem = t;
          std::vector<int> digits(arity, 0);
          for (int k = arity - 1; k >= 0; --k) {
            digits[k] = rem % val.values();
            rem /= val.values();
          }
          for (int k = 0; k < arity; ++k) args.push_back(val.model().values.names[digits[k]]);
          e["args"] = args;
          e["tv"] = to_string(v);
          entries.push_back(e);
        }
  }
  j["entries"] = entries;
  j["crashed"] = Json::array();
  return j;
}

inline Valuation valuation_from_json(const Json& j) {
  Semitopology st = semitopology_from_json(j.at("model"));
  std::vector<std::string> values;
  for (const Json& v : j.at("values")) values.push_back(v.get<std::string>());
  Model model{st, ValueDomain(values)};
  TimeStructure time(j.at("time").at("prefix").get<int>(), j.at("time").at("loop").get<int>());

  Signature sig;
  if (j.contains("signature")) {
    for (const auto& [name, arity] : j.at("signature").items())
      sig.add(name, arity.get<int>());
  } else {
    // infer arities: entries carry them; defaults-only symbols read as constants
    std::vector<std::pair<std::string, int>> seen;
    auto note = [&](const std::string& name, int arity) {
      for (auto& [n, a] : seen) {
        if (n == name) {
          if (a != arity) fail(ErrorKind::BadInput, "inconsistent arity for " + name);
          return;
        }
      }
      seen.emplace_back(name, arity);
    };
    if (j.contains("entries"))
      for (const Json& e : j.at("entries"))
        note(e.at("pred").get<std::string>(), static_cast<int>(e.at("args").size()));
    if (j.contains("defaults"))
      for (const auto& [name, tv] : j.at("defaults").items()) {
        bool known = false;
        for (auto& [n, a] : seen) known = known || n == name;
        if (!known) note(name, 0);
      }
    for (auto& [n, a] : seen) sig.add(n, a);
  }

  std::map<std::string, TruthValue> defaults;
  if (j.contains("defaults"))
    for (const auto& [name, tv] : j.at("defaults").items())
      defaults[name] = tv_from_char(tv.get<std::string>().at(0));

  Valuation val(model, sig, time, defaults);
  if (j.contains("entries"))
    for (const Json& e : j.at("entries")) {
      std::vector<std::string> args;
      for (const Json& a : e.at("args")) args.push_back(a.get<std::string>());
      val.set(e.at("pred").get<std::string>(), e.at("stage").get<int>(),
              e.at("point").get<int>(), args, tv_from_char(e.at("tv").get<std::string>().at(0)));
    }
  if (j.contains("crashed"))
    for (const Json& c : j.at("crashed"))
      val.crash(c.at("point").get<int>(), c.at("from").get<int>());
  return val;
}

inline Json check_report_to_json(const CheckReport& report) {
  Json j;
  j["overall"] = report.overall;
  Json axioms = Json::array();
  for (const AxiomVerdict& v : report.axioms) {
    Json a;
    a["name"] = v.name;
    a["valid"] = v.valid;
    if (!v.valid) {
      a["total_violations"] = v.total_violations;
      Json fails = Json::array();
      for (const ViolatedContext& c : v.violations) {
        Json f;
        f["stage"] = c.stage;
        f["point"] = c.point;
        f["open"] = c.open_index;
        f["tv"] = to_string(c.value);
        fails.push_back(f);
      }
      a["violations"] = fails;
    }
    axioms.push_back(a);
  }
  j["axioms"] = axioms;
  return j;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::BadInput, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::BadInput, "cannot write " + path);
  out << content;
}

}  // namespace qlogic
