#include <catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"

using namespace qlogic;

namespace {

Signature test_sig() {
  Signature sig;
  sig.add("P", 1);
  sig.add("Q", 0);
  sig.add("accept", 1);
  sig.add("leader", 0);
  sig.add("propose", 1);
  sig.add("decide", 1);
  return sig;
}

const std::vector<std::string> kValues{"v1", "v2", "udfn"};

Pred parse_v(const std::string& s) { return parse(s, test_sig(), kValues); }

}  // namespace

TEST_CASE("parse shapes quoted from the interface contract") {
  Pred p = parse_v("quorumbox accept(v1)");
  REQUIRE(p->kind == NodeKind::QuorumBox);
  REQUIRE(p->kids[0]->kind == NodeKind::Atom);
  CHECK(p->kids[0]->name == "accept");
  REQUIRE(p->kids[0]->terms.size() == 1);
  CHECK_FALSE(p->kids[0]->terms[0].is_var);  // value literal, resolved against the domain
  CHECK(p->kids[0]->terms[0].name == "v1");

  Pred goal = parse_v("forall v. decide(v) ==> urecent someoneall (leader & propose(v))");
  REQUIRE(goal->kind == NodeKind::Forall);
  REQUIRE(goal->kids[0]->kind == NodeKind::Impc);
  CHECK(goal->kids[0]->kids[1]->kind == NodeKind::URecent);

  // Without a domain, unbound identifiers stay free variables.
  Pred free = parse("P(a)", test_sig());
  FreeInfo fi = free_info(free);
  CHECK(fi.free_vars == std::set<std::string>{"a"});
  CHECK_FALSE(is_closed(free));
  CHECK(is_closed(resolve_values(parse("P(v1)", test_sig()), kValues)));
}

TEST_CASE("pretty print canonical forms") {
  CHECK(pretty_print(parse_v("quorumbox accept(v1)")) == "quorumbox accept(v1)");
  Pred f = fix(un(NodeKind::Tomorrow, or_(atom("Q"), fixvar())));
  CHECK(pretty_print(f) == "mu X. tomorrow (Q | X)");
  CHECK(pretty_print(neg(blit())) == "! B");
}

TEST_CASE("parser errors") {
  auto kind_is = [](ErrorKind k) {
    return Catch::Matchers::Predicate<Error>(
        [k](const Error& e) { return e.kind() == k; });
  };
  CHECK_THROWS_MATCHES(parse_v("R(v1)"), Error, kind_is(ErrorKind::UnknownSymbol));
  CHECK_THROWS_MATCHES(parse_v("P(v1, v2)"), Error, kind_is(ErrorKind::ArityMismatch));
  CHECK_THROWS_MATCHES(parse_v("P"), Error, kind_is(ErrorKind::ArityMismatch));
  CHECK_THROWS_MATCHES(parse_v("X | Q"), Error, kind_is(ErrorKind::StrayFixVar));
  CHECK_THROWS_MATCHES(parse_v("P(v1) &"), Error, kind_is(ErrorKind::SyntaxError));
  CHECK_THROWS_MATCHES(parse_v("(P(v1)"), Error, kind_is(ErrorKind::SyntaxError));
  CHECK_THROWS_MATCHES(parse_v("correct[leader]"), Error, kind_is(ErrorKind::ArityMismatch));
}

TEST_CASE("precedence and associativity") {
  CHECK(equal(parse_v("Q & leader | Q"), or_(and_(atom("Q"), atom("leader")), atom("Q"))));
  CHECK(equal(parse_v("Q ~> leader ~> Q"), notor(atom("Q"), notor(atom("leader"), atom("Q")))));
  CHECK(equal(parse_v("Q ==> leader & Q"), impc(atom("Q"), and_(atom("leader"), atom("Q")))));
  CHECK(equal(parse_v("! Q & leader"), and_(neg(atom("Q")), atom("leader"))));
  // binders take everything to their right
  Pred p = parse_v("exists a. P(a) ~> Q");
  REQUIRE(p->kind == NodeKind::Exists);
  CHECK(p->kids[0]->kind == NodeKind::Notor);
}

TEST_CASE("functional elision expands unary applications") {
  Pred p = parse_v("exists propose");
  REQUIRE(p->kind == NodeKind::Exists);
  REQUIRE(p->kids[0]->kind == NodeKind::Atom);
  CHECK(p->kids[0]->terms[0].is_var);
  CHECK(p->kids[0]->terms[0].name == p->name);

  Pred q = parse_v("mru someone accept @ v1");
  REQUIRE(q->kind == NodeKind::Mru);
  CHECK(q->kids[0]->kind == NodeKind::Someone);
  CHECK(q->kids[0]->kids[0]->kind == NodeKind::Atom);
  CHECK(q->terms[0].name == "v1");

  Pred r = parse_v("exists01 someoneall propose");
  REQUIRE(r->kind == NodeKind::ExistsAffine);
  CHECK(r->kids[0]->kind == NodeKind::SomeoneAll);
}

TEST_CASE("free_info and fix closure") {
  FreeInfo a = free_info(parse("P(a)", test_sig()));
  CHECK(a.free_vars == std::set<std::string>{"a"});
  CHECK(a.fix_closed);
  FreeInfo b = free_info(parse_v("exists a. P(a)"));
  CHECK(b.free_vars.empty());
  Pred stray = un(NodeKind::Tomorrow, fixvar());
  FreeInfo c = free_info(stray);
  CHECK(c.free_vars.empty());
  CHECK_FALSE(c.fix_closed);
  CHECK(free_info(fix(un(NodeKind::Tomorrow, fixvar()))).fix_closed);
}

TEST_CASE("substitution") {
  Pred p = parse("P(a) | a = udfn", test_sig());
  Pred s = substitute(p, "a", "v1");
  CHECK(pretty_print(s) == "P(v1) | (v1 = udfn)");
  Pred bound = parse_v("exists a. P(a)");
  CHECK(equal(substitute(bound, "a", "v1"), bound));
  Pred e = parse("a = b", test_sig());
  CHECK(pretty_print(substitute(e, "a", "v1")) == "v1 = b");
  // capture avoidance when substituting a variable term
  Pred t = exists("b", and_(atom("P", {Term::var("a")}), atom("P", {Term::var("b")})));
  Pred renamed = substitute_term(t, "a", Term::var("b"));
  REQUIRE(renamed->kind == NodeKind::Exists);
  CHECK(renamed->name != "b");
}

TEST_CASE("substitute_kappa replaces free fixedpoint variables only") {
  auto table = std::make_shared<ContextTable>(1, 1, 1, 1, tvB);
  CHECK(substitute_kappa(fixvar(), table)->kind == NodeKind::KappaLit);
  Pred bound = fix(fixvar());
  CHECK(equal(substitute_kappa(bound, table), bound));
  Pred mixed = or_(fixvar(), blit());
  Pred out = substitute_kappa(mixed, table);
  CHECK(out->kids[0]->kind == NodeKind::KappaLit);
  CHECK(out->kids[1]->kind == NodeKind::BLit);
  CHECK_THROWS_MATCHES(pretty_print(out), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::UnprintableKappa;
                       }));
}

TEST_CASE("positivity") {
  CHECK_FALSE(check_positive(neg(fixvar())));
  CHECK(check_positive(un(NodeKind::Yesterday, fixvar())));
  CHECK(check_positive(neg(neg(fixvar()))));
  CHECK(check_positive(fix(neg(fixvar()))));  // no free occurrence
}

TEST_CASE("desugar is core-only, idempotent, and positive") {
  std::vector<std::string> samples = {
      "forever P(v1)",
      "sometime Q",
      "infinitely everyoneall exists decide",
      "finally (Q ~> leader)",
      "recent P(v2)",
      "urecent Q",
      "forall a. P(a)",
      "exists1 a. P(a)",
      "exists01 propose",
      "correct[accept]",
      "pointwise Q",
      "mru a. someone accept(a) @ v1",
      "isTB quorumbox Q",
      "Q == leader",
      "T & F",
      "coquorumdiamond P(udfn)",
  };
  for (const std::string& s : samples) {
    Pred p = parse_v(s);
    Pred d = desugar(p);
    CAPTURE(s);
    CHECK(is_core_only(d));
    CHECK(equal(desugar(d), d));
    CHECK(all_fix_bodies_positive(d));
  }
}

TEST_CASE("specific desugarings from the derived-expressions table") {
  // forall a. phi = ! exists a. ! phi
  Pred fa = desugar(parse_v("forall a. P(a)"));
  REQUIRE(fa->kind == NodeKind::Neg);
  REQUIRE(fa->kids[0]->kind == NodeKind::Exists);
  CHECK(fa->kids[0]->kids[0]->kind == NodeKind::Neg);
  // T = ! isT B
  Pred t = desugar(tlit());
  REQUIRE(t->kind == NodeKind::Neg);
  REQUIRE(t->kids[0]->kind == NodeKind::ModT);
  CHECK(t->kids[0]->kids[0]->kind == NodeKind::BLit);
  // sometime phi = mu X. tomorrow(phi | X)
  Pred st = desugar(parse_v("sometime Q"));
  REQUIRE(st->kind == NodeKind::Fix);
  REQUIRE(st->kids[0]->kind == NodeKind::Tomorrow);
  REQUIRE(st->kids[0]->kids[0]->kind == NodeKind::Or);
  CHECK(st->kids[0]->kids[0]->kids[1]->kind == NodeKind::FixVar);
  // forever goes through its de Morgan dual so the least fixedpoint is the
  // intended one; see the evaluator notes.
  Pred fv = desugar(parse_v("forever Q"));
  REQUIRE(fv->kind == NodeKind::Neg);
  REQUIRE(fv->kids[0]->kind == NodeKind::Fix);
}

TEST_CASE("sugar-introduced fixedpoints are positive for any inner predicate") {
  // the derived forms are designed so their mu bodies pass the positivity
  // check no matter what (fixedpoint-variable-free) predicate they wrap
  const NodeKind sugar_mu[] = {NodeKind::Forever,    NodeKind::Sometime,
                               NodeKind::Infinitely, NodeKind::Finally,
                               NodeKind::Recent,     NodeKind::URecent};
  for (unsigned seed = 0; seed < 120; ++seed) {
    qtest::Generator gen(seed, test_sig(), kValues);
    Pred phi = gen.gen(2);
    if (!free_info(phi).fix_closed) continue;
    // phi may carry its own (possibly non-positive) user-written mu; the
    // claim is about the mu each sugar operator adds on top
    if (!all_fix_bodies_positive(desugar(phi))) continue;
    for (NodeKind k : sugar_mu) {
      CAPTURE(seed, static_cast<int>(k));
      CHECK(all_fix_bodies_positive(desugar(un(k, phi))));
    }
    CHECK(all_fix_bodies_positive(desugar(mru("w", phi, Term::val("v1")))));
  }
}

TEST_CASE("round-trip: parse after pretty_print is the identity") {
  for (unsigned seed = 0; seed < 400; ++seed) {
    qtest::Generator gen(seed, test_sig(), kValues);
    Pred p = gen.gen(2 + static_cast<int>(seed % 3));
    std::string text = pretty_print(p);
    CAPTURE(seed, text);
    Pred q = parse(text, test_sig(), kValues);
    CHECK(equal(p, q));
  }
}

TEST_CASE("round-trip survives desugared output too") {
  for (unsigned seed = 500; seed < 560; ++seed) {
    qtest::Generator gen(seed, test_sig(), kValues);
    Pred p = desugar(gen.gen(2));
    std::string text = pretty_print(p);
    CAPTURE(seed, text);
    CHECK(equal(p, parse(text, test_sig(), kValues)));
  }
}

TEST_CASE("predicate blocks") {
  std::string file = R"(# two named predicates
goal := forall v. decide(v) ==> urecent someoneall (leader & propose(v))
other := quorumbox accept(v1)
)";
  auto blocks = parse_blocks(file, test_sig(), &kValues);
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0].first == "goal");
  CHECK(blocks[1].first == "other");
  CHECK(blocks[1].second->kind == NodeKind::QuorumBox);
}
