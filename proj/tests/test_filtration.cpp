#include <map>
#include <set>
#include <string>
#include <vector>

#include "cpdl/errors.hpp"
#include "cpdl/filtration.hpp"
#include "cpdl/logics.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/gen.hpp"

using namespace cpdl;

namespace {

Formula p(int i) { return Formula::var(i); }

Formula dia(const std::string& a, Formula f) {
  return Formula::diamond(Program::atom(a), std::move(f));
}

// small random Sub-closed formula sets over atomic diamonds
FormulaSet closed_gamma(gen::Rng& rng, const std::vector<std::string>& alphabet,
                        int num_vars, std::size_t max_size) {
  for (;;) {
    FormulaSet g;
    int count = gen::uniform(rng, 1, 2);
    for (int i = 0; i < count; ++i)
      g.insert(gen::modal_formula(rng, gen::uniform(rng, 1, 2), num_vars, alphabet));
    FormulaSet closed = sub_closure(g);
    if (closed.size() <= max_size) return closed;
  }
}

Relation random_between(gen::Rng& rng, const Relation& lo, const Relation& hi) {
  Relation r = lo;
  for (int i = 0; i < hi.n; ++i)
    hi.rows[i].for_each([&](int j) {
      if (!lo.has(i, j) && gen::chance(rng, 0.5)) r.add(i, j);
    });
  return r;
}

Relation serial_relation(gen::Rng& rng, int n) {
  Relation r = gen::relation(rng, n, 0.25);
  for (int i = 0; i < n; ++i)
    if (r.rows[i].none()) r.add(i, gen::uniform(rng, 0, n - 1));
  return r;
}

FiltrationCertificate minimal_certificate(const Model& m, const FormulaSet& gamma) {
  Partition part = equiv_induced(m, gamma);
  std::map<std::string, Relation> rels;
  for (const std::string& a : m.alphabet()) rels[a] = min_filtered(m, part, a);
  FiltrationCertificate cert{m, gamma, part,
                             build_quotient(m, part, rels, gamma.vars()),
                             "minimal", {}};
  cert.verified = check_filtration(cert);
  return cert;
}

}  // namespace

TEST_CASE("partition construction is canonical") {
  Partition part = Partition::from_classes(4, {2, 0, 2, 1});
  CHECK(part.num_blocks() == 3);
  CHECK(part.class_of == std::vector<int>{0, 1, 0, 2});
  CHECK(part.blocks[0].members() == std::vector<int>{0, 2});
  CHECK(part.blocks[2].members() == std::vector<int>{3});

  Partition id = Partition::identity(3);
  CHECK(id.num_blocks() == 3);
  CHECK(id.witness_note == "identity");
  CHECK(id.refines(Partition::from_classes(3, {0, 0, 1})));

  Partition coarse = Partition::from_classes(4, {0, 0, 0, 1});
  CHECK(part.refines(coarse));
  CHECK_FALSE(coarse.refines(part));
  CHECK(part.refines(part));
}

TEST_CASE("partition intersection merges witnesses") {
  Partition a = Partition::from_classes(4, {0, 0, 1, 1});
  Partition b = Partition::from_classes(4, {0, 1, 0, 1});
  a.witness = FormulaSet{p(0)};
  b.witness = FormulaSet{p(1)};
  Partition both = a.intersect(b);
  CHECK(both.num_blocks() == 4);
  REQUIRE(both.witness.has_value());
  CHECK(both.witness->contains(p(0)));
  CHECK(both.witness->contains(p(1)));

  Partition c = Partition::from_classes(4, {0, 1, 0, 1});
  c.witness_note = "characteristic(depth <= 2)";
  Partition mixed = a.intersect(c);
  CHECK_FALSE(mixed.witness.has_value());
  CHECK(mixed.witness_note ==
        "common(delta(1), characteristic(depth <= 2))");
}

TEST_CASE("gamma partition of the running example") {
  Model m = fixtures::e1();
  FormulaSet gamma = fixtures::e1_gamma();
  Partition part = equiv_induced(m, gamma);
  CHECK(part.num_blocks() == 4);
  CHECK(part.class_of == std::vector<int>{0, 1, 1, 2, 3});
  REQUIRE(part.witness.has_value());
  CHECK(*part.witness == gamma);
}

TEST_CASE("induced partitions at the extremes") {
  Model m = fixtures::e1();
  CHECK(equiv_induced(m, FormulaSet{}).num_blocks() == 1);

  FormulaSet separating{p(0), p(1), p(2),
                        dia("a", p(2)),
                        dia("a", dia("a", p(2)))};
  Partition fine = equiv_induced(m, separating);
  CHECK(fine.num_blocks() == 5);
  CHECK(fine.same_blocks(Partition::identity(5)));
}

TEST_CASE("minimal filtered relation of the running example") {
  Model m = fixtures::e1();
  Partition part = equiv_induced(m, fixtures::e1_gamma());
  Relation lo = min_filtered(m, part, "a");
  CHECK(lo.pairs() == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}});
}

TEST_CASE("minimal filtered edge cases") {
  Model m = fixtures::e1();
  Model empty = m;
  empty.relations["a"] = Relation(5);
  Partition part = equiv_induced(empty, fixtures::e1_gamma());
  CHECK(min_filtered(empty, part, "a").pair_count() == 0);

  Partition id = Partition::identity(5);
  CHECK(min_filtered(m, id, "a") == m.relation("a"));
}

TEST_CASE("maximal filtered relation of the running example") {
  Model m = fixtures::e1();
  FormulaSet gamma = fixtures::e1_gamma();
  Partition part = equiv_induced(m, gamma);
  Relation hi = max_filtered(m, part, gamma, "a");
  CHECK(hi.pair_count() == 13);
  CHECK_FALSE(hi.has(0, 3));
  CHECK_FALSE(hi.has(1, 3));
  CHECK_FALSE(hi.has(3, 3));
  CHECK(hi.has(2, 3));
  CHECK(hi.has(3, 0));
  CHECK(hi.has(3, 2));

  FormulaSet no_diamonds{p(0), p(1)};
  Relation full = max_filtered(m, equiv_induced(m, no_diamonds), no_diamonds, "a");
  CHECK(full.pair_count() == full.n * full.n);
}

TEST_CASE("minimal filtered sits inside maximal filtered") {
  gen::Rng rng(2301);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<std::string> alphabet =
        gen::chance(rng, 0.5) ? std::vector<std::string>{"a"}
                              : std::vector<std::string>{"a", "b"};
    Model m = gen::model(rng, gen::uniform(rng, 2, 7), alphabet, 3);
    FormulaSet gamma = closed_gamma(rng, alphabet, 3, 6);
    Partition part = equiv_induced(m, gamma);
    for (const std::string& a : alphabet)
      CHECK(min_filtered(m, part, a).subset_of(max_filtered(m, part, gamma, a)));
  }
}

TEST_CASE("any relation between the bounds transfers truth") {
  gen::Rng rng(2302);
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<std::string> alphabet =
        gen::chance(rng, 0.5) ? std::vector<std::string>{"a"}
                              : std::vector<std::string>{"a", "b"};
    Model m = gen::model(rng, gen::uniform(rng, 2, 7), alphabet, 3);
    FormulaSet gamma = closed_gamma(rng, alphabet, 3, 6);
    Partition part = equiv_induced(m, gamma);
    std::map<std::string, Relation> rels;
    for (const std::string& a : alphabet)
      rels[a] = random_between(rng, min_filtered(m, part, a),
                               max_filtered(m, part, gamma, a));
    FiltrationCertificate cert{m, gamma, part,
                               build_quotient(m, part, rels, gamma.vars()),
                               "manual", {}};
    FiltrationReport rep = check_filtration(cert);
    CHECK(rep.refinement.pass);
    CHECK(rep.valuation.pass);
    CHECK(rep.lower_bound.pass);
    CHECK(rep.upper_bound.pass);
    CHECK(rep.lemma.pass);
  }
}

TEST_CASE("certificate verification pinpoints bound violations") {
  Model m = fixtures::e1();
  FormulaSet gamma = fixtures::e1_gamma();
  FiltrationCertificate cert = minimal_certificate(m, gamma);
  CHECK(cert.verified.structure_pass());

  SUBCASE("dropping a projected edge breaks the lower bound") {
    FiltrationCertificate broken = cert;
    broken.quotient.relations["a"].rows[2].reset(3);
    FiltrationReport rep = check_filtration(broken);
    CHECK_FALSE(rep.lower_bound.pass);
    CHECK(rep.lower_bound.witness.find("[z]") != std::string::npos);
    CHECK(rep.lower_bound.witness.find("[u]") != std::string::npos);
    CHECK(rep.refinement.pass);
    CHECK(rep.valuation.pass);
  }

  SUBCASE("adding a pair past the maximum breaks the upper bound") {
    FiltrationCertificate broken = cert;
    broken.quotient.relations["a"].add(0, 3);
    FiltrationReport rep = check_filtration(broken);
    CHECK_FALSE(rep.upper_bound.pass);
    CHECK(rep.upper_bound.witness.find("[x]") != std::string::npos);
    CHECK(rep.upper_bound.witness.find("[u]") != std::string::npos);
    CHECK_FALSE(rep.lemma.pass);
  }

  SUBCASE("corrupting the quotient valuation breaks condition 2") {
    FiltrationCertificate broken = cert;
    broken.quotient.valuation[0].set(1);
    FiltrationReport rep = check_filtration(broken);
    CHECK_FALSE(rep.valuation.pass);
    CHECK(rep.lower_bound.pass);
  }

  SUBCASE("a partition too coarse for gamma breaks condition 1") {
    Partition coarse = Partition::from_classes(5, {0, 0, 0, 1, 2});
    std::map<std::string, Relation> rels{{"a", min_filtered(m, coarse, "a")}};
    FiltrationCertificate bad{m, gamma, coarse,
                              build_quotient(m, coarse, rels, gamma.vars()),
                              "manual", {}};
    FiltrationReport rep = check_filtration(bad);
    CHECK_FALSE(rep.refinement.pass);
    CHECK(rep.refinement.witness.find("disagree") != std::string::npos);
  }

  SUBCASE("structural mismatches are format errors") {
    FiltrationCertificate bad = cert;
    bad.partition = Partition::identity(4);
    CHECK_THROWS_AS(check_filtration(bad), FormatError);

    FiltrationCertificate bad2 = cert;
    bad2.quotient.states.push_back("[ghost]");
    CHECK_THROWS_AS(check_filtration(bad2), FormatError);

    FiltrationCertificate bad3 = cert;
    bad3.quotient.relations.erase("a");
    CHECK_THROWS_AS(check_filtration(bad3), FormatError);
  }
}

TEST_CASE("strict strategies on frames matching their logic") {
  gen::Rng rng(2303);
  std::vector<std::string> alphabet{"a"};
  int runs = 0;
  int s5_passes = 0;
  int s5_failures = 0;
  for (int iter = 0; iter < 140; ++iter) {
    int n = gen::uniform(rng, 2, 5);
    Model m = gen::model(rng, n, alphabet, 2);
    std::string strategy;
    std::string logic;
    switch (iter % 7) {
      case 0:
        strategy = "minimal";
        logic = "K";
        break;
      case 1:
        m.relations["a"] = gen::relation(rng, n).reflexive_closure();
        strategy = "reflexive";
        logic = "T";
        break;
      case 2:
        m.relations["a"] = gen::relation(rng, n).transitive_closure();
        strategy = "lemmon";
        logic = "K4";
        break;
      case 3:
        m.relations["a"] = gen::reflexive_transitive(rng, n);
        strategy = "s4";
        logic = "S4";
        break;
      case 4:
        m.relations["a"] = gen::equivalence(rng, n);
        strategy = "s5";
        logic = "S5";
        break;
      case 5:
        m.relations["a"] = serial_relation(rng, n);
        strategy = "serial";
        logic = "D";
        break;
      default: {
        Relation r = gen::relation(rng, n);
        m.relations["a"] = r.united_with(r.transposed());
        strategy = "symmetric";
        logic = "KB";
        break;
      }
    }
    FormulaSet gamma = closed_gamma(rng, alphabet, 2, 6);
    LogicSpec spec = instantiate_logic(logic, "a");
    if (strategy == "s5") {
      // the largest admissible relation need not be an equivalence; the
      // failure is detected a posteriori and reported, never silent
      try {
        FiltrationCertificate cert = filter_with(m, gamma, strategy, spec);
        CHECK(cert.verified.pass());
        REQUIRE(cert.delta().has_value());
        CHECK(*cert.delta() == gamma);
        ++s5_passes;
      } catch (const StrategyFailed&) {
        FiltrationCertificate rescue = filter_with(m, gamma, "bisim", spec);
        CHECK(rescue.verified.pass());
        ++s5_failures;
      }
      ++runs;
      continue;
    }
    FiltrationCertificate cert = filter_with(m, gamma, strategy, spec);
    CHECK(cert.verified.pass());
    CHECK(cert.strategy == strategy);
    REQUIRE(cert.delta().has_value());
    CHECK(*cert.delta() == gamma);
    ++runs;
  }
  CHECK(runs == 140);
  CHECK(s5_passes + s5_failures == 20);
  CHECK(s5_passes >= 1);
}

TEST_CASE("filter preconditions and malformed strategies") {
  Model m = fixtures::e1();
  FormulaSet gamma = fixtures::e1_gamma();
  LogicSpec k = instantiate_logic("K", "a");

  FormulaSet open_gamma{dia("a", p(2))};
  CHECK_THROWS_AS(filter_with(m, open_gamma, "minimal", k), PreconditionError);

  CHECK_THROWS_AS(filter_with(m, gamma, "minimal", instantiate_logic("T", "a")),
                  PreconditionError);

  CHECK_THROWS_AS(filter_with(m, gamma, "frobnicate", k), FormatError);
  CHECK_THROWS_AS(filter_with(m, gamma, "gabbay()", k), FormatError);
  CHECK_THROWS_AS(filter_with(m, gamma, "search(x)", k), FormatError);
}

TEST_CASE("collapse strategy separates states by diamond powers") {
  Model m = fixtures::e1();
  FormulaSet gamma = fixtures::e1_gamma();
  LogicSpec logic = instantiate_logic("K+<>^3p-><>p", "a");

  FiltrationCertificate cert = filter_with(m, gamma, "gabbay(3)", logic);
  CHECK(cert.strategy == "gabbay(3)");
  CHECK(cert.verified.pass());
  CHECK(cert.partition.num_blocks() == 5);
  CHECK(cert.partition.block_of(1) != cert.partition.block_of(2));

  FormulaSet expected = gamma;
  for (const Formula& f : gamma) {
    Formula g = f;
    for (int i = 1; i <= 3; ++i) {
      g = dia("a", g);
      expected.insert(g);
    }
  }
  REQUIRE(cert.delta().has_value());
  CHECK(*cert.delta() == expected);

  CHECK(cert.quotient.num_states() == 5);
  CHECK(cert.quotient.relation("a") == m.relation("a"));
  CHECK(cert.quotient.val(0) == m.val(0));
  CHECK(cert.quotient.val(2) == m.val(2));
}

TEST_CASE("exhaustive search fails on the counterexample model") {
  Model m = fixtures::e1();
  FormulaSet gamma = fixtures::e1_gamma();
  LogicSpec logic = instantiate_logic("K+<>^3p-><>p", "a");

  try {
    filter_with(m, gamma, "strict", logic);
    FAIL("expected the search to fail");
  } catch (const StrategyFailed& e) {
    CHECK(e.candidates == 1024);
    std::string msg = e.what();
    CHECK(msg.find("no strict filtration exists among 1024 candidates") !=
          std::string::npos);
  }

  try {
    filter_with(m, gamma, "search(9)", logic);
    FAIL("expected the bound to trip");
  } catch (const LimitExceeded& e) {
    CHECK(e.limit == 9);
    CHECK(e.needed == 10);
  }
}

TEST_CASE("search finds a candidate when the minimal relation fails") {
  Model m;
  m.states = {"s0", "s1", "s2"};
  Relation r(3);
  r.add(0, 1);
  r.add(1, 2);
  r.add(0, 2);
  m.relations["a"] = r;
  Bits v(3);
  v.set(1);
  m.valuation[0] = v;
  FormulaSet gamma{p(0)};
  LogicSpec k4 = instantiate_logic("K4", "a");

  FiltrationCertificate cert = filter_with(m, gamma, "search", k4);
  CHECK(cert.verified.pass());
  CHECK(cert.partition.num_blocks() == 2);
  CHECK(cert.quotient.relation("a").pair_count() == 4);
  REQUIRE(cert.delta().has_value());
  CHECK(*cert.delta() == gamma);
}

TEST_CASE("bisimulation partition of the running example is the identity") {
  Model m = fixtures::e1();
  Partition part = bisim_coarsest(m, {0, 1, 2});
  CHECK(part.num_blocks() == 5);
  CHECK(part.witness_note == "characteristic(depth <= 5)");
}

TEST_CASE("bisimulation merges fork branches") {
  Model m;
  m.states = {"root", "left", "right"};
  Relation r(3);
  r.add(0, 1);
  r.add(0, 2);
  m.relations["a"] = r;
  Bits v(3);
  v.set(0);
  m.valuation[0] = v;
  Partition part = bisim_coarsest(m, {0});
  CHECK(part.num_blocks() == 2);
  CHECK(part.block_of(1) == part.block_of(2));
}

TEST_CASE("bisimulation quotients are fixpoints") {
  gen::Rng rng(2304);
  for (int iter = 0; iter < 60; ++iter) {
    std::vector<std::string> alphabet =
        gen::chance(rng, 0.5) ? std::vector<std::string>{"a"}
                              : std::vector<std::string>{"a", "b"};
    Model m = gen::model(rng, gen::uniform(rng, 2, 6), alphabet, 2);
    std::set<int> vars{0, 1};
    Partition part = bisim_coarsest(m, vars);
    std::map<std::string, Relation> rels;
    for (const std::string& a : alphabet) rels[a] = min_filtered(m, part, a);
    Model q = build_quotient(m, part, rels, vars);
    CHECK(bisim_coarsest(q, vars).num_blocks() == q.num_states());
  }
}

TEST_CASE("bisimilarity refines agreement on any formula set") {
  gen::Rng rng(2305);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<std::string> alphabet =
        gen::chance(rng, 0.5) ? std::vector<std::string>{"a"}
                              : std::vector<std::string>{"a", "b"};
    Model m = gen::model(rng, gen::uniform(rng, 2, 6), alphabet, 2);
    FormulaSet gamma;
    for (int i = 0; i < 3; ++i)
      gamma.insert(gen::formula(rng, 2, 2, alphabet, 2));
    Partition part = bisim_coarsest(m, {0, 1});
    CHECK(part.refines(equiv_induced(m, gamma)));
  }
}

TEST_CASE("characteristic formulas pin the bisimulation classes") {
  gen::Rng rng(2306);
  for (int iter = 0; iter < 30; ++iter) {
    Model m = gen::model(rng, gen::uniform(rng, 2, 4), {"a"}, 2);
    std::set<int> vars{0, 1};
    std::vector<Formula> chi = characteristic_formulas(m, vars, m.num_states());
    FormulaSet delta;
    for (Formula& f : chi) delta.insert(std::move(f));
    CHECK(equiv_induced(m, delta).same_blocks(bisim_coarsest(m, vars)));
  }
}

TEST_CASE("bisimulation strategy carries its witness") {
  gen::Rng rng(2307);
  Model m = gen::model(rng, 4, {"a"}, 2);
  m.relations["a"] = gen::euclidean(rng, 4, 0.3);
  FormulaSet gamma = closed_gamma(rng, {"a"}, 2, 6);
  LogicSpec k5 = instantiate_logic("K5", "a");

  FiltrationCertificate plain = filter_with(m, gamma, "bisim", k5);
  CHECK(plain.verified.pass());
  CHECK_FALSE(plain.delta().has_value());
  CHECK(plain.partition.witness_note == "characteristic(depth <= 4)");

  FilterOptions opts;
  opts.explicit_witness = true;
  FiltrationCertificate rich = filter_with(m, gamma, "bisim", k5, opts);
  CHECK(rich.verified.pass());
  REQUIRE(rich.delta().has_value());
  for (const Formula& f : gamma) CHECK(rich.delta()->contains(f));
  CHECK(equiv_induced(m, *rich.delta()).same_blocks(rich.partition));
}

TEST_CASE("refining by the same partition reproduces the quotient") {
  Model m = fixtures::e1();
  FiltrationCertificate cert = minimal_certificate(m, fixtures::e1_gamma());
  FiltrationCertificate again = refine(cert, cert.partition);
  CHECK(again.verified.structure_pass());
  CHECK(again.quotient.states == cert.quotient.states);
  CHECK(again.quotient.relations == cert.quotient.relations);
  CHECK(again.quotient.valuation == cert.quotient.valuation);
}

TEST_CASE("refining the running example by the identity partition") {
  Model m = fixtures::e1();
  FormulaSet gamma = fixtures::e1_gamma();
  FiltrationCertificate cert = minimal_certificate(m, gamma);
  FiltrationCertificate fine = refine(cert, Partition::identity(5));
  CHECK(fine.verified.structure_pass());
  CHECK(fine.quotient.num_states() == 5);

  Relation expected(5);
  expected.add(0, 1);
  expected.add(0, 2);
  expected.add(1, 3);
  expected.add(2, 3);
  expected.add(3, 4);
  CHECK(fine.quotient.relation("a") == expected);

  for (const Formula& f : gamma) {
    Bits coarse = eval(cert.quotient, f);
    Bits refined = eval(fine.quotient, f);
    for (int u = 0; u < 5; ++u)
      CHECK(refined.test(u) == coarse.test(cert.partition.class_of[u]));
  }
}

TEST_CASE("refinement preserves truth pointwise") {
  gen::Rng rng(2308);
  for (int iter = 0; iter < 120; ++iter) {
    std::vector<std::string> alphabet =
        gen::chance(rng, 0.5) ? std::vector<std::string>{"a"}
                              : std::vector<std::string>{"a", "b"};
    Model m = gen::model(rng, gen::uniform(rng, 2, 6), alphabet, 2);
    FormulaSet gamma = closed_gamma(rng, alphabet, 2, 6);
    FiltrationCertificate cert = minimal_certificate(m, gamma);
    REQUIRE(cert.verified.structure_pass());

    FormulaSet extra;
    for (int i = 0; i < 2; ++i)
      extra.insert(gen::formula(rng, 2, 2, alphabet, 2));
    Partition finer = cert.partition.intersect(equiv_induced(m, extra));
    FiltrationCertificate refined = refine(cert, finer);
    CHECK(refined.verified.structure_pass());

    std::vector<int> up(finer.num_blocks());
    for (int b = 0; b < finer.num_blocks(); ++b)
      up[b] = cert.partition.class_of[finer.blocks[b].first()];

    std::vector<Formula> probes;
    for (const Formula& f : gamma) probes.push_back(f);
    for (int i = 0; i < 10; ++i)
      probes.push_back(gen::formula(rng, 2, 2, alphabet, 2));
    for (const Formula& f : probes) {
      Bits coarse = eval(cert.quotient, f);
      Bits fine = eval(refined.quotient, f);
      for (int u = 0; u < finer.num_blocks(); ++u)
        CHECK(fine.test(u) == coarse.test(up[u]));
      CHECK(models(refined.quotient, f) == models(cert.quotient, f));
    }
  }
}

TEST_CASE("largest admissible relation can fail the equivalence logic") {
  // two disjoint reflexive singletons; the maximal relation links the
  // p-cluster from the other one asymmetrically and refutes negative
  // introspection, which the a-posteriori check reports
  Model m;
  m.states = {"w1", "w2"};
  Relation r(2);
  r.add(0, 0);
  r.add(1, 1);
  m.relations["a"] = r;
  Bits v(2);
  v.set(0);
  m.valuation[0] = v;
  FormulaSet gamma{p(0), dia("a", p(0))};
  LogicSpec s5 = instantiate_logic("S5", "a");

  try {
    filter_with(m, gamma, "s5", s5);
    FAIL("expected the a-posteriori check to reject the quotient");
  } catch (const StrategyFailed& e) {
    CHECK(std::string(e.what()).find("refuting") != std::string::npos);
  }

  FiltrationCertificate rescue = filter_with(m, gamma, "bisim", s5);
  CHECK(rescue.verified.pass());
  CHECK(rescue.quotient.num_states() == 2);

  FiltrationCertificate via_search = filter_with(m, gamma, "search", s5);
  CHECK(via_search.verified.pass());
  CHECK(via_search.quotient.relation("a").pair_count() == 2);
}

TEST_CASE("refinement preconditions") {
  Model m = fixtures::e1();
  FiltrationCertificate cert = minimal_certificate(m, fixtures::e1_gamma());

  Partition coarse = Partition::from_classes(5, {0, 0, 0, 0, 0});
  coarse.witness = FormulaSet{};
  CHECK_THROWS_AS(refine(cert, coarse), PreconditionError);

  Partition no_witness = Partition::from_classes(5, {0, 1, 2, 3, 4});
  CHECK_THROWS_AS(refine(cert, no_witness), PreconditionError);

  CHECK_THROWS_AS(refine(cert, Partition::identity(4)), PreconditionError);
}
