#include "doctest.h"

#include "cpdl/syntax.hpp"
#include "support/gen.hpp"

using namespace cpdl;

static const std::vector<std::string> kAB = {"a", "b"};

TEST_CASE("parse basic shapes") {
  Formula f = parse_formula("p0 -> [a^-]<a>p0", kAB);
  Formula want = Formula::imp(
      Formula::var(0),
      Formula::box(Program::converse(Program::atom("a")),
                   Formula::diamond(Program::atom("a"), Formula::var(0))));
  CHECK(f == want);

  CHECK(parse_formula("false", kAB) == Formula::bot());
  CHECK(parse_formula("true", kAB) == Formula::top());
  CHECK(parse_formula("!p3", kAB) == Formula::neg(Formula::var(3)));
  CHECK(parse_formula("p01", kAB) == Formula::var(1));
}

TEST_CASE("precedence") {
  // ! binds tighter than &, & tighter than |, | tighter than ->
  CHECK(parse_formula("!p0 & p1", kAB) ==
        Formula::conj(Formula::neg(Formula::var(0)), Formula::var(1)));
  CHECK(parse_formula("p0 & p1 | p2", kAB) ==
        Formula::disj(Formula::conj(Formula::var(0), Formula::var(1)), Formula::var(2)));
  CHECK(parse_formula("p0 | p1 -> p2", kAB) ==
        Formula::imp(Formula::disj(Formula::var(0), Formula::var(1)), Formula::var(2)));
  // -> is right associative
  CHECK(parse_formula("p0 -> p1 -> p2", kAB) ==
        Formula::imp(Formula::var(0), Formula::imp(Formula::var(1), Formula::var(2))));
  // modal prefixes bind tighter than binary connectives
  CHECK(parse_formula("<a>p0 & p1", kAB) ==
        Formula::conj(Formula::diamond(Program::atom("a"), Formula::var(0)),
                      Formula::var(1)));
  CHECK(parse_formula("<a>(p0 & p1)", kAB) ==
        Formula::diamond(Program::atom("a"), Formula::conj(Formula::var(0), Formula::var(1))));
}

TEST_CASE("program operators") {
  // ; binds tighter than |, postfix tightest, binaries left associative
  Program e = parse_program("a;b|a^+", kAB);
  CHECK(e == Program::unite(Program::compose(Program::atom("a"), Program::atom("b")),
                            Program::plus(Program::atom("a"))));
  CHECK(parse_program("a;b;a", kAB) ==
        Program::compose(Program::compose(Program::atom("a"), Program::atom("b")),
                         Program::atom("a")));
  CHECK(parse_program("(a|b)^+^-", kAB) ==
        Program::converse(Program::plus(Program::unite(Program::atom("a"), Program::atom("b")))));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_formula("<a", kAB), ParseError);
  try {
    parse_formula("<a", kAB);
  } catch (const ParseError& e) {
    CHECK(e.offset == 2);
  }
  CHECK_THROWS_AS(parse_formula("p0 ->", kAB), ParseError);
  CHECK_THROWS_AS(parse_formula("p0 p1", kAB), ParseError);
  CHECK_THROWS_AS(parse_formula("<c>p0", kAB), ParseError);  // unknown modality
  CHECK_THROWS_AS(parse_formula("", kAB), ParseError);
  CHECK_THROWS_AS(parse_formula("q & p0", kAB), ParseError);  // names are not variables
}

TEST_CASE("derived connectives expand to the core grammar") {
  Formula f = parse_formula("p0 & p1", kAB);
  CHECK(f.kind() == Formula::Kind::Imp);  // !(p0 -> !p1)
  CHECK(f.rhs() == Formula::bot());
  Formula g = parse_formula("[a]p0", kAB);
  CHECK(g.kind() == Formula::Kind::Imp);
  CHECK(g.lhs().kind() == Formula::Kind::Diamond);
}

TEST_CASE("printing round trips") {
  auto check_rt = [](const std::string& text) {
    Formula f = parse_formula(text, kAB);
    CHECK(parse_formula(to_string(f), kAB) == f);
  };
  check_rt("p0 -> [a^-]<a>p0");
  check_rt("!(p0 & p1) | <a;b>false");
  check_rt("<a|b^+>(p0 -> p1 -> false)");
  check_rt("!!!p0");
  check_rt("true & false");
  check_rt("[(a;b)^+]p2");
}

TEST_CASE("random round trips") {
  gen::Rng rng(20260817);
  for (int i = 0; i < 3000; ++i) {
    Formula f = gen::formula(rng, 4, 3, kAB, 2);
    std::string s = to_string(f);
    CAPTURE(s);
    CHECK(parse_formula(s, kAB) == f);
  }
  for (int i = 0; i < 1000; ++i) {
    Program e = gen::program(rng, 3, kAB);
    std::string s = to_string(e);
    CAPTURE(s);
    CHECK(parse_program(s, kAB) == e);
  }
}

TEST_CASE("sub closure") {
  Formula f = parse_formula("<a>p0 -> p1", kAB);
  FormulaSet s = sub_closure(f);
  CHECK(s.size() == 4);  // f, <a>p0, p0, p1
  CHECK(s.contains(f));
  CHECK(s.contains(Formula::var(0)));
  CHECK(s.contains(Formula::var(1)));
  CHECK(s.contains(Formula::diamond(Program::atom("a"), Formula::var(0))));
  CHECK(s.is_sub_closed());

  // |Sub(f)| is bounded by the formula tree size
  gen::Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    Formula g = gen::formula(rng, 4, 3, kAB, 2);
    FormulaSet sub = sub_closure(g);
    CHECK(sub.size() <= static_cast<std::size_t>(g.node_count()));
    CHECK(sub.is_sub_closed());
    // idempotent
    CHECK(sub_closure(sub) == sub);
  }
}

TEST_CASE("sub closure is monotone") {
  gen::Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    Formula f = gen::formula(rng, 3, 2, kAB, 1);
    Formula g = gen::formula(rng, 3, 2, kAB, 1);
    FormulaSet fs{f};
    FormulaSet fg{f, g};
    FormulaSet cf = sub_closure(fs);
    FormulaSet cg = sub_closure(fg);
    for (const auto& h : cf) CHECK(cg.contains(h));
  }
}

TEST_CASE("substitute") {
  Formula f = parse_formula("p0 -> <a>p1", kAB);
  std::map<int, Formula> sigma = {{0, parse_formula("p1 & p2", kAB)},
                                  {1, Formula::bot()}};
  Formula g = substitute(f, sigma);
  CHECK(g == parse_formula("(p1 & p2) -> <a>false", kAB));
  // simultaneous, not sequential: p0 := p1, p1 := p0 swaps
  std::map<int, Formula> swap = {{0, Formula::var(1)}, {1, Formula::var(0)}};
  CHECK(substitute(parse_formula("p0 -> p1", kAB), swap) ==
        parse_formula("p1 -> p0", kAB));
}

TEST_CASE("shift alphabet") {
  Formula f = parse_formula("<a>p0 -> [b]p1", kAB);
  std::map<std::string, std::string> rho = {{"a", "c"}, {"b", "d"}};
  Formula g = shift_alphabet(f, rho);
  CHECK(g == parse_formula("<c>p0 -> [d]p1", {"c", "d"}));

  // identity renaming is the identity
  std::map<std::string, std::string> id = {{"a", "a"}, {"b", "b"}};
  gen::Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    Formula h = gen::formula(rng, 4, 2, kAB, 2);
    CHECK(shift_alphabet(h, id) == h);
  }

  // missing atom and non-injective renamings are rejected
  CHECK_THROWS_AS(shift_alphabet(f, {{"a", "c"}}), Error);
  CHECK_THROWS_AS(shift_alphabet(f, {{"a", "c"}, {"b", "c"}}), Error);
}

TEST_CASE("formula set order is deterministic") {
  FormulaSet s;
  s.insert(Formula::var(2));
  s.insert(Formula::bot());
  s.insert(Formula::var(0));
  CHECK(s[0] == Formula::bot());
  CHECK(s[1] == Formula::var(0));
  CHECK(s[2] == Formula::var(2));
}

TEST_CASE("modality name shape") {
  CHECK(is_modality_name("a"));
  CHECK(is_modality_name("ab_1"));
  CHECK(is_modality_name("p"));      // bare p is a name, p0 is a variable
  CHECK(!is_modality_name("p0"));
  CHECK(!is_modality_name("p12"));
  CHECK(!is_modality_name("A"));
  CHECK(!is_modality_name(""));
  CHECK(is_var_shaped("p0"));
  CHECK(is_var_shaped("p007"));
  CHECK(!is_var_shaped("p"));
  CHECK(!is_var_shaped("q1"));
}
