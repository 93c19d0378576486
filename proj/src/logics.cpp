#include "cpdl/logics.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "cpdl/errors.hpp"

namespace cpdl {

namespace {

Formula v0() { return Formula::var(0); }

Formula dia(const std::string& a, Formula f) {
  return Formula::diamond(Program::atom(a), std::move(f));
}

Formula dia_pow(const std::string& a, int k, Formula f) {
  for (int i = 0; i < k; ++i) f = dia(a, std::move(f));
  return f;
}

Formula axiom_t(const std::string& a) { return Formula::imp(v0(), dia(a, v0())); }
Formula axiom_4(const std::string& a) {
  return Formula::imp(dia_pow(a, 2, v0()), dia(a, v0()));
}
Formula axiom_5(const std::string& a) {
  return Formula::imp(dia(a, v0()), Formula::box(Program::atom(a), dia(a, v0())));
}
Formula axiom_b(const std::string& a) {
  return Formula::imp(v0(), Formula::box(Program::atom(a), dia(a, v0())));
}
Formula axiom_serial(const std::string& a) { return dia(a, Formula::top()); }
Formula axiom_collapse(const std::string& a, int m) {
  return Formula::imp(dia_pow(a, m, v0()), dia(a, v0()));
}
Formula axiom_weak_trans(const std::string& a) {
  return Formula::imp(dia_pow(a, 2, v0()), Formula::disj(dia(a, v0()), v0()));
}

// ------------------------------------------------- schematic axiom grammar

struct SchemaParser {
  const std::string& text;
  const std::string& modality;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos); }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(const std::string& tok) {
    skip_ws();
    if (text.compare(pos, tok.size(), tok) == 0) {
      pos += tok.size();
      return true;
    }
    return false;
  }

  bool peek(const std::string& tok) {
    skip_ws();
    return text.compare(pos, tok.size(), tok) == 0;
  }

  int power() {  // optional ^k suffix after <> or []
    if (!eat("^")) return 1;
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) fail("expected a number after '^'");
    int k = std::stoi(text.substr(start, pos - start));
    if (k < 1) fail("modality power must be at least 1");
    return k;
  }

  Formula primary() {
    skip_ws();
    if (eat("(")) {
      Formula f = formula();
      if (!eat(")")) fail("expected ')'");
      return f;
    }
    std::size_t start = pos;
    while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
    std::string word = text.substr(start, pos - start);
    if (word == "true") return Formula::top();
    if (word == "false") return Formula::bot();
    if (word.size() == 1 && word.find_first_of("pqrs") == 0)
      return Formula::var(static_cast<int>(word[0] - 'p'));
    pos = start;
    fail("expected a variable letter (p q r s), 'true', 'false', or '('");
  }

  Formula unary() {
    skip_ws();
    if (eat("!")) return Formula::neg(unary());
    if (eat("<>")) {
      int k = power();
      Formula f = unary();
      for (int i = 0; i < k; ++i) f = dia(modality, std::move(f));
      return f;
    }
    if (eat("[]")) {
      int k = power();
      Formula f = unary();
      for (int i = 0; i < k; ++i) f = Formula::box(Program::atom(modality), std::move(f));
      return f;
    }
    return primary();
  }

  Formula conjunction() {
    Formula f = unary();
    while (eat("&")) f = Formula::conj(std::move(f), unary());
    return f;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (eat("|")) f = Formula::disj(std::move(f), conjunction());
    return f;
  }

  Formula formula() {
    Formula f = disjunction();
    if (eat("->")) return Formula::imp(std::move(f), formula());
    return f;
  }

  Formula parse() {
    Formula f = formula();
    skip_ws();
    if (pos != text.size()) fail("unexpected trailing input");
    return f;
  }
};

// ----------------------------------------------------------- shape matching

// canonical single-variable form: rename the unique variable to p0
Formula canonical_var(const Formula& f) {
  std::set<int> vs = f.vars();
  if (vs.size() != 1 || *vs.begin() == 0) return f;
  std::map<int, Formula> sigma;
  sigma.emplace(*vs.begin(), v0());
  return substitute(f, sigma);
}

// matches ◇^m p -> ◇ p for some m >= 2, returning m
int collapse_power(const Formula& f, const std::string& a) {
  for (int m = 2; m <= 12; ++m)
    if (f == axiom_collapse(a, m)) return m;
  return 0;
}

std::optional<FrameCondition> condition_for(const Formula& axiom, const std::string& a) {
  Formula f = canonical_var(axiom);
  if (f == axiom_t(a)) return FrameCondition::reflexive();
  if (f == axiom_4(a)) return FrameCondition::transitive();
  if (f == axiom_b(a)) return FrameCondition::symmetric();
  if (f == axiom_5(a)) return FrameCondition::euclidean();
  if (f == axiom_serial(a)) return FrameCondition::serial();
  if (f == axiom_weak_trans(a)) return FrameCondition::weakly_transitive();
  if (int m = collapse_power(f, a)) return FrameCondition::m_collapse(m);
  return std::nullopt;
}

std::string strategy_for(const std::vector<FrameCondition>& conds) {
  auto has = [&](FrameCondition c) {
    return std::find(conds.begin(), conds.end(), c) != conds.end();
  };
  for (const FrameCondition& c : conds)
    if (c.kind == FrameConditionKind::MCollapse && conds.size() == 1)
      return "gabbay(" + std::to_string(c.m) + ")";
  if (conds.size() == 1 && has(FrameCondition::reflexive())) return "reflexive";
  if (conds.size() == 1 && has(FrameCondition::transitive())) return "lemmon";
  if (conds.size() == 1 && has(FrameCondition::serial())) return "serial";
  if (conds.size() == 1 && has(FrameCondition::symmetric())) return "symmetric";
  if (conds.size() == 2 && has(FrameCondition::reflexive()) &&
      has(FrameCondition::transitive()))
    return "s4";
  if (conds.size() == 2 && has(FrameCondition::transitive()) &&
      has(FrameCondition::serial()))
    return "lemmon";
  return "bisim";
}

LogicSpec make_spec(const std::string& name, const std::string& a,
                    std::vector<Formula> axioms,
                    std::optional<std::vector<FrameCondition>> conditions,
                    const std::string& strategy) {
  LogicSpec spec;
  spec.name = name;
  spec.alphabet = {a};
  for (Formula& f : axioms) spec.axioms.insert(std::move(f));
  if (conditions) {
    spec.frame_conditions.emplace();
    for (const FrameCondition& c : *conditions) spec.frame_conditions->emplace_back(a, c);
  }
  spec.strategy = strategy;
  return spec;
}

// Km(m) names
std::optional<int> km_index(const std::string& name) {
  if (name.size() < 5 || name.compare(0, 3, "Km(") != 0 || name.back() != ')')
    return std::nullopt;
  std::string digits = name.substr(3, name.size() - 4);
  if (digits.empty() ||
      digits.find_first_not_of("0123456789") != std::string::npos)
    return std::nullopt;
  int m = std::stoi(digits);
  if (m < 1) return std::nullopt;
  return m;
}

LogicSpec custom_spec(const std::string& name, const std::string& a) {
  std::vector<std::string> chunks;
  std::size_t start = 2;  // past "K+"
  for (std::size_t i = start; i <= name.size(); ++i)
    if (i == name.size() || name[i] == '+') {
      chunks.push_back(name.substr(start, i - start));
      start = i + 1;
    }

  std::vector<Formula> axioms;
  std::vector<FrameCondition> conds;
  bool all_matched = true;
  for (const std::string& chunk : chunks) {
    if (chunk.empty()) throw FormatError("empty axiom in logic name '" + name + "'");
    SchemaParser parser{chunk, a};
    Formula ax = parser.parse();
    if (auto c = condition_for(ax, a))
      conds.push_back(*c);
    else
      all_matched = false;
    axioms.push_back(std::move(ax));
  }
  if (all_matched) {
    std::string strategy = strategy_for(conds);
    return make_spec(name, a, std::move(axioms), std::move(conds), strategy);
  }
  return make_spec(name, a, std::move(axioms), std::nullopt, "bisim");
}

}  // namespace

Formula parse_schematic_axiom(const std::string& text, const std::string& modality) {
  SchemaParser parser{text, modality};
  return parser.parse();
}

bool is_builtin_logic(const std::string& name) {
  static const char* kNames[] = {"K",  "T",  "K4",    "S4",     "S5",  "K5",
                                 "K45", "D", "KB", "K+<>T", "K4+<>T", "DIFF"};
  for (const char* n : kNames)
    if (name == n) return true;
  return km_index(name).has_value();
}

LogicSpec instantiate_logic(const std::string& name, const std::string& modality) {
  if (!is_modality_name(modality))
    throw FormatError("'" + modality + "' is not a modality name");
  const std::string& a = modality;

  if (name == "K") return make_spec(name, a, {}, std::vector<FrameCondition>{}, "minimal");
  if (name == "T")
    return make_spec(name, a, {axiom_t(a)}, {{FrameCondition::reflexive()}}, "reflexive");
  if (name == "K4")
    return make_spec(name, a, {axiom_4(a)}, {{FrameCondition::transitive()}}, "lemmon");
  if (name == "S4")
    return make_spec(name, a, {axiom_t(a), axiom_4(a)},
                     {{FrameCondition::reflexive(), FrameCondition::transitive()}}, "s4");
  if (name == "S5")
    return make_spec(name, a, {axiom_t(a), axiom_5(a)},
                     {{FrameCondition::equivalence()}}, "s5");
  if (name == "K5")
    return make_spec(name, a, {axiom_5(a)}, {{FrameCondition::euclidean()}}, "bisim");
  if (name == "K45")
    return make_spec(name, a, {axiom_4(a), axiom_5(a)},
                     {{FrameCondition::transitive(), FrameCondition::euclidean()}}, "bisim");
  if (name == "D" || name == "K+<>T")
    return make_spec(name, a, {axiom_serial(a)}, {{FrameCondition::serial()}}, "serial");
  if (name == "KB")
    return make_spec(name, a, {axiom_b(a)}, {{FrameCondition::symmetric()}}, "symmetric");
  if (name == "K4+<>T")
    return make_spec(name, a, {axiom_4(a), axiom_serial(a)},
                     {{FrameCondition::transitive(), FrameCondition::serial()}}, "lemmon");
  if (name == "DIFF")
    return make_spec(name, a, {axiom_b(a), axiom_weak_trans(a)},
                     {{FrameCondition::symmetric(), FrameCondition::weakly_transitive()}},
                     "bisim");
  if (auto m = km_index(name))
    return make_spec(name, a, {axiom_collapse(a, *m)}, {{FrameCondition::m_collapse(*m)}},
                     "gabbay(" + std::to_string(*m) + ")");

  if (name.size() > 2 && name.compare(0, 2, "K+") == 0) return custom_spec(name, a);
  throw FormatError("unknown logic '" + name + "'");
}

}  // namespace cpdl
