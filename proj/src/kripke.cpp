#include "cpdl/kripke.hpp"

#include <fstream>

#include "cpdl/errors.hpp"

namespace cpdl {

// ---------------------------------------------------------------- relations

Relation Relation::united_with(const Relation& o) const {
  Relation r = *this;
  for (int i = 0; i < n; ++i) r.rows[i] |= o.rows[i];
  return r;
}

Relation Relation::composed_with(const Relation& o) const {
  Relation r(n);
  for (int i = 0; i < n; ++i)
    rows[i].for_each([&](int j) { r.rows[i] |= o.rows[j]; });
  return r;
}

Relation Relation::transposed() const {
  Relation r(n);
  for (int i = 0; i < n; ++i)
    rows[i].for_each([&](int j) { r.rows[j].set(i); });
  return r;
}

Relation Relation::transitive_closure() const {
  Relation r = *this;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (r.rows[i].test(k)) r.rows[i] |= r.rows[k];
  return r;
}

Relation Relation::reflexive_closure() const {
  Relation r = *this;
  for (int i = 0; i < n; ++i) r.rows[i].set(i);
  return r;
}

Relation Relation::power(int m) const {
  if (m < 1) throw Error("relation power needs m >= 1");
  Relation r = *this;
  for (int i = 1; i < m; ++i) r = r.composed_with(*this);
  return r;
}

Bits Relation::preimage(const Bits& targets) const {
  Bits r(n);
  for (int i = 0; i < n; ++i)
    if (rows[i].intersects(targets)) r.set(i);
  return r;
}

bool Relation::subset_of(const Relation& o) const {
  for (int i = 0; i < n; ++i)
    if (!rows[i].subset_of(o.rows[i])) return false;
  return true;
}

bool Relation::empty() const {
  for (const auto& row : rows)
    if (row.any()) return false;
  return true;
}

int Relation::pair_count() const {
  int c = 0;
  for (const auto& row : rows) c += row.count();
  return c;
}

std::vector<std::pair<int, int>> Relation::pairs() const {
  std::vector<std::pair<int, int>> v;
  for (int i = 0; i < n; ++i)
    rows[i].for_each([&](int j) { v.emplace_back(i, j); });
  return v;
}

// ------------------------------------------------------------------- models

std::vector<std::string> Model::alphabet() const {
  std::vector<std::string> a;
  a.reserve(relations.size());
  for (const auto& [name, rel] : relations) a.push_back(name);
  return a;
}

int Model::state_index(const std::string& name) const {
  for (int i = 0; i < num_states(); ++i)
    if (states[i] == name) return i;
  return -1;
}

const Relation& Model::relation(const std::string& modality) const {
  auto it = relations.find(modality);
  if (it == relations.end()) throw Error("unknown modality '" + modality + "'");
  return it->second;
}

Bits Model::val(int var) const {
  auto it = valuation.find(var);
  return it == valuation.end() ? Bits(num_states()) : it->second;
}

Relation program_relation(const Model& m, const Program& e) {
  switch (e.kind()) {
    case Program::Kind::Atom: return m.relation(e.name());
    case Program::Kind::Union:
      return program_relation(m, e.left()).united_with(program_relation(m, e.right()));
    case Program::Kind::Comp:
      return program_relation(m, e.left()).composed_with(program_relation(m, e.right()));
    case Program::Kind::Plus: return program_relation(m, e.child()).transitive_closure();
    case Program::Kind::Converse: return program_relation(m, e.child()).transposed();
  }
  throw Error("unreachable");
}

namespace {

Bits eval_rec(const Model& m, const Formula& f, const std::map<int, Bits>& val) {
  int n = m.num_states();
  switch (f.kind()) {
    case Formula::Kind::Bot: return Bits(n);
    case Formula::Kind::Var: {
      auto it = val.find(f.var_index());
      return it == val.end() ? Bits(n) : it->second;
    }
    case Formula::Kind::Imp: {
      Bits a = eval_rec(m, f.lhs(), val);
      Bits b = eval_rec(m, f.rhs(), val);
      return a.complement() | b;
    }
    case Formula::Kind::Diamond: {
      Bits target = eval_rec(m, f.operand(), val);
      return program_relation(m, f.program()).preimage(target);
    }
  }
  throw Error("unreachable");
}

}  // namespace

Bits eval(const Model& m, const Formula& f) { return eval_rec(m, f, m.valuation); }

Bits eval_with(const Model& m, const Formula& f, const std::map<int, Bits>& valuation) {
  return eval_rec(m, f, valuation);
}

bool models(const Model& m, const Formula& f) {
  return eval(m, f) == Bits::all(m.num_states());
}

// -------------------------------------------------------- frame conditions

std::string FrameCondition::name() const {
  switch (kind) {
    case FrameConditionKind::Reflexive: return "reflexive";
    case FrameConditionKind::Transitive: return "transitive";
    case FrameConditionKind::Symmetric: return "symmetric";
    case FrameConditionKind::Serial: return "serial";
    case FrameConditionKind::Euclidean: return "euclidean";
    case FrameConditionKind::Equivalence: return "equivalence";
    case FrameConditionKind::MCollapse: return "m_collapse(" + std::to_string(m) + ")";
    case FrameConditionKind::WeaklyTransitive: return "weakly_transitive";
  }
  return "?";
}

bool relation_satisfies(const Relation& r, const FrameCondition& c) {
  int n = r.n;
  switch (c.kind) {
    case FrameConditionKind::Reflexive:
      for (int i = 0; i < n; ++i)
        if (!r.rows[i].test(i)) return false;
      return true;
    case FrameConditionKind::Transitive:
      for (int i = 0; i < n; ++i) {
        Bits reach(n);
        r.rows[i].for_each([&](int j) { reach |= r.rows[j]; });
        if (!reach.subset_of(r.rows[i])) return false;
      }
      return true;
    case FrameConditionKind::Symmetric:
      for (int i = 0; i < n; ++i) {
        bool ok = true;
        r.rows[i].for_each([&](int j) { ok = ok && r.rows[j].test(i); });
        if (!ok) return false;
      }
      return true;
    case FrameConditionKind::Serial:
      for (int i = 0; i < n; ++i)
        if (r.rows[i].none()) return false;
      return true;
    case FrameConditionKind::Euclidean:
      for (int i = 0; i < n; ++i) {
        bool ok = true;
        r.rows[i].for_each([&](int j) { ok = ok && r.rows[i].subset_of(r.rows[j]); });
        if (!ok) return false;
      }
      return true;
    case FrameConditionKind::Equivalence:
      return relation_satisfies(r, FrameCondition::reflexive()) &&
             relation_satisfies(r, FrameCondition::transitive()) &&
             relation_satisfies(r, FrameCondition::symmetric());
    case FrameConditionKind::MCollapse: {
      if (c.m < 1) throw Error("m_collapse needs m >= 1");
      return r.power(c.m).subset_of(r);
    }
    case FrameConditionKind::WeaklyTransitive:
      for (int i = 0; i < n; ++i) {
        Bits reach(n);
        r.rows[i].for_each([&](int j) { reach |= r.rows[j]; });
        reach.subtract(r.rows[i]);
        reach.reset(i);  // landing back on i is allowed
        if (reach.any()) return false;
      }
      return true;
  }
  return false;
}

bool frame_condition_holds(const Model& m, const std::string& modality,
                           const FrameCondition& c) {
  return relation_satisfies(m.relation(modality), c);
}

// ---------------------------------------------------------------- enrichment

namespace {

void check_fresh(const Model& m, const std::string& fresh) {
  if (!is_modality_name(fresh)) throw Error("'" + fresh + "' is not a modality name");
  if (m.relations.count(fresh)) throw Error("modality '" + fresh + "' already present");
}

}  // namespace

Model trans_enrich(const Model& m, const std::string& modality, const std::string& fresh) {
  check_fresh(m, fresh);
  Model r = m;
  r.relations[fresh] = m.relation(modality).transitive_closure();
  return r;
}

Model temp_enrich(const Model& m, const std::string& modality, const std::string& fresh) {
  check_fresh(m, fresh);
  Model r = m;
  r.relations[fresh] = m.relation(modality).transposed();
  return r;
}

// --------------------------------------------------------------------- JSON

using nlohmann::json;

Model model_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("model: top level must be an object");
  for (const auto& [key, _] : j.items())
    if (key != "states" && key != "relations" && key != "valuation")
      throw FormatError("model: unknown key '" + key + "'");
  if (!j.contains("states") || !j["states"].is_array())
    throw FormatError("model: missing \"states\" array");
  if (!j.contains("relations") || !j["relations"].is_object())
    throw FormatError("model: missing \"relations\" object");

  Model m;
  std::map<std::string, int> index;
  for (const auto& s : j["states"]) {
    if (!s.is_string()) throw FormatError("model: state names must be strings");
    std::string name = s.get<std::string>();
    if (name.empty()) throw FormatError("model: empty state name");
    if (index.count(name)) throw FormatError("model: duplicate state '" + name + "'");
    index[name] = m.num_states();
    m.states.push_back(name);
  }
  if (m.states.empty()) throw FormatError("model: needs at least one state");

  int n = m.num_states();
  auto state_of = [&](const json& v, const char* where) {
    if (!v.is_string()) throw FormatError(std::string("model: ") + where + ": expected state name");
    auto it = index.find(v.get<std::string>());
    if (it == index.end())
      throw FormatError(std::string("model: ") + where + ": unknown state '" +
                        v.get<std::string>() + "'");
    return it->second;
  };

  for (const auto& [name, pairs] : j["relations"].items()) {
    if (!is_modality_name(name))
      throw FormatError("model: bad modality name '" + name + "'");
    if (!pairs.is_array()) throw FormatError("model: relation '" + name + "' must be an array");
    Relation r(n);
    for (const auto& pr : pairs) {
      if (!pr.is_array() || pr.size() != 2)
        throw FormatError("model: relation '" + name + "': entries are [from,to] pairs");
      r.add(state_of(pr[0], "relation pair"), state_of(pr[1], "relation pair"));
    }
    m.relations[name] = std::move(r);
  }

  if (j.contains("valuation")) {
    if (!j["valuation"].is_object())
      throw FormatError("model: \"valuation\" must be an object");
    for (const auto& [var, members] : j["valuation"].items()) {
      if (!is_var_shaped(var))
        throw FormatError("model: bad variable name '" + var + "' (use p0, p1, ...)");
      if (!members.is_array())
        throw FormatError("model: valuation of '" + var + "' must be an array");
      Bits b(n);
      for (const auto& s : members) b.set(state_of(s, "valuation"));
      m.valuation[std::stoi(var.substr(1))] = std::move(b);
    }
  }
  return m;
}

json model_to_json(const Model& m) {
  json j;
  j["states"] = m.states;
  json rels = json::object();
  for (const auto& [name, r] : m.relations) {
    json arr = json::array();
    for (auto [i, k] : r.pairs()) arr.push_back({m.states[i], m.states[k]});
    rels[name] = std::move(arr);
  }
  j["relations"] = std::move(rels);
  json val = json::object();
  for (const auto& [var, b] : m.valuation) {
    json arr = json::array();
    b.for_each([&](int i) { arr.push_back(m.states[i]); });
    val["p" + std::to_string(var)] = std::move(arr);
  }
  j["valuation"] = std::move(val);
  return j;
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError("'" + path + "': " + e.what());
  }
  return model_from_json(j);
}

}  // namespace cpdl
