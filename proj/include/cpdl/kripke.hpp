#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "cpdl/bitset.hpp"
#include "cpdl/syntax.hpp"

namespace cpdl {

// Binary relation on {0..n-1}, stored as successor rows.
struct Relation {
  int n = 0;
  std::vector<Bits> rows;

  Relation() = default;
  explicit Relation(int n_) : n(n_), rows(n_, Bits(n_)) {}

  bool has(int i, int j) const { return rows[i].test(j); }
  void add(int i, int j) { rows[i].set(j); }

  Relation united_with(const Relation& o) const;
  Relation composed_with(const Relation& o) const;
  Relation transposed() const;
  Relation transitive_closure() const;
  Relation reflexive_closure() const;
  Relation power(int m) const;  // m-fold composition, m >= 1

  // {x | rows[x] meets targets}
  Bits preimage(const Bits& targets) const;

  bool subset_of(const Relation& o) const;
  bool operator==(const Relation& o) const { return n == o.n && rows == o.rows; }
  bool empty() const;
  int pair_count() const;
  std::vector<std::pair<int, int>> pairs() const;
};

// Finite Kripke model. States are dense indices with display names; the
// atomic alphabet is exactly the key set of relations.
struct Model {
  std::vector<std::string> states;
  std::map<std::string, Relation> relations;
  std::map<int, Bits> valuation;

  int num_states() const { return static_cast<int>(states.size()); }
  std::vector<std::string> alphabet() const;
  int state_index(const std::string& name) const;  // -1 when absent
  const Relation& relation(const std::string& modality) const;
  Bits val(int var) const;  // empty set when the variable is unvalued
};

// Standard-model semantics for compound programs.
Relation program_relation(const Model& m, const Program& e);

// Truth set of f; the valuation override evaluates f under a different
// variable assignment on the same frame (unmapped variables are empty).
Bits eval(const Model& m, const Formula& f);
Bits eval_with(const Model& m, const Formula& f, const std::map<int, Bits>& valuation);

// global truth
bool models(const Model& m, const Formula& f);

enum class FrameConditionKind {
  Reflexive, Transitive, Symmetric, Serial, Euclidean, Equivalence,
  MCollapse,        // every m-step path is covered by a direct edge
  WeaklyTransitive  // x->y->z and x != z imply x->z
};

struct FrameCondition {
  FrameConditionKind kind;
  int m = 0;  // MCollapse only

  static FrameCondition reflexive() { return {FrameConditionKind::Reflexive, 0}; }
  static FrameCondition transitive() { return {FrameConditionKind::Transitive, 0}; }
  static FrameCondition symmetric() { return {FrameConditionKind::Symmetric, 0}; }
  static FrameCondition serial() { return {FrameConditionKind::Serial, 0}; }
  static FrameCondition euclidean() { return {FrameConditionKind::Euclidean, 0}; }
  static FrameCondition equivalence() { return {FrameConditionKind::Equivalence, 0}; }
  static FrameCondition m_collapse(int m) { return {FrameConditionKind::MCollapse, m}; }
  static FrameCondition weakly_transitive() {
    return {FrameConditionKind::WeaklyTransitive, 0};
  }

  std::string name() const;
  bool operator==(const FrameCondition& o) const { return kind == o.kind && m == o.m; }
};

bool relation_satisfies(const Relation& r, const FrameCondition& c);
bool frame_condition_holds(const Model& m, const std::string& modality,
                           const FrameCondition& c);

// Add a derived relation under a fresh atomic name: the transitive closure
// of an existing relation, or its converse.
Model trans_enrich(const Model& m, const std::string& modality, const std::string& fresh);
Model temp_enrich(const Model& m, const std::string& modality, const std::string& fresh);

// File format: {"states": [...], "relations": {"a": [[from,to],...]},
// "valuation": {"p0": [...]}}. Unknown keys are rejected.
Model model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const Model& m);
Model load_model(const std::string& path);

}  // namespace cpdl
