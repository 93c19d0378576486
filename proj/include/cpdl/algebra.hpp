#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "cpdl/bitset.hpp"
#include "cpdl/kripke.hpp"
#include "cpdl/syntax.hpp"

namespace cpdl {

// The family of state sets definable from the generator valuations, closed
// under complement, intersection, and diamond preimage along every modality
// of the model and its converse. Carrier order is the canonical set order of
// Bits::lex_compare (empty set first).
struct DefinableAlgebra {
  int n = 0;
  std::vector<Bits> carrier;
  std::vector<int> generator_vars;
  std::vector<Bits> generators;  // aligned with generator_vars

  bool contains(const Bits& s) const { return index_of(s) >= 0; }
  int index_of(const Bits& s) const;  // -1 when absent
};

// Closure to fixpoint from {θ(p) : p ∈ vars} plus the empty set. Throws
// LimitExceeded when the carrier would outgrow size_cap.
DefinableAlgebra definable_algebra(const Model& m, const std::set<int>& vars,
                                   std::size_t size_cap = 20000);

struct ValidationResult {
  bool validates = true;
  std::optional<Formula> failing_axiom;
  std::map<int, Bits> assignment;  // least counter-assignment when failing
  int witness_state = -1;          // least state where the axiom fails
  std::uint64_t evaluations = 0;
  std::size_t carrier_size = 0;
};

// Checks every axiom under every assignment of its variables to carrier
// elements of definable_algebra(m, all valued vars). Axioms must use atomic
// programs only. Assignments are enumerated in carrier order, earlier
// variables most significant, so a reported counter-assignment is the least
// one for the first failing axiom. The total evaluation count is checked
// against eval_cap before any work happens.
ValidationResult model_validates(const Model& m, const FormulaSet& axioms,
                                 std::uint64_t eval_cap = 1000000);

}  // namespace cpdl
