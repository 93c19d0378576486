#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpdl/kripke.hpp"
#include "cpdl/syntax.hpp"

namespace cpdl {

// A normal modal logic presented by axioms over a modal alphabet, with an
// optional frame characterization and a default filtration strategy. Fusions
// keep their component specs.
struct LogicSpec {
  std::string name;
  std::vector<std::string> alphabet;  // sorted, duplicate-free
  FormulaSet axioms;
  std::optional<std::vector<std::pair<std::string, FrameCondition>>> frame_conditions;
  std::string strategy;
  std::vector<LogicSpec> components;  // nonempty exactly for fusions

  // frame-based model search is sound only when conditions are present
  bool kripke_complete() const { return frame_conditions.has_value(); }
};

// Built-in names: K, T, K4, S4, S5, K5, K45, D, KB, K+<>T, K4+<>T, Km(m),
// DIFF. Anything of the form "K+ax1+ax2+..." builds K extended with the
// schematic axioms: <> and [] are the one modality, <>^k / []^k are k-fold
// stacks, letters p q r s are variables. Axioms matching a known shape
// contribute their frame condition; if any axiom stays unmatched the spec
// carries no frame conditions at all.
LogicSpec instantiate_logic(const std::string& name, const std::string& modality);

bool is_builtin_logic(const std::string& name);

// The schematic axiom grammar on its own (used for axiom files too).
Formula parse_schematic_axiom(const std::string& text, const std::string& modality);

}  // namespace cpdl
