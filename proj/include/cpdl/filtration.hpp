#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cpdl/algebra.hpp"
#include "cpdl/kripke.hpp"
#include "cpdl/logics.hpp"
#include "cpdl/syntax.hpp"

namespace cpdl {

// Equivalence on the states of a model, blocks numbered by least member.
// A partition may carry a definability witness: a formula set whose induced
// equivalence it equals. Partitions produced without an explicit witness
// describe one symbolically in witness_note instead.
struct Partition {
  int n = 0;
  std::vector<int> class_of;  // state -> block id
  std::vector<Bits> blocks;   // block id -> member set
  std::optional<FormulaSet> witness;
  std::string witness_note;

  int num_blocks() const { return static_cast<int>(blocks.size()); }
  int block_of(int state) const { return class_of[state]; }

  // every block of this partition sits inside one block of coarser
  bool refines(const Partition& coarser) const;

  // common refinement; witnesses merge when both sides are explicit
  Partition intersect(const Partition& o) const;

  static Partition identity(int n);
  static Partition from_classes(int n, const std::vector<int>& cls);

  bool same_blocks(const Partition& o) const { return class_of == o.class_of; }
};

// Partition by agreement on every member of delta; witness = delta.
Partition equiv_induced(const Model& m, const FormulaSet& delta);

// Smallest filtered relation: block pair present iff some member pair is.
Relation min_filtered(const Model& m, const Partition& p, const std::string& modality);

// Largest filtered relation: ([x],[y]) present iff every <a>psi in gamma
// with y |= psi has x |= <a>psi. Diamonds over compound programs are not of
// that shape and impose nothing.
Relation max_filtered(const Model& m, const Partition& p, const FormulaSet& gamma,
                      const std::string& modality);

// Coarsest partition whose blocks agree on the given variables and which is
// a back-and-forth bisimulation for every atomic relation in both directions
// (converse diamonds are part of the language).
Partition bisim_coarsest(const Model& m, const std::set<int>& vars);

// Characteristic formulas of the blocks of bisim_coarsest(m, vars), one per
// block, describing successors and predecessors up to the given depth.
std::vector<Formula> characteristic_formulas(const Model& m, const std::set<int>& vars,
                                             int depth);

struct ConditionReport {
  bool pass = true;
  std::string witness;  // first failure, human-readable; empty when passing
};

struct FiltrationReport {
  ConditionReport refinement;   // blocks agree on every gamma formula
  ConditionReport valuation;    // quotient valuation matches on gamma variables
  ConditionReport lower_bound;  // min filtered relation included
  ConditionReport upper_bound;  // included in max filtered relation
  ConditionReport lemma;        // pointwise truth transfer on gamma
  std::optional<ValidationResult> quotient_validation;  // logic-model check

  bool structure_pass() const {
    return refinement.pass && valuation.pass && lower_bound.pass && upper_bound.pass &&
           lemma.pass;
  }
  bool pass() const {
    return structure_pass() &&
           (!quotient_validation || quotient_validation->validates);
  }
};

struct FiltrationCertificate {
  Model source;
  FormulaSet gamma;
  Partition partition;
  Model quotient;
  std::string strategy;
  FiltrationReport verified;

  // the definability witness when explicit
  const std::optional<FormulaSet>& delta() const { return partition.witness; }
};

// Definition checks plus the pointwise truth-transfer check for every state
// and every gamma member. Throws FormatError on structural mismatch between
// source, partition, and quotient.
FiltrationReport check_filtration(const FiltrationCertificate& cert);

// Quotient model over the blocks of p: block names "[x]" from the least
// member, provided relations, valuation restricted to the given variables
// (a block satisfies a variable iff all its members do; callers pass
// partitions refining the variables' agreement).
Model build_quotient(const Model& m, const Partition& p,
                     const std::map<std::string, Relation>& block_relations,
                     const std::set<int>& vars);

struct FilterOptions {
  int search_bound = 16;        // max free pairs for enumerating strategies
  bool explicit_witness = false;  // force characteristic formulas for "bisim"
  std::uint64_t eval_cap = 1000000;
};

// Builds a filtration certificate by the named strategy, then verifies it:
// check_filtration must pass and the quotient must validate the logic's
// axioms. Strategies: minimal, reflexive, lemmon, s4, s5, serial, symmetric,
// gabbay(m), bisim, search, search(b), strict. Throws PreconditionError when
// gamma is not closed under subformulas or the model fails the logic,
// StrategyFailed when the construction does not verify, LimitExceeded when
// an enumeration exceeds the configured bound.
FiltrationCertificate filter_with(const Model& m, const FormulaSet& gamma,
                                  const std::string& strategy, const LogicSpec& logic,
                                  const FilterOptions& opts = {});

// The finer-partition construction: relations and valuation are pulled back
// from cert.quotient through the block map, giving a new certificate over
// the finer partition with the same gamma.
FiltrationCertificate refine(const FiltrationCertificate& cert, const Partition& finer);

}  // namespace cpdl
