#pragma once

#include <optional>
#include <vector>

#include "cpdl/kripke.hpp"
#include "cpdl/logics.hpp"
#include "cpdl/syntax.hpp"

namespace cpdl {

struct SearchStats {
  long long raw_scanned = 0;  // relation bit-vectors visited, conforming or not
  long long frames = 0;       // frame tuples meeting every condition
  long long models = 0;       // valued candidates evaluated
  int covered = 0;            // largest state count fully enumerated
  double seconds = 0.0;
};

struct SearchOptions {
  // Abstract enumeration budget: a conforming frame tuple costs one unit and
  // a raw scan step costs 1/64 of one. Exhausting it raises LimitExceeded
  // whose message reports the coverage reached.
  long long budget = 10000000;
  // Process only frame tuples that are lexicographically least among all
  // state relabelings. Exact, but factorial cost per frame; off by default
  // so every enumerated candidate is auditable.
  bool isomorphism_pruning = false;
};

// Outcome of a bounded search. A positive verdict carries a replayable model
// and a witness state index; a negative verdict only says that no model with
// at most n_max states exists, never that the formula is unsatisfiable.
struct SearchResult {
  bool sat = false;
  int n_max = 0;
  std::optional<Model> model;
  int witness = -1;
  SearchStats stats;
};

// Search for a model of phi over the union of the spec alphabets, trying
// state counts 1..n_max. For each count, atomic relations are enumerated in
// canonical order (rows top to bottom, absent-first) subject to every frame
// condition of the owning spec, then valuations of phi's variables the same
// way; the first satisfying candidate is returned. Every spec must carry
// frame conditions, the alphabets must be pairwise disjoint, and phi may
// only use modalities from those alphabets.
SearchResult bounded_sat(const Formula& phi, const std::vector<LogicSpec>& specs,
                         int n_max, const SearchOptions& opts = {});

// bounded_sat on the negation: a SAT verdict is a countermodel to validity.
SearchResult bounded_countermodel(const Formula& phi,
                                  const std::vector<LogicSpec>& specs, int n_max,
                                  const SearchOptions& opts = {});

}  // namespace cpdl
