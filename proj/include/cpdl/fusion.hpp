#pragma once

#include <map>
#include <utility>
#include <vector>

#include "cpdl/filtration.hpp"
#include "cpdl/kripke.hpp"
#include "cpdl/logics.hpp"
#include "cpdl/syntax.hpp"

namespace cpdl {

// Combine specs over disjoint alphabets into one spec carrying every
// component's axioms on its own modalities. Colliding modality names get an
// underscore suffix from the 1-based component position ("a" taken twice
// becomes "a" and "a_2"). A single spec is returned unchanged; components of
// the result are the shifted inputs. Frame conditions survive only when
// every component has them.
LogicSpec fuse_logics(const std::vector<LogicSpec>& specs);

// Intermediate stages of fuse_filter, kept for reporting. The common
// partition's witness is phrased over the fresh variables; the returned
// certificate carries the witness translated back to gamma's language.
struct FusionTrace {
  std::map<Formula, int> fresh_vars;  // member of gamma -> its marker variable
  Model model_v;                      // source frame, markers valued by truth sets
  Model reduct_a;
  Model reduct_b;
  FormulaSet gamma_a;
  FormulaSet gamma_b;
  FiltrationCertificate cert_a;  // component filtrations of the reducts
  FiltrationCertificate cert_b;
  Partition common;
  Model merged;  // both quotient relation families over the common blocks
  FiltrationCertificate final_cert;
};

// Filter a model over a two-part alphabet by filtering each reduct with its
// own spec's strategy, refining both to the common partition, and merging.
// The model's alphabet must equal the union of the (disjoint) spec alphabets
// and must validate both axiom sets; gamma must be closed under subformulas.
// Component strategy failures propagate with the failing side named. The
// returned certificate passes the full filtration check and the merged
// quotient validates the union of the axiom sets.
std::pair<FiltrationCertificate, FusionTrace> fuse_filter(
    const Model& m, const FormulaSet& gamma, const LogicSpec& spec_a,
    const LogicSpec& spec_b, const FilterOptions& opts = {});

// Left fold of fuse_filter. A single spec dispatches to filter_with, or
// recurses when the spec is itself a fusion; specs already carrying
// components are expanded the same way on either side.
FiltrationCertificate fuse_filter_n(const Model& m, const FormulaSet& gamma,
                                    const std::vector<LogicSpec>& specs,
                                    const FilterOptions& opts = {});

}  // namespace cpdl
