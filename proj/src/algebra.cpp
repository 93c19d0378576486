#include "cpdl/algebra.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "cpdl/errors.hpp"

namespace cpdl {

int DefinableAlgebra::index_of(const Bits& s) const {
  auto less = [](const Bits& a, const Bits& b) { return Bits::lex_compare(a, b) < 0; };
  auto it = std::lower_bound(carrier.begin(), carrier.end(), s, less);
  if (it != carrier.end() && *it == s) return static_cast<int>(it - carrier.begin());
  return -1;
}

DefinableAlgebra definable_algebra(const Model& m, const std::set<int>& vars,
                                   std::size_t size_cap) {
  DefinableAlgebra alg;
  alg.n = m.num_states();

  std::vector<Bits> found;
  std::unordered_set<Bits, BitsHash> seen;
  std::deque<Bits> todo;
  auto add = [&](const Bits& s) {
    if (!seen.insert(s).second) return;
    if (found.size() >= size_cap)
      throw LimitExceeded("definable-set carrier exceeds size cap", size_cap,
                          found.size() + 1);
    found.push_back(s);
    todo.push_back(s);
  };

  // one preimage operator per modality and one for its converse, so that
  // every formula of the language, converse diamonds included, lands inside
  std::vector<Relation> ops;
  for (const auto& [name, rel] : m.relations) {
    ops.push_back(rel);
    ops.push_back(rel.transposed());
  }

  add(Bits(alg.n));
  for (int v : vars) {
    alg.generator_vars.push_back(v);
    alg.generators.push_back(m.val(v));
    add(m.val(v));
  }

  while (!todo.empty()) {
    Bits x = todo.front();
    todo.pop_front();
    add(x.complement());
    for (const Relation& r : ops) add(r.preimage(x));
    std::size_t snapshot = found.size();
    for (std::size_t i = 0; i < snapshot; ++i) add(x & found[i]);
  }

  alg.carrier = std::move(found);
  std::sort(alg.carrier.begin(), alg.carrier.end(),
            [](const Bits& a, const Bits& b) { return Bits::lex_compare(a, b) < 0; });
  return alg;
}

namespace {

std::uint64_t assignment_count(std::size_t carrier, std::size_t k, std::uint64_t cap) {
  std::uint64_t c = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (carrier == 0 || c > cap / carrier) return cap + 1;  // saturate
    c *= carrier;
  }
  return c;
}

}  // namespace

ValidationResult model_validates(const Model& m, const FormulaSet& axioms,
                                 std::uint64_t eval_cap) {
  std::set<int> valued;
  for (const auto& [v, bits] : m.valuation) valued.insert(v);
  DefinableAlgebra alg = definable_algebra(m, valued);

  ValidationResult res;
  res.carrier_size = alg.carrier.size();

  std::uint64_t total = 0;
  for (const Formula& ax : axioms) {
    if (!ax.atomic_programs())
      throw PreconditionError("axiom '" + to_string(ax) +
                              "' has a compound program; expand it against the model first");
    total += assignment_count(alg.carrier.size(), ax.vars().size(), eval_cap);
    if (total > eval_cap)
      throw LimitExceeded("axiom evaluation budget exceeded", eval_cap, total);
  }

  Bits full = Bits::all(alg.n);
  for (const Formula& ax : axioms) {
    std::set<int> vset = ax.vars();
    std::vector<int> vs(vset.begin(), vset.end());
    std::vector<std::size_t> idx(vs.size(), 0);
    for (;;) {
      std::map<int, Bits> assign;
      for (std::size_t i = 0; i < vs.size(); ++i) assign[vs[i]] = alg.carrier[idx[i]];
      ++res.evaluations;
      Bits truth = eval_with(m, ax, assign);
      if (truth != full) {
        res.validates = false;
        res.failing_axiom = ax;
        res.assignment = std::move(assign);
        res.witness_state = truth.complement().first();
        return res;
      }
      // odometer, last variable fastest
      std::size_t j = vs.size();
      while (j > 0 && ++idx[j - 1] == alg.carrier.size()) idx[--j] = 0;
      if (j == 0) break;
    }
  }
  return res;
}

}  // namespace cpdl
