#include "cpdl/decide.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "cpdl/errors.hpp"

namespace cpdl {

namespace {

// One step through the relation bit-vectors: pair (0,0) is the most
// significant position, so the empty relation comes first and (n-1, n-1)
// flips fastest. Returns false on wrap-around.
bool next_relation(Relation& r) {
  for (int k = r.n * r.n - 1; k >= 0; --k) {
    int i = k / r.n;
    int j = k % r.n;
    if (r.has(i, j)) {
      r.rows[i].reset(j);
    } else {
      r.add(i, j);
      return true;
    }
  }
  return false;
}

// Same order for valuation tuples: earlier variables are more significant,
// and within one variable state 0 is.
bool next_valuation(std::vector<Bits>& vals, int n) {
  int total = static_cast<int>(vals.size()) * n;
  for (int pos = total - 1; pos >= 0; --pos) {
    int v = pos / n;
    int s = pos % n;
    if (vals[v].test(s)) {
      vals[v].reset(s);
    } else {
      vals[v].set(s);
      return true;
    }
  }
  return false;
}

// True when no relabeling of the frame tuple sorts strictly earlier in the
// enumeration order above.
bool canonical_frame(const std::vector<const Relation*>& rels, int n) {
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  while (std::next_permutation(sigma.begin(), sigma.end())) {
    int cmp = 0;
    for (const Relation* r : rels) {
      for (int i = 0; i < n && cmp == 0; ++i) {
        for (int j = 0; j < n; ++j) {
          bool relabeled = r->has(sigma[i], sigma[j]);
          if (relabeled != r->has(i, j)) {
            cmp = relabeled ? 1 : -1;
            break;
          }
        }
      }
      if (cmp != 0) break;
    }
    if (cmp < 0) return false;
  }
  return true;
}

struct Budget {
  long long limit64;
  long long used64 = 0;
  const SearchStats* stats;

  void charge(long long units64) {
    used64 += units64;
    if (used64 > limit64)
      throw LimitExceeded(
          "search budget exhausted; sizes fully covered: " +
              std::to_string(stats->covered) + " (" +
              std::to_string(stats->frames) + " conforming frames, " +
              std::to_string(stats->raw_scanned) + " raw candidates scanned)",
          static_cast<std::uint64_t>(limit64 / 64),
          static_cast<std::uint64_t>((used64 + 63) / 64));
  }
};

}  // namespace

SearchResult bounded_sat(const Formula& phi, const std::vector<LogicSpec>& specs,
                         int n_max, const SearchOptions& opts) {
  if (n_max < 1) throw PreconditionError("the state bound must be at least 1");

  std::map<std::string, std::vector<FrameCondition>> conditions;
  for (const LogicSpec& spec : specs) {
    if (!spec.kripke_complete())
      throw PreconditionError("logic '" + spec.name +
                              "' has no frame conditions; searching frames for "
                              "it would be unsound");
    for (const std::string& a : spec.alphabet) {
      if (conditions.count(a))
        throw PreconditionError("logic specs share modality '" + a + "'");
      conditions[a];
    }
    for (const auto& [name, cond] : *spec.frame_conditions)
      conditions[name].push_back(cond);
  }
  std::set<std::string> used;
  phi.collect_atoms(used);
  for (const std::string& a : used)
    if (!conditions.count(a))
      throw PreconditionError("formula uses modality '" + a +
                              "' outside the spec alphabets");

  std::vector<std::string> modalities;
  for (const auto& [name, conds] : conditions) modalities.push_back(name);
  std::set<int> var_set = phi.vars();
  std::vector<int> vars(var_set.begin(), var_set.end());

  SearchResult res;
  res.n_max = n_max;
  Budget budget{opts.budget * 64, 0, &res.stats};
  auto start = std::chrono::steady_clock::now();
  auto finish = [&] {
    res.stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
  };

  for (int n = 1; n <= n_max; ++n) {
    Model m;
    for (int i = 0; i < n; ++i) m.states.push_back("s" + std::to_string(i));
    for (const std::string& a : modalities) m.relations.emplace(a, Relation(n));

    auto scan = [&](auto&& self, std::size_t idx) -> bool {
      if (idx == modalities.size()) {
        if (opts.isomorphism_pruning) {
          std::vector<const Relation*> rels;
          for (const std::string& a : modalities)
            rels.push_back(&m.relations.at(a));
          if (!canonical_frame(rels, n)) return false;
        }
        res.stats.frames += 1;
        budget.charge(64);
        std::vector<Bits> vals(vars.size(), Bits(n));
        for (;;) {
          res.stats.models += 1;
          m.valuation.clear();
          for (std::size_t v = 0; v < vars.size(); ++v)
            m.valuation.emplace(vars[v], vals[v]);
          Bits truth = eval(m, phi);
          if (truth.any()) {
            res.sat = true;
            res.witness = truth.first();
            res.model = m;
            if (!eval(*res.model, phi).test(res.witness))
              throw Error("internal: satisfiability replay failed");
            return true;
          }
          if (!next_valuation(vals, n)) return false;
        }
      }
      Relation& r = m.relations.at(modalities[idx]);
      r = Relation(n);
      const std::vector<FrameCondition>& conds = conditions.at(modalities[idx]);
      for (;;) {
        res.stats.raw_scanned += 1;
        budget.charge(1);
        bool ok = true;
        for (const FrameCondition& c : conds)
          if (!relation_satisfies(r, c)) {
            ok = false;
            break;
          }
        if (ok && self(self, idx + 1)) return true;
        if (!next_relation(r)) return false;
      }
    };

    if (scan(scan, 0)) {
      finish();
      return res;
    }
    res.stats.covered = n;
  }
  finish();
  return res;
}

SearchResult bounded_countermodel(const Formula& phi,
                                  const std::vector<LogicSpec>& specs, int n_max,
                                  const SearchOptions& opts) {
  return bounded_sat(Formula::neg(phi), specs, n_max, opts);
}

}  // namespace cpdl
