#include "cpdl/filtration.hpp"

#include <algorithm>
#include <tuple>

#include "cpdl/errors.hpp"

namespace cpdl {

// ----------------------------------------------------------------- Partition

Partition Partition::identity(int n) {
  Partition p;
  p.n = n;
  p.class_of.resize(n);
  for (int i = 0; i < n; ++i) {
    p.class_of[i] = i;
    Bits b(n);
    b.set(i);
    p.blocks.push_back(std::move(b));
  }
  p.witness_note = "identity";
  return p;
}

Partition Partition::from_classes(int n, const std::vector<int>& cls) {
  if (static_cast<int>(cls.size()) != n) throw Error("class vector size mismatch");
  Partition p;
  p.n = n;
  p.class_of.assign(n, -1);
  std::map<int, int> renumber;
  for (int i = 0; i < n; ++i) {
    auto [it, fresh] = renumber.try_emplace(cls[i], static_cast<int>(p.blocks.size()));
    if (fresh) p.blocks.emplace_back(n);
    p.class_of[i] = it->second;
    p.blocks[it->second].set(i);
  }
  return p;
}

bool Partition::refines(const Partition& coarser) const {
  if (n != coarser.n) return false;
  for (const Bits& b : blocks) {
    int target = coarser.class_of[b.first()];
    bool ok = true;
    b.for_each([&](int i) { ok = ok && coarser.class_of[i] == target; });
    if (!ok) return false;
  }
  return true;
}

Partition Partition::intersect(const Partition& o) const {
  if (n != o.n) throw Error("partition size mismatch");
  std::map<std::pair<int, int>, int> ids;
  std::vector<int> cls(n);
  for (int i = 0; i < n; ++i)
    cls[i] = ids.try_emplace({class_of[i], o.class_of[i]}, static_cast<int>(ids.size()))
                 .first->second;
  Partition p = from_classes(n, cls);
  if (witness && o.witness) {
    FormulaSet merged = *witness;
    merged.merge(*o.witness);
    p.witness = std::move(merged);
  } else {
    auto describe = [](const Partition& q) {
      if (q.witness) return "delta(" + std::to_string(q.witness->size()) + ")";
      return q.witness_note.empty() ? std::string("plain") : q.witness_note;
    };
    p.witness_note = "common(" + describe(*this) + ", " + describe(o) + ")";
  }
  return p;
}

Partition equiv_induced(const Model& m, const FormulaSet& delta) {
  int n = m.num_states();
  std::vector<Bits> truths;
  for (const Formula& f : delta) truths.push_back(eval(m, f));
  std::map<std::vector<bool>, int> ids;
  std::vector<int> cls(n);
  for (int i = 0; i < n; ++i) {
    std::vector<bool> sig;
    sig.reserve(truths.size());
    for (const Bits& t : truths) sig.push_back(t.test(i));
    cls[i] = ids.try_emplace(std::move(sig), static_cast<int>(ids.size())).first->second;
  }
  Partition p = Partition::from_classes(n, cls);
  p.witness = delta;
  return p;
}

// ---------------------------------------------------------- filtered bounds

Relation min_filtered(const Model& m, const Partition& p, const std::string& modality) {
  Relation r(p.num_blocks());
  const Relation& src = m.relation(modality);
  for (int i = 0; i < src.n; ++i)
    src.rows[i].for_each([&](int j) { r.add(p.class_of[i], p.class_of[j]); });
  return r;
}

Relation max_filtered(const Model& m, const Partition& p, const FormulaSet& gamma,
                      const std::string& modality) {
  int nb = p.num_blocks();
  Relation r(nb);
  for (int i = 0; i < nb; ++i) r.rows[i] = Bits::all(nb);
  for (const Formula& f : gamma) {
    if (f.kind() != Formula::Kind::Diamond) continue;
    if (f.program().kind() != Program::Kind::Atom || f.program().name() != modality)
      continue;
    Bits holds = eval(m, f.operand());
    Bits dia = eval(m, f);
    for (int y = 0; y < nb; ++y) {
      if (!p.blocks[y].intersects(holds)) continue;
      for (int x = 0; x < nb; ++x)
        if (!p.blocks[x].subset_of(dia)) r.rows[x].reset(y);
    }
  }
  return r;
}

// ------------------------------------------------------------- bisimulation

namespace {

// one refinement round: split by current class, successor classes, and
// predecessor classes per modality
Partition refine_round(const Model& m, const Partition& p, bool& changed) {
  int n = m.num_states();
  std::vector<std::vector<int>> sigs(n);
  for (int i = 0; i < n; ++i) sigs[i].push_back(p.class_of[i]);
  for (const auto& [name, rel] : m.relations) {
    Relation back = rel.transposed();
    for (int i = 0; i < n; ++i) {
      std::set<int> succ, pred;
      rel.rows[i].for_each([&](int j) { succ.insert(p.class_of[j]); });
      back.rows[i].for_each([&](int j) { pred.insert(p.class_of[j]); });
      std::vector<int>& s = sigs[i];
      s.push_back(-1);
      s.insert(s.end(), succ.begin(), succ.end());
      s.push_back(-2);
      s.insert(s.end(), pred.begin(), pred.end());
    }
  }
  std::map<std::vector<int>, int> ids;
  std::vector<int> cls(n);
  for (int i = 0; i < n; ++i)
    cls[i] = ids.try_emplace(std::move(sigs[i]), static_cast<int>(ids.size())).first->second;
  Partition next = Partition::from_classes(n, cls);
  changed = !next.same_blocks(p);
  return next;
}

Partition valuation_partition(const Model& m, const std::set<int>& vars) {
  int n = m.num_states();
  std::map<std::vector<bool>, int> ids;
  std::vector<int> cls(n);
  for (int i = 0; i < n; ++i) {
    std::vector<bool> sig;
    for (int v : vars) sig.push_back(m.val(v).test(i));
    cls[i] = ids.try_emplace(std::move(sig), static_cast<int>(ids.size())).first->second;
  }
  return Partition::from_classes(n, cls);
}

}  // namespace

Partition bisim_coarsest(const Model& m, const std::set<int>& vars) {
  Partition p = valuation_partition(m, vars);
  for (bool changed = true; changed;) p = refine_round(m, p, changed);
  p.witness_note = "characteristic(depth <= " + std::to_string(m.num_states()) + ")";
  return p;
}

std::vector<Formula> characteristic_formulas(const Model& m, const std::set<int>& vars,
                                             int depth) {
  std::vector<Partition> rounds;
  rounds.push_back(valuation_partition(m, vars));
  for (int d = 0; d < depth; ++d) {
    bool changed = false;
    rounds.push_back(refine_round(m, rounds.back(), changed));
  }

  std::vector<std::vector<Formula>> chi;
  std::vector<Formula> base;
  for (const Bits& blk : rounds[0].blocks) {
    int rep = blk.first();
    Formula f = Formula::top();
    bool first = true;
    for (int v : vars) {
      Formula lit = m.val(v).test(rep) ? Formula::var(v) : Formula::neg(Formula::var(v));
      f = first ? lit : Formula::conj(std::move(f), std::move(lit));
      first = false;
    }
    base.push_back(std::move(f));
  }
  chi.push_back(std::move(base));

  for (int d = 1; d <= depth; ++d) {
    const Partition& prev = rounds[d - 1];
    std::vector<Formula> level;
    for (const Bits& blk : rounds[d].blocks) {
      int rep = blk.first();
      Formula f = chi[0][rounds[0].class_of[rep]];
      for (const auto& [name, rel] : m.relations) {
        Relation back = rel.transposed();
        for (int dir = 0; dir < 2; ++dir) {
          const Relation& r = dir == 0 ? rel : back;
          Program prog = dir == 0 ? Program::atom(name)
                                  : Program::converse(Program::atom(name));
          std::set<int> classes;
          r.rows[rep].for_each([&](int j) { classes.insert(prev.class_of[j]); });
          Formula reach = Formula::bot();
          bool first = true;
          for (int c : classes) {
            f = Formula::conj(std::move(f), Formula::diamond(prog, chi[d - 1][c]));
            reach = first ? chi[d - 1][c] : Formula::disj(std::move(reach), chi[d - 1][c]);
            first = false;
          }
          f = Formula::conj(std::move(f), Formula::box(prog, std::move(reach)));
        }
      }
      level.push_back(std::move(f));
    }
    chi.push_back(std::move(level));
  }
  return chi[depth];
}

// ------------------------------------------------------------- verification

Model build_quotient(const Model& m, const Partition& p,
                     const std::map<std::string, Relation>& block_relations,
                     const std::set<int>& vars) {
  Model q;
  for (const Bits& blk : p.blocks) q.states.push_back("[" + m.states[blk.first()] + "]");
  q.relations = block_relations;
  for (int v : vars) {
    Bits qv(p.num_blocks());
    for (int b = 0; b < p.num_blocks(); ++b)
      if (p.blocks[b].subset_of(m.val(v))) qv.set(b);
    q.valuation[v] = std::move(qv);
  }
  return q;
}

FiltrationReport check_filtration(const FiltrationCertificate& cert) {
  const Model& m = cert.source;
  const Partition& part = cert.partition;
  const Model& q = cert.quotient;
  int n = m.num_states();
  int nb = part.num_blocks();

  if (part.n != n || static_cast<int>(part.class_of.size()) != n)
    throw FormatError("partition does not match the source model");
  std::vector<Bits> rebuilt(nb, Bits(n));
  for (int i = 0; i < n; ++i) {
    int b = part.class_of[i];
    if (b < 0 || b >= nb) throw FormatError("block id out of range");
    rebuilt[b].set(i);
  }
  for (int b = 0; b < nb; ++b) {
    if (part.blocks[b].none()) throw FormatError("empty block");
    if (part.blocks[b] != rebuilt[b])
      throw FormatError("blocks inconsistent with the class map");
  }
  if (q.num_states() != nb) throw FormatError("quotient size differs from the block count");
  if (q.alphabet() != m.alphabet()) throw FormatError("quotient alphabet differs from the source");
  for (const auto& [name, rel] : q.relations)
    if (rel.n != nb) throw FormatError("quotient relation size mismatch");
  for (const auto& [v, bits] : q.valuation)
    if (bits.size() != nb) throw FormatError("quotient valuation size mismatch");

  FiltrationReport rep;

  for (const Formula& f : cert.gamma) {
    Bits truth = eval(m, f);
    for (int b = 0; b < nb; ++b) {
      if (truth.intersects(part.blocks[b]) && !part.blocks[b].subset_of(truth)) {
        int inside = (part.blocks[b] & truth).first();
        Bits out = part.blocks[b];
        out.subtract(truth);
        rep.refinement = {false, "states " + m.states[inside] + " and " +
                                     m.states[out.first()] +
                                     " share a block but disagree on " + to_string(f)};
        break;
      }
    }
    if (!rep.refinement.pass) break;
  }

  for (const Formula& f : cert.gamma) {
    if (f.kind() != Formula::Kind::Var) continue;
    int v = f.var_index();
    Bits src = m.val(v);
    Bits qv = q.val(v);
    for (int i = 0; i < n; ++i)
      if (src.test(i) != qv.test(part.class_of[i])) {
        rep.valuation = {false, "state " + m.states[i] + " and its block " +
                                    q.states[part.class_of[i]] + " differ on p" +
                                    std::to_string(v)};
        break;
      }
    if (!rep.valuation.pass) break;
  }

  for (const auto& [name, rel] : q.relations) {
    Relation lo = min_filtered(m, part, name);
    Relation hi = max_filtered(m, part, cert.gamma, name);
    for (int i = 0; i < nb && rep.lower_bound.pass; ++i) {
      Bits missing = lo.rows[i];
      missing.subtract(rel.rows[i]);
      if (missing.any())
        rep.lower_bound = {false, "modality " + name + ": pair (" + q.states[i] + ", " +
                                      q.states[missing.first()] +
                                      ") is below the minimal filtered relation"};
    }
    for (int i = 0; i < nb && rep.upper_bound.pass; ++i) {
      Bits extra = rel.rows[i];
      extra.subtract(hi.rows[i]);
      if (extra.any())
        rep.upper_bound = {false, "modality " + name + ": pair (" + q.states[i] + ", " +
                                      q.states[extra.first()] +
                                      ") exceeds the maximal filtered relation"};
    }
    if (!rep.lower_bound.pass || !rep.upper_bound.pass) break;
  }

  for (const Formula& f : cert.gamma) {
    Bits src = eval(m, f);
    Bits qt = eval(q, f);
    for (int i = 0; i < n; ++i)
      if (src.test(i) != qt.test(part.class_of[i])) {
        rep.lemma = {false, "state " + m.states[i] + " and block " +
                                q.states[part.class_of[i]] + " disagree on " + to_string(f)};
        break;
      }
    if (!rep.lemma.pass) break;
  }

  return rep;
}

// ----------------------------------------------------------------- strategies

namespace {

struct StrategyName {
  enum Kind {
    Minimal, Reflexive, Lemmon, S4, S5, Serial, Symmetric, Gabbay, Bisim, Search
  } kind = Minimal;
  int param = 0;
  bool has_param = false;
  std::string label;
};

StrategyName parse_strategy(const std::string& s) {
  auto param_of = [&](std::size_t open) {
    if (s.back() != ')') throw FormatError("malformed strategy '" + s + "'");
    std::string digits = s.substr(open + 1, s.size() - open - 2);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw FormatError("malformed strategy '" + s + "'");
    return std::stoi(digits);
  };
  StrategyName r;
  r.label = s;
  if (s == "minimal") r.kind = StrategyName::Minimal;
  else if (s == "reflexive") r.kind = StrategyName::Reflexive;
  else if (s == "lemmon") r.kind = StrategyName::Lemmon;
  else if (s == "s4") r.kind = StrategyName::S4;
  else if (s == "s5") r.kind = StrategyName::S5;
  else if (s == "serial") r.kind = StrategyName::Serial;
  else if (s == "symmetric") r.kind = StrategyName::Symmetric;
  else if (s == "bisim") r.kind = StrategyName::Bisim;
  else if (s == "search" || s == "strict") r.kind = StrategyName::Search;
  else if (s.rfind("gabbay(", 0) == 0) {
    r.kind = StrategyName::Gabbay;
    r.param = param_of(6);
    r.has_param = true;
  } else if (s.rfind("search(", 0) == 0) {
    r.kind = StrategyName::Search;
    r.param = param_of(6);
    r.has_param = true;
  } else {
    throw FormatError("unknown strategy '" + s + "'");
  }
  return r;
}

Relation lemmon_relation(const Model& m, const Partition& p, const FormulaSet& gamma,
                         const std::string& modality) {
  int nb = p.num_blocks();
  Relation r(nb);
  for (int i = 0; i < nb; ++i) r.rows[i] = Bits::all(nb);
  for (const Formula& f : gamma) {
    if (f.kind() != Formula::Kind::Diamond) continue;
    if (f.program().kind() != Program::Kind::Atom || f.program().name() != modality)
      continue;
    Bits dia = eval(m, f);
    Bits either = eval(m, f.operand()) | dia;
    for (int y = 0; y < nb; ++y) {
      if (!p.blocks[y].intersects(either)) continue;
      for (int x = 0; x < nb; ++x)
        if (!p.blocks[x].subset_of(dia)) r.rows[x].reset(y);
    }
  }
  return r;
}

std::string describe_failure(const FiltrationReport& r) {
  if (!r.refinement.pass) return "a partition not refining gamma agreement: " + r.refinement.witness;
  if (!r.valuation.pass) return "a valuation mismatch: " + r.valuation.witness;
  if (!r.lower_bound.pass) return r.lower_bound.witness;
  if (!r.upper_bound.pass) return r.upper_bound.witness;
  if (!r.lemma.pass) return "a truth-transfer failure: " + r.lemma.witness;
  if (r.quotient_validation && !r.quotient_validation->validates)
    return "a quotient refuting axiom " +
           to_string(*r.quotient_validation->failing_axiom);
  return "an unverified certificate";
}

std::optional<FiltrationCertificate> search_candidates(
    const Model& m, const FormulaSet& gamma, const Partition& part,
    const LogicSpec& logic, const FilterOptions& opts, const std::string& label,
    std::uint64_t& attempted) {
  std::map<std::string, Relation> lo;
  std::vector<std::tuple<std::string, int, int>> free_pairs;
  int nb = part.num_blocks();
  for (const std::string& a : m.alphabet()) {
    lo[a] = min_filtered(m, part, a);
    Relation hi = max_filtered(m, part, gamma, a);
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j)
        if (hi.has(i, j) && !lo[a].has(i, j)) free_pairs.emplace_back(a, i, j);
  }
  int bound = std::min(opts.search_bound, 62);
  if (static_cast<int>(free_pairs.size()) > bound)
    throw LimitExceeded("free relation pairs exceed the search bound", bound,
                        free_pairs.size());

  std::set<int> gvars = gamma.vars();
  std::uint64_t total = 1ull << free_pairs.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::map<std::string, Relation> rels = lo;
    for (std::size_t t = 0; t < free_pairs.size(); ++t)
      if (mask >> t & 1) {
        const auto& [a, i, j] = free_pairs[t];
        rels.at(a).add(i, j);
      }
    ++attempted;
    FiltrationCertificate cert{m, gamma, part, build_quotient(m, part, rels, gvars),
                               label, {}};
    FiltrationReport rep = check_filtration(cert);
    if (!rep.structure_pass()) continue;
    rep.quotient_validation = model_validates(cert.quotient, logic.axioms, opts.eval_cap);
    if (!rep.quotient_validation->validates) continue;
    cert.verified = std::move(rep);
    return cert;
  }
  return std::nullopt;
}

}  // namespace

FiltrationCertificate filter_with(const Model& m, const FormulaSet& gamma,
                                  const std::string& strategy, const LogicSpec& logic,
                                  const FilterOptions& opts) {
  if (!gamma.is_sub_closed())
    throw PreconditionError("gamma is not closed under subformulas");
  ValidationResult pre = model_validates(m, logic.axioms, opts.eval_cap);
  if (!pre.validates)
    throw PreconditionError("model does not validate logic '" + logic.name +
                            "': axiom " + to_string(*pre.failing_axiom) + " fails");

  StrategyName st = parse_strategy(strategy);
  FilterOptions local = opts;
  if (st.kind == StrategyName::Search && st.has_param) local.search_bound = st.param;

  std::set<int> gvars = gamma.vars();
  Partition part;
  switch (st.kind) {
    case StrategyName::Gabbay: {
      FormulaSet delta = gamma;
      for (const Formula& f : gamma)
        for (const std::string& a : m.alphabet()) {
          Formula g = f;
          for (int i = 1; i <= st.param; ++i) {
            g = Formula::diamond(Program::atom(a), g);
            delta.insert(g);
          }
        }
      part = equiv_induced(m, delta);
      break;
    }
    case StrategyName::Bisim: {
      part = bisim_coarsest(m, gvars);
      if (local.explicit_witness) {
        FormulaSet delta = gamma;
        for (Formula& f : characteristic_formulas(m, gvars, m.num_states()))
          delta.insert(std::move(f));
        if (!equiv_induced(m, delta).same_blocks(part))
          throw StrategyFailed(
              "characteristic formulas do not pin the bisimulation partition", 1);
        part.witness = std::move(delta);
        part.witness_note.clear();
      }
      break;
    }
    default:
      part = equiv_induced(m, gamma);
  }

  if (st.kind == StrategyName::Search) {
    std::uint64_t attempted = 0;
    auto found = search_candidates(m, gamma, part, logic, local, st.label, attempted);
    if (!found)
      throw StrategyFailed("no " + st.label + " filtration exists among " +
                               std::to_string(attempted) + " candidates",
                           attempted);
    return *found;
  }

  std::map<std::string, Relation> rels;
  for (const std::string& a : m.alphabet()) {
    Relation r;
    switch (st.kind) {
      case StrategyName::Minimal:
      case StrategyName::Gabbay:
      case StrategyName::Bisim:
        r = min_filtered(m, part, a);
        break;
      case StrategyName::Reflexive:
        r = min_filtered(m, part, a).reflexive_closure();
        break;
      case StrategyName::Lemmon:
        r = lemmon_relation(m, part, gamma, a);
        break;
      case StrategyName::S4:
        r = lemmon_relation(m, part, gamma, a).reflexive_closure();
        break;
      case StrategyName::S5:
        r = max_filtered(m, part, gamma, a);
        break;
      case StrategyName::Serial:
        r = min_filtered(m, part, a);
        for (int b = 0; b < part.num_blocks(); ++b)
          if (r.rows[b].none()) r.add(b, b);
        break;
      case StrategyName::Symmetric: {
        Relation base = min_filtered(m, part, a);
        r = base.united_with(base.transposed());
        break;
      }
      default:
        break;
    }
    rels[a] = std::move(r);
  }

  FiltrationCertificate cert{m, gamma, part, build_quotient(m, part, rels, gvars),
                             st.label, {}};
  cert.verified = check_filtration(cert);
  if (cert.verified.structure_pass()) {
    cert.verified.quotient_validation =
        model_validates(cert.quotient, logic.axioms, local.eval_cap);
    if (cert.verified.pass()) return cert;
  }

  if (st.kind == StrategyName::Gabbay) {
    std::uint64_t attempted = 0;
    auto found = search_candidates(m, gamma, part, logic, local, st.label, attempted);
    if (found) {
      found->strategy = st.label + "+search";
      return *found;
    }
    throw StrategyFailed("no " + st.label + " filtration exists among " +
                             std::to_string(attempted) + " candidates",
                         attempted);
  }

  throw StrategyFailed("strategy " + st.label + " produced " +
                           describe_failure(cert.verified),
                       1);
}

FiltrationCertificate refine(const FiltrationCertificate& cert, const Partition& finer) {
  if (finer.n != cert.partition.n)
    throw PreconditionError("partition does not cover the certificate's states");
  if (!finer.refines(cert.partition))
    throw PreconditionError("partition does not refine the certificate partition");
  if (!finer.witness && finer.witness_note.empty())
    throw PreconditionError("refinement partition carries no definability witness");

  const Partition& coarse = cert.partition;
  int nb = finer.num_blocks();
  std::vector<int> up(nb);
  for (int b = 0; b < nb; ++b) up[b] = coarse.class_of[finer.blocks[b].first()];

  Model q;
  for (const Bits& blk : finer.blocks)
    q.states.push_back("[" + cert.source.states[blk.first()] + "]");
  for (const auto& [name, rel] : cert.quotient.relations) {
    Relation r(nb);
    for (int u = 0; u < nb; ++u)
      for (int v = 0; v < nb; ++v)
        if (rel.has(up[u], up[v])) r.add(u, v);
    q.relations[name] = std::move(r);
  }
  for (const auto& [var, bits] : cert.quotient.valuation) {
    Bits b(nb);
    for (int u = 0; u < nb; ++u)
      if (bits.test(up[u])) b.set(u);
    q.valuation[var] = std::move(b);
  }

  FiltrationCertificate out{cert.source, cert.gamma, finer, std::move(q),
                            cert.strategy, {}};
  out.verified = check_filtration(out);
  return out;
}

}  // namespace cpdl
