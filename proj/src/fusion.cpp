#include "cpdl/fusion.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cpdl/algebra.hpp"
#include "cpdl/errors.hpp"

namespace cpdl {

namespace {

LogicSpec shift_spec(const LogicSpec& s, const std::map<std::string, std::string>& rho) {
  LogicSpec out = s;
  out.alphabet.clear();
  for (const std::string& a : s.alphabet) out.alphabet.push_back(rho.at(a));
  std::sort(out.alphabet.begin(), out.alphabet.end());
  FormulaSet shifted;
  for (const Formula& f : s.axioms) shifted.insert(shift_alphabet(f, rho));
  out.axioms = std::move(shifted);
  if (s.frame_conditions) {
    out.frame_conditions->clear();
    for (const auto& [a, c] : *s.frame_conditions)
      out.frame_conditions->emplace_back(rho.at(a), c);
  }
  out.components.clear();
  for (const LogicSpec& c : s.components) out.components.push_back(shift_spec(c, rho));
  return out;
}

bool identity_map(const std::map<std::string, std::string>& rho) {
  for (const auto& [from, to] : rho)
    if (from != to) return false;
  return true;
}

std::string failure_text(const FiltrationReport& r) {
  if (!r.refinement.pass) return r.refinement.witness;
  if (!r.valuation.pass) return r.valuation.witness;
  if (!r.lower_bound.pass) return r.lower_bound.witness;
  if (!r.upper_bound.pass) return r.upper_bound.witness;
  if (!r.lemma.pass) return r.lemma.witness;
  if (r.quotient_validation && !r.quotient_validation->validates)
    return "quotient refutes axiom " + to_string(*r.quotient_validation->failing_axiom);
  return "unverified";
}

FiltrationCertificate component_filter(const Model& m, const FormulaSet& gamma,
                                       const LogicSpec& spec, const FilterOptions& opts,
                                       const char* side) {
  try {
    if (spec.components.size() >= 2) return fuse_filter_n(m, gamma, spec.components, opts);
    return filter_with(m, gamma, spec.strategy, spec, opts);
  } catch (const StrategyFailed& e) {
    throw StrategyFailed(
        "component '" + spec.name + "' (side " + side + "): " + e.what(), e.candidates);
  }
}

}  // namespace

LogicSpec fuse_logics(const std::vector<LogicSpec>& specs) {
  if (specs.empty()) throw PreconditionError("fusing an empty list of logics");
  if (specs.size() == 1) return specs[0];

  std::set<std::string> used;
  std::vector<LogicSpec> shifted;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    std::map<std::string, std::string> rho;
    for (const std::string& a : specs[i].alphabet) {
      std::string cand = a;
      for (int j = static_cast<int>(i) + 1; used.count(cand); ++j)
        cand = a + "_" + std::to_string(j);
      used.insert(cand);
      rho[a] = cand;
    }
    shifted.push_back(identity_map(rho) ? specs[i] : shift_spec(specs[i], rho));
  }

  LogicSpec out;
  bool complete = true;
  for (std::size_t i = 0; i < shifted.size(); ++i) {
    if (i) out.name += "*";
    out.name += shifted[i].name;
    out.alphabet.insert(out.alphabet.end(), shifted[i].alphabet.begin(),
                        shifted[i].alphabet.end());
    out.axioms.merge(shifted[i].axioms);
    complete = complete && shifted[i].frame_conditions.has_value();
  }
  std::sort(out.alphabet.begin(), out.alphabet.end());
  if (complete) {
    out.frame_conditions.emplace();
    for (const LogicSpec& s : shifted)
      out.frame_conditions->insert(out.frame_conditions->end(),
                                   s.frame_conditions->begin(),
                                   s.frame_conditions->end());
  }
  out.strategy = "fuse";
  out.components = std::move(shifted);
  return out;
}

std::pair<FiltrationCertificate, FusionTrace> fuse_filter(
    const Model& m, const FormulaSet& gamma, const LogicSpec& spec_a,
    const LogicSpec& spec_b, const FilterOptions& opts) {
  std::set<std::string> side_a(spec_a.alphabet.begin(), spec_a.alphabet.end());
  std::set<std::string> side_b(spec_b.alphabet.begin(), spec_b.alphabet.end());
  for (const std::string& a : side_a)
    if (side_b.count(a))
      throw PreconditionError("component alphabets share modality '" + a +
                              "'; fuse_logics shifts names, fuse_filter does not");
  std::set<std::string> whole = side_a;
  whole.insert(side_b.begin(), side_b.end());
  std::vector<std::string> names = m.alphabet();
  if (std::set<std::string>(names.begin(), names.end()) != whole)
    throw PreconditionError(
        "model alphabet differs from the union of the component alphabets");
  for (const std::string& a : gamma.atoms())
    if (!whole.count(a))
      throw PreconditionError("gamma uses modality '" + a +
                              "' outside the fused alphabet");
  if (!gamma.is_sub_closed())
    throw PreconditionError("gamma is not closed under subformulas");

  FormulaSet fused_axioms = spec_a.axioms;
  fused_axioms.merge(spec_b.axioms);
  ValidationResult pre = model_validates(m, fused_axioms, opts.eval_cap);
  if (!pre.validates)
    throw PreconditionError("model does not validate logic '" + spec_a.name + "*" +
                            spec_b.name + "': axiom " + to_string(*pre.failing_axiom) +
                            " fails");

  FusionTrace tr;

  // one marker variable per gamma member, numbered above gamma's own variables
  int base = -1;
  for (int v : gamma.vars()) base = std::max(base, v);
  for (std::size_t r = 0; r < gamma.size(); ++r)
    tr.fresh_vars.emplace(gamma[r], base + 1 + static_cast<int>(r));

  tr.model_v.states = m.states;
  tr.model_v.relations = m.relations;
  for (const auto& [f, q] : tr.fresh_vars) tr.model_v.valuation[q] = eval(m, f);

  tr.reduct_a.states = m.states;
  tr.reduct_b.states = m.states;
  for (const auto& [name, rel] : m.relations)
    (side_a.count(name) ? tr.reduct_a : tr.reduct_b).relations[name] = rel;
  tr.reduct_a.valuation = tr.model_v.valuation;
  tr.reduct_b.valuation = tr.model_v.valuation;

  for (const auto& [f, q] : tr.fresh_vars) {
    (void)f;
    tr.gamma_a.insert(Formula::var(q));
    tr.gamma_b.insert(Formula::var(q));
  }
  for (const Formula& f : gamma) {
    if (f.kind() != Formula::Kind::Diamond) continue;
    if (f.program().kind() != Program::Kind::Atom) continue;
    Formula marked =
        Formula::diamond(f.program(), Formula::var(tr.fresh_vars.at(f.operand())));
    (side_a.count(f.program().name()) ? tr.gamma_a : tr.gamma_b).insert(marked);
  }

  tr.cert_a = component_filter(tr.reduct_a, tr.gamma_a, spec_a, opts, "A");
  tr.cert_b = component_filter(tr.reduct_b, tr.gamma_b, spec_b, opts, "B");

  tr.common = tr.cert_a.partition.intersect(tr.cert_b.partition);
  FiltrationCertificate fine_a = refine(tr.cert_a, tr.common);
  FiltrationCertificate fine_b = refine(tr.cert_b, tr.common);
  if (!fine_a.verified.structure_pass())
    throw StrategyFailed("refined component (side A) failed verification: " +
                         failure_text(fine_a.verified));
  if (!fine_b.verified.structure_pass())
    throw StrategyFailed("refined component (side B) failed verification: " +
                         failure_text(fine_b.verified));
  if (fine_a.quotient.valuation != fine_b.quotient.valuation)
    throw StrategyFailed("refined component quotients disagree on the marker variables");

  tr.merged.states = fine_a.quotient.states;
  tr.merged.relations = fine_a.quotient.relations;
  for (const auto& [name, rel] : fine_b.quotient.relations)
    tr.merged.relations[name] = rel;
  tr.merged.valuation = fine_a.quotient.valuation;

  Model hat = tr.merged;
  hat.valuation.clear();
  for (const auto& [f, q] : tr.fresh_vars)
    if (f.kind() == Formula::Kind::Var) hat.valuation[f.var_index()] = tr.merged.val(q);

  FiltrationCertificate cert{
      m, gamma, tr.common, std::move(hat),
      "fuse(" + tr.cert_a.strategy + ", " + tr.cert_b.strategy + ")", {}};
  if (tr.common.witness) {
    std::map<int, Formula> sigma;
    for (const auto& [f, q] : tr.fresh_vars) sigma.emplace(q, f);
    FormulaSet translated;
    for (const Formula& w : *tr.common.witness) translated.insert(substitute(w, sigma));
    cert.partition.witness = std::move(translated);
  }

  FiltrationReport rep = check_filtration(cert);
  if (rep.structure_pass())
    rep.quotient_validation = model_validates(cert.quotient, fused_axioms, opts.eval_cap);
  cert.verified = std::move(rep);
  if (!cert.verified.pass())
    throw StrategyFailed("fused filtration failed verification: " +
                         failure_text(cert.verified));

  tr.final_cert = cert;
  return {std::move(cert), std::move(tr)};
}

FiltrationCertificate fuse_filter_n(const Model& m, const FormulaSet& gamma,
                                    const std::vector<LogicSpec>& specs,
                                    const FilterOptions& opts) {
  if (specs.empty()) throw PreconditionError("fusing an empty list of logics");
  if (specs.size() == 1) {
    const LogicSpec& s = specs[0];
    if (s.components.size() >= 2) return fuse_filter_n(m, gamma, s.components, opts);
    return filter_with(m, gamma, s.strategy, s, opts);
  }
  std::vector<LogicSpec> left(specs.begin(), specs.end() - 1);
  LogicSpec left_spec = left.size() == 1 ? left[0] : fuse_logics(left);
  return fuse_filter(m, gamma, left_spec, specs.back(), opts).first;
}

}  // namespace cpdl
