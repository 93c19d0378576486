#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cpdl/algebra.hpp"
#include "cpdl/decide.hpp"
#include "cpdl/errors.hpp"
#include "cpdl/filtration.hpp"
#include "cpdl/fusion.hpp"
#include "cpdl/kripke.hpp"
#include "cpdl/logics.hpp"
#include "cpdl/syntax.hpp"

using json = nlohmann::json;

namespace {

void emit(const json& report) { std::cout << report.dump(2) << "\n"; }

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cpdl::FormatError("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

cpdl::FormulaSet read_gamma(const std::string& path,
                            const std::vector<std::string>& alphabet,
                            std::vector<std::string>& added) {
  cpdl::FormulaSet given;
  for (const std::string& line : read_lines(path))
    given.insert(cpdl::parse_formula(line, alphabet));
  cpdl::FormulaSet closed = cpdl::sub_closure(given);
  for (const cpdl::Formula& f : closed)
    if (!given.contains(f)) added.push_back(cpdl::to_string(f));
  return closed;
}

cpdl::FormulaSet read_axioms(const std::string& path,
                             const std::vector<std::string>& alphabet) {
  cpdl::FormulaSet axioms;
  for (const std::string& line : read_lines(path))
    axioms.insert(cpdl::parse_formula(line, alphabet));
  if (axioms.empty()) throw cpdl::FormatError("'" + path + "' holds no axioms");
  return axioms;
}

// "a:K5,b:S4"; an optional third field overrides the strategy ("b:S5:bisim")
std::vector<cpdl::LogicSpec> parse_logics(const std::string& text, bool warn_custom) {
  std::vector<cpdl::LogicSpec> specs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto colon = item.find(':');
    if (colon == std::string::npos)
      throw cpdl::FormatError("logic assignment '" + item +
                              "' lacks a modality prefix (use a:K5)");
    std::string modality = item.substr(0, colon);
    std::string name = item.substr(colon + 1);
    std::string strategy;
    auto colon2 = name.rfind(':');
    if (colon2 != std::string::npos) {
      strategy = name.substr(colon2 + 1);
      name = name.substr(0, colon2);
    }
    cpdl::LogicSpec spec = cpdl::instantiate_logic(name, modality);
    if (!strategy.empty()) spec.strategy = strategy;
    if (warn_custom && !cpdl::is_builtin_logic(name))
      std::cerr << "warning: logic '" << name
                << "' is not built in; frame-based search is only as sound as "
                   "its frame conditions\n";
    specs.push_back(std::move(spec));
  }
  if (specs.empty()) throw cpdl::FormatError("no logic assignments given");
  return specs;
}

json bits_names(const cpdl::Bits& b, const std::vector<std::string>& names) {
  json arr = json::array();
  b.for_each([&](int i) { arr.push_back(names[i]); });
  return arr;
}

json formula_list(const cpdl::FormulaSet& fs) {
  json arr = json::array();
  for (const cpdl::Formula& f : fs) arr.push_back(cpdl::to_string(f));
  return arr;
}

json condition_json(const cpdl::ConditionReport& c) {
  json j;
  j["pass"] = c.pass;
  if (!c.witness.empty()) j["witness"] = c.witness;
  return j;
}

json validation_json(const cpdl::ValidationResult& v,
                     const std::vector<std::string>& names) {
  json j;
  j["validates"] = v.validates;
  j["evaluations"] = v.evaluations;
  j["carrier_size"] = v.carrier_size;
  if (!v.validates) {
    j["failing_axiom"] = cpdl::to_string(*v.failing_axiom);
    j["witness_state"] = names[v.witness_state];
    json assign = json::object();
    for (const auto& [var, bits] : v.assignment)
      assign["p" + std::to_string(var)] = bits_names(bits, names);
    j["assignment"] = assign;
  }
  return j;
}

json report_json(const cpdl::FiltrationReport& r,
                 const std::vector<std::string>& quotient_names) {
  json j;
  j["refinement"] = condition_json(r.refinement);
  j["valuation"] = condition_json(r.valuation);
  j["lower_bound"] = condition_json(r.lower_bound);
  j["upper_bound"] = condition_json(r.upper_bound);
  j["lemma"] = condition_json(r.lemma);
  j["pass"] = r.pass();
  if (r.quotient_validation)
    j["quotient_validation"] = validation_json(*r.quotient_validation, quotient_names);
  return j;
}

json cert_json(const cpdl::FiltrationCertificate& cert) {
  json map = json::object();
  for (int i = 0; i < cert.source.num_states(); ++i)
    map[cert.source.states[i]] = cert.quotient.states[cert.partition.block_of(i)];
  json j;
  j["map"] = std::move(map);
  j["strategy"] = cert.strategy;
  j["verified"] = report_json(cert.verified, cert.quotient.states);
  if (cert.delta()) {
    j["delta"] = formula_list(*cert.delta());
  } else {
    j["delta"] = nullptr;
    j["delta_note"] = cert.partition.witness_note;
  }
  return j;
}

json trace_json(const cpdl::FusionTrace& tr) {
  json fresh = json::object();
  for (const auto& [f, q] : tr.fresh_vars)
    fresh[cpdl::to_string(f)] = "p" + std::to_string(q);
  json j;
  j["fresh_vars"] = std::move(fresh);
  j["marked_model"] = cpdl::model_to_json(tr.model_v);
  j["reduct_a"] = cpdl::model_to_json(tr.reduct_a);
  j["reduct_b"] = cpdl::model_to_json(tr.reduct_b);
  j["gamma_a"] = formula_list(tr.gamma_a);
  j["gamma_b"] = formula_list(tr.gamma_b);
  j["component_a"] = cert_json(tr.cert_a);
  j["component_b"] = cert_json(tr.cert_b);
  j["common_blocks"] = tr.common.num_blocks();
  j["merged_model"] = cpdl::model_to_json(tr.merged);
  return j;
}

json stats_json(const cpdl::SearchStats& s) {
  json j;
  j["raw_scanned"] = s.raw_scanned;
  j["frames"] = s.frames;
  j["models"] = s.models;
  j["covered"] = s.covered;
  return j;
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw cpdl::FormatError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

struct CertSinks {
  std::string quotient_path;
  std::string cert_path;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--quotient", quotient_path, "write the quotient model here");
    cmd->add_option("--cert", cert_path, "write the certificate sidecar here");
  }
  void deliver(const cpdl::FiltrationCertificate& cert) const {
    if (!quotient_path.empty()) write_file(quotient_path, cpdl::model_to_json(cert.quotient));
    if (!cert_path.empty()) write_file(cert_path, cert_json(cert));
  }
};

int run_eval(const std::string& model_path, const std::string& formula_text) {
  cpdl::Model m = cpdl::load_model(model_path);
  cpdl::Formula f = cpdl::parse_formula(formula_text, m.alphabet());
  json j;
  j["truth_set"] = bits_names(cpdl::eval(m, f), m.states);
  emit(j);
  return 0;
}

int run_filter(const std::string& model_path, const std::string& gamma_path,
               const std::string& logic_name, const std::string& strategy,
               const cpdl::FilterOptions& opts, const CertSinks& sinks) {
  cpdl::Model m = cpdl::load_model(model_path);
  std::vector<std::string> alphabet = m.alphabet();
  if (alphabet.empty())
    throw cpdl::PreconditionError("model has no relations to filter");
  if (alphabet.size() > 1)
    throw cpdl::PreconditionError(
        "model has " + std::to_string(alphabet.size()) +
        " modalities; --logic names a unimodal logic, use fuse-filter with "
        "--logics for multimodal models");
  cpdl::LogicSpec spec = cpdl::instantiate_logic(logic_name, alphabet[0]);
  std::vector<std::string> added;
  cpdl::FormulaSet gamma = read_gamma(gamma_path, alphabet, added);
  std::string chosen = strategy.empty() ? spec.strategy : strategy;
  cpdl::FiltrationCertificate cert = cpdl::filter_with(m, gamma, chosen, spec, opts);
  json j;
  j["logic"] = spec.name;
  j["gamma"] = formula_list(gamma);
  j["added_to_gamma"] = added;
  j["blocks"] = cert.partition.num_blocks();
  j["quotient"] = cpdl::model_to_json(cert.quotient);
  j["certificate"] = cert_json(cert);
  emit(j);
  sinks.deliver(cert);
  return 0;
}

int run_fuse_filter(const std::string& model_path, const std::string& gamma_path,
                    const std::string& logics_text, bool trace,
                    const cpdl::FilterOptions& opts, const CertSinks& sinks) {
  cpdl::Model m = cpdl::load_model(model_path);
  std::vector<cpdl::LogicSpec> specs = parse_logics(logics_text, false);
  std::vector<std::string> added;
  cpdl::FormulaSet gamma = read_gamma(gamma_path, m.alphabet(), added);

  json j;
  cpdl::FiltrationCertificate cert;
  if (specs.size() == 1) {
    cert = cpdl::fuse_filter_n(m, gamma, specs, opts);
    if (trace)
      std::cerr << "note: a single component has no fusion stages to trace\n";
  } else {
    std::vector<cpdl::LogicSpec> rest(specs.begin(), specs.end() - 1);
    cpdl::LogicSpec left = rest.size() == 1 ? rest[0] : cpdl::fuse_logics(rest);
    auto [built, tr] = cpdl::fuse_filter(m, gamma, left, specs.back(), opts);
    cert = std::move(built);
    if (trace) j["trace"] = trace_json(tr);
  }
  j["logic"] = cpdl::fuse_logics(specs).name;
  j["gamma"] = formula_list(gamma);
  j["added_to_gamma"] = added;
  j["blocks"] = cert.partition.num_blocks();
  j["quotient"] = cpdl::model_to_json(cert.quotient);
  j["certificate"] = cert_json(cert);
  emit(j);
  sinks.deliver(cert);
  return 0;
}

int run_check(const std::string& model_path, const std::string& quotient_path,
              const std::string& map_path, const std::string& gamma_path) {
  cpdl::Model m = cpdl::load_model(model_path);
  cpdl::Model mhat = cpdl::load_model(quotient_path);
  std::vector<std::string> added;
  cpdl::FormulaSet gamma = read_gamma(gamma_path, m.alphabet(), added);

  std::ifstream in(map_path);
  if (!in) throw cpdl::FormatError("cannot open '" + map_path + "'");
  json mj;
  try {
    in >> mj;
  } catch (const json::exception& e) {
    throw cpdl::FormatError("'" + map_path + "': " + e.what());
  }
  if (mj.is_object() && mj.contains("map")) mj = mj["map"];
  if (!mj.is_object())
    throw cpdl::FormatError("map file: expected an object of state to block names");

  cpdl::Partition p;
  p.n = m.num_states();
  p.class_of.assign(p.n, -1);
  p.blocks.assign(mhat.num_states(), cpdl::Bits(p.n));
  for (int i = 0; i < m.num_states(); ++i) {
    const std::string& name = m.states[i];
    if (!mj.contains(name) || !mj[name].is_string())
      throw cpdl::FormatError("map file: no block for state '" + name + "'");
    int target = mhat.state_index(mj[name].get<std::string>());
    if (target < 0)
      throw cpdl::FormatError("map file: unknown quotient state '" +
                              mj[name].get<std::string>() + "'");
    p.class_of[i] = target;
    p.blocks[target].set(i);
  }
  for (int b = 0; b < mhat.num_states(); ++b)
    if (p.blocks[b].none())
      throw cpdl::FormatError("map file: quotient state '" + mhat.states[b] +
                              "' has no preimage");
  p.witness_note = "supplied by the map file";

  cpdl::FiltrationCertificate cert;
  cert.source = std::move(m);
  cert.gamma = gamma;
  cert.partition = std::move(p);
  cert.quotient = std::move(mhat);
  cert.strategy = "given";
  cpdl::FiltrationReport rep = cpdl::check_filtration(cert);

  json j;
  j["gamma"] = formula_list(gamma);
  j["added_to_gamma"] = added;
  j["blocks"] = cert.partition.num_blocks();
  j["verified"] = report_json(rep, cert.quotient.states);
  emit(j);
  return rep.structure_pass() ? 0 : 1;
}

int run_search(const std::string& formula_text, const std::string& logics_text,
               int max_states, const cpdl::SearchOptions& opts, bool countermodel) {
  std::vector<cpdl::LogicSpec> specs = parse_logics(logics_text, true);
  std::set<std::string> names;
  for (const cpdl::LogicSpec& s : specs)
    names.insert(s.alphabet.begin(), s.alphabet.end());
  std::vector<std::string> alphabet(names.begin(), names.end());
  cpdl::Formula f = cpdl::parse_formula(formula_text, alphabet);

  cpdl::SearchResult r = countermodel
                             ? cpdl::bounded_countermodel(f, specs, max_states, opts)
                             : cpdl::bounded_sat(f, specs, max_states, opts);
  std::cerr << "search: " << r.stats.seconds << " s\n";

  json j;
  j["n_max"] = r.n_max;
  j["stats"] = stats_json(r.stats);
  if (r.sat) {
    j["verdict"] = countermodel ? "COUNTERMODEL" : "SAT";
    j["model"] = cpdl::model_to_json(*r.model);
    j["witness"] = r.model->states[r.witness];
    emit(j);
    return countermodel ? 1 : 0;
  }
  j["verdict"] = countermodel ? "VALID_UP_TO" : "NO_MODEL_UP_TO";
  j["note"] = countermodel ? "validity is confirmed only up to the state bound"
                           : "not an unsatisfiability proof";
  emit(j);
  return countermodel ? 0 : 1;
}

int run_algebra(const std::string& model_path, const std::string& axioms_path,
                std::uint64_t cap) {
  cpdl::Model m = cpdl::load_model(model_path);
  cpdl::FormulaSet axioms = read_axioms(axioms_path, m.alphabet());
  cpdl::ValidationResult v = cpdl::model_validates(m, axioms, cap);
  json j;
  j["axioms"] = formula_list(axioms);
  j["validation"] = validation_json(v, m.states);
  emit(j);
  return v.validates ? 0 : 1;
}

int run_bisim(const std::string& model_path, const std::string& vars_text) {
  cpdl::Model m = cpdl::load_model(model_path);
  std::set<int> vars;
  if (vars_text.empty()) {
    for (const auto& [var, bits] : m.valuation) vars.insert(var);
  } else {
    std::stringstream ss(vars_text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      if (!cpdl::is_var_shaped(item))
        throw cpdl::FormatError("bad variable name '" + item + "' (use p0, p1, ...)");
      vars.insert(std::stoi(item.substr(1)));
    }
  }
  cpdl::Partition p = cpdl::bisim_coarsest(m, vars);
  json blocks = json::array();
  for (const cpdl::Bits& b : p.blocks) blocks.push_back(bits_names(b, m.states));
  json names = json::array();
  for (int v : vars) names.push_back("p" + std::to_string(v));
  json j;
  j["blocks"] = std::move(blocks);
  j["count"] = p.num_blocks();
  j["vars"] = std::move(names);
  emit(j);
  return 0;
}

int fail(int code, const std::string& kind, const std::string& message, json extra = {}) {
  json j = std::move(extra);
  j["error"] = kind;
  j["message"] = message;
  emit(j);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"model, filtration, and bounded-search toolkit for multimodal "
               "dynamic logic with converse"};
  app.require_subcommand(1);

  std::string model_path, quotient_path, map_path;
  std::string formula_text, gamma_path, logic_name, logics_text, axioms_path;
  std::string strategy, vars_text;
  int max_states = 5;
  cpdl::FilterOptions fopts;
  cpdl::SearchOptions sopts;
  bool trace = false;
  std::uint64_t cap = 1000000;
  CertSinks sinks;

  CLI::App* c_eval = app.add_subcommand("eval", "truth set of a formula in a model");
  c_eval->add_option("model", model_path, "model file")->required();
  c_eval->add_option("formula", formula_text, "formula text")->required();

  CLI::App* c_filter = app.add_subcommand("filter", "filter a model through gamma");
  c_filter->add_option("model", model_path, "model file")->required();
  c_filter->add_option("--gamma", gamma_path, "formula file, one per line")->required();
  c_filter->add_option("--logic", logic_name, "logic name, e.g. K5 or K+<>^3p-><>p")
      ->required();
  c_filter->add_option("--strategy", strategy, "override the logic's default strategy");
  c_filter->add_option("--search-bound", fopts.search_bound,
                       "max free relation pairs for enumerating strategies");
  c_filter->add_option("--eval-cap", fopts.eval_cap, "algebra evaluation cap");
  c_filter->add_flag("--explicit-witness", fopts.explicit_witness,
                     "spell out definability witnesses as formulas");
  sinks.add_to(c_filter);

  CLI::App* c_fuse = app.add_subcommand("fuse-filter",
                                        "filter through per-modality logics");
  c_fuse->add_option("model", model_path, "model file")->required();
  c_fuse->add_option("--gamma", gamma_path, "formula file, one per line")->required();
  c_fuse->add_option("--logics", logics_text, "assignments a:K5,b:S4[:strategy]")
      ->required();
  c_fuse->add_flag("--trace", trace, "include per-stage models in the report");
  c_fuse->add_option("--search-bound", fopts.search_bound,
                     "max free relation pairs for enumerating strategies");
  c_fuse->add_option("--eval-cap", fopts.eval_cap, "algebra evaluation cap");
  c_fuse->add_flag("--explicit-witness", fopts.explicit_witness,
                   "spell out definability witnesses as formulas");
  sinks.add_to(c_fuse);

  CLI::App* c_check = app.add_subcommand("check-filtration",
                                         "verify a claimed filtration");
  c_check->add_option("model", model_path, "source model file")->required();
  c_check->add_option("quotient", quotient_path, "quotient model file")->required();
  c_check->add_option("map", map_path, "state-to-block map file (or a certificate)")
      ->required();
  c_check->add_option("--gamma", gamma_path, "formula file, one per line")->required();

  CLI::App* c_sat = app.add_subcommand("sat", "bounded satisfiability search");
  c_sat->add_option("formula", formula_text, "formula text")->required();
  c_sat->add_option("--logics", logics_text, "assignments a:K5,b:S4")->required();
  c_sat->add_option("--max-states", max_states, "largest state count to try")
      ->required();
  c_sat->add_option("--budget", sopts.budget, "enumeration budget");
  c_sat->add_flag("--prune", sopts.isomorphism_pruning,
                  "skip frames that relabel to an earlier one");

  CLI::App* c_valid = app.add_subcommand("valid", "bounded countermodel search");
  c_valid->add_option("formula", formula_text, "formula text")->required();
  c_valid->add_option("--logics", logics_text, "assignments a:K5,b:S4")->required();
  c_valid->add_option("--max-states", max_states, "largest state count to try")
      ->required();
  c_valid->add_option("--budget", sopts.budget, "enumeration budget");
  c_valid->add_flag("--prune", sopts.isomorphism_pruning,
                    "skip frames that relabel to an earlier one");

  CLI::App* c_algebra = app.add_subcommand("algebra",
                                           "validate axioms over definable sets");
  c_algebra->add_option("model", model_path, "model file")->required();
  c_algebra->add_option("--axioms", axioms_path, "formula file, one per line")
      ->required();
  c_algebra->add_option("--cap", cap, "evaluation cap");

  CLI::App* c_bisim = app.add_subcommand("bisim", "coarsest bisimulation blocks");
  c_bisim->add_option("model", model_path, "model file")->required();
  c_bisim->add_option("--vars", vars_text, "variables to respect, e.g. p0,p1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return fail(2, "usage", e.what());
  }

  try {
    if (*c_eval) return run_eval(model_path, formula_text);
    if (*c_filter)
      return run_filter(model_path, gamma_path, logic_name, strategy, fopts, sinks);
    if (*c_fuse)
      return run_fuse_filter(model_path, gamma_path, logics_text, trace, fopts, sinks);
    if (*c_check) return run_check(model_path, quotient_path, map_path, gamma_path);
    if (*c_sat) return run_search(formula_text, logics_text, max_states, sopts, false);
    if (*c_valid) return run_search(formula_text, logics_text, max_states, sopts, true);
    if (*c_algebra) return run_algebra(model_path, axioms_path, cap);
    if (*c_bisim) return run_bisim(model_path, vars_text);
    return fail(2, "usage", "no command given");
  } catch (const cpdl::ParseError& e) {
    json extra;
    extra["offset"] = e.offset;
    return fail(2, "parse", e.what(), extra);
  } catch (const cpdl::FormatError& e) {
    return fail(2, "format", e.what());
  } catch (const cpdl::PreconditionError& e) {
    return fail(2, "precondition", e.what());
  } catch (const cpdl::StrategyFailed& e) {
    json extra;
    extra["candidates"] = e.candidates;
    return fail(1, "strategy", e.what(), extra);
  } catch (const cpdl::LimitExceeded& e) {
    json extra;
    extra["limit"] = e.limit;
    extra["needed"] = e.needed;
    return fail(3, "budget", e.what(), extra);
  } catch (const std::exception& e) {
    return fail(2, "internal", e.what());
  }
}
