#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cpdl/errors.hpp"

namespace cpdl {

// Programs over atomic modality names: atoms, union, composition,
// transitive closure (plus), converse.
class Program {
 public:
  enum class Kind { Atom, Union, Comp, Plus, Converse };

  static Program atom(std::string name);
  static Program unite(Program a, Program b);
  static Program compose(Program a, Program b);
  static Program plus(Program a);
  static Program converse(Program a);

  Kind kind() const;
  const std::string& name() const;  // Atom only
  Program left() const;             // Union/Comp
  Program right() const;            // Union/Comp
  Program child() const;            // Plus/Converse

  std::size_t hash() const;
  bool operator==(const Program& o) const;
  bool operator!=(const Program& o) const { return !(*this == o); }

  // total structural order; used wherever determinism matters
  static int compare(const Program& a, const Program& b);
  bool operator<(const Program& o) const { return compare(*this, o) < 0; }

  void collect_atoms(std::set<std::string>& out) const;
  int node_count() const;

  struct Node;  // opaque

 private:
  explicit Program(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Formulas in the core grammar: falsum, variables, implication, diamond.
// Derived connectives are construction sugar that expands immediately.
class Formula {
 public:
  enum class Kind { Bot, Var, Imp, Diamond };

  static Formula bot();
  static Formula var(int index);
  static Formula imp(Formula a, Formula b);
  static Formula diamond(Program e, Formula a);

  static Formula top() { return imp(bot(), bot()); }
  static Formula neg(Formula a) { return imp(std::move(a), bot()); }
  static Formula conj(Formula a, Formula b) {
    return neg(imp(std::move(a), neg(std::move(b))));
  }
  static Formula disj(Formula a, Formula b) {
    return imp(neg(std::move(a)), std::move(b));
  }
  static Formula box(Program e, Formula a) {
    return neg(diamond(std::move(e), neg(std::move(a))));
  }
  static Formula iff(Formula a, Formula b) {
    Formula fwd = imp(a, b);
    return conj(std::move(fwd), imp(std::move(b), std::move(a)));
  }

  Kind kind() const;
  int var_index() const;           // Var only
  Formula lhs() const;             // Imp
  Formula rhs() const;             // Imp
  const Program& program() const;  // Diamond
  Formula operand() const;         // Diamond

  std::size_t hash() const;
  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }

  static int compare(const Formula& a, const Formula& b);
  bool operator<(const Formula& o) const { return compare(*this, o) < 0; }

  void collect_vars(std::set<int>& out) const;
  void collect_atoms(std::set<std::string>& out) const;
  std::set<int> vars() const;
  int node_count() const;

  // true when every program in the formula is a bare atom
  bool atomic_programs() const;

  struct Node;  // opaque

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Finite formula set with deterministic (structural) iteration order.
class FormulaSet {
 public:
  FormulaSet() = default;
  FormulaSet(std::initializer_list<Formula> fs);

  bool insert(const Formula& f);  // false if already present
  bool contains(const Formula& f) const;
  void merge(const FormulaSet& o);

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const Formula& operator[](std::size_t i) const { return items_[i]; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  bool operator==(const FormulaSet& o) const { return items_ == o.items_; }

  std::set<int> vars() const;
  std::set<std::string> atoms() const;
  bool is_sub_closed() const;

 private:
  std::vector<Formula> items_;  // sorted, unique
};

// Subformulas, the formula itself included. Programs contribute none.
FormulaSet sub_closure(const Formula& f);
FormulaSet sub_closure(const FormulaSet& fs);

// Simultaneous substitution of formulas for variables.
Formula substitute(const Formula& f, const std::map<int, Formula>& sigma);

// Rename atomic modalities. Every atom occurring must be mapped and the
// renaming must be injective on those atoms.
Program shift_alphabet(const Program& e, const std::map<std::string, std::string>& rho);
Formula shift_alphabet(const Formula& f, const std::map<std::string, std::string>& rho);

// Concrete text syntax. parse_formula checks program atoms against the
// alphabet; printing emits derived connectives where the core tree matches
// their expansion, and round-trips: parse(print(f)) == f.
Formula parse_formula(std::string_view text, const std::vector<std::string>& alphabet);
Program parse_program(std::string_view text, const std::vector<std::string>& alphabet);
std::string to_string(const Formula& f);
std::string to_string(const Program& e);

// "p<digits>" shape test; such names are reserved for variables and are not
// legal modality names.
bool is_var_shaped(std::string_view name);
bool is_modality_name(std::string_view name);

}  // namespace cpdl
