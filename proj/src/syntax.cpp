#include "cpdl/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace cpdl {

// ---------------------------------------------------------------- programs

struct Program::Node {
  Kind kind;
  std::string name;
  std::shared_ptr<const Node> a, b;
  std::size_t hash;
  int size;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

std::shared_ptr<const Program::Node> make_prog_node(Program::Kind k, std::string name,
                                                    std::shared_ptr<const Program::Node> a,
                                                    std::shared_ptr<const Program::Node> b) {
  auto n = std::make_shared<Program::Node>();
  n->kind = k;
  n->name = std::move(name);
  n->a = std::move(a);
  n->b = std::move(b);
  std::size_t h = mix(0, static_cast<std::size_t>(k));
  h = mix(h, std::hash<std::string>()(n->name));
  if (n->a) h = mix(h, n->a->hash);
  if (n->b) h = mix(h, n->b->hash);
  n->hash = h;
  n->size = 1 + (n->a ? n->a->size : 0) + (n->b ? n->b->size : 0);
  return n;
}

}  // namespace

Program Program::atom(std::string name) {
  return Program(make_prog_node(Kind::Atom, std::move(name), nullptr, nullptr));
}
Program Program::unite(Program a, Program b) {
  return Program(make_prog_node(Kind::Union, "", a.node_, b.node_));
}
Program Program::compose(Program a, Program b) {
  return Program(make_prog_node(Kind::Comp, "", a.node_, b.node_));
}
Program Program::plus(Program a) {
  return Program(make_prog_node(Kind::Plus, "", a.node_, nullptr));
}
Program Program::converse(Program a) {
  return Program(make_prog_node(Kind::Converse, "", a.node_, nullptr));
}

Program::Kind Program::kind() const { return node_->kind; }
const std::string& Program::name() const { return node_->name; }
Program Program::left() const { return Program(node_->a); }
Program Program::right() const { return Program(node_->b); }
Program Program::child() const { return Program(node_->a); }
std::size_t Program::hash() const { return node_->hash; }
int Program::node_count() const { return node_->size; }

bool Program::operator==(const Program& o) const {
  if (node_ == o.node_) return true;
  if (node_->hash != o.node_->hash) return false;
  return compare(*this, o) == 0;
}

int Program::compare(const Program& a, const Program& b) {
  if (a.node_ == b.node_) return 0;
  if (a.node_->kind != b.node_->kind)
    return a.node_->kind < b.node_->kind ? -1 : 1;
  switch (a.node_->kind) {
    case Kind::Atom: {
      int c = a.node_->name.compare(b.node_->name);
      return c < 0 ? -1 : c > 0 ? 1 : 0;
    }
    case Kind::Union:
    case Kind::Comp: {
      int c = compare(a.left(), b.left());
      return c ? c : compare(a.right(), b.right());
    }
    case Kind::Plus:
    case Kind::Converse:
      return compare(a.child(), b.child());
  }
  return 0;
}

void Program::collect_atoms(std::set<std::string>& out) const {
  switch (kind()) {
    case Kind::Atom: out.insert(name()); break;
    case Kind::Union:
    case Kind::Comp:
      left().collect_atoms(out);
      right().collect_atoms(out);
      break;
    case Kind::Plus:
    case Kind::Converse: child().collect_atoms(out); break;
  }
}

// ---------------------------------------------------------------- formulas

struct Formula::Node {
  Kind kind;
  int var = -1;
  std::shared_ptr<const Node> a, b;
  std::shared_ptr<const Program> prog;
  std::size_t hash;
  int size;
};

namespace {

std::shared_ptr<const Formula::Node> make_fm_node(Formula::Kind k, int var,
                                                  std::shared_ptr<const Formula::Node> a,
                                                  std::shared_ptr<const Formula::Node> b,
                                                  std::shared_ptr<const Program> prog) {
  auto n = std::make_shared<Formula::Node>();
  n->kind = k;
  n->var = var;
  n->a = std::move(a);
  n->b = std::move(b);
  n->prog = std::move(prog);
  std::size_t h = mix(1, static_cast<std::size_t>(k));
  h = mix(h, std::hash<int>()(var));
  if (n->a) h = mix(h, n->a->hash);
  if (n->b) h = mix(h, n->b->hash);
  if (n->prog) h = mix(h, n->prog->hash());
  n->hash = h;
  n->size = 1 + (n->a ? n->a->size : 0) + (n->b ? n->b->size : 0) +
            (n->prog ? n->prog->node_count() : 0);
  return n;
}

}  // namespace

Formula Formula::bot() {
  static const Formula b(make_fm_node(Kind::Bot, -1, nullptr, nullptr, nullptr));
  return b;
}
Formula Formula::var(int index) {
  if (index < 0) throw Error("negative variable index");
  return Formula(make_fm_node(Kind::Var, index, nullptr, nullptr, nullptr));
}
Formula Formula::imp(Formula a, Formula b) {
  return Formula(make_fm_node(Kind::Imp, -1, a.node_, b.node_, nullptr));
}
Formula Formula::diamond(Program e, Formula a) {
  return Formula(make_fm_node(Kind::Diamond, -1, a.node_, nullptr,
                              std::make_shared<Program>(std::move(e))));
}

Formula::Kind Formula::kind() const { return node_->kind; }
int Formula::var_index() const { return node_->var; }
Formula Formula::lhs() const { return Formula(node_->a); }
Formula Formula::rhs() const { return Formula(node_->b); }
const Program& Formula::program() const { return *node_->prog; }
Formula Formula::operand() const { return Formula(node_->a); }
std::size_t Formula::hash() const { return node_->hash; }
int Formula::node_count() const { return node_->size; }

bool Formula::operator==(const Formula& o) const {
  if (node_ == o.node_) return true;
  if (node_->hash != o.node_->hash) return false;
  return compare(*this, o) == 0;
}

int Formula::compare(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return 0;
  if (a.node_->kind != b.node_->kind)
    return a.node_->kind < b.node_->kind ? -1 : 1;
  switch (a.node_->kind) {
    case Kind::Bot: return 0;
    case Kind::Var:
      return a.node_->var < b.node_->var ? -1 : a.node_->var > b.node_->var ? 1 : 0;
    case Kind::Imp: {
      int c = compare(a.lhs(), b.lhs());
      return c ? c : compare(a.rhs(), b.rhs());
    }
    case Kind::Diamond: {
      int c = Program::compare(a.program(), b.program());
      return c ? c : compare(a.operand(), b.operand());
    }
  }
  return 0;
}

void Formula::collect_vars(std::set<int>& out) const {
  switch (kind()) {
    case Kind::Bot: break;
    case Kind::Var: out.insert(var_index()); break;
    case Kind::Imp:
      lhs().collect_vars(out);
      rhs().collect_vars(out);
      break;
    case Kind::Diamond: operand().collect_vars(out); break;
  }
}

void Formula::collect_atoms(std::set<std::string>& out) const {
  switch (kind()) {
    case Kind::Bot:
    case Kind::Var: break;
    case Kind::Imp:
      lhs().collect_atoms(out);
      rhs().collect_atoms(out);
      break;
    case Kind::Diamond:
      program().collect_atoms(out);
      operand().collect_atoms(out);
      break;
  }
}

std::set<int> Formula::vars() const {
  std::set<int> s;
  collect_vars(s);
  return s;
}

bool Formula::atomic_programs() const {
  switch (kind()) {
    case Kind::Bot:
    case Kind::Var: return true;
    case Kind::Imp: return lhs().atomic_programs() && rhs().atomic_programs();
    case Kind::Diamond:
      return program().kind() == Program::Kind::Atom && operand().atomic_programs();
  }
  return true;
}

// ------------------------------------------------------------- formula sets

FormulaSet::FormulaSet(std::initializer_list<Formula> fs) {
  for (const auto& f : fs) insert(f);
}

bool FormulaSet::insert(const Formula& f) {
  auto it = std::lower_bound(items_.begin(), items_.end(), f);
  if (it != items_.end() && *it == f) return false;
  items_.insert(it, f);
  return true;
}

bool FormulaSet::contains(const Formula& f) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), f);
  return it != items_.end() && *it == f;
}

void FormulaSet::merge(const FormulaSet& o) {
  for (const auto& f : o) insert(f);
}

std::set<int> FormulaSet::vars() const {
  std::set<int> s;
  for (const auto& f : items_) f.collect_vars(s);
  return s;
}

std::set<std::string> FormulaSet::atoms() const {
  std::set<std::string> s;
  for (const auto& f : items_) f.collect_atoms(s);
  return s;
}

bool FormulaSet::is_sub_closed() const {
  for (const auto& f : items_) {
    switch (f.kind()) {
      case Formula::Kind::Bot:
      case Formula::Kind::Var: break;
      case Formula::Kind::Imp:
        if (!contains(f.lhs()) || !contains(f.rhs())) return false;
        break;
      case Formula::Kind::Diamond:
        if (!contains(f.operand())) return false;
        break;
    }
  }
  return true;
}

namespace {

void add_subformulas(const Formula& f, FormulaSet& out) {
  if (!out.insert(f)) return;
  switch (f.kind()) {
    case Formula::Kind::Bot:
    case Formula::Kind::Var: break;
    case Formula::Kind::Imp:
      add_subformulas(f.lhs(), out);
      add_subformulas(f.rhs(), out);
      break;
    case Formula::Kind::Diamond: add_subformulas(f.operand(), out); break;
  }
}

}  // namespace

FormulaSet sub_closure(const Formula& f) {
  FormulaSet s;
  add_subformulas(f, s);
  return s;
}

FormulaSet sub_closure(const FormulaSet& fs) {
  FormulaSet s;
  for (const auto& f : fs) add_subformulas(f, s);
  return s;
}

Formula substitute(const Formula& f, const std::map<int, Formula>& sigma) {
  switch (f.kind()) {
    case Formula::Kind::Bot: return f;
    case Formula::Kind::Var: {
      auto it = sigma.find(f.var_index());
      return it == sigma.end() ? f : it->second;
    }
    case Formula::Kind::Imp:
      return Formula::imp(substitute(f.lhs(), sigma), substitute(f.rhs(), sigma));
    case Formula::Kind::Diamond:
      return Formula::diamond(f.program(), substitute(f.operand(), sigma));
  }
  throw Error("unreachable");
}

Program shift_alphabet(const Program& e, const std::map<std::string, std::string>& rho) {
  switch (e.kind()) {
    case Program::Kind::Atom: {
      auto it = rho.find(e.name());
      if (it == rho.end()) throw Error("atom '" + e.name() + "' missing from renaming");
      return Program::atom(it->second);
    }
    case Program::Kind::Union:
      return Program::unite(shift_alphabet(e.left(), rho), shift_alphabet(e.right(), rho));
    case Program::Kind::Comp:
      return Program::compose(shift_alphabet(e.left(), rho), shift_alphabet(e.right(), rho));
    case Program::Kind::Plus: return Program::plus(shift_alphabet(e.child(), rho));
    case Program::Kind::Converse: return Program::converse(shift_alphabet(e.child(), rho));
  }
  throw Error("unreachable");
}

Formula shift_alphabet(const Formula& f, const std::map<std::string, std::string>& rho) {
  std::set<std::string> used;
  f.collect_atoms(used);
  std::set<std::string> images;
  for (const auto& a : used) {
    auto it = rho.find(a);
    if (it == rho.end()) throw Error("atom '" + a + "' missing from renaming");
    if (!images.insert(it->second).second)
      throw Error("renaming not injective on atoms of the formula");
  }
  switch (f.kind()) {
    case Formula::Kind::Bot:
    case Formula::Kind::Var: return f;
    case Formula::Kind::Imp:
      return Formula::imp(shift_alphabet(f.lhs(), rho), shift_alphabet(f.rhs(), rho));
    case Formula::Kind::Diamond:
      return Formula::diamond(shift_alphabet(f.program(), rho),
                              shift_alphabet(f.operand(), rho));
  }
  throw Error("unreachable");
}

// ------------------------------------------------------------------ lexing

bool is_var_shaped(std::string_view name) {
  if (name.size() < 2 || name[0] != 'p') return false;
  for (std::size_t i = 1; i < name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
  return true;
}

bool is_modality_name(std::string_view name) {
  if (name.empty() || !std::islower(static_cast<unsigned char>(name[0]))) return false;
  for (char c : name)
    if (!std::islower(static_cast<unsigned char>(c)) &&
        !std::isdigit(static_cast<unsigned char>(c)) && c != '_')
      return false;
  return !is_var_shaped(name);
}

namespace {

enum class Tok {
  End, False, True, Var, Name, Not, And, Or, Arrow,
  LAngle, RAngle, LBracket, RBracket, LParen, RParen,
  Semi, CaretPlus, CaretMinus
};

struct Lexer {
  std::string_view text;
  std::size_t pos = 0;
  Tok tok = Tok::End;
  std::size_t tok_pos = 0;
  std::string ident;  // Name / Var spelling
  int var = -1;

  explicit Lexer(std::string_view t) : text(t) { next(); }

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, at);
  }

  void next() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    tok_pos = pos;
    if (pos >= text.size()) {
      tok = Tok::End;
      return;
    }
    char c = text[pos];
    if (std::islower(static_cast<unsigned char>(c))) {
      std::size_t start = pos;
      while (pos < text.size() &&
             (std::islower(static_cast<unsigned char>(text[pos])) ||
              std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
        ++pos;
      ident = std::string(text.substr(start, pos - start));
      if (ident == "false") {
        tok = Tok::False;
      } else if (ident == "true") {
        tok = Tok::True;
      } else if (is_var_shaped(ident)) {
        tok = Tok::Var;
        var = std::stoi(ident.substr(1));
      } else {
        tok = Tok::Name;
      }
      return;
    }
    ++pos;
    switch (c) {
      case '!': tok = Tok::Not; return;
      case '&': tok = Tok::And; return;
      case '|': tok = Tok::Or; return;
      case '<': tok = Tok::LAngle; return;
      case '>': tok = Tok::RAngle; return;
      case '[': tok = Tok::LBracket; return;
      case ']': tok = Tok::RBracket; return;
      case '(': tok = Tok::LParen; return;
      case ')': tok = Tok::RParen; return;
      case ';': tok = Tok::Semi; return;
      case '-':
        if (pos < text.size() && text[pos] == '>') {
          ++pos;
          tok = Tok::Arrow;
          return;
        }
        fail("expected '->'", tok_pos);
      case '^':
        if (pos < text.size() && text[pos] == '+') {
          ++pos;
          tok = Tok::CaretPlus;
          return;
        }
        if (pos < text.size() && text[pos] == '-') {
          ++pos;
          tok = Tok::CaretMinus;
          return;
        }
        fail("expected '^+' or '^-'", tok_pos);
      default: fail(std::string("unexpected character '") + c + "'", tok_pos);
    }
  }

  void expect(Tok t, const char* what) {
    if (tok != t) fail(std::string("expected ") + what, tok_pos);
    next();
  }
};

struct Parser {
  Lexer lx;
  const std::vector<std::string>& alphabet;

  Parser(std::string_view text, const std::vector<std::string>& alpha)
      : lx(text), alphabet(alpha) {}

  bool known_atom(const std::string& name) const {
    return std::find(alphabet.begin(), alphabet.end(), name) != alphabet.end();
  }

  Program prog_primary() {
    if (lx.tok == Tok::Name) {
      std::string name = lx.ident;
      if (!known_atom(name))
        lx.fail("unknown modality name '" + name + "'", lx.tok_pos);
      lx.next();
      return Program::atom(name);
    }
    if (lx.tok == Tok::LParen) {
      lx.next();
      Program e = prog();
      lx.expect(Tok::RParen, "')'");
      return e;
    }
    lx.fail("expected program", lx.tok_pos);
  }

  Program prog_postfix() {
    Program e = prog_primary();
    for (;;) {
      if (lx.tok == Tok::CaretPlus) {
        lx.next();
        e = Program::plus(e);
      } else if (lx.tok == Tok::CaretMinus) {
        lx.next();
        e = Program::converse(e);
      } else {
        return e;
      }
    }
  }

  Program prog_seq() {
    Program e = prog_postfix();
    while (lx.tok == Tok::Semi) {
      lx.next();
      e = Program::compose(e, prog_postfix());
    }
    return e;
  }

  Program prog() {
    Program e = prog_seq();
    while (lx.tok == Tok::Or) {
      lx.next();
      e = Program::unite(e, prog_seq());
    }
    return e;
  }

  Formula unary() {
    switch (lx.tok) {
      case Tok::Not: {
        lx.next();
        return Formula::neg(unary());
      }
      case Tok::LAngle: {
        lx.next();
        Program e = prog();
        lx.expect(Tok::RAngle, "'>'");
        return Formula::diamond(std::move(e), unary());
      }
      case Tok::LBracket: {
        lx.next();
        Program e = prog();
        lx.expect(Tok::RBracket, "']'");
        return Formula::box(std::move(e), unary());
      }
      case Tok::False: lx.next(); return Formula::bot();
      case Tok::True: lx.next(); return Formula::top();
      case Tok::Var: {
        int v = lx.var;
        lx.next();
        return Formula::var(v);
      }
      case Tok::LParen: {
        lx.next();
        Formula f = formula();
        lx.expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Name:
        lx.fail("unexpected name '" + lx.ident + "' (variables are p0, p1, ...)",
                lx.tok_pos);
      default: lx.fail("expected formula", lx.tok_pos);
    }
  }

  Formula conjunction() {
    Formula f = unary();
    while (lx.tok == Tok::And) {
      lx.next();
      f = Formula::conj(f, unary());
    }
    return f;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (lx.tok == Tok::Or) {
      lx.next();
      f = Formula::disj(f, conjunction());
    }
    return f;
  }

  Formula formula() {
    Formula f = disjunction();
    if (lx.tok == Tok::Arrow) {
      lx.next();
      return Formula::imp(f, formula());
    }
    return f;
  }
};

}  // namespace

Formula parse_formula(std::string_view text, const std::vector<std::string>& alphabet) {
  Parser p(text, alphabet);
  Formula f = p.formula();
  if (p.lx.tok != Tok::End) p.lx.fail("trailing input", p.lx.tok_pos);
  return f;
}

Program parse_program(std::string_view text, const std::vector<std::string>& alphabet) {
  Parser p(text, alphabet);
  Program e = p.prog();
  if (p.lx.tok != Tok::End) p.lx.fail("trailing input", p.lx.tok_pos);
  return e;
}

// ---------------------------------------------------------------- printing

namespace {

// binding tiers, loosest first
enum PLvl { kImp = 0, kOr = 1, kAnd = 2, kUnary = 3 };
enum GLvl { gUnion = 0, gSeq = 1, gPost = 2 };

void print_prog(std::ostringstream& os, const Program& e, int lvl) {
  switch (e.kind()) {
    case Program::Kind::Atom: os << e.name(); return;
    case Program::Kind::Union: {
      if (lvl > gUnion) os << '(';
      print_prog(os, e.left(), gUnion);
      os << '|';
      print_prog(os, e.right(), gSeq);
      if (lvl > gUnion) os << ')';
      return;
    }
    case Program::Kind::Comp: {
      if (lvl > gSeq) os << '(';
      print_prog(os, e.left(), gSeq);
      os << ';';
      print_prog(os, e.right(), gPost);
      if (lvl > gSeq) os << ')';
      return;
    }
    case Program::Kind::Plus:
      print_prog(os, e.child(), gPost);
      os << "^+";
      return;
    case Program::Kind::Converse:
      print_prog(os, e.child(), gPost);
      os << "^-";
      return;
  }
}

bool is_bot(const Formula& f) { return f.kind() == Formula::Kind::Bot; }

// shape tests against derived-connective expansions
bool is_neg(const Formula& f) {
  return f.kind() == Formula::Kind::Imp && is_bot(f.rhs());
}
bool is_top(const Formula& f) { return is_neg(f) && is_bot(f.lhs()); }
bool is_conj(const Formula& f) {
  return is_neg(f) && f.lhs().kind() == Formula::Kind::Imp && is_neg(f.lhs().rhs());
}
bool is_box(const Formula& f) {
  return is_neg(f) && f.lhs().kind() == Formula::Kind::Diamond && is_neg(f.lhs().operand());
}
bool is_disj(const Formula& f) {
  return f.kind() == Formula::Kind::Imp && !is_bot(f.rhs()) && is_neg(f.lhs());
}

void print_fm(std::ostringstream& os, const Formula& f, int lvl) {
  switch (f.kind()) {
    case Formula::Kind::Bot: os << "false"; return;
    case Formula::Kind::Var: os << 'p' << f.var_index(); return;
    case Formula::Kind::Diamond: {
      os << '<';
      print_prog(os, f.program(), gUnion);
      os << '>';
      print_fm(os, f.operand(), kUnary);
      return;
    }
    case Formula::Kind::Imp: break;
  }
  if (is_top(f)) {
    os << "true";
    return;
  }
  if (is_box(f)) {
    os << '[';
    print_prog(os, f.lhs().program(), gUnion);
    os << ']';
    print_fm(os, f.lhs().operand().lhs(), kUnary);
    return;
  }
  if (is_conj(f)) {
    if (lvl > kAnd) os << '(';
    print_fm(os, f.lhs().lhs(), kAnd);
    os << " & ";
    print_fm(os, f.lhs().rhs().lhs(), kUnary);
    if (lvl > kAnd) os << ')';
    return;
  }
  if (is_neg(f)) {
    os << '!';
    print_fm(os, f.lhs(), kUnary);
    return;
  }
  if (is_disj(f)) {
    if (lvl > kOr) os << '(';
    print_fm(os, f.lhs().lhs(), kOr);
    os << " | ";
    print_fm(os, f.rhs(), kAnd);
    if (lvl > kOr) os << ')';
    return;
  }
  if (lvl > kImp) os << '(';
  print_fm(os, f.lhs(), kOr);
  os << " -> ";
  print_fm(os, f.rhs(), kImp);
  if (lvl > kImp) os << ')';
}

}  // namespace

std::string to_string(const Formula& f) {
  std::ostringstream os;
  print_fm(os, f, kImp);
  return os.str();
}

std::string to_string(const Program& e) {
  std::ostringstream os;
  print_prog(os, e, gUnion);
  return os.str();
}

}  // namespace cpdl
