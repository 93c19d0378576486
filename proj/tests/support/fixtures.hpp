#pragma once

#include "cpdl/kripke.hpp"

namespace fixtures {

// Five-state single-modality model: x->y, y'->z, z->u, with p0 = {x},
// p1 = {y, y'}, p2 = {u}. The running example for filtration edge cases.
inline cpdl::Model e1() {
  cpdl::Model m;
  m.states = {"x", "y", "yp", "z", "u"};
  cpdl::Relation a(5);
  a.add(0, 1);  // x -> y
  a.add(2, 3);  // yp -> z
  a.add(3, 4);  // z -> u
  m.relations["a"] = a;
  cpdl::Bits p0(5), p1(5), p2(5);
  p0.set(0);
  p1.set(1);
  p1.set(2);
  p2.set(4);
  m.valuation[0] = p0;
  m.valuation[1] = p1;
  m.valuation[2] = p2;
  return m;
}

inline cpdl::FormulaSet e1_gamma() {
  using cpdl::Formula;
  using cpdl::Program;
  cpdl::FormulaSet g;
  g.insert(Formula::var(0));
  g.insert(Formula::var(1));
  g.insert(Formula::var(2));
  g.insert(Formula::diamond(Program::atom("a"), Formula::var(2)));
  return g;
}

}  // namespace fixtures
