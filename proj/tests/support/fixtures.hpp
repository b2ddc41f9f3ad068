#pragma once

#include "apdep/apdep.hpp"

namespace apdep::testing {

// y = x^2 apart from the last row; z = 0 apart from the third.
inline MultiTeam squares() {
  MultiTeam m(seq({"x", "y", "z"}));
  m.add({2, 4, 0});
  m.add({5, 25, 0});
  m.add({3, 9, 1});
  m.add({2, 3, 0});
  return m;
}

inline MultiTeam salaries() {
  MultiTeam m(seq({"Employee", "Department", "Salary"}));
  m.add({"John", "I", 120000});
  m.add({"Mary", "II", 130000});
  m.add({"Ann", "I", 120000});
  m.add({"Paul", "I", 120000});
  m.add({"Matt", "II", 130000});
  m.add({"Julia", "I", 130000});
  return m;
}

// The three-row team whose set restriction to {x, y} loses a row.
inline Team three_rows() {
  Team t(seq({"x", "y", "z"}));
  t.insert({0, 0, 0});
  t.insert({0, 0, 1});
  t.insert({0, 1, 1});
  return t;
}

inline Atom atom(const char* text) { return parse_atom(text); }

}  // namespace apdep::testing
