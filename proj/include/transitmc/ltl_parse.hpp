#pragma once

#include <string>

#include "transitmc/ltl.hpp"

namespace transitmc {

// Grammar (ASCII spellings, Unicode aliases in parentheses):
//
//   imp    := or ('->' imp)?                          (→)
//   or     := and ('||' and)*                         (∨)
//   and    := temp ('&&' temp)*                       (∧)
//   temp   := unary (('U'|'W'|'R') temp)?
//   unary  := ('!'|'X'|'G'|'F'|'A') unary | primary   (¬ ◯ □ ◊/◇)
//   primary:= 'true' | 'false' | atom | '(' imp ')'
//
// Atoms are identifiers [A-Za-z_][A-Za-z0-9_.]*; an atom may absorb a
// parenthesized identifier suffix with no intervening space (`x.fwd(y)`),
// and `(a,b)` names a transition of that spelling.
FormulaId parse_flow_ltl(FormulaArena& arena, const std::string& text);

// Minimal parentheses; parse(render(f)) is structurally f.
std::string render(const FormulaArena& arena, FormulaId f);

}  // namespace transitmc
