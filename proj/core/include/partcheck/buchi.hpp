#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "partcheck/ltl.hpp"

namespace partcheck::ltl {

// Nondeterministic Buchi automaton with transitions guarded by conjunctions
// of literals over the formula's atoms (bitmasks into `atoms`). State 0 is
// the initial state; it has no incoming transitions.
struct BuchiAutomaton {
  std::vector<std::string> atoms;

  struct Transition {
    int target = 0;
    std::uint32_t must_true = 0;
    std::uint32_t must_false = 0;

    bool enabled(std::uint32_t letter) const {
      return (letter & must_true) == must_true && (letter & must_false) == 0;
    }
  };

  std::vector<std::vector<Transition>> delta;  // per state
  std::vector<char> accepting;                 // per state
  int initial = 0;

  int state_count() const { return static_cast<int>(delta.size()); }
  std::uint32_t letter_of(const LabelSet& labels) const;
  std::uint32_t letter_of(const std::vector<std::string>& labels) const;
};

// Tableau translation (node expansion over the negation normal form,
// generalized acceptance per until, degeneralized with a counter). The
// language is exactly the set of models of f.
BuchiAutomaton to_buchi(const FormulaPtr& f);

// Does the automaton accept the lasso word? Decided exactly on the product
// of the automaton with the word's position graph.
bool accepts_lasso(const BuchiAutomaton& a, const LassoWord& word);

}  // namespace partcheck::ltl
