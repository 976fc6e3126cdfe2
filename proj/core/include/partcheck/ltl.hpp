#pragma once

#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace partcheck::ltl {

enum class Op {
  kTrue,
  kFalse,
  kAtom,
  kNot,
  kAnd,
  kOr,
  kImply,
  kNext,
  kUntil,
  kEventually,
  kAlways,
  kRelease  // internal: negation-normal-form dual of Until
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Op op = Op::kTrue;
  std::string atom;      // kAtom only
  FormulaPtr lhs, rhs;   // unary operators use lhs

  static FormulaPtr make_true();
  static FormulaPtr make_false();
  static FormulaPtr make_atom(std::string name);
  static FormulaPtr make_unary(Op op, FormulaPtr sub);
  static FormulaPtr make_binary(Op op, FormulaPtr lhs, FormulaPtr rhs);
};

std::string to_string(const FormulaPtr& f);

// Parses the ASCII grammar (atoms, !, X, F, G, U, &, |, ->, parentheses,
// true/false; Unicode box/diamond accepted for G/F). Precedence
// unary > U > & > | > ->, with U and -> right-associative. Every atom must
// appear in declared_atoms.
FormulaPtr parse(std::string_view text, std::span<const std::string> declared_atoms);

// Rewrites F, G and -> away (F p = true U p, G p = !(true U !p)), leaving
// {true,false,atom,!,&,|,X,U}.
FormulaPtr normalize(const FormulaPtr& f);

// Negation normal form over {true,false,literal,&,|,X,U,R}; set `negated`
// to translate the complement.
FormulaPtr nnf(const FormulaPtr& f, bool negated = false);

FormulaPtr negate(const FormulaPtr& f);

using LabelSet = std::set<std::string>;

// Ultimately periodic word prefix . cycle^omega.
struct LassoWord {
  std::vector<LabelSet> prefix;
  std::vector<LabelSet> cycle;  // nonempty
};

// Exact LTL semantics on a lasso word (memoized over the prefix+cycle
// positions, untils resolved by walking the position orbit).
bool word_satisfies(const LassoWord& word, const FormulaPtr& f);

}  // namespace partcheck::ltl
