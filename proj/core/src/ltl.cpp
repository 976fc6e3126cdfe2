#include "partcheck/ltl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

#include "partcheck/errors.hpp"

namespace partcheck::ltl {

FormulaPtr Formula::make_true() {
  auto f = std::make_shared<Formula>();
  f->op = Op::kTrue;
  return f;
}

FormulaPtr Formula::make_false() {
  auto f = std::make_shared<Formula>();
  f->op = Op::kFalse;
  return f;
}

FormulaPtr Formula::make_atom(std::string name) {
  auto f = std::make_shared<Formula>();
  f->op = Op::kAtom;
  f->atom = std::move(name);
  return f;
}

FormulaPtr Formula::make_unary(Op op, FormulaPtr sub) {
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->lhs = std::move(sub);
  return f;
}

FormulaPtr Formula::make_binary(Op op, FormulaPtr lhs, FormulaPtr rhs) {
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->lhs = std::move(lhs);
  f->rhs = std::move(rhs);
  return f;
}

std::string to_string(const FormulaPtr& f) {
  switch (f->op) {
    case Op::kTrue:
      return "true";
    case Op::kFalse:
      return "false";
    case Op::kAtom:
      return f->atom;
    case Op::kNot:
      return "!(" + to_string(f->lhs) + ")";
    case Op::kNext:
      return "X (" + to_string(f->lhs) + ")";
    case Op::kEventually:
      return "F (" + to_string(f->lhs) + ")";
    case Op::kAlways:
      return "G (" + to_string(f->lhs) + ")";
    case Op::kAnd:
      return "(" + to_string(f->lhs) + " & " + to_string(f->rhs) + ")";
    case Op::kOr:
      return "(" + to_string(f->lhs) + " | " + to_string(f->rhs) + ")";
    case Op::kImply:
      return "(" + to_string(f->lhs) + " -> " + to_string(f->rhs) + ")";
    case Op::kUntil:
      return "(" + to_string(f->lhs) + " U " + to_string(f->rhs) + ")";
    case Op::kRelease:
      return "(" + to_string(f->lhs) + " R " + to_string(f->rhs) + ")";
  }
  return "?";
}

namespace {

struct Token {
  enum Kind { kAtom, kTrue, kFalse, kNot, kAnd, kOr, kImply, kNext, kFinally, kGlobally, kUntil,
              kLParen, kRParen, kEnd } kind;
  std::string text;
  std::size_t pos = 0;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(') {
      out.push_back({Token::kLParen, "(", i++});
      continue;
    }
    if (c == ')') {
      out.push_back({Token::kRParen, ")", i++});
      continue;
    }
    if (c == '!') {
      out.push_back({Token::kNot, "!", i++});
      continue;
    }
    if (c == '&') {
      out.push_back({Token::kAnd, "&", i++});
      continue;
    }
    if (c == '|') {
      out.push_back({Token::kOr, "|", i++});
      continue;
    }
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      out.push_back({Token::kImply, "->", i});
      i += 2;
      continue;
    }
    // Unicode box (always) and diamond (eventually).
    if (s.substr(i, 3) == "\xE2\x96\xA1") {
      out.push_back({Token::kGlobally, "G", i});
      i += 3;
      continue;
    }
    if (s.substr(i, 3) == "\xE2\x97\x87") {
      out.push_back({Token::kFinally, "F", i});
      i += 3;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
        ++i;
      }
      std::string word(s.substr(start, i - start));
      if (word == "true") {
        out.push_back({Token::kTrue, word, start});
      } else if (word == "false") {
        out.push_back({Token::kFalse, word, start});
      } else if (word == "X") {
        out.push_back({Token::kNext, word, start});
      } else if (word == "F") {
        out.push_back({Token::kFinally, word, start});
      } else if (word == "G") {
        out.push_back({Token::kGlobally, word, start});
      } else if (word == "U") {
        out.push_back({Token::kUntil, word, start});
      } else {
        out.push_back({Token::kAtom, word, start});
      }
      continue;
    }
    throw SyntaxError("unexpected character '" + std::string(1, c) + "'", i);
  }
  out.push_back({Token::kEnd, "", s.size()});
  return out;
}

class Parser {
public:
  Parser(std::vector<Token> tokens, std::span<const std::string> atoms)
      : tokens_(std::move(tokens)), atoms_(atoms) {}

  FormulaPtr parse() {
    FormulaPtr f = parse_imply();
    if (peek().kind != Token::kEnd) {
      throw SyntaxError("unexpected token '" + peek().text + "'", peek().pos);
    }
    return f;
  }

private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }
  bool accept(Token::Kind k) {
    if (peek().kind == k) {
      ++pos_;
      return true;
    }
    return false;
  }

  FormulaPtr parse_imply() {
    FormulaPtr lhs = parse_or();
    if (accept(Token::kImply)) {
      return Formula::make_binary(Op::kImply, std::move(lhs), parse_imply());
    }
    return lhs;
  }

  FormulaPtr parse_or() {
    FormulaPtr lhs = parse_and();
    while (accept(Token::kOr)) {
      lhs = Formula::make_binary(Op::kOr, std::move(lhs), parse_and());
    }
    return lhs;
  }

  FormulaPtr parse_and() {
    FormulaPtr lhs = parse_until();
    while (accept(Token::kAnd)) {
      lhs = Formula::make_binary(Op::kAnd, std::move(lhs), parse_until());
    }
    return lhs;
  }

  FormulaPtr parse_until() {
    FormulaPtr lhs = parse_unary();
    if (accept(Token::kUntil)) {
      return Formula::make_binary(Op::kUntil, std::move(lhs), parse_until());
    }
    return lhs;
  }

  FormulaPtr parse_unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::kNot:
        advance();
        return Formula::make_unary(Op::kNot, parse_unary());
      case Token::kNext:
        advance();
        return Formula::make_unary(Op::kNext, parse_unary());
      case Token::kFinally:
        advance();
        return Formula::make_unary(Op::kEventually, parse_unary());
      case Token::kGlobally:
        advance();
        return Formula::make_unary(Op::kAlways, parse_unary());
      default:
        return parse_primary();
    }
  }

  FormulaPtr parse_primary() {
    const Token& t = advance();
    switch (t.kind) {
      case Token::kTrue:
        return Formula::make_true();
      case Token::kFalse:
        return Formula::make_false();
      case Token::kAtom: {
        if (std::find(atoms_.begin(), atoms_.end(), t.text) == atoms_.end()) {
          throw SyntaxError("unbound atom name '" + t.text + "'", t.pos);
        }
        return Formula::make_atom(t.text);
      }
      case Token::kLParen: {
        FormulaPtr f = parse_imply();
        if (!accept(Token::kRParen)) {
          throw SyntaxError("expected ')'", peek().pos);
        }
        return f;
      }
      case Token::kEnd:
        throw SyntaxError("unexpected end of input", t.pos);
      default:
        throw SyntaxError("unexpected token '" + t.text + "'", t.pos);
    }
  }

  std::vector<Token> tokens_;
  std::span<const std::string> atoms_;
  std::size_t pos_ = 0;
};

}  // namespace

FormulaPtr parse(std::string_view text, std::span<const std::string> declared_atoms) {
  return Parser(lex(text), declared_atoms).parse();
}

FormulaPtr normalize(const FormulaPtr& f) {
  switch (f->op) {
    case Op::kTrue:
    case Op::kFalse:
    case Op::kAtom:
      return f;
    case Op::kNot:
      return Formula::make_unary(Op::kNot, normalize(f->lhs));
    case Op::kNext:
      return Formula::make_unary(Op::kNext, normalize(f->lhs));
    case Op::kEventually:
      return Formula::make_binary(Op::kUntil, Formula::make_true(), normalize(f->lhs));
    case Op::kAlways:
      // G p = !F !p = !(true U !p)
      return Formula::make_unary(
          Op::kNot, Formula::make_binary(Op::kUntil, Formula::make_true(),
                                         Formula::make_unary(Op::kNot, normalize(f->lhs))));
    case Op::kAnd:
    case Op::kOr:
    case Op::kUntil:
      return Formula::make_binary(f->op, normalize(f->lhs), normalize(f->rhs));
    case Op::kImply:
      return Formula::make_binary(Op::kOr, Formula::make_unary(Op::kNot, normalize(f->lhs)),
                                  normalize(f->rhs));
    case Op::kRelease:
      return Formula::make_binary(Op::kRelease, normalize(f->lhs), normalize(f->rhs));
  }
  throw std::logic_error("normalize: unhandled operator");
}

FormulaPtr nnf(const FormulaPtr& f, bool negated) {
  switch (f->op) {
    case Op::kTrue:
      return negated ? Formula::make_false() : Formula::make_true();
    case Op::kFalse:
      return negated ? Formula::make_true() : Formula::make_false();
    case Op::kAtom:
      return negated ? Formula::make_unary(Op::kNot, f) : f;
    case Op::kNot:
      return nnf(f->lhs, !negated);
    case Op::kNext:
      return Formula::make_unary(Op::kNext, nnf(f->lhs, negated));
    case Op::kEventually:
      return nnf(Formula::make_binary(Op::kUntil, Formula::make_true(), f->lhs), negated);
    case Op::kAlways:
      return nnf(Formula::make_binary(Op::kRelease, Formula::make_false(), f->lhs), negated);
    case Op::kAnd:
      return Formula::make_binary(negated ? Op::kOr : Op::kAnd, nnf(f->lhs, negated),
                                  nnf(f->rhs, negated));
    case Op::kOr:
      return Formula::make_binary(negated ? Op::kAnd : Op::kOr, nnf(f->lhs, negated),
                                  nnf(f->rhs, negated));
    case Op::kImply:
      return nnf(Formula::make_binary(Op::kOr, Formula::make_unary(Op::kNot, f->lhs), f->rhs),
                 negated);
    case Op::kUntil:
      return Formula::make_binary(negated ? Op::kRelease : Op::kUntil, nnf(f->lhs, negated),
                                  nnf(f->rhs, negated));
    case Op::kRelease:
      return Formula::make_binary(negated ? Op::kUntil : Op::kRelease, nnf(f->lhs, negated),
                                  nnf(f->rhs, negated));
  }
  throw std::logic_error("nnf: unhandled operator");
}

FormulaPtr negate(const FormulaPtr& f) { return Formula::make_unary(Op::kNot, f); }

namespace {

// Evaluation over lasso positions 0..P+C-1 with successor sigma wrapping
// into the cycle.
class LassoEval {
public:
  LassoEval(const LassoWord& word) : word_(word) {
    p_ = static_cast<int>(word.prefix.size());
    c_ = static_cast<int>(word.cycle.size());
    if (c_ == 0) throw ArgumentError("lasso word needs a nonempty cycle");
  }

  int positions() const { return p_ + c_; }
  int sigma(int pos) const { return pos + 1 < p_ + c_ ? pos + 1 : p_; }

  const LabelSet& labels(int pos) const {
    return pos < p_ ? word_.prefix[pos] : word_.cycle[pos - p_];
  }

  bool eval(const Formula* f, int pos) {
    auto key = std::make_pair(f, pos);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool v = compute(f, pos);
    memo_[key] = v;
    return v;
  }

private:
  bool compute(const Formula* f, int pos) {
    switch (f->op) {
      case Op::kTrue:
        return true;
      case Op::kFalse:
        return false;
      case Op::kAtom:
        return labels(pos).count(f->atom) > 0;
      case Op::kNot:
        return !eval(f->lhs.get(), pos);
      case Op::kAnd:
        return eval(f->lhs.get(), pos) && eval(f->rhs.get(), pos);
      case Op::kOr:
        return eval(f->lhs.get(), pos) || eval(f->rhs.get(), pos);
      case Op::kImply:
        return !eval(f->lhs.get(), pos) || eval(f->rhs.get(), pos);
      case Op::kNext:
        return eval(f->lhs.get(), sigma(pos));
      case Op::kUntil: {
        int q = pos;
        for (int step = 0; step <= positions(); ++step) {
          if (eval(f->rhs.get(), q)) return true;
          if (!eval(f->lhs.get(), q)) return false;
          q = sigma(q);
        }
        return false;  // rhs unreachable on the orbit
      }
      case Op::kRelease: {
        int q = pos;
        for (int step = 0; step <= positions(); ++step) {
          if (!eval(f->rhs.get(), q)) return false;
          if (eval(f->lhs.get(), q)) return true;
          q = sigma(q);
        }
        return true;  // rhs holds on the whole orbit
      }
      case Op::kEventually: {
        int q = pos;
        for (int step = 0; step <= positions(); ++step) {
          if (eval(f->lhs.get(), q)) return true;
          q = sigma(q);
        }
        return false;
      }
      case Op::kAlways: {
        int q = pos;
        for (int step = 0; step <= positions(); ++step) {
          if (!eval(f->lhs.get(), q)) return false;
          q = sigma(q);
        }
        return true;
      }
    }
    throw std::logic_error("lasso eval: unhandled operator");
  }

  const LassoWord& word_;
  int p_ = 0;
  int c_ = 0;
  std::map<std::pair<const Formula*, int>, bool> memo_;
};

}  // namespace

bool word_satisfies(const LassoWord& word, const FormulaPtr& f) {
  LassoEval ev(word);
  return ev.eval(f.get(), 0);
}

}  // namespace partcheck::ltl
