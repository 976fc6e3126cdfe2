#include "partcheck/buchi.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace partcheck::ltl {

namespace {

// Structural ordering so formula sets can key maps; pointers are not stable
// keys because nnf rebuilds nodes.
int cmp(const Formula* a, const Formula* b) {
  if (a == b) return 0;
  if (static_cast<int>(a->op) != static_cast<int>(b->op)) {
    return static_cast<int>(a->op) < static_cast<int>(b->op) ? -1 : 1;
  }
  if (a->op == Op::kAtom) return a->atom.compare(b->atom);
  if (a->lhs && b->lhs) {
    if (int c = cmp(a->lhs.get(), b->lhs.get())) return c;
  } else if (!!a->lhs != !!b->lhs) {
    return a->lhs ? 1 : -1;
  }
  if (a->rhs && b->rhs) {
    if (int c = cmp(a->rhs.get(), b->rhs.get())) return c;
  } else if (!!a->rhs != !!b->rhs) {
    return a->rhs ? 1 : -1;
  }
  return 0;
}

struct FormulaLess {
  bool operator()(const FormulaPtr& a, const FormulaPtr& b) const {
    return cmp(a.get(), b.get()) < 0;
  }
};

using FormulaSet = std::set<FormulaPtr, FormulaLess>;

bool contains(const FormulaSet& s, const FormulaPtr& f) { return s.count(f) > 0; }

// Is the (NNF) literal's negation already committed?
bool contradicts(const FormulaSet& old_set, const FormulaPtr& lit) {
  if (lit->op == Op::kAtom) {
    return contains(old_set, Formula::make_unary(Op::kNot, lit));
  }
  return contains(old_set, lit->lhs);
}

struct Node {
  int name = 0;
  std::set<int> incoming;
  FormulaSet todo;     // "new" in the classic presentation
  FormulaSet old;
  FormulaSet next;
};

struct Builder {
  int counter = 1;
  std::vector<Node> done;

  void expand(Node node) {
    if (node.todo.empty()) {
      for (auto& d : done) {
        if (d.old == node.old && d.next == node.next) {
          d.incoming.insert(node.incoming.begin(), node.incoming.end());
          return;
        }
      }
      Node fresh;
      fresh.name = counter++;
      fresh.incoming = node.incoming;
      fresh.old = node.old;
      fresh.next = node.next;
      done.push_back(fresh);

      Node succ;
      succ.incoming = {fresh.name};
      succ.todo = fresh.next;
      expand(std::move(succ));
      return;
    }

    FormulaPtr eta = *node.todo.begin();
    node.todo.erase(node.todo.begin());

    switch (eta->op) {
      case Op::kFalse:
        return;  // contradiction, drop the node
      case Op::kTrue:
        expand(std::move(node));
        return;
      case Op::kAtom:
      case Op::kNot:
        if (contradicts(node.old, eta)) return;
        node.old.insert(eta);
        expand(std::move(node));
        return;
      case Op::kAnd: {
        if (!contains(node.old, eta->lhs)) node.todo.insert(eta->lhs);
        if (!contains(node.old, eta->rhs)) node.todo.insert(eta->rhs);
        node.old.insert(eta);
        expand(std::move(node));
        return;
      }
      case Op::kNext: {
        node.old.insert(eta);
        node.next.insert(eta->lhs);
        expand(std::move(node));
        return;
      }
      case Op::kOr: {
        Node left = node;
        left.old.insert(eta);
        if (!contains(left.old, eta->lhs)) left.todo.insert(eta->lhs);
        Node right = std::move(node);
        right.old.insert(eta);
        if (!contains(right.old, eta->rhs)) right.todo.insert(eta->rhs);
        expand(std::move(left));
        expand(std::move(right));
        return;
      }
      case Op::kUntil: {
        // lhs U rhs = rhs | (lhs & X(lhs U rhs))
        Node wait = node;
        wait.old.insert(eta);
        if (!contains(wait.old, eta->lhs)) wait.todo.insert(eta->lhs);
        wait.next.insert(eta);
        Node settle = std::move(node);
        settle.old.insert(eta);
        if (!contains(settle.old, eta->rhs)) settle.todo.insert(eta->rhs);
        expand(std::move(wait));
        expand(std::move(settle));
        return;
      }
      case Op::kRelease: {
        // lhs R rhs = (rhs & lhs) | (rhs & X(lhs R rhs))
        Node hold = node;
        hold.old.insert(eta);
        if (!contains(hold.old, eta->rhs)) hold.todo.insert(eta->rhs);
        hold.next.insert(eta);
        Node close = std::move(node);
        close.old.insert(eta);
        if (!contains(close.old, eta->lhs)) close.todo.insert(eta->lhs);
        if (!contains(close.old, eta->rhs)) close.todo.insert(eta->rhs);
        expand(std::move(hold));
        expand(std::move(close));
        return;
      }
      default:
        throw std::logic_error("tableau expansion expects negation normal form");
    }
  }
};

void collect_atoms(const FormulaPtr& f, std::vector<std::string>& atoms) {
  if (!f) return;
  if (f->op == Op::kAtom) {
    if (std::find(atoms.begin(), atoms.end(), f->atom) == atoms.end()) atoms.push_back(f->atom);
  }
  collect_atoms(f->lhs, atoms);
  collect_atoms(f->rhs, atoms);
}

void collect_untils(const FormulaPtr& f, FormulaSet& untils) {
  if (!f) return;
  if (f->op == Op::kUntil) untils.insert(f);
  collect_untils(f->lhs, untils);
  collect_untils(f->rhs, untils);
}

}  // namespace

std::uint32_t BuchiAutomaton::letter_of(const LabelSet& labels) const {
  std::uint32_t letter = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (labels.count(atoms[i])) letter |= (1u << i);
  }
  return letter;
}

std::uint32_t BuchiAutomaton::letter_of(const std::vector<std::string>& labels) const {
  std::uint32_t letter = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (std::find(labels.begin(), labels.end(), atoms[i]) != labels.end()) letter |= (1u << i);
  }
  return letter;
}

BuchiAutomaton to_buchi(const FormulaPtr& f) {
  FormulaPtr g = nnf(normalize(f));

  BuchiAutomaton a;
  collect_atoms(g, a.atoms);
  if (a.atoms.size() > 31) throw std::logic_error("too many distinct atoms");

  Builder b;
  Node init;
  init.incoming = {0};
  init.todo.insert(g);
  b.expand(std::move(init));

  FormulaSet untils;
  collect_untils(g, untils);
  const int k = static_cast<int>(untils.size());

  // Generalized acceptance: per until U_i, the nodes with rhs in old or the
  // until not in old.
  std::vector<std::vector<char>> gba_acc(std::max(k, 0));
  {
    int i = 0;
    for (const auto& u : untils) {
      gba_acc[i].assign(b.done.size() + 1, 0);
      for (const auto& node : b.done) {
        bool pending = contains(node.old, u) && !contains(node.old, u->rhs);
        gba_acc[i][node.name] = pending ? 0 : 1;
      }
      ++i;
    }
  }

  auto guard_of = [&](const Node& node) {
    BuchiAutomaton::Transition t;
    for (const auto& sub : node.old) {
      if (sub->op == Op::kAtom) {
        auto it = std::find(a.atoms.begin(), a.atoms.end(), sub->atom);
        t.must_true |= 1u << (it - a.atoms.begin());
      } else if (sub->op == Op::kNot) {
        auto it = std::find(a.atoms.begin(), a.atoms.end(), sub->lhs->atom);
        t.must_false |= 1u << (it - a.atoms.begin());
      }
    }
    return t;
  };

  const int base_states = static_cast<int>(b.done.size()) + 1;  // + virtual initial

  if (k <= 1) {
    a.delta.assign(base_states, {});
    a.accepting.assign(base_states, k == 0 ? 1 : 0);
    if (k == 1) {
      for (const auto& node : b.done) a.accepting[node.name] = gba_acc[0][node.name];
      a.accepting[0] = 0;
    }
    for (const auto& node : b.done) {
      BuchiAutomaton::Transition t = guard_of(node);
      t.target = node.name;
      for (int src : node.incoming) a.delta[src].push_back(t);
    }
    return a;
  }

  // Counter degeneralization with k+1 copies: counter i < k counts the
  // acceptance sets already witnessed this round; entering a state that
  // completes the round lands in the transient accepting copy i == k, which
  // behaves like i == 0 for outgoing transitions.
  auto enc = [&](int q, int i) { return q * (k + 1) + i; };
  a.delta.assign(base_states * (k + 1), {});
  a.accepting.assign(base_states * (k + 1), 0);
  a.initial = enc(0, 0);
  for (int q = 0; q < base_states; ++q) a.accepting[enc(q, k)] = 1;
  for (const auto& node : b.done) {
    BuchiAutomaton::Transition t = guard_of(node);
    for (int src : node.incoming) {
      for (int i = 0; i <= k; ++i) {
        int from = (i == k) ? 0 : i;
        int ni = gba_acc[from][node.name] ? from + 1 : from;
        BuchiAutomaton::Transition tt = t;
        tt.target = enc(node.name, ni);
        a.delta[enc(src, i)].push_back(tt);
      }
    }
  }
  return a;
}

bool accepts_lasso(const BuchiAutomaton& a, const LassoWord& word) {
  const int p = static_cast<int>(word.prefix.size());
  const int c = static_cast<int>(word.cycle.size());
  if (c == 0) return false;
  const int positions = p + c;
  auto sigma = [&](int pos) { return pos + 1 < positions ? pos + 1 : p; };
  auto letter = [&](int pos) {
    return a.letter_of(pos < p ? word.prefix[pos] : word.cycle[pos - p]);
  };

  const int n = positions * a.state_count();
  auto enc = [&](int pos, int q) { return pos * a.state_count() + q; };

  // Forward reachability from (0, initial).
  std::vector<char> reach(n, 0);
  std::vector<int> stack{enc(0, a.initial)};
  reach[stack[0]] = 1;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    int pos = s / a.state_count(), q = s % a.state_count();
    for (const auto& t : a.delta[q]) {
      if (!t.enabled(letter(pos))) continue;
      int ns = enc(sigma(pos), t.target);
      if (!reach[ns]) {
        reach[ns] = 1;
        stack.push_back(ns);
      }
    }
  }

  // An accepting run exists iff some reachable accepting product state can
  // reach itself.
  for (int s = 0; s < n; ++s) {
    if (!reach[s] || !a.accepting[s % a.state_count()]) continue;
    std::vector<char> seen(n, 0);
    std::vector<int> st;
    int pos0 = s / a.state_count(), q0 = s % a.state_count();
    for (const auto& t : a.delta[q0]) {
      if (!t.enabled(letter(pos0))) continue;
      int ns = enc(sigma(pos0), t.target);
      if (!seen[ns]) {
        seen[ns] = 1;
        st.push_back(ns);
      }
    }
    while (!st.empty()) {
      int u = st.back();
      st.pop_back();
      if (u == s) break;
      int pos = u / a.state_count(), q = u % a.state_count();
      for (const auto& t : a.delta[q]) {
        if (!t.enabled(letter(pos))) continue;
        int ns = enc(sigma(pos), t.target);
        if (!seen[ns]) {
          seen[ns] = 1;
          st.push_back(ns);
        }
      }
    }
    if (seen[s]) return true;
  }
  return false;
}

}  // namespace partcheck::ltl
