#include "partcheck/model_check.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "partcheck/errors.hpp"

namespace partcheck {
namespace {

using ltl::BuchiAutomaton;

// Product of the quotient with a Buchi automaton. Product state (s, q) means
// the automaton is at q about to read label(s); edges consume label(s).
struct Product {
  const Quotient* quotient = nullptr;
  const BuchiAutomaton* automaton = nullptr;
  std::vector<std::uint32_t> letters;      // per quotient state
  std::vector<int> ids;                    // dense id per (s,q), -1 unexplored
  std::vector<std::pair<int, int>> nodes;  // id -> (s, q)
  std::vector<std::vector<int>> succ;
  std::vector<int> entry;  // per quotient state: id of (s, initial)

  int node_id(int s, int q) const { return ids[s * automaton->state_count() + q]; }

  void build(const Quotient& quot, const BuchiAutomaton& aut) {
    quotient = &quot;
    automaton = &aut;
    letters.resize(quot.state_count());
    for (int s = 0; s < quot.state_count(); ++s) letters[s] = aut.letter_of(quot.labels[s]);
    ids.assign(static_cast<std::size_t>(quot.state_count()) * aut.state_count(), -1);
    entry.assign(quot.state_count(), -1);

    std::deque<int> work;
    auto intern = [&](int s, int q) {
      int& slot = ids[s * aut.state_count() + q];
      if (slot < 0) {
        slot = static_cast<int>(nodes.size());
        nodes.emplace_back(s, q);
        succ.emplace_back();
        work.push_back(slot);
      }
      return slot;
    };
    for (int s = 0; s < quot.state_count(); ++s) entry[s] = intern(s, aut.initial);
    while (!work.empty()) {
      int id = work.front();
      work.pop_front();
      auto [s, q] = nodes[id];
      for (const auto& tr : aut.delta[q]) {
        if (!tr.enabled(letters[s])) continue;
        for (int t : quot.successors[s]) {
          int nid = intern(t, tr.target);  // may grow succ
          succ[id].push_back(nid);
        }
      }
    }
  }

  bool accepting_node(int id) const { return automaton->accepting[nodes[id].second] != 0; }
};

// Tarjan SCCs; comp ids come out in reverse topological order.
struct Tarjan {
  const std::vector<std::vector<int>>& succ;
  std::vector<int> index, low, comp;
  std::vector<char> on_stack;
  std::vector<int> stack;
  int counter = 0, comps = 0;

  explicit Tarjan(const std::vector<std::vector<int>>& s)
      : succ(s), index(s.size(), -1), low(s.size(), 0), comp(s.size(), -1),
        on_stack(s.size(), 0) {
    for (std::size_t v = 0; v < s.size(); ++v) {
      if (index[v] < 0) run(static_cast<int>(v));
    }
  }

  // Iterative DFS; product graphs can be deep.
  void run(int root) {
    struct Frame {
      int v;
      std::size_t child = 0;
    };
    std::vector<Frame> frames{{root}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < succ[f.v].size()) {
        int w = succ[f.v][f.child++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        if (low[f.v] == index[f.v]) {
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp[w] = comps;
            if (w == f.v) break;
          }
          ++comps;
        }
        int v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }
};

struct Emptiness {
  Product product;
  std::vector<char> can_reach_fair;  // per product node
  std::vector<char> fair_comp;
  std::vector<int> comp;

  void analyze(const Quotient& q, const BuchiAutomaton& a) {
    product.build(q, a);
    Tarjan t(product.succ);
    comp = t.comp;
    const int n = static_cast<int>(product.nodes.size());

    // An SCC contains a cycle iff it has any internal edge (size >= 2 always
    // does; singletons need a self-loop).
    std::vector<char> nontrivial(t.comps, 0), has_acc(t.comps, 0);
    for (int v = 0; v < n; ++v) {
      for (int w : product.succ[v]) {
        if (comp[w] == comp[v]) nontrivial[comp[v]] = 1;
      }
      if (product.accepting_node(v)) has_acc[comp[v]] = 1;
    }
    fair_comp.assign(t.comps, 0);
    for (int c = 0; c < t.comps; ++c) fair_comp[c] = nontrivial[c] && has_acc[c];

    // Tarjan emits components in reverse topological order, so successors'
    // components are already finished when a component closes.
    std::vector<char> comp_reach(t.comps, 0);
    for (int c = 0; c < t.comps; ++c) comp_reach[c] = fair_comp[c];
    // Propagate along edges: iterate nodes in increasing comp id (reverse
    // topological), pulling from successors.
    for (int c = 0; c < t.comps; ++c) {
      if (comp_reach[c]) continue;
      bool reach = false;
      for (int v = 0; v < n && !reach; ++v) {
        if (comp[v] != c) continue;
        for (int w : product.succ[v]) {
          if (comp_reach[comp[w]]) {
            reach = true;
            break;
          }
        }
      }
      comp_reach[c] = reach;
    }
    can_reach_fair.assign(n, 0);
    for (int v = 0; v < n; ++v) can_reach_fair[v] = comp_reach[comp[v]];
  }

  // Does some run from quotient state s satisfy the automaton's language?
  bool has_accepting_run(int s) const { return can_reach_fair[product.entry[s]] != 0; }

  // Extract a lasso witnessing an accepting run from s.
  WitnessLasso extract_lasso(int s) const;
};

WitnessLasso Emptiness::extract_lasso(int s) const {
  const int n = static_cast<int>(product.nodes.size());

  // Nearest accepting node inside a fair component.
  std::vector<int> parent(n, -2);
  std::deque<int> work;
  int start = product.entry[s];
  parent[start] = -1;
  work.push_back(start);
  int acc = -1;
  while (!work.empty()) {
    int v = work.front();
    work.pop_front();
    if (fair_comp[comp[v]] && product.accepting_node(v)) {
      acc = v;
      break;
    }
    for (int w : product.succ[v]) {
      if (parent[w] == -2) {
        parent[w] = v;
        work.push_back(w);
      }
    }
  }
  if (acc < 0) throw std::logic_error("no accepting node reachable for witness");

  std::vector<int> path;  // start..acc
  for (int v = acc; v >= 0; v = parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());

  // Shortest proper cycle acc -> acc within the component.
  std::vector<int> par2(n, -2);
  std::deque<int> q;
  for (int w : product.succ[acc]) {
    if (comp[w] == comp[acc] && par2[w] == -2) {
      par2[w] = -1;  // direct successor of acc
      q.push_back(w);
    }
  }
  while (par2[acc] == -2 && !q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int w : product.succ[v]) {
      if (comp[w] != comp[acc] || par2[w] != -2) continue;
      par2[w] = v;
      q.push_back(w);
    }
  }
  if (par2[acc] == -2) throw std::logic_error("fair component lost its cycle");
  std::vector<int> back;  // acc, u_k, ..., u_1 with u_1 a direct successor
  for (int v = acc;;) {
    back.push_back(v);
    if (par2[v] == -1) break;
    v = par2[v];
  }

  WitnessLasso lasso;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    lasso.prefix.push_back(product.nodes[path[i]].first);
  }
  lasso.cycle.push_back(product.nodes[acc].first);
  for (std::size_t i = back.size(); i-- > 1;) {
    lasso.cycle.push_back(product.nodes[back[i]].first);
  }
  return lasso;
}

}  // namespace

ModelCheckResult model_check(const Quotient& q, const ltl::FormulaPtr& f) {
  for (int s = 0; s < q.state_count(); ++s) {
    if (q.successors[s].empty()) {
      throw std::logic_error("quotient state " + std::to_string(s) + " is blocking");
    }
  }

  BuchiAutomaton a_neg = ltl::to_buchi(ltl::negate(f));
  BuchiAutomaton a_pos = ltl::to_buchi(f);

  Emptiness neg, pos;
  neg.analyze(q, a_neg);
  pos.analyze(q, a_pos);

  ModelCheckResult r;
  r.verdict.assign(q.region_count, 'u');
  for (int s = 0; s < q.region_count; ++s) {
    bool has_viol = neg.has_accepting_run(s);
    bool has_sat = pos.has_accepting_run(s);
    if (!has_viol && !has_sat) {
      throw std::logic_error("state admits neither satisfying nor violating runs");
    }
    if (!has_viol) {
      r.verdict[s] = 's';
      r.sat_regions.push_back(s);
    } else if (!has_sat) {
      r.verdict[s] = 'v';
      r.viol_regions.push_back(s);
      r.witnesses[s] = neg.extract_lasso(s);
    }
  }
  return r;
}

VerificationResult regions_and_volumes(const ModelCheckResult& mc, const Quotient& q,
                                       const std::vector<Region>& regions,
                                       double space_volume) {
  VerificationResult out;
  out.mc = mc;
  if (space_volume <= 0.0) throw ArgumentError("space volume must be positive");

  double sat = 0.0, viol = 0.0, und = 0.0;
  for (const auto& r : regions) {
    double v = r.polytope.volume();
    switch (mc.verdict[r.id]) {
      case 's':
        sat += v;
        break;
      case 'v':
        viol += v;
        break;
      default:
        und += v;
        break;
    }
  }
  out.sat_fraction = sat / space_volume;
  out.viol_fraction = viol / space_volume;
  out.undecided_fraction = und / space_volume;

  // Backward reachability of OUT over the quotient.
  out.out_reaching.assign(q.region_count, 0);
  std::vector<std::vector<int>> pred(q.state_count());
  for (int s = 0; s < q.state_count(); ++s) {
    for (int t : q.successors[s]) pred[t].push_back(s);
  }
  std::deque<int> work{q.out_state()};
  std::vector<char> seen(q.state_count(), 0);
  seen[q.out_state()] = 1;
  while (!work.empty()) {
    int v = work.front();
    work.pop_front();
    for (int p : pred[v]) {
      if (!seen[p]) {
        seen[p] = 1;
        work.push_back(p);
      }
    }
  }
  double outv = 0.0;
  for (const auto& r : regions) {
    out.out_reaching[r.id] = seen[r.id];
    if (seen[r.id]) outv += r.polytope.volume();
  }
  out.out_reaching_fraction = outv / space_volume;
  return out;
}

}  // namespace partcheck
