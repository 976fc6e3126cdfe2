#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "partcheck/rng.hpp"

namespace oracles {

using partcheck::Halfspace;
using partcheck::Polytope;
using partcheck::Vec;

namespace {

double cross(const Vec& o, const Vec& a, const Vec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

}  // namespace

std::vector<Vec> gift_wrap_2d(const std::vector<Vec>& pts) {
  if (pts.empty()) throw std::invalid_argument("gift_wrap_2d: empty input");

  // Drop duplicates first so degenerate pivots cannot loop.
  std::vector<Vec> uniq;
  for (const auto& p : pts) {
    bool dup = false;
    for (const auto& q : uniq) {
      if ((p - q).lpNorm<Eigen::Infinity>() <= 1e-12) {
        dup = true;
        break;
      }
    }
    if (!dup) uniq.push_back(p);
  }
  if (uniq.size() == 1) return uniq;

  int start = 0;
  for (int i = 1; i < static_cast<int>(uniq.size()); ++i) {
    if (uniq[i][1] < uniq[start][1] ||
        (uniq[i][1] == uniq[start][1] && uniq[i][0] < uniq[start][0])) {
      start = i;
    }
  }

  std::vector<Vec> hull;
  int cur = start;
  do {
    hull.push_back(uniq[cur]);
    int next = (cur + 1) % static_cast<int>(uniq.size());
    for (int i = 0; i < static_cast<int>(uniq.size()); ++i) {
      if (i == cur) continue;
      double c = cross(uniq[cur], uniq[next], uniq[i]);
      if (c < -1e-12) {
        next = i;
      } else if (std::abs(c) <= 1e-12) {
        // Collinear: keep the farther point so midpoints are skipped.
        if ((uniq[i] - uniq[cur]).norm() > (uniq[next] - uniq[cur]).norm()) next = i;
      }
    }
    cur = next;
    if (hull.size() > uniq.size() + 1) throw std::runtime_error("gift_wrap_2d did not close");
  } while (cur != start);
  return hull;
}

bool fm_feasible(std::vector<Halfspace> hs, int dim, double tol) {
  for (int var = dim - 1; var >= 0; --var) {
    std::vector<Halfspace> pos, neg, zero;
    for (const auto& h : hs) {
      if (h.normal[var] > tol) {
        pos.push_back(h);
      } else if (h.normal[var] < -tol) {
        neg.push_back(h);
      } else {
        zero.push_back(h);
      }
    }
    std::vector<Halfspace> next = zero;
    for (const auto& p : pos) {
      for (const auto& n : neg) {
        // p: x_var <= rhs_p, n: x_var >= rhs_n; combine rhs_n <= rhs_p.
        Halfspace combined;
        combined.normal = p.normal / p.normal[var] - n.normal / n.normal[var];
        combined.offset = p.offset / p.normal[var] - n.offset / n.normal[var];
        combined.normal[var] = 0.0;
        next.push_back(std::move(combined));
      }
    }
    hs = std::move(next);
  }
  for (const auto& h : hs) {
    if (h.offset > tol) return false;
  }
  return true;
}

double mc_volume(const Polytope& p, int samples, std::mt19937_64& rng) {
  partcheck::Box bb = p.bounding_box();
  int inside = 0;
  for (int i = 0; i < samples; ++i) {
    if (p.contains(bb.sample(rng))) ++inside;
  }
  return bb.volume() * static_cast<double>(inside) / static_cast<double>(samples);
}

double distance_to_polygon(const Vec& x, const Polytope& poly) {
  if (poly.dim() != 2) throw std::invalid_argument("distance_to_polygon: 2D only");
  if (poly.contains(x, 0.0)) return 0.0;

  const auto& vs = poly.vertices();
  if (vs.size() == 1) return (x - vs[0]).norm();

  // Order vertices around the centroid, then scan edges.
  Vec c = Vec::Zero(2);
  for (const auto& v : vs) c += v;
  c /= static_cast<double>(vs.size());
  std::vector<Vec> ring = vs;
  std::sort(ring.begin(), ring.end(), [&](const Vec& a, const Vec& b) {
    return std::atan2(a[1] - c[1], a[0] - c[0]) < std::atan2(b[1] - c[1], b[0] - c[0]);
  });

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Vec& a = ring[i];
    const Vec& b = ring[(i + 1) % ring.size()];
    Vec d = b - a;
    double len2 = d.squaredNorm();
    double t = len2 > 0.0 ? std::clamp((x - a).dot(d) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, (x - (a + t * d)).norm());
  }
  return best;
}

Vec rejection_sample(const Polytope& p, std::mt19937_64& rng) {
  partcheck::Box bb = p.bounding_box();
  for (int tries = 0; tries < 100000; ++tries) {
    Vec x = bb.sample(rng);
    if (p.contains(x)) return x;
  }
  throw std::runtime_error("rejection_sample: acceptance too low");
}

const std::vector<std::string>& stock_formulas() {
  static const std::vector<std::string> fs = {
      "G p1",
      "F p1",
      "G F p1",
      "F G p1",
      "p1 U p2",
      "X p1",
      "X (p1 | p2)",
      "G (p1 | p2)",
      "F (p1 & p2)",
      "F G (p1 & p2)",
      "G F (p1 | p2)",
      "(p1 | p2) U p3",
  };
  return fs;
}

namespace {

using partcheck::Quotient;
using partcheck::ltl::FormulaPtr;
using partcheck::ltl::LassoWord;

struct LassoSearch {
  const Quotient& q;
  const FormulaPtr& f;
  LassoWord word;
  std::vector<char> on_prefix;
  std::vector<char> on_cycle;
  bool any_sat = false;
  bool any_viol = false;

  LassoSearch(const Quotient& quotient, const FormulaPtr& formula) : q(quotient), f(formula) {
    on_prefix.assign(q.state_count(), 0);
    on_cycle.assign(q.state_count(), 0);
  }

  bool done() const { return any_sat && any_viol; }

  void evaluate() {
    bool sat = partcheck::ltl::word_satisfies(word, f);
    any_sat |= sat;
    any_viol |= !sat;
  }

  // Enumerate simple cycles anchored at `anchor`, currently at `v`.
  void cycles(int anchor, int v) {
    if (done()) return;
    for (int w : q.successors[v]) {
      if (done()) return;
      if (w == anchor) {
        evaluate();
        continue;
      }
      if (on_cycle[w] || static_cast<int>(word.cycle.size()) >= q.state_count()) continue;
      on_cycle[w] = 1;
      word.cycle.emplace_back(q.labels[w].begin(), q.labels[w].end());
      cycles(anchor, w);
      word.cycle.pop_back();
      on_cycle[w] = 0;
    }
  }

  // Enumerate simple prefixes from `v`; at every node also try all cycles.
  void prefixes(int v) {
    if (done()) return;
    on_cycle.assign(q.state_count(), 0);
    word.cycle.clear();
    word.cycle.emplace_back(q.labels[v].begin(), q.labels[v].end());
    on_cycle[v] = 1;
    cycles(v, v);
    on_cycle[v] = 0;
    word.cycle.clear();
    if (done()) return;

    for (int w : q.successors[v]) {
      if (done()) return;
      if (on_prefix[w]) continue;
      on_prefix[w] = 1;
      word.prefix.emplace_back(q.labels[v].begin(), q.labels[v].end());
      prefixes(w);
      word.prefix.pop_back();
      on_prefix[w] = 0;
    }
  }
};

}  // namespace

std::vector<char> lasso_enum_verdicts(const Quotient& q, const FormulaPtr& f) {
  std::vector<char> verdicts(q.region_count, 'u');
  for (int s = 0; s < q.region_count; ++s) {
    LassoSearch search(q, f);
    search.on_prefix[s] = 1;
    search.prefixes(s);
    if (!search.any_sat && !search.any_viol) {
      throw std::runtime_error("lasso enumeration found no lasso at all");
    }
    if (!search.any_viol) {
      verdicts[s] = 's';
    } else if (!search.any_sat) {
      verdicts[s] = 'v';
    }
  }
  return verdicts;
}

Quotient random_quotient(std::mt19937_64& rng, int max_states,
                         const std::vector<std::string>& atoms) {
  Quotient q;
  int n = 2 + static_cast<int>(rng() % std::max(1, max_states - 1));
  q.region_count = n;
  q.successors.resize(n + 1);
  q.labels.resize(n + 1);
  for (int s = 0; s < n; ++s) {
    int deg = 1 + static_cast<int>(rng() % 3);
    std::set<int> targets;
    // targets may include the absorbing OUT-like state n
    for (int k = 0; k < deg; ++k) targets.insert(static_cast<int>(rng() % (n + 1)));
    q.successors[s] = std::vector<int>(targets.begin(), targets.end());
    std::vector<std::string> labels;
    for (const auto& a : atoms) {
      if (rng() % 2) labels.push_back(a);
    }
    q.labels[s] = labels;
  }
  q.successors[n] = {n};
  return q;
}

partcheck::ltl::LassoWord random_lasso(std::mt19937_64& rng,
                                       const std::vector<std::string>& atoms, int max_prefix,
                                       int max_cycle) {
  partcheck::ltl::LassoWord w;
  int p = static_cast<int>(rng() % (max_prefix + 1));
  int c = 1 + static_cast<int>(rng() % max_cycle);
  auto random_labels = [&] {
    partcheck::ltl::LabelSet ls;
    for (const auto& a : atoms) {
      if (rng() % 2) ls.insert(a);
    }
    return ls;
  };
  for (int i = 0; i < p; ++i) w.prefix.push_back(random_labels());
  for (int i = 0; i < c; ++i) w.cycle.push_back(random_labels());
  return w;
}

}  // namespace oracles
