#include "partcheck/abstraction.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

#include "partcheck/errors.hpp"

namespace partcheck {
namespace {

std::vector<double> sorted_unique(std::vector<double> v, double tol) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v) {
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  }
  return out;
}

// Run fn(i) for i in [0, n) across a few worker threads; each index writes
// only its own output slot, so no synchronization is needed.
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
  unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(), 8);
  if (workers <= 1 || n < 8) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

PartitionAxes partition_axes_for(const Device& device) {
  PartitionAxes axes;
  axes.thresholds.resize(device.size());
  for (int axis = 0; axis < device.size(); ++axis) {
    const Gene& g = device.genes()[axis];
    std::vector<double> th = {g.conc_min, g.conc_max};
    for (int i = 0; i < device.size(); ++i) {
      if (device.regulator_axis(i) != axis) continue;
      const RangeMap& map = device.promoter_of(i).range;
      if (map.thresholds) {
        th.insert(th.end(), map.thresholds->values.begin(), map.thresholds->values.end());
      }
    }
    double tol = kGeomEps * (1.0 + std::abs(g.conc_max) + std::abs(g.conc_min));
    axes.thresholds[axis] = sorted_unique(std::move(th), tol);
  }
  return axes;
}

std::vector<Region> partition(const Device& device, const PartitionAxes& axes,
                              const std::vector<Proposition>& props) {
  const int n = device.size();
  if (static_cast<int>(axes.thresholds.size()) != n) {
    throw ArgumentError("partition axes do not match the device dimension");
  }
  for (const auto& p : props) {
    if (static_cast<int>(p.c.size()) != n) {
      throw ArgumentError("proposition '" + p.name + "' dimension mismatch");
    }
  }

  std::vector<Region> regions;
  std::vector<int> cell(n, 0);
  while (true) {
    Box cell_box;
    cell_box.lo = Vec(n);
    cell_box.hi = Vec(n);
    for (int i = 0; i < n; ++i) {
      cell_box.lo[i] = axes.thresholds[i][cell[i]];
      cell_box.hi[i] = axes.thresholds[i][cell[i] + 1];
    }

    struct Piece {
      Polytope poly;
      std::vector<bool> signs;
    };
    std::vector<Piece> pieces{{Polytope::from_box(cell_box), {}}};
    for (const auto& prop : props) {
      double nn = prop.c.norm();
      if (nn <= 1e-14) throw ArgumentError("proposition '" + prop.name + "' has a zero normal");
      Halfspace sat{prop.c / nn, prop.d / nn};
      Halfspace viol{-prop.c / nn, -prop.d / nn};
      std::vector<Piece> next;
      for (auto& piece : pieces) {
        auto inside = intersect_halfspace(piece.poly, sat);
        auto outside = intersect_halfspace(piece.poly, viol);
        bool kept_inside = inside && inside->volume() > kVolEps;
        bool kept_outside = outside && outside->volume() > kVolEps;
        if (kept_inside) {
          Piece p{std::move(*inside), piece.signs};
          p.signs.push_back(true);
          next.push_back(std::move(p));
        }
        if (kept_outside) {
          Piece p{std::move(*outside), piece.signs};
          p.signs.push_back(false);
          next.push_back(std::move(p));
        }
        // A cell grazed only on its boundary keeps its original extent.
        if (!kept_inside && !kept_outside) {
          Piece p{std::move(piece.poly), piece.signs};
          p.signs.push_back(prop.holds(p.poly.interior_point()));
          next.push_back(std::move(p));
        }
      }
      pieces = std::move(next);
    }

    for (auto& piece : pieces) {
      if (piece.poly.volume() <= kVolEps) continue;  // measure-zero sliver
      Region r;
      r.id = static_cast<int>(regions.size());
      r.polytope = std::move(piece.poly);
      r.threshold_cell = cell;
      r.prop_signs = std::move(piece.signs);
      r.rate_context.promoter_interval.assign(n, -1);
      for (int i = 0; i < n; ++i) {
        int raxis = device.regulator_axis(i);
        if (raxis < 0) continue;
        double mid = 0.5 * (axes.thresholds[raxis][cell[raxis]] +
                            axes.thresholds[raxis][cell[raxis] + 1]);
        r.rate_context.promoter_interval[i] = device.resolve_promoter_interval(i, mid);
      }
      regions.push_back(std::move(r));
    }

    int axis = n - 1;
    while (axis >= 0) {
      if (++cell[axis] < static_cast<int>(axes.thresholds[axis].size()) - 1) break;
      cell[axis] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  return regions;
}

Polytope post_affine(const Region& region, const Mat& a, const Box& rate_box) {
  return minkowski_sum(affine_image(a, region.polytope), Polytope::from_box(rate_box));
}

Polytope post_pwl(const Region& region, const Device& device) {
  const Mat& a = device.a_matrix();
  std::vector<Vec> images;
  for (const auto& v : region.polytope.vertices()) {
    Box rates = device.rate_set(v, &region.rate_context);
    Vec av = a * v;
    for (const auto& corner : rates.corners()) images.push_back(av + corner);
  }
  return hull_of_points(images);
}

Polytope post_of(const Region& region, const Device& device) {
  if (device.any_piecewise_linear()) return post_pwl(region, device);
  Box rates = device.rate_set(region.polytope.interior_point(), &region.rate_context);
  return post_affine(region, device.a_matrix(), rates);
}

Quotient build_quotient(const Device& device, const std::vector<Region>& regions,
                        const std::vector<Proposition>& props) {
  const int m = static_cast<int>(regions.size());
  Quotient q;
  q.region_count = m;
  q.successors.resize(m + 1);
  q.labels.resize(m + 1);

  std::vector<Polytope> posts;
  posts.reserve(m);
  for (const auto& r : regions) posts.push_back(post_of(r, device));

  const Box& space = device.state_space();
  std::atomic<int> blocked{-1};
  parallel_for(m, [&](int l1) {
    std::vector<int> out;
    for (int l2 = 0; l2 < m; ++l2) {
      auto inter = intersect(posts[l1], regions[l2].polytope);
      if (inter && inter->volume() > kVolEps) out.push_back(l2);
    }
    for (const auto& v : posts[l1].vertices()) {
      if (!space.contains(v, kGeomEps)) {
        out.push_back(q.out_state());
        break;
      }
    }
    if (out.empty()) blocked.store(l1);
    q.successors[l1] = std::move(out);
  });
  if (blocked.load() >= 0) {
    throw std::logic_error("region " + std::to_string(blocked.load()) + " has no successor");
  }

  q.successors[q.out_state()] = {q.out_state()};  // absorbing

  for (int l = 0; l < m; ++l) {
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < props.size(); ++k) {
      if (regions[l].prop_signs[k]) labels.push_back(props[k].name);
    }
    std::sort(labels.begin(), labels.end());
    q.labels[l] = std::move(labels);
  }
  return q;
}

void write_dot(std::ostream& os, const Quotient& q, const std::vector<char>* verdicts) {
  os << "digraph quotient {\n";
  os << "  rankdir=LR;\n";
  for (int s = 0; s < q.state_count(); ++s) {
    os << "  n" << s << " [label=\"";
    if (s == q.out_state()) {
      os << "OUT";
    } else {
      os << "r" << s;
      os << " {";
      for (std::size_t i = 0; i < q.labels[s].size(); ++i) {
        os << (i ? "," : "") << q.labels[s][i];
      }
      os << "}";
    }
    os << "\"";
    if (verdicts && s < q.region_count) {
      const char v = (*verdicts)[s];
      os << ", verdict=\"" << (v == 's' ? "satisfying" : v == 'v' ? "violating" : "undecided")
         << "\"";
    }
    os << "];\n";
  }
  for (int s = 0; s < q.state_count(); ++s) {
    for (int t : q.successors[s]) os << "  n" << s << " -> n" << t << ";\n";
  }
  os << "}\n";
}

}  // namespace partcheck
