#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "partcheck/device.hpp"
#include "partcheck/geometry.hpp"

namespace partcheck {

// Atomic proposition {x | c.x + d <= 0} over the device's state axes.
struct Proposition {
  std::string name;
  Vec c;
  double d = 0.0;

  bool holds(const Vec& x) const { return c.dot(x) + d <= 0.0; }
};

// Closure of one open partition region. threshold_cell holds the per-axis
// interval index into the partition axes; rate_context the per-promoter
// RangeMap interval it maps to.
struct Region {
  int id = 0;
  Polytope polytope;
  std::vector<int> threshold_cell;
  RateContext rate_context;
  std::vector<bool> prop_signs;  // one per proposition, true = satisfied
};

// Per-axis partition thresholds, sorted, bounds included.
struct PartitionAxes {
  std::vector<std::vector<double>> thresholds;
};

// Thresholds induced by the device's fitted range maps: for each gene, the
// union of the thresholds of all promoters it regulates, plus its bounds.
PartitionAxes partition_axes_for(const Device& device);

// Partition of the state space by threshold hyper-rectangles refined by the
// proposition hyperplanes; measure-zero slices are discarded and every
// region's proposition signs are evaluated at an interior witness.
std::vector<Region> partition(const Device& device, const PartitionAxes& axes,
                              const std::vector<Proposition>& props);

// Post for rate boxes constant over the region: A*region + rate_box.
Polytope post_affine(const Region& region, const Mat& a, const Box& rate_box);

// Post for piecewise-linear (or mixed) fits: hull of {Av + B(v)} over the
// region's vertices, with B(v) read through the region's rate context.
Polytope post_pwl(const Region& region, const Device& device);

// Dispatches to post_pwl when any promoter carries a piecewise-linear fit,
// otherwise to post_affine with the region's constant rate box.
Polytope post_of(const Region& region, const Device& device);

// Finite proposition-preserving quotient. State indices 0..region_count-1
// are regions; index region_count is the absorbing OUT state modeling
// trajectories that leave the feasible space (labeled with no propositions).
struct Quotient {
  int region_count = 0;
  std::vector<std::vector<int>> successors;        // per state, sorted
  std::vector<std::vector<std::string>> labels;    // per state, sorted prop names

  int state_count() const { return region_count + 1; }
  int out_state() const { return region_count; }
};

// Transitions from full-dimensional overlap of Post images with regions
// (volume above kVolEps; grazing contact does not create a transition).
Quotient build_quotient(const Device& device, const std::vector<Region>& regions,
                        const std::vector<Proposition>& props);

// DOT digraph of the quotient; `verdicts` (one char per region, 's'/'v'/'u')
// annotates nodes when given.
void write_dot(std::ostream& os, const Quotient& q,
               const std::vector<char>* verdicts = nullptr);

}  // namespace partcheck
