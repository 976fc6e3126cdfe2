#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "partcheck/geometry.hpp"

namespace partcheck {

// One measured expression rate, tagged with the concurrent regulator
// concentration for regulated promoters.
struct RateSample {
  double rate = 0.0;
  std::optional<double> regulator_conc;
};

struct MinMaxPair {
  double min = 0.0;
  double max = 0.0;
};

// Ordered regulator-concentration breakpoints. The first and last entries
// are the regulator gene's physiological bounds.
struct ThresholdSet {
  std::string gene;
  std::vector<double> values;

  int interval_count() const { return static_cast<int>(values.size()) - 1; }
};

struct RateInterval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double r) const { return r >= lo && r <= hi; }
  double width() const { return hi - lo; }
};

enum class FitKind { kConstant, kPiecewiseConstant, kPiecewiseLinear };

// The fitted set of admissible expression rates as a function of regulator
// concentration. Constant fits carry a single interval and no thresholds;
// piecewise-constant fits one interval per threshold interval;
// piecewise-linear fits a trapezoid per threshold interval, stored as the
// two endpoint rate intervals (adjacent intervals may disagree at a shared
// threshold, which is why slicing exactly on an interior threshold requires
// an explicit interval index).
struct RangeMap {
  FitKind kind = FitKind::kConstant;
  std::optional<ThresholdSet> thresholds;

  std::vector<RateInterval> boxes;

  struct EndpointIntervals {
    RateInterval left;
    RateInterval right;
  };
  std::vector<EndpointIntervals> trapezoids;

  int interval_count() const;
  // Index of the threshold interval containing x; boundary thresholds of the
  // span resolve to their unique inside interval, interior thresholds throw.
  int interval_of(double x) const;
};

// --- rate extraction (concentration/step units) ---------------------------

// beta(k) = x(k+1) - alpha * x(k) for a single-cell trace.
std::vector<RateSample> rates_from_single_cell_trajectory(std::span<const double> conc,
                                                          double alpha);

// Population variant: cells are not tracked individually, so each step
// contributes the extreme rates compatible with the observed min/max bands.
std::vector<RateSample> rates_from_population(std::span<const MinMaxPair> conc_per_step,
                                              double alpha);

// Paired regulator/reporter trace for a regulated promoter; the regulator is
// read at step k, the rate from the reporter transition k -> k+1.
std::vector<RateSample> rates_from_regulated_pair(std::span<const double> regulator_conc,
                                                  std::span<const double> reporter_conc,
                                                  double alpha_reporter);

// --- fits ------------------------------------------------------------------

// [min, max] of observed rates, regulator coordinates ignored.
RangeMap fit_constant(std::span<const RateSample> samples);

// Per-interval [min, max]; samples exactly on an interior threshold count
// for both adjacent intervals. An interval without samples is an error.
RangeMap fit_piecewise_constant(std::span<const RateSample> samples,
                                const ThresholdSet& thresholds);

// Per-interval convex hull in (regulator, rate) coordinates (axis 0 is the
// regulator concentration, axis 1 the rate).
std::vector<Polytope> fit_convex_hull(std::span<const RateSample> samples,
                                      const ThresholdSet& thresholds);

// Per-interval minimum-area trapezoid with vertical sides at the thresholds
// and top/bottom chosen among supporting lines of the interval hull.
RangeMap fit_piecewise_linear(std::span<const RateSample> samples,
                              const ThresholdSet& thresholds);

// Admissible-rate interval at regulator concentration x. For x exactly on an
// interior threshold an interval_index is required (Remark-1 ambiguity).
RateInterval slice(const RangeMap& map, double x,
                   std::optional<int> interval_index = std::nullopt);

// Total 2D area of the fitted set (requires thresholds).
double fitted_area(const RangeMap& map);
double interval_area(const RangeMap& map, int interval);

// --- threshold selection ----------------------------------------------------

// The random interior candidate pool used by select_thresholds; exposed so
// callers/tests can reproduce the pool for a given seed.
std::vector<double> threshold_candidates(double lo, double hi, int candidate_count,
                                         std::uint64_t seed);

// Among candidate_count random interior candidates plus the mandatory
// bounds, picks the chosen_count thresholds minimizing total
// piecewise-linear fit area. Exhaustive subset search while the number of
// subsets stays below 1e5, greedy forward selection beyond. Candidate
// subsets that leave a threshold interval without samples are skipped.
ThresholdSet select_thresholds(std::span<const RateSample> samples, const std::string& gene,
                               double lo, double hi, int candidate_count, int chosen_count,
                               std::uint64_t seed);

}  // namespace partcheck
