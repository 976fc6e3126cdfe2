#include "partcheck/identification.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "partcheck/errors.hpp"
#include "partcheck/rng.hpp"

namespace partcheck {
namespace {

struct Pt2 {
  double x;  // regulator concentration
  double y;  // rate
};

// Samples whose regulator concentration falls in [lo, hi]; boundary samples
// are shared with the neighboring interval by the closed-interval definition.
std::vector<Pt2> interval_samples(std::span<const RateSample> samples, double lo, double hi) {
  std::vector<Pt2> out;
  for (const auto& s : samples) {
    if (!s.regulator_conc) continue;
    double x = *s.regulator_conc;
    if (x >= lo && x <= hi) out.push_back({x, s.rate});
  }
  return out;
}

void require_regulated(std::span<const RateSample> samples) {
  for (const auto& s : samples) {
    if (!s.regulator_conc) {
      throw ArgumentError("sample without regulator concentration in a regulated fit");
    }
  }
}

void require_in_span(std::span<const RateSample> samples, const ThresholdSet& t) {
  for (const auto& s : samples) {
    if (*s.regulator_conc < t.values.front() || *s.regulator_conc > t.values.back()) {
      throw ArgumentError("sample regulator concentration outside the threshold span");
    }
  }
}

[[noreturn]] void throw_empty_interval(int i, double lo, double hi) {
  std::ostringstream os;
  os << "threshold interval " << i << " [" << lo << ", " << hi << "] contains no samples";
  throw IdentificationError(os.str(), i, lo, hi);
}

double cross(const Pt2& o, const Pt2& a, const Pt2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Lower and upper convex chains of a 2D point set, left to right.
struct Chains {
  std::vector<Pt2> lower;
  std::vector<Pt2> upper;
};

Chains convex_chains(std::vector<Pt2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Pt2& a, const Pt2& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Pt2& a, const Pt2& b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  Chains ch;
  for (const auto& p : pts) {
    auto& lo = ch.lower;
    while (lo.size() >= 2 && cross(lo[lo.size() - 2], lo.back(), p) <= 0.0) lo.pop_back();
    lo.push_back(p);
  }
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    auto& up = ch.upper;
    while (up.size() >= 2 && cross(up[up.size() - 2], up.back(), *it) <= 0.0) up.pop_back();
    up.push_back(*it);
  }
  std::reverse(ch.upper.begin(), ch.upper.end());
  return ch;
}

struct Line {
  double slope = 0.0;
  double icept = 0.0;

  double at(double x) const { return slope * x + icept; }
};

// Candidate supporting lines from a chain: one per non-vertical edge, plus
// the horizontal line through the chain's extreme rate. The horizontal keeps
// the candidate set nonempty for degenerate hulls and guarantees the
// trapezoid never beats the piecewise-constant box from below.
std::vector<Line> chain_lines(const std::vector<Pt2>& chain, double extreme_rate) {
  std::vector<Line> lines;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    double dx = chain[i + 1].x - chain[i].x;
    if (std::abs(dx) <= 1e-14 * (1.0 + std::abs(chain[i].x))) continue;
    double m = (chain[i + 1].y - chain[i].y) / dx;
    lines.push_back({m, chain[i].y - m * chain[i].x});
  }
  lines.push_back({0.0, extreme_rate});
  return lines;
}

// The slice arithmetic shared by slice() and the containment repair below;
// both must agree bit for bit for the capture guarantee to be exact.
RateInterval pwl_slice(const RangeMap::EndpointIntervals& t, double theta_l, double theta_r,
                       double x) {
  double lam = (theta_r - x) / (theta_r - theta_l);
  return {lam * t.left.lo + (1.0 - lam) * t.right.lo,
          lam * t.left.hi + (1.0 - lam) * t.right.hi};
}

void check_thresholds(const ThresholdSet& t) {
  if (t.values.size() < 2) throw ArgumentError("threshold set needs at least two values");
  for (std::size_t i = 0; i + 1 < t.values.size(); ++i) {
    if (!(t.values[i] < t.values[i + 1])) {
      throw ArgumentError("thresholds must be strictly increasing");
    }
  }
}

int resolve_interval(const ThresholdSet& t, double x, std::optional<int> idx) {
  const auto& th = t.values;
  const int n = t.interval_count();
  if (idx) {
    if (*idx < 0 || *idx >= n) throw ArgumentError("interval index out of range");
    double tol = kGeomEps * (1.0 + std::abs(x));
    if (x < th[*idx] - tol || x > th[*idx + 1] + tol) {
      throw ArgumentError("regulator concentration outside the indexed interval");
    }
    return *idx;
  }
  if (x < th.front() || x > th.back()) {
    throw ArgumentError("regulator concentration outside the threshold span");
  }
  if (x == th.front()) return 0;
  if (x == th.back()) return n - 1;
  for (int i = 1; i + 1 < static_cast<int>(th.size()); ++i) {
    if (x == th[i]) {
      throw ArgumentError(
          "regulator concentration lies exactly on an interior threshold; "
          "an interval index is required");
    }
  }
  int i = static_cast<int>(std::upper_bound(th.begin(), th.end(), x) - th.begin()) - 1;
  return std::min(std::max(i, 0), n - 1);
}

}  // namespace

int RangeMap::interval_count() const {
  switch (kind) {
    case FitKind::kConstant:
      return 1;
    case FitKind::kPiecewiseConstant:
      return static_cast<int>(boxes.size());
    case FitKind::kPiecewiseLinear:
      return static_cast<int>(trapezoids.size());
  }
  return 0;
}

int RangeMap::interval_of(double x) const {
  if (!thresholds) throw ArgumentError("range map carries no thresholds");
  return resolve_interval(*thresholds, x, std::nullopt);
}

std::vector<RateSample> rates_from_single_cell_trajectory(std::span<const double> conc,
                                                          double alpha) {
  if (conc.size() < 2) throw ArgumentError("need at least two concentration samples");
  std::vector<RateSample> out;
  out.reserve(conc.size() - 1);
  for (std::size_t k = 0; k + 1 < conc.size(); ++k) {
    out.push_back({conc[k + 1] - alpha * conc[k], std::nullopt});
  }
  return out;
}

std::vector<RateSample> rates_from_population(std::span<const MinMaxPair> conc_per_step,
                                              double alpha) {
  if (conc_per_step.size() < 2) throw ArgumentError("need at least two population steps");
  for (const auto& p : conc_per_step) {
    if (p.min > p.max) throw ArgumentError("population pair with min > max");
  }
  std::vector<RateSample> out;
  out.reserve(2 * (conc_per_step.size() - 1));
  for (std::size_t k = 0; k + 1 < conc_per_step.size(); ++k) {
    out.push_back({conc_per_step[k + 1].min - alpha * conc_per_step[k].max, std::nullopt});
    out.push_back({conc_per_step[k + 1].max - alpha * conc_per_step[k].min, std::nullopt});
  }
  return out;
}

std::vector<RateSample> rates_from_regulated_pair(std::span<const double> regulator_conc,
                                                  std::span<const double> reporter_conc,
                                                  double alpha_reporter) {
  if (regulator_conc.size() != reporter_conc.size()) {
    throw ArgumentError("regulator and reporter traces differ in length");
  }
  if (reporter_conc.size() < 2) throw ArgumentError("need at least two samples");
  std::vector<RateSample> out;
  out.reserve(reporter_conc.size() - 1);
  for (std::size_t k = 0; k + 1 < reporter_conc.size(); ++k) {
    out.push_back(
        {reporter_conc[k + 1] - alpha_reporter * reporter_conc[k], regulator_conc[k]});
  }
  return out;
}

RangeMap fit_constant(std::span<const RateSample> samples) {
  if (samples.empty()) throw ArgumentError("cannot fit an empty sample set");
  double lo = samples[0].rate, hi = samples[0].rate;
  for (const auto& s : samples) {
    lo = std::min(lo, s.rate);
    hi = std::max(hi, s.rate);
  }
  RangeMap map;
  map.kind = FitKind::kConstant;
  map.boxes = {{lo, hi}};
  return map;
}

RangeMap fit_piecewise_constant(std::span<const RateSample> samples,
                                const ThresholdSet& thresholds) {
  check_thresholds(thresholds);
  require_regulated(samples);
  require_in_span(samples, thresholds);
  RangeMap map;
  map.kind = FitKind::kPiecewiseConstant;
  map.thresholds = thresholds;
  for (int i = 0; i < thresholds.interval_count(); ++i) {
    double tl = thresholds.values[i], tr = thresholds.values[i + 1];
    auto pts = interval_samples(samples, tl, tr);
    if (pts.empty()) throw_empty_interval(i, tl, tr);
    double lo = pts[0].y, hi = pts[0].y;
    for (const auto& p : pts) {
      lo = std::min(lo, p.y);
      hi = std::max(hi, p.y);
    }
    map.boxes.push_back({lo, hi});
  }
  return map;
}

std::vector<Polytope> fit_convex_hull(std::span<const RateSample> samples,
                                      const ThresholdSet& thresholds) {
  check_thresholds(thresholds);
  require_regulated(samples);
  require_in_span(samples, thresholds);
  std::vector<Polytope> out;
  for (int i = 0; i < thresholds.interval_count(); ++i) {
    double tl = thresholds.values[i], tr = thresholds.values[i + 1];
    auto pts = interval_samples(samples, tl, tr);
    if (pts.empty()) throw_empty_interval(i, tl, tr);
    std::vector<Vec> vecs;
    vecs.reserve(pts.size());
    for (const auto& p : pts) {
      Vec v(2);
      v << p.x, p.y;
      vecs.push_back(std::move(v));
    }
    out.push_back(hull_of_points(vecs));
  }
  return out;
}

RangeMap fit_piecewise_linear(std::span<const RateSample> samples,
                              const ThresholdSet& thresholds) {
  check_thresholds(thresholds);
  require_regulated(samples);
  require_in_span(samples, thresholds);
  RangeMap map;
  map.kind = FitKind::kPiecewiseLinear;
  map.thresholds = thresholds;

  for (int i = 0; i < thresholds.interval_count(); ++i) {
    double tl = thresholds.values[i], tr = thresholds.values[i + 1];
    auto pts = interval_samples(samples, tl, tr);
    if (pts.empty()) throw_empty_interval(i, tl, tr);

    double rmin = pts[0].y, rmax = pts[0].y;
    for (const auto& p : pts) {
      rmin = std::min(rmin, p.y);
      rmax = std::max(rmax, p.y);
    }

    Chains ch = convex_chains(pts);
    std::vector<Line> uppers = chain_lines(ch.upper, rmax);
    std::vector<Line> lowers = chain_lines(ch.lower, rmin);

    const double w = tr - tl;
    double best_area = std::numeric_limits<double>::infinity();
    double best_perim = std::numeric_limits<double>::infinity();
    RangeMap::EndpointIntervals best{};
    bool found = false;

    for (const auto& up : uppers) {
      for (const auto& lo : lowers) {
        double ul = up.at(tl), ur = up.at(tr);
        double ll = lo.at(tl), lr = lo.at(tr);
        if (ul < ll - 1e-12 || ur < lr - 1e-12) continue;  // lines cross inside
        double hl = std::max(0.0, ul - ll), hr = std::max(0.0, ur - lr);
        double area = 0.5 * (hl + hr) * w;
        double perim = hl + hr + std::hypot(w, ur - ul) + std::hypot(w, lr - ll);
        RangeMap::EndpointIntervals cand{{ll, ul}, {lr, ur}};
        auto corners = [](const RangeMap::EndpointIntervals& t) {
          return std::array<double, 4>{t.left.lo, t.left.hi, t.right.lo, t.right.hi};
        };
        bool better = false;
        if (area < best_area - 1e-12) {
          better = true;
        } else if (area <= best_area + 1e-12) {
          if (perim < best_perim - 1e-12) {
            better = true;
          } else if (perim <= best_perim + 1e-12 && found && corners(cand) < corners(best)) {
            better = true;
          }
        }
        if (!found || better) {
          best_area = area;
          best_perim = perim;
          best = cand;
          found = true;
        }
      }
    }

    // Containment repair: floating-point slack can leave a sample a few ulps
    // outside the interpolated slice. Widen until every sample passes the
    // exact slice arithmetic.
    for (int pass = 0; pass < 16; ++pass) {
      double deficit_lo = 0.0, deficit_hi = 0.0;
      for (const auto& p : pts) {
        RateInterval s = pwl_slice(best, tl, tr, p.x);
        deficit_lo = std::max(deficit_lo, s.lo - p.y);
        deficit_hi = std::max(deficit_hi, p.y - s.hi);
      }
      if (deficit_lo <= 0.0 && deficit_hi <= 0.0) break;
      double bump_lo = std::max(2.0 * deficit_lo, 1e-13 * (1.0 + std::abs(best.left.lo)));
      double bump_hi = std::max(2.0 * deficit_hi, 1e-13 * (1.0 + std::abs(best.left.hi)));
      if (deficit_lo > 0.0) {
        best.left.lo -= bump_lo;
        best.right.lo -= bump_lo;
      }
      if (deficit_hi > 0.0) {
        best.left.hi += bump_hi;
        best.right.hi += bump_hi;
      }
    }

    map.trapezoids.push_back(best);
  }
  return map;
}

RateInterval slice(const RangeMap& map, double x, std::optional<int> interval_index) {
  if (map.kind == FitKind::kConstant) return map.boxes[0];
  if (!map.thresholds) throw ArgumentError("piecewise range map without thresholds");
  int i = resolve_interval(*map.thresholds, x, interval_index);
  if (map.kind == FitKind::kPiecewiseConstant) return map.boxes[i];
  return pwl_slice(map.trapezoids[i], map.thresholds->values[i],
                   map.thresholds->values[i + 1], x);
}

double interval_area(const RangeMap& map, int interval) {
  if (!map.thresholds) throw ArgumentError("fitted area needs thresholds");
  double w = map.thresholds->values[interval + 1] - map.thresholds->values[interval];
  if (map.kind == FitKind::kPiecewiseConstant) return map.boxes[interval].width() * w;
  if (map.kind == FitKind::kPiecewiseLinear) {
    const auto& t = map.trapezoids[interval];
    return 0.5 * (t.left.width() + t.right.width()) * w;
  }
  return map.boxes[0].width() * w;
}

double fitted_area(const RangeMap& map) {
  if (!map.thresholds) throw ArgumentError("fitted area needs thresholds");
  double total = 0.0;
  for (int i = 0; i < map.thresholds->interval_count(); ++i) total += interval_area(map, i);
  return total;
}

std::vector<double> threshold_candidates(double lo, double hi, int candidate_count,
                                         std::uint64_t seed) {
  if (!(lo < hi)) throw ArgumentError("threshold span must be nonempty");
  if (candidate_count < 0) throw ArgumentError("negative candidate count");
  std::mt19937_64 rng(mix_seed(seed, 0x7472657368ULL));
  std::vector<double> out;
  out.reserve(candidate_count);
  for (int i = 0; i < candidate_count; ++i) out.push_back(uniform_in(rng, lo, hi));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

// Total pwl area for bounds+subset thresholds, or nullopt when some interval
// has no samples.
std::optional<double> subset_area(std::span<const RateSample> samples, const std::string& gene,
                                  double lo, double hi, const std::vector<double>& interior) {
  ThresholdSet t;
  t.gene = gene;
  t.values.push_back(lo);
  for (double v : interior) t.values.push_back(v);
  t.values.push_back(hi);
  try {
    return fitted_area(fit_piecewise_linear(samples, t));
  } catch (const IdentificationError&) {
    return std::nullopt;
  }
}

}  // namespace

ThresholdSet select_thresholds(std::span<const RateSample> samples, const std::string& gene,
                               double lo, double hi, int candidate_count, int chosen_count,
                               std::uint64_t seed) {
  if (chosen_count < 2) throw ArgumentError("chosen_count must be at least 2");
  if (candidate_count < chosen_count) {
    throw ArgumentError("candidate_count must be at least chosen_count");
  }
  if (samples.empty()) throw ArgumentError("cannot select thresholds without samples");
  require_regulated(samples);

  std::vector<double> pool = threshold_candidates(lo, hi, candidate_count, seed);
  const int k = chosen_count - 2;

  auto finish = [&](const std::vector<double>& interior) {
    ThresholdSet t;
    t.gene = gene;
    t.values.push_back(lo);
    for (double v : interior) t.values.push_back(v);
    t.values.push_back(hi);
    return t;
  };

  if (k == 0) return finish({});

  if (static_cast<int>(pool.size()) < k) {
    throw ArgumentError("candidate pool too small after deduplication");
  }

  // Number of subsets, saturating at the exhaustive-search cap.
  const unsigned long long cap = 100000;
  unsigned long long combos = 1;
  for (int i = 0; i < k && combos <= cap; ++i) {
    combos = combos * static_cast<unsigned long long>(pool.size() - i) /
             static_cast<unsigned long long>(i + 1);
  }

  std::optional<double> best_area;
  std::vector<double> best_interior;

  if (combos <= cap) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::vector<double> interior;
      interior.reserve(k);
      for (int i : idx) interior.push_back(pool[i]);
      auto area = subset_area(samples, gene, lo, hi, interior);
      if (area && (!best_area || *area < *best_area - 1e-12 ||
                   (*area <= *best_area + 1e-12 && interior < best_interior))) {
        best_area = *area;
        best_interior = interior;
      }
      int pos = k - 1;
      while (pos >= 0 && idx[pos] == static_cast<int>(pool.size()) - k + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!best_area) {
      throw IdentificationError("no feasible threshold subset: data leaves intervals empty");
    }
    return finish(best_interior);
  }

  // Greedy forward selection.
  std::vector<double> interior;
  std::vector<bool> used(pool.size(), false);
  for (int step = 0; step < k; ++step) {
    std::optional<double> round_best;
    int round_idx = -1;
    for (int c = 0; c < static_cast<int>(pool.size()); ++c) {
      if (used[c]) continue;
      std::vector<double> trial = interior;
      trial.insert(std::upper_bound(trial.begin(), trial.end(), pool[c]), pool[c]);
      auto area = subset_area(samples, gene, lo, hi, trial);
      if (area && (!round_best || *area < *round_best - 1e-12)) {
        round_best = *area;
        round_idx = c;
      }
    }
    if (round_idx < 0) {
      throw IdentificationError("greedy threshold selection ran out of feasible candidates");
    }
    used[round_idx] = true;
    interior.insert(std::upper_bound(interior.begin(), interior.end(), pool[round_idx]),
                    pool[round_idx]);
  }
  return finish(interior);
}

}  // namespace partcheck
