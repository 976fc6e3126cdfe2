#pragma once

#include <random>
#include <string>
#include <vector>

#include "partcheck/geometry.hpp"
#include "partcheck/identification.hpp"

namespace partcheck {

struct Gene {
  std::string id;
  double alpha = 0.5;  // retention factor per step, in (0,1)
  double conc_min = 0.0;
  double conc_max = 1.0;
};

enum class PromoterKind { kConstitutive, kRegulated };

struct Promoter {
  std::string id;
  PromoterKind kind = PromoterKind::kConstitutive;
  std::string regulator;  // gene id; regulated promoters carry exactly one
  RangeMap range;
};

struct WiringEntry {
  std::string gene;
  std::string promoter;
};

// Per-gene-axis RangeMap interval indices: which side of a shared threshold
// the promoter's rate set is read from. Entry i belongs to the promoter
// expressing gene i; -1 where the promoter is constitutive or constant.
struct RateContext {
  std::vector<int> promoter_interval;
};

struct StepResult {
  Vec state;
  bool clamped = false;
};

// A validated wiring of genes to promoters. Gene order defines the state
// axes everywhere downstream (polytopes, data files, reports). Immutable
// after assembly.
class Device {
public:
  // Empty placeholder; meaningful devices come from assemble().
  Device() = default;

  // Validates the wiring: every gene expressed from exactly one promoter,
  // regulators resolved within the device, regulated range maps spanning the
  // regulator's physiological bounds. Promoters in the pool that stay
  // unwired only produce a warning.
  static Device assemble(std::vector<Gene> genes, const std::vector<Promoter>& promoters,
                         const std::vector<WiringEntry>& wiring,
                         std::vector<std::string>* warnings = nullptr);

  int size() const { return static_cast<int>(genes_.size()); }
  const std::vector<Gene>& genes() const { return genes_; }
  int gene_axis(const std::string& id) const;
  const Promoter& promoter_of(int axis) const { return promoters_[axis]; }
  int regulator_axis(int axis) const { return regulator_axis_[axis]; }
  const Mat& a_matrix() const { return a_; }
  const Box& state_space() const { return space_; }
  bool any_piecewise_linear() const;

  // B(x) = B_1(x_{g'_1}) x ... x B_N(x_{g'_N}) as an axis-aligned rate box.
  // ctx resolves which interval applies when a regulator sits exactly on a
  // threshold; without it, threshold hits snap to the lower interval.
  Box rate_set(const Vec& x, const RateContext* ctx = nullptr) const;

  // One step x -> Ax + b with b drawn uniformly from rate_set(x); the result
  // is clamped to the state space and flagged when clamping occurred.
  StepResult step_sample(const Vec& x, std::mt19937_64& rng) const;

  int resolve_promoter_interval(int axis, double regulator_value) const;

private:
  std::vector<Gene> genes_;
  std::vector<Promoter> promoters_;  // promoters_[i] expresses genes_[i]
  std::vector<int> regulator_axis_;
  Mat a_;
  Box space_;
};

}  // namespace partcheck
