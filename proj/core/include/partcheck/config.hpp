#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "partcheck/device.hpp"
#include "partcheck/identification.hpp"

namespace partcheck {

struct GeneratorConfig {
  double hill_n = 2.0;
  double k = 1.0;
  double beta_max = 1.0;
  double beta_leak = 0.0;
  double noise_sd = 0.0;
  double regulator_init = -1.0;  // < 0: use the regulator gene's conc_max
  double reporter_init = 0.0;
};

struct ThresholdPolicy {
  std::vector<double> values;  // explicit full list (bounds included); wins if nonempty
  int count = 0;               // selected thresholds (including bounds) when values empty
  int candidates = 50;
};

struct PromoterConfig {
  std::string id;
  PromoterKind kind = PromoterKind::kConstitutive;
  std::string regulator;  // regulated only
  std::string data;       // trajectory CSV, relative to the config file
  std::string reporter;   // gene measured in the data
  std::string mode = "single_cell";  // or "population" (constitutive only)
  FitKind fit = FitKind::kPiecewiseLinear;
  ThresholdPolicy thresholds;
  std::optional<GeneratorConfig> generator;
};

struct DeviceConfig {
  std::string name;
  std::vector<WiringEntry> wiring;
};

struct PropositionConfig {
  std::string name;
  std::vector<double> c;
  double d = 0.0;
};

struct SpecificationConfig {
  std::string name;
  std::string formula;
};

struct AnalysisConfig {
  std::uint64_t seed = 0;
  std::optional<FitKind> fit;  // overrides every promoter's fit kind when set
  std::optional<int> thresholds;
  std::string out = "out";
};

struct ProjectConfig {
  int format_version = 1;
  std::vector<Gene> genes;
  std::vector<PromoterConfig> promoters;
  std::vector<DeviceConfig> devices;
  std::vector<PropositionConfig> propositions;
  std::vector<SpecificationConfig> specifications;
  AnalysisConfig analysis;
  std::filesystem::path base_dir;  // directory of the config file

  const Gene* find_gene(const std::string& id) const;
  const PromoterConfig* find_promoter(const std::string& id) const;
  const DeviceConfig* find_device(const std::string& name) const;
  const SpecificationConfig* find_specification(const std::string& name) const;

  std::filesystem::path resolve(const std::string& rel) const;
};

FitKind fit_kind_from_string(const std::string& s);
std::string to_string(FitKind kind);

// Loads and validates a project config (referential integrity across
// sections, exactly one fit kind per promoter, formulas parse against the
// declared proposition names).
ProjectConfig load_config(const std::filesystem::path& path);

}  // namespace partcheck
