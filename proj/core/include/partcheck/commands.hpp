#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "partcheck/config.hpp"
#include "partcheck/model_check.hpp"
#include "partcheck/report.hpp"

namespace partcheck {

// CLI-level options shared by every subcommand; unset fields fall back to
// the config's analysis section, then to per-promoter settings.
struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<FitKind> fit;
  std::optional<int> thresholds;
  std::optional<std::string> out;
};

struct EffectiveOptions {
  std::uint64_t seed = 0;
  std::optional<FitKind> fit_override;
  std::optional<int> threshold_override;
  std::filesystem::path out_dir;
};

EffectiveOptions resolve_options(const ProjectConfig& cfg, const CommonOptions& cli);

// One promoter's characterization outcome.
struct PromoterFit {
  std::string promoter;
  RangeMap map;
  std::vector<RateSample> samples;
};

// Rate samples extracted from the promoter's trajectory data.
std::vector<RateSample> extract_samples(const ProjectConfig& cfg, const PromoterConfig& p);

// Fit per the configured (or overridden) kind; selects thresholds when the
// policy asks for it.
PromoterFit characterize_promoter(const ProjectConfig& cfg, const PromoterConfig& p,
                                  const EffectiveOptions& opts);

std::string fit_to_json(const PromoterFit& fit);
// Parses a persisted fit and re-checks the capture guarantee on the stored
// samples; throws ConfigError when a sample escaped the fit.
PromoterFit fit_from_json(const std::string& text);

// Fits for every promoter wired in the device: persisted fits are loaded
// from <out>/fits/, everything else is fitted from data on the fly.
std::map<std::string, PromoterFit> resolve_fits(const ProjectConfig& cfg,
                                                const DeviceConfig& dev,
                                                const EffectiveOptions& opts);

struct BuiltModel {
  Device device;
  std::vector<Proposition> props;
  std::vector<Region> regions;
  Quotient quotient;
};

BuiltModel build_model(const ProjectConfig& cfg, const DeviceConfig& dev,
                       const std::map<std::string, PromoterFit>& fits,
                       std::vector<std::string>* warnings = nullptr);

VerifyReport run_verification(const ProjectConfig& cfg, const DeviceConfig& dev,
                              const SpecificationConfig& spec,
                              const std::map<std::string, PromoterFit>& fits,
                              const BuiltModel& model);

// Subcommand entry points (return process exit codes).
int cmd_characterize(const CommonOptions& cli, const std::string& promoter);
int cmd_simulate(const CommonOptions& cli, const std::string& promoter, int cells, int steps);
int cmd_verify(const CommonOptions& cli, const std::string& device, const std::string& spec,
               std::optional<double> min_satisfying);
int cmd_explore(const CommonOptions& cli, const std::string& topology,
                const std::vector<std::string>& specs);
int cmd_export_quotient(const CommonOptions& cli, const std::string& device,
                        const std::optional<std::string>& spec);

}  // namespace partcheck
