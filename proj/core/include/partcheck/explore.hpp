#pragma once

#include <string>
#include <vector>

#include "partcheck/commands.hpp"

namespace partcheck {

// One wiring candidate for the two-gene mutual-repression template: gene a
// expressed from a promoter repressed by b and vice versa. Gene order (a <
// b by id) fixes the state axes, so template propositions read axis 0 as
// gene a.
struct ToggleCandidate {
  std::string name;
  std::string gene_a, gene_b;
  std::string promoter_for_a;  // regulated by gene_b
  std::string promoter_for_b;  // regulated by gene_a
  DeviceConfig device_config() const;
};

// All mutual-repression wirings constructible from the parts pool, in
// canonical (gene/promoter id) order, independent of pool ordering.
std::vector<ToggleCandidate> enumerate_mutual_repression(const ProjectConfig& cfg);

struct ExploreEntry {
  ToggleCandidate candidate;
  std::vector<std::pair<std::string, VerifyReport>> per_spec;
  double min_sat = 0.0;   // min over specs of the satisfying fraction
  double max_viol = 0.0;  // max over specs of the violating fraction
};

// Verifies every candidate against the given specifications and ranks by
// (min satisfying fraction desc, max violating fraction asc, name).
std::vector<ExploreEntry> explore_candidates(const ProjectConfig& cfg,
                                             const std::vector<std::string>& spec_names,
                                             const EffectiveOptions& opts);

void write_explore_text(std::ostream& os, const std::vector<ExploreEntry>& entries);
std::string explore_json(const std::vector<ExploreEntry>& entries);

}  // namespace partcheck
