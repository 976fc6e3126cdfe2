#pragma once

#include <cstdint>

#include "partcheck/config.hpp"
#include "partcheck/csv.hpp"

namespace partcheck {

// Synthetic characterization experiment for one promoter: the regulator
// decays geometrically from a high initial concentration (no production),
// the reporter is driven by a noisy Hill repression law. Columns are
// [regulator, reporter] for regulated promoters, [reporter] otherwise.
// Noise is truncated at +-3 sigma so recovered rates provably stay within
// three standard deviations of the generating curve.
TrajectoryFile simulate_characterization(const ProjectConfig& cfg,
                                         const std::string& promoter_id, int cells, int steps,
                                         std::uint64_t seed);

}  // namespace partcheck
