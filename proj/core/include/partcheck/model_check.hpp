#pragma once

#include <map>
#include <vector>

#include "partcheck/abstraction.hpp"
#include "partcheck/buchi.hpp"
#include "partcheck/ltl.hpp"

namespace partcheck {

// Ultimately periodic path through the quotient (state indices; may pass
// through OUT).
struct WitnessLasso {
  std::vector<int> prefix;
  std::vector<int> cycle;
};

struct ModelCheckResult {
  // Per region: 's' (all paths satisfy), 'v' (all paths violate), 'u'.
  std::vector<char> verdict;
  std::vector<int> sat_regions;
  std::vector<int> viol_regions;
  // One unminimized violating run per violating region.
  std::map<int, WitnessLasso> witnesses;
};

// Universal model checking of the quotient: a region satisfies f iff no
// path from it satisfies !f (emptiness of the product with the Buchi
// automaton of !f via accepting-cycle search); the violating set is computed
// symmetrically with f. The two sets are disjoint by construction.
ModelCheckResult model_check(const Quotient& q, const ltl::FormulaPtr& f);

struct VerificationResult {
  ModelCheckResult mc;
  double sat_fraction = 0.0;
  double viol_fraction = 0.0;
  double undecided_fraction = 0.0;
  std::vector<char> out_reaching;  // per region: can the region reach OUT?
  double out_reaching_fraction = 0.0;
};

// Region-id sets plus relative volumes; fractions are relative to the given
// feasible-space volume, so they sum to 1 up to the partition's conservation
// error.
VerificationResult regions_and_volumes(const ModelCheckResult& mc, const Quotient& q,
                                       const std::vector<Region>& regions,
                                       double space_volume);

}  // namespace partcheck
