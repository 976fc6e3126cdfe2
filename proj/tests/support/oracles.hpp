// Test-side oracles, deliberately independent of the library's own
// algorithms: gift wrapping instead of monotone chain, Fourier-Motzkin
// instead of vertex enumeration, rejection sampling instead of simplicial
// volumes.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "partcheck/abstraction.hpp"
#include "partcheck/geometry.hpp"
#include "partcheck/ltl.hpp"

namespace oracles {

// Jarvis march; returns the hull vertices of a 2D point set in boundary
// order. O(n*h) with an O(n^2) collinearity sweep per step.
std::vector<partcheck::Vec> gift_wrap_2d(const std::vector<partcheck::Vec>& pts);

// Fourier-Motzkin feasibility of {x | n.x + c <= 0 for all constraints}.
bool fm_feasible(std::vector<partcheck::Halfspace> hs, int dim, double tol = 1e-7);

// Monte-Carlo volume estimate by rejection sampling the bounding box.
double mc_volume(const partcheck::Polytope& p, int samples, std::mt19937_64& rng);

// Exact Euclidean distance from a point to a convex 2D polytope.
double distance_to_polygon(const partcheck::Vec& x, const partcheck::Polytope& poly);

// Uniform sample inside a polytope by rejection from its bounding box.
partcheck::Vec rejection_sample(const partcheck::Polytope& p, std::mt19937_64& rng);

// --- LTL-side oracles -------------------------------------------------------

// The twelve stock formulas used for cross-validating the Buchi translation
// and the model checker (atoms p1, p2, p3). Chosen so that simple-lasso
// enumeration is a complete proof system over small quotients: each formula's
// violation (and its negation's) is witnessed by a simple prefix path plus a
// simple cycle. Nested X or multi-target liveness conjunctions do not have
// that property (their witnesses can need revisits), so they stay out.
const std::vector<std::string>& stock_formulas();

// Per-state universal verdict by exhaustive enumeration of simple lassos
// (simple prefix path up to n states, simple cycle up to n states): 's' if
// every lasso satisfies f, 'v' if none does, 'u' otherwise.
std::vector<char> lasso_enum_verdicts(const partcheck::Quotient& q,
                                      const partcheck::ltl::FormulaPtr& f);

// Random quotient with total transitions and random labels over the atoms.
partcheck::Quotient random_quotient(std::mt19937_64& rng, int max_states,
                                    const std::vector<std::string>& atoms);

// Random lasso word over the given atoms.
partcheck::ltl::LassoWord random_lasso(std::mt19937_64& rng,
                                       const std::vector<std::string>& atoms, int max_prefix,
                                       int max_cycle);

}  // namespace oracles
