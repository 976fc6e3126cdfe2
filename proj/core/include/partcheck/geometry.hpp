#pragma once

#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace partcheck {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Single global tolerance for feasibility/equality tests. All geometry is
// done in doubles; the data this toolkit consumes is empirical and never
// exact, so interval/rational arithmetic buys nothing here.
inline constexpr double kGeomEps = 1e-9;

// Full-dimensionality cutoff for region/transition accounting. Intersections
// with volume below this are treated as measure-zero contact.
inline constexpr double kVolEps = 1e-12;

// Halfspace {x | normal.x + offset <= 0}; normals are kept unit length.
struct Halfspace {
  Vec normal;
  double offset = 0.0;

  double eval(const Vec& x) const { return normal.dot(x) + offset; }
};

// Axis-aligned box given by per-axis intervals [lo_i, hi_i].
struct Box {
  Vec lo;
  Vec hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const;
  bool contains(const Vec& x, double tol = kGeomEps) const;
  Vec center() const { return 0.5 * (lo + hi); }
  std::vector<Vec> corners() const;  // all 2^N corners
  Vec sample(std::mt19937_64& rng) const;
};

// Bounded convex polytope carrying both representations. Construction
// computes vertices, facets and volume up front, so values are immutable
// afterwards and safe to share across threads.
//
// Degenerate (lower-dimensional) polytopes are legal; they report volume 0
// and their H-representation pins the affine hull with opposing halfspace
// pairs.
class Polytope {
public:
  // Zero-dimensional placeholder; every meaningful value comes from the
  // factory functions below.
  Polytope() = default;

  // Convex hull of a point set. Facet offsets are tightened over the input
  // points, so every input point satisfies the H-representation exactly.
  static Polytope from_points(const std::vector<Vec>& points);

  // Intersection of halfspaces. Returns nullopt when infeasible. The input
  // must describe a bounded set (all public call sites intersect with a
  // bounding box).
  static std::optional<Polytope> from_halfspaces(int dim, std::vector<Halfspace> hs);

  static Polytope from_box(const Box& box);

  int dim() const { return dim_; }
  const std::vector<Halfspace>& halfspaces() const { return hrep_; }
  const std::vector<Vec>& vertices() const { return vrep_; }
  double volume() const { return volume_; }

  bool contains(const Vec& x, double tol = kGeomEps) const;
  // Largest constraint violation at x (<= 0 inside); normals are unit, so
  // this is a signed distance surrogate.
  double max_violation(const Vec& x) const;

  // Strictly interior witness for full-dimensional polytopes (the vertex
  // centroid; cheap stand-in for a Chebyshev center at desk dimensions).
  Vec interior_point() const;

  Box bounding_box() const;

  // Point inside the polytope from a random convex combination of vertices.
  // Not uniform; meant for membership-style sampling.
  Vec sample_point(std::mt19937_64& rng) const;

private:
  int dim_ = 0;
  std::vector<Halfspace> hrep_;
  std::vector<Vec> vrep_;
  double volume_ = 0.0;
};

// --- polytope calculus -----------------------------------------------------

// Smallest convex polytope containing all points; redundant input points are
// absent from the vertex list.
Polytope hull_of_points(const std::vector<Vec>& points);

// Image {Ax | x in P} as the hull of vertex images. A must be square with
// matching dimension (it may be singular; the image is then degenerate).
Polytope affine_image(const Mat& a, const Polytope& p);

// Translate P by t.
Polytope translate(const Polytope& p, const Vec& t);

// Minkowski sum, computed as the hull of pairwise vertex sums.
Polytope minkowski_sum(const Polytope& p, const Polytope& q);

// H-representation concatenation, pruned; nullopt when infeasible.
std::optional<Polytope> intersect(const Polytope& p, const Polytope& q);

std::optional<Polytope> intersect_halfspace(const Polytope& p, const Halfspace& h);

double volume(const Polytope& p);

const std::vector<Vec>& vertices(const Polytope& p);

// Point-set equality up to kGeomEps (used for rep round-trip checks).
bool same_point_set(const std::vector<Vec>& a, const std::vector<Vec>& b,
                    double tol = 1e-7);

}  // namespace partcheck
