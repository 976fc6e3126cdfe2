#include "partcheck/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "partcheck/errors.hpp"
#include "partcheck/rng.hpp"

namespace partcheck {
namespace {

double coord_scale(const std::vector<Vec>& pts) {
  double s = 1.0;
  for (const auto& p : pts) s = std::max(s, p.lpNorm<Eigen::Infinity>());
  return s;
}

// Lexicographic sort + adjacent merge; near-duplicates that survive are
// harmless to the hull algorithms downstream.
std::vector<Vec> dedupe_points(const std::vector<Vec>& pts, double tol) {
  std::vector<int> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    for (int k = 0; k < pts[a].size(); ++k) {
      if (pts[a][k] != pts[b][k]) return pts[a][k] < pts[b][k];
    }
    return false;
  });
  std::vector<Vec> out;
  for (int idx : order) {
    if (!out.empty() && (out.back() - pts[idx]).lpNorm<Eigen::Infinity>() <= tol) continue;
    out.push_back(pts[idx]);
  }
  return out;
}

struct AffineBasis {
  Vec base;
  Mat u;  // N x d, orthonormal columns spanning the affine hull
};

AffineBasis affine_basis(const std::vector<Vec>& pts, double tol) {
  const int n = static_cast<int>(pts[0].size());
  AffineBasis ab;
  ab.base = pts[0];
  std::vector<Vec> cols;
  for (const auto& p : pts) {
    if (static_cast<int>(cols.size()) == n) break;
    Vec v = p - ab.base;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& c : cols) v -= c.dot(v) * c;
    }
    double nv = v.norm();
    if (nv > tol) cols.push_back(v / nv);
  }
  ab.u.resize(n, static_cast<int>(cols.size()));
  for (int j = 0; j < static_cast<int>(cols.size()); ++j) ab.u.col(j) = cols[j];
  return ab;
}

// Orthonormal basis of the hyperplane orthogonal to unit vector n.
Mat hyperplane_basis(const Vec& n) {
  const int dim = static_cast<int>(n.size());
  Mat basis(dim, dim - 1);
  int col = 0;
  std::vector<Vec> cols{n};
  for (int k = 0; k < dim && col < dim - 1; ++k) {
    Vec v = Vec::Zero(dim);
    v[k] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& c : cols) v -= c.dot(v) * c;
    }
    double nv = v.norm();
    if (nv > 1e-8) {
      v /= nv;
      cols.push_back(v);
      basis.col(col++) = v;
    }
  }
  return basis;
}

double cross2(const Vec& o, const Vec& a, const Vec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain; returns CCW ring of vertex indices into pts,
// strictly convex turns only (collinear midpoints dropped).
std::vector<int> chain_hull_2d(const std::vector<Vec>& pts, double turn_tol) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (pts[a][0] != pts[b][0]) return pts[a][0] < pts[b][0];
    return pts[a][1] < pts[b][1];
  });

  auto build = [&](const std::vector<int>& seq) {
    std::vector<int> chain;
    for (int idx : seq) {
      while (chain.size() >= 2 &&
             cross2(pts[chain[chain.size() - 2]], pts[chain.back()], pts[idx]) <= turn_tol) {
        chain.pop_back();
      }
      chain.push_back(idx);
    }
    return chain;
  };

  std::vector<int> lower = build(order);
  std::vector<int> rev(order.rbegin(), order.rend());
  std::vector<int> upper = build(rev);

  std::vector<int> ring = lower;
  for (std::size_t i = 1; i + 1 < upper.size(); ++i) ring.push_back(upper[i]);
  return ring;
}

struct HullResult {
  std::vector<Halfspace> facets;   // offsets NOT yet tightened
  std::vector<int> vertex_idx;     // indices into the input point list
};

std::vector<Halfspace> dedupe_halfspaces(std::vector<Halfspace> hs, double tol) {
  std::vector<Halfspace> out;
  for (auto& h : hs) {
    bool dup = false;
    for (const auto& g : out) {
      if ((g.normal - h.normal).lpNorm<Eigen::Infinity>() <= tol &&
          std::abs(g.offset - h.offset) <= tol * 10.0) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(h));
  }
  return out;
}

// For every combination of k indices out of n, call fn(indices).
template <typename Fn>
void for_each_combination(int n, int k, Fn&& fn) {
  if (k > n || k <= 0) return;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Brute-force facet enumeration for full-dimensional point sets, d >= 3.
// O(C(n,d) * n); fine for the small point sets that reach this path.
std::vector<Halfspace> brute_facets(const std::vector<Vec>& pts, double scale) {
  const int dim = static_cast<int>(pts[0].size());
  const double side_tol = 10.0 * kGeomEps * scale;
  std::vector<Halfspace> facets;

  for_each_combination(static_cast<int>(pts.size()), dim, [&](const std::vector<int>& idx) {
    Vec normal(dim);
    if (dim == 3) {
      Eigen::Vector3d a = pts[idx[1]].head<3>() - pts[idx[0]].head<3>();
      Eigen::Vector3d b = pts[idx[2]].head<3>() - pts[idx[0]].head<3>();
      Eigen::Vector3d c = a.cross(b);
      normal = c;
    } else {
      Mat m(dim - 1, dim);
      for (int r = 1; r < dim; ++r) m.row(r - 1) = (pts[idx[r]] - pts[idx[0]]).transpose();
      Eigen::FullPivLU<Mat> lu(m);
      lu.setThreshold(1e-10);
      if (lu.dimensionOfKernel() != 1) return;
      normal = lu.kernel().col(0);
    }
    double nn = normal.norm();
    if (nn <= 1e-12 * scale) return;
    normal /= nn;

    double ref = normal.dot(pts[idx[0]]);
    double smax = -std::numeric_limits<double>::infinity();
    double smin = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) {
      double s = normal.dot(p);
      smax = std::max(smax, s);
      smin = std::min(smin, s);
    }
    if (smax - ref <= side_tol) facets.push_back({normal, -ref});
    if (ref - smin <= side_tol) facets.push_back({-normal, ref});
  });

  return dedupe_halfspaces(std::move(facets), 1e-7);
}

// Full-dimensional hull dispatch (affine rank of pts equals their dimension).
HullResult hull_full_dim(const std::vector<Vec>& pts, double scale) {
  const int dim = static_cast<int>(pts[0].size());
  HullResult hr;

  if (dim == 1) {
    int imin = 0, imax = 0;
    for (int i = 1; i < static_cast<int>(pts.size()); ++i) {
      if (pts[i][0] < pts[imin][0]) imin = i;
      if (pts[i][0] > pts[imax][0]) imax = i;
    }
    Vec plus = Vec::Constant(1, 1.0), minus = Vec::Constant(1, -1.0);
    hr.facets.push_back({plus, -pts[imax][0]});
    hr.facets.push_back({minus, pts[imin][0]});
    hr.vertex_idx = {imin, imax};
    return hr;
  }

  if (dim == 2) {
    double turn_tol = kGeomEps * scale * scale;
    hr.vertex_idx = chain_hull_2d(pts, turn_tol);
    const int m = static_cast<int>(hr.vertex_idx.size());
    for (int i = 0; i < m; ++i) {
      const Vec& a = pts[hr.vertex_idx[i]];
      const Vec& b = pts[hr.vertex_idx[(i + 1) % m]];
      Vec d = b - a;
      double len = d.norm();
      if (len <= 1e-14 * scale) continue;
      Vec n(2);
      n[0] = d[1] / len;
      n[1] = -d[0] / len;
      hr.facets.push_back({n, -n.dot(a)});
    }
    return hr;
  }

  hr.facets = brute_facets(pts, scale);
  // A point is a vertex iff its active facet normals span the space.
  const double act_tol = 1e-7 * scale;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    Mat act(0, dim);
    for (const auto& h : hr.facets) {
      if (std::abs(h.eval(pts[i])) <= act_tol) {
        act.conservativeResize(act.rows() + 1, dim);
        act.row(act.rows() - 1) = h.normal.transpose();
      }
    }
    if (act.rows() < dim) continue;
    Eigen::FullPivLU<Mat> lu(act);
    lu.setThreshold(1e-7);
    if (lu.rank() == dim) hr.vertex_idx.push_back(i);
  }
  return hr;
}

// Hull of an arbitrary point set: handles lower-dimensional sets by
// recursing inside the affine hull and lifting facets back, adding opposing
// halfspace pairs for the orthogonal complement.
HullResult hull_any(const std::vector<Vec>& pts, double scale) {
  const int dim = static_cast<int>(pts[0].size());
  AffineBasis ab = affine_basis(pts, 10.0 * kGeomEps * scale);
  const int rank = static_cast<int>(ab.u.cols());

  if (rank == dim) return hull_full_dim(pts, scale);

  HullResult hr;
  if (rank == 0) {
    hr.vertex_idx = {0};
  } else {
    std::vector<Vec> proj(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) proj[i] = ab.u.transpose() * (pts[i] - ab.base);
    HullResult sub = hull_any(proj, scale);
    hr.vertex_idx = sub.vertex_idx;
    for (const auto& f : sub.facets) {
      Vec n = ab.u * f.normal;
      double nn = n.norm();
      if (nn <= 1e-12) continue;
      // Offsets are placeholders here; from_points tightens them over the
      // input points afterwards.
      hr.facets.push_back({n / nn, 0.0});
    }
  }

  // Pin the affine hull: opposing pairs along each complement direction.
  // Offsets are placeholders; tightening over the input points follows.
  std::vector<Vec> cols;
  for (int j = 0; j < rank; ++j) cols.push_back(ab.u.col(j));
  for (int k = 0; k < dim && static_cast<int>(cols.size()) < dim; ++k) {
    Vec v = Vec::Zero(dim);
    v[k] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& c : cols) v -= c.dot(v) * c;
    }
    double nv = v.norm();
    if (nv > 1e-8) {
      v /= nv;
      cols.push_back(v);
      hr.facets.push_back({v, 0.0});
      hr.facets.push_back({-v, 0.0});
    }
  }
  return hr;
}

// Make every input point satisfy each halfspace exactly: the offset becomes
// the observed maximum of normal.x. This is what turns the paper-level
// "contains all data" guarantee into a bitwise one.
void tighten_offsets(std::vector<Halfspace>& hs, const std::vector<Vec>& pts) {
  for (auto& h : hs) {
    double smax = -std::numeric_limits<double>::infinity();
    for (const auto& p : pts) smax = std::max(smax, h.normal.dot(p));
    h.offset = -smax;
  }
}

double measure_of_point_set(std::vector<Vec> pts, double scale);

// Cone-from-centroid volume over facet slabs; facet measures recurse.
double cone_volume(int dim, const std::vector<Halfspace>& hrep, const std::vector<Vec>& verts,
                   double scale) {
  Vec o = Vec::Zero(dim);
  for (const auto& v : verts) o += v;
  o /= static_cast<double>(verts.size());

  const double act_tol = 1e-7 * scale;
  double total = 0.0;
  for (const auto& h : hrep) {
    double dist = -h.eval(o);
    if (dist <= act_tol) continue;  // degenerate or equality-pair plane
    std::vector<Vec> face_pts;
    for (const auto& v : verts) {
      if (std::abs(h.eval(v)) <= act_tol) face_pts.push_back(v);
    }
    if (static_cast<int>(face_pts.size()) < dim) continue;
    Mat basis = hyperplane_basis(h.normal);
    std::vector<Vec> proj(face_pts.size());
    for (std::size_t i = 0; i < face_pts.size(); ++i) {
      proj[i] = basis.transpose() * (face_pts[i] - face_pts[0]);
    }
    total += dist * measure_of_point_set(std::move(proj), scale) / static_cast<double>(dim);
  }
  return total;
}

// Lebesgue measure of the convex hull of pts within their own dimension;
// 0 when the set is not full-dimensional.
double measure_of_point_set(std::vector<Vec> pts, double scale) {
  if (pts.empty()) return 0.0;
  const int dim = static_cast<int>(pts[0].size());
  if (static_cast<int>(pts.size()) <= dim) return 0.0;

  AffineBasis ab = affine_basis(pts, 10.0 * kGeomEps * scale);
  if (static_cast<int>(ab.u.cols()) < dim) return 0.0;

  if (dim == 1) {
    double lo = pts[0][0], hi = pts[0][0];
    for (const auto& p : pts) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    return hi - lo;
  }

  if (dim == 2) {
    std::vector<int> ring = chain_hull_2d(pts, kGeomEps * scale * scale);
    double area = 0.0;
    const int m = static_cast<int>(ring.size());
    for (int i = 0; i < m; ++i) {
      const Vec& a = pts[ring[i]];
      const Vec& b = pts[ring[(i + 1) % m]];
      area += a[0] * b[1] - b[0] * a[1];
    }
    return 0.5 * std::abs(area);
  }

  std::vector<Vec> dd = dedupe_points(pts, kGeomEps * scale);
  std::vector<Halfspace> facets = brute_facets(dd, scale);
  return cone_volume(dim, facets, dd, scale);
}

}  // namespace

// --- Box ---------------------------------------------------------------

double Box::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= std::max(0.0, hi[i] - lo[i]);
  return v;
}

bool Box::contains(const Vec& x, double tol) const {
  for (int i = 0; i < dim(); ++i) {
    if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
  }
  return true;
}

std::vector<Vec> Box::corners() const {
  const int n = dim();
  std::vector<Vec> out;
  out.reserve(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Vec c(n);
    for (int i = 0; i < n; ++i) c[i] = (mask >> i & 1) ? hi[i] : lo[i];
    out.push_back(std::move(c));
  }
  return out;
}

Vec Box::sample(std::mt19937_64& rng) const {
  Vec x(dim());
  for (int i = 0; i < dim(); ++i) x[i] = uniform_in(rng, lo[i], hi[i]);
  return x;
}

// --- Polytope ------------------------------------------------------------

Polytope Polytope::from_points(const std::vector<Vec>& points) {
  if (points.empty()) throw ArgumentError("hull of empty point set");
  const int dim = static_cast<int>(points[0].size());
  if (dim < 1) throw ArgumentError("hull of zero-dimensional points");
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != dim) {
      throw ArgumentError("inconsistent point dimensions in hull input");
    }
  }

  const double scale = coord_scale(points);
  std::vector<Vec> dd = dedupe_points(points, kGeomEps * scale);

  Polytope p;
  p.dim_ = dim;
  if (dd.size() == 1) {
    p.vrep_ = {dd[0]};
    for (int i = 0; i < dim; ++i) {
      Vec e = Vec::Zero(dim);
      e[i] = 1.0;
      p.hrep_.push_back({e, 0.0});
      p.hrep_.push_back({-e, 0.0});
    }
  } else {
    HullResult hr = hull_any(dd, scale);
    for (int idx : hr.vertex_idx) p.vrep_.push_back(dd[idx]);
    p.hrep_ = std::move(hr.facets);
  }
  tighten_offsets(p.hrep_, points);
  // Direct forms for low dimensions avoid the facet-activity tolerance.
  p.volume_ = (dim <= 2) ? measure_of_point_set(p.vrep_, scale)
                         : cone_volume(dim, p.hrep_, p.vrep_, scale);
  return p;
}

std::optional<Polytope> Polytope::from_halfspaces(int dim, std::vector<Halfspace> hs) {
  if (dim < 1) throw ArgumentError("polytope dimension must be positive");
  std::vector<Halfspace> norm;
  for (auto& h : hs) {
    if (static_cast<int>(h.normal.size()) != dim) {
      throw ArgumentError("halfspace dimension mismatch");
    }
    double nn = h.normal.norm();
    if (nn <= 1e-14) {
      if (h.offset > kGeomEps) return std::nullopt;  // 0 <= -c violated
      continue;                                      // trivially true
    }
    norm.push_back({h.normal / nn, h.offset / nn});
  }
  norm = dedupe_halfspaces(std::move(norm), 1e-9);
  const int m = static_cast<int>(norm.size());
  if (m < dim + 1) return std::nullopt;  // cannot bound a polytope

  // Basic feasible solutions: every vertex of a bounded polyhedron is the
  // intersection of dim linearly independent active constraints.
  std::vector<Vec> cand;
  Mat a(dim, dim);
  Vec b(dim);
  for_each_combination(m, dim, [&](const std::vector<int>& idx) {
    for (int r = 0; r < dim; ++r) {
      a.row(r) = norm[idx[r]].normal.transpose();
      b[r] = -norm[idx[r]].offset;
    }
    Eigen::FullPivLU<Mat> lu(a);
    lu.setThreshold(1e-10);
    if (!lu.isInvertible()) return;
    Vec x = lu.solve(b);
    if ((a * x - b).lpNorm<Eigen::Infinity>() > 1e-8 * (1.0 + b.lpNorm<Eigen::Infinity>())) return;
    double feas_tol = 16.0 * kGeomEps * (1.0 + x.lpNorm<Eigen::Infinity>());
    for (const auto& h : norm) {
      if (h.eval(x) > feas_tol) return;
    }
    cand.push_back(x);
  });
  if (cand.empty()) return std::nullopt;

  const double scale = coord_scale(cand);
  std::vector<Vec> verts = dedupe_points(cand, 1e-8 * (1.0 + scale));

  // Prune halfspaces not active at any vertex.
  const double act_tol = 1e-7 * (1.0 + scale);
  std::vector<Halfspace> pruned;
  for (const auto& h : norm) {
    for (const auto& v : verts) {
      if (std::abs(h.eval(v)) <= act_tol) {
        pruned.push_back(h);
        break;
      }
    }
  }

  Polytope p;
  p.dim_ = dim;
  p.hrep_ = std::move(pruned);
  p.vrep_ = std::move(verts);
  p.volume_ = (dim <= 2) ? measure_of_point_set(p.vrep_, scale)
                         : cone_volume(dim, p.hrep_, p.vrep_, scale);
  return p;
}

Polytope Polytope::from_box(const Box& box) {
  const int dim = box.dim();
  if (dim < 1) throw ArgumentError("box dimension must be positive");
  for (int i = 0; i < dim; ++i) {
    if (box.lo[i] > box.hi[i]) throw ArgumentError("box with lo > hi");
  }
  Polytope p;
  p.dim_ = dim;
  for (int i = 0; i < dim; ++i) {
    Vec e = Vec::Zero(dim);
    e[i] = 1.0;
    p.hrep_.push_back({e, -box.hi[i]});
    p.hrep_.push_back({-e, box.lo[i]});
  }
  const double scale = 1.0 + std::max(box.lo.lpNorm<Eigen::Infinity>(), box.hi.lpNorm<Eigen::Infinity>());
  p.vrep_ = dedupe_points(box.corners(), kGeomEps * scale);
  p.volume_ = box.volume();
  return p;
}

bool Polytope::contains(const Vec& x, double tol) const {
  for (const auto& h : hrep_) {
    if (h.eval(x) > tol) return false;
  }
  return true;
}

double Polytope::max_violation(const Vec& x) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& h : hrep_) worst = std::max(worst, h.eval(x));
  return worst;
}

Vec Polytope::interior_point() const {
  Vec o = Vec::Zero(dim_);
  for (const auto& v : vrep_) o += v;
  return o / static_cast<double>(vrep_.size());
}

Box Polytope::bounding_box() const {
  Box b;
  b.lo = Vec::Constant(dim_, std::numeric_limits<double>::infinity());
  b.hi = Vec::Constant(dim_, -std::numeric_limits<double>::infinity());
  for (const auto& v : vrep_) {
    b.lo = b.lo.cwiseMin(v);
    b.hi = b.hi.cwiseMax(v);
  }
  return b;
}

Vec Polytope::sample_point(std::mt19937_64& rng) const {
  // Random convex combination with exponential weights.
  std::vector<double> w(vrep_.size());
  double sum = 0.0;
  for (auto& wi : w) {
    wi = -std::log(std::max(uniform_unit(rng), 1e-300));
    sum += wi;
  }
  Vec x = Vec::Zero(dim_);
  for (std::size_t i = 0; i < vrep_.size(); ++i) x += (w[i] / sum) * vrep_[i];
  return x;
}

// --- free functions --------------------------------------------------------

Polytope hull_of_points(const std::vector<Vec>& points) { return Polytope::from_points(points); }

Polytope affine_image(const Mat& a, const Polytope& p) {
  if (a.rows() != a.cols()) throw ArgumentError("affine_image requires a square matrix");
  if (a.cols() != p.dim()) throw ArgumentError("affine_image dimension mismatch");
  std::vector<Vec> img;
  img.reserve(p.vertices().size());
  for (const auto& v : p.vertices()) img.push_back(a * v);
  return Polytope::from_points(img);
}

Polytope translate(const Polytope& p, const Vec& t) {
  if (t.size() != p.dim()) throw ArgumentError("translate dimension mismatch");
  std::vector<Vec> pts;
  pts.reserve(p.vertices().size());
  for (const auto& v : p.vertices()) pts.push_back(v + t);
  return Polytope::from_points(pts);
}

Polytope minkowski_sum(const Polytope& p, const Polytope& q) {
  if (p.dim() != q.dim()) throw ArgumentError("minkowski_sum dimension mismatch");
  std::vector<Vec> sums;
  sums.reserve(p.vertices().size() * q.vertices().size());
  for (const auto& u : p.vertices()) {
    for (const auto& v : q.vertices()) sums.push_back(u + v);
  }
  return Polytope::from_points(sums);
}

std::optional<Polytope> intersect(const Polytope& p, const Polytope& q) {
  if (p.dim() != q.dim()) throw ArgumentError("intersect dimension mismatch");
  std::vector<Halfspace> hs = p.halfspaces();
  hs.insert(hs.end(), q.halfspaces().begin(), q.halfspaces().end());
  return Polytope::from_halfspaces(p.dim(), std::move(hs));
}

std::optional<Polytope> intersect_halfspace(const Polytope& p, const Halfspace& h) {
  std::vector<Halfspace> hs = p.halfspaces();
  hs.push_back(h);
  return Polytope::from_halfspaces(p.dim(), std::move(hs));
}

double volume(const Polytope& p) { return p.volume(); }

const std::vector<Vec>& vertices(const Polytope& p) { return p.vertices(); }

bool same_point_set(const std::vector<Vec>& a, const std::vector<Vec>& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& pa : a) {
    bool found = false;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && (pa - b[j]).lpNorm<Eigen::Infinity>() <= tol) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace partcheck
