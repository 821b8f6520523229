#include "lg/hull.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "lg/errors.hpp"

namespace lg {
namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct Facet {
  std::vector<std::size_t> verts;  // sorted, size d
  Vec normal;
  double offset = 0.0;
};

// Unit normal of the hyperplane through d points in R^d, oriented so that
// `inside` lies on the negative side. Returns false for a degenerate facet.
bool facet_plane(const std::vector<Vec>& pts, const std::vector<std::size_t>& verts,
                 const Vec& inside, Vec& normal, double& offset) {
  const auto d = static_cast<Eigen::Index>(verts.size());
  Mat m(d - 1, d);
  for (Eigen::Index i = 1; i < d; ++i) m.row(i - 1) = (pts[verts[i]] - pts[verts[0]]).transpose();
  Eigen::FullPivLU<Mat> lu(m);
  lu.setThreshold(1e-13);
  Mat ker = lu.kernel();
  if (ker.cols() != 1) return false;
  normal = ker.col(0).normalized();
  offset = normal.dot(pts[verts[0]]);
  if (normal.dot(inside) > offset) {
    normal = -normal;
    offset = -offset;
  }
  return true;
}

double dist_to_span(const std::vector<Vec>& pts, const std::vector<std::size_t>& chosen,
                    const Vec& p) {
  // Gram-Schmidt residual of p - pts[chosen[0]] against the chosen directions.
  std::vector<Vec> q;
  for (std::size_t i = 1; i < chosen.size(); ++i) {
    Vec v = pts[chosen[i]] - pts[chosen[0]];
    for (const Vec& u : q) v -= u.dot(v) * u;
    const double n = v.norm();
    if (n > 0) q.push_back(v / n);
  }
  Vec r = p - pts[chosen[0]];
  for (const Vec& u : q) r -= u.dot(r) * u;
  return r.norm();
}

// Facet normals of the full-dimensional hull of pts (in R^d, d >= 2).
std::vector<Vec> full_dimensional_normals(const std::vector<Vec>& pts) {
  const std::size_t d = static_cast<std::size_t>(pts[0].size());
  double scale = 0.0;
  for (const Vec& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double eps = 1e-11 * std::max(1.0, scale);

  std::vector<std::size_t> simplex{0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i](0) < pts[simplex[0]](0)) simplex[0] = i;
  }
  while (simplex.size() < d + 1) {
    std::size_t best = pts.size();
    double best_d = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double dd = dist_to_span(pts, simplex, pts[i]);
      if (dd > best_d) {
        best_d = dd;
        best = i;
      }
    }
    if (best_d <= eps) throw DegenerateInputError("convex_hull: affine rank estimate failed");
    simplex.push_back(best);
  }

  Vec inside = Vec::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t i : simplex) inside += pts[i];
  inside /= static_cast<double>(simplex.size());

  std::vector<Facet> facets;
  auto add_facet = [&](std::vector<std::size_t> verts) {
    std::sort(verts.begin(), verts.end());
    Facet f;
    f.verts = std::move(verts);
    if (facet_plane(pts, f.verts, inside, f.normal, f.offset)) facets.push_back(std::move(f));
  };
  for (std::size_t skip = 0; skip < simplex.size(); ++skip) {
    std::vector<std::size_t> verts;
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i != skip) verts.push_back(simplex[i]);
    }
    add_facet(verts);
  }

  std::vector<char> in_simplex(pts.size(), 0);
  for (std::size_t i : simplex) in_simplex[i] = 1;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    if (in_simplex[p]) continue;
    std::vector<char> visible(facets.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < facets.size(); ++f) {
      if (facets[f].normal.dot(pts[p]) - facets[f].offset > eps) {
        visible[f] = 1;
        any = true;
      }
    }
    if (!any) continue;
    // Ridges seen once among visible facets form the horizon.
    std::map<std::vector<std::size_t>, int> ridge_count;
    for (std::size_t f = 0; f < facets.size(); ++f) {
      if (!visible[f]) continue;
      for (std::size_t skip = 0; skip < facets[f].verts.size(); ++skip) {
        std::vector<std::size_t> ridge;
        for (std::size_t i = 0; i < facets[f].verts.size(); ++i) {
          if (i != skip) ridge.push_back(facets[f].verts[i]);
        }
        ++ridge_count[ridge];
      }
    }
    std::vector<Facet> kept;
    for (std::size_t f = 0; f < facets.size(); ++f) {
      if (!visible[f]) kept.push_back(std::move(facets[f]));
    }
    facets = std::move(kept);
    for (const auto& [ridge, count] : ridge_count) {
      if (count != 1) continue;
      std::vector<std::size_t> verts = ridge;
      verts.push_back(p);
      add_facet(verts);
    }
  }

  std::vector<Vec> normals;
  for (const Facet& f : facets) normals.push_back(f.normal);
  return normals;
}

}  // namespace

HullRepresentation convex_hull(const std::vector<Vector>& points) {
  if (points.empty()) throw ArgumentError("convex_hull: empty input");
  const std::size_t n = points[0].size();
  if (n == 0) throw DimensionError("convex_hull: zero-dimensional points");
  if (n > kMaxHullDimension) throw ArgumentError("convex_hull: dimension above 8");
  for (const Vector& p : points) {
    require_same_dimension(points[0], p);
    if (!p.all_finite()) throw ArgumentError("convex_hull: non-finite coordinate");
  }

  std::vector<Vector> uniq = points;
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

  const auto ni = static_cast<Eigen::Index>(n);
  Vec centroid = Vec::Zero(ni);
  std::vector<Vec> pts;
  for (const Vector& p : uniq) {
    pts.push_back(Eigen::Map<const Vec>(p.coords().data(), ni));
    centroid += pts.back();
  }
  centroid /= static_cast<double>(pts.size());

  Mat centered(static_cast<Eigen::Index>(pts.size()), ni);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    centered.row(static_cast<Eigen::Index>(i)) = (pts[i] - centroid).transpose();
  }
  Eigen::JacobiSVD<Mat> svd(centered, Eigen::ComputeFullV);
  const Vec sv = svd.singularValues();
  double scale = 0.0;
  for (const Vec& p : pts) scale = std::max(scale, (p - centroid).cwiseAbs().maxCoeff());
  const double rank_tol = 1e-10 * std::max(1.0, scale) * std::sqrt(static_cast<double>(pts.size()));
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rank_tol) ++rank;
  }
  const Mat& v = svd.matrixV();

  HullRepresentation h;
  h.dimension = n;
  h.origin = Vector(std::vector<double>(centroid.data(), centroid.data() + ni));
  for (Eigen::Index j = 0; j < rank; ++j) {
    const Vec col = v.col(j);
    h.basis.emplace_back(std::vector<double>(col.data(), col.data() + ni));
  }

  // Offsets are tightened to the maximum over inputs so every input point
  // satisfies every constraint without slack.
  auto push = [&](const Vec& a) {
    HalfSpace hs;
    hs.normal = Vector(std::vector<double>(a.data(), a.data() + ni));
    double b = -INFINITY;
    for (const Vec& p : pts) b = std::max(b, a.dot(p));
    hs.offset = b;
    h.constraints.push_back(std::move(hs));
  };

  for (Eigen::Index j = rank; j < ni; ++j) {
    push(v.col(j));
    push(-v.col(j));
  }

  if (rank == 1) {
    push(v.col(0));
    push(-v.col(0));
  } else if (rank >= 2) {
    const Mat frame = v.leftCols(rank);
    std::vector<Vec> proj;
    proj.reserve(pts.size());
    for (const Vec& p : pts) proj.push_back(frame.transpose() * (p - centroid));
    std::vector<Vec> lifted;
    for (const Vec& a : full_dimensional_normals(proj)) lifted.push_back((frame * a).normalized());
    std::sort(lifted.begin(), lifted.end(), [](const Vec& a, const Vec& b) {
      return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                          b.data() + b.size());
    });
    std::vector<Vec> merged;
    for (const Vec& a : lifted) {
      const bool dup = std::any_of(merged.begin(), merged.end(),
                                   [&](const Vec& m) { return (m - a).norm() < 1e-9; });
      if (!dup) merged.push_back(a);
    }
    for (const Vec& a : merged) push(a);
  }
  return h;
}

bool hull_contains(const HullRepresentation& h, const Vector& x, const Tolerances& tol) {
  if (x.size() != h.dimension) throw DimensionError("hull_contains: dimension mismatch");
  return std::all_of(h.constraints.begin(), h.constraints.end(), [&](const HalfSpace& c) {
    return dot(c.normal, x) <= c.offset + tol.eta_hull;
  });
}

HullRepresentation hull_intersection(const HullRepresentation& a, const HullRepresentation& b) {
  if (a.dimension != b.dimension) throw DimensionError("hull_intersection: dimension mismatch");
  HullRepresentation r;
  r.dimension = a.dimension;
  r.constraints = a.constraints;
  r.constraints.insert(r.constraints.end(), b.constraints.begin(), b.constraints.end());
  return r;
}

}  // namespace lg
