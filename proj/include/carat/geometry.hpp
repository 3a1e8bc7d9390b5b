#pragma once

// Exact planar kernel on dyadic coordinates: predicates, polygonal curves,
// polygons (slit boundaries allowed as doubled zero-width corridors),
// diameters, crosscut splitting and Hausdorff distance. No epsilons anywhere;
// the only approximate outputs are certified DyInterval brackets around
// irrational quantities (square roots of exact rationals).

#include <algorithm>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "carat/dyadic.hpp"
#include "carat/realfns.hpp"

namespace carat::geom {

struct Pt {
  Dyadic x, y;

  friend bool operator==(const Pt& a, const Pt& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Pt& a, const Pt& b) { return !(a == b); }
  friend Pt operator+(const Pt& a, const Pt& b) { return {a.x + b.x, a.y + b.y}; }
  friend Pt operator-(const Pt& a, const Pt& b) { return {a.x - b.x, a.y - b.y}; }
  Pt scaled(const Dyadic& s) const { return {x * s, y * s}; }
};

inline bool lex_less(const Pt& a, const Pt& b) {
  if (a.x != b.x) return a.x < b.x;
  return a.y < b.y;
}

inline Dyadic cross(const Pt& u, const Pt& v) { return u.x * v.y - u.y * v.x; }
inline Dyadic dot(const Pt& u, const Pt& v) { return u.x * v.x + u.y * v.y; }

// Sign of the signed area of (a,b,c): >0 ccw, <0 cw, 0 collinear. Exact.
inline int orient(const Pt& a, const Pt& b, const Pt& c) {
  return cross(b - a, c - a).sign();
}

inline Dyadic dist2(const Pt& a, const Pt& b) {
  Dyadic dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// p on closed segment [a,b]? Exact.
inline bool on_segment(const Pt& p, const Pt& a, const Pt& b) {
  if (orient(a, b, p) != 0) return false;
  return min(a.x, b.x) <= p.x && p.x <= max(a.x, b.x) && min(a.y, b.y) <= p.y &&
         p.y <= max(a.y, b.y);
}

enum class SegRel { Disjoint, Touch, Cross, Overlap };

// Exact relation of closed segments [a,b] and [c,d].
inline SegRel classify_segments(const Pt& a, const Pt& b, const Pt& c, const Pt& d) {
  int o1 = orient(a, b, c), o2 = orient(a, b, d);
  int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return SegRel::Cross;
  if (o1 == 0 && o2 == 0 && o3 == 0 && o4 == 0) {
    // collinear: compare parameter intervals along the dominant direction
    Pt dir = b - a;
    bool use_x = abs(dir.x) >= abs(dir.y);
    auto coord = [&](const Pt& p) { return use_x ? p.x : p.y; };
    if (a == b) {  // degenerate segment
      if (on_segment(a, c, d)) return (a == c || a == d) ? SegRel::Touch : SegRel::Overlap;
      return SegRel::Disjoint;
    }
    Dyadic lo1 = min(coord(a), coord(b)), hi1 = max(coord(a), coord(b));
    Dyadic lo2 = min(coord(c), coord(d)), hi2 = max(coord(c), coord(d));
    if (hi1 < lo2 || hi2 < lo1) return SegRel::Disjoint;
    if (hi1 == lo2 || hi2 == lo1) return SegRel::Touch;
    return SegRel::Overlap;
  }
  // a touch happens when an endpoint of one lies on the other
  if ((o1 == 0 && on_segment(c, a, b)) || (o2 == 0 && on_segment(d, a, b)) ||
      (o3 == 0 && on_segment(a, c, d)) || (o4 == 0 && on_segment(b, c, d)))
    return SegRel::Touch;
  return SegRel::Disjoint;
}

// Exact squared distance from p to segment [a,b], as a rational.
inline BigRat dist2_point_seg(const Pt& p, const Pt& a, const Pt& b) {
  if (a == b) return dist2(p, a).to_rational();
  Pt ab = b - a, ap = p - a;
  Dyadic t_num = dot(ap, ab);
  Dyadic t_den = dot(ab, ab);
  if (t_num.sign() <= 0) return dist2(p, a).to_rational();
  if (t_num >= t_den) return dist2(p, b).to_rational();
  // |ap|^2 - (ap.ab)^2/|ab|^2
  return dist2(p, a).to_rational() - (t_num * t_num).to_rational() / t_den.to_rational();
}

inline BigRat dist2_seg_seg(const Pt& a, const Pt& b, const Pt& c, const Pt& d) {
  if (classify_segments(a, b, c, d) != SegRel::Disjoint) return BigRat(0);
  BigRat best = dist2_point_seg(a, c, d);
  best = std::min(best, dist2_point_seg(b, c, d));
  best = std::min(best, dist2_point_seg(c, a, b));
  best = std::min(best, dist2_point_seg(d, a, b));
  return best;
}

// ---------------------------------------------------------------------------
// Curves and polygons

struct PolyCurve {
  std::vector<Pt> v;
  bool closed = false;
};

// A crosscut: open simple curve whose endpoints lie on the domain boundary;
// the marked point t(1/2) is stored as a vertex index.
struct Crosscut {
  PolyCurve curve;           // open
  std::size_t midpoint_index = 0;
};

// Closed boundary walk, counterclockwise. Slit boundaries are admitted as
// zero-width corridors traversed twice; the walk is then not injective, but
// never properly self-crossing.
struct Polygon {
  std::vector<Pt> v;

  std::size_t size() const { return v.size(); }
  const Pt& at(std::size_t i) const { return v[i % v.size()]; }
};

// Twice the signed area (shoelace). Exact; slit corridors contribute zero.
inline Dyadic area2(const Polygon& p) {
  Dyadic s(0);
  for (std::size_t i = 0; i < p.v.size(); ++i) s += cross(p.v[i], p.at(i + 1));
  return s;
}

inline DyInterval bbox_x(std::span<const Pt> pts) {
  Dyadic lo = pts[0].x, hi = pts[0].x;
  for (const Pt& p : pts) {
    lo = min(lo, p.x);
    hi = max(hi, p.x);
  }
  return {lo, hi};
}
inline DyInterval bbox_y(std::span<const Pt> pts) {
  Dyadic lo = pts[0].y, hi = pts[0].y;
  for (const Pt& p : pts) {
    lo = min(lo, p.y);
    hi = max(hi, p.y);
  }
  return {lo, hi};
}

enum class Loc { Inside, Outside, OnBoundary };

// Exact point location by crossing parity. Doubled slit edges cancel in
// parity, and all slit points report OnBoundary.
inline Loc point_location(const Polygon& poly, const Pt& p) {
  std::size_t n = poly.v.size();
  for (std::size_t i = 0; i < n; ++i)
    if (on_segment(p, poly.v[i], poly.at(i + 1))) return Loc::OnBoundary;
  bool inside = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Pt& a = poly.v[i];
    const Pt& b = poly.at(i + 1);
    if (a.y <= p.y && p.y < b.y) {  // upward edge
      if (orient(a, b, p) > 0) inside = !inside;
    } else if (b.y <= p.y && p.y < a.y) {  // downward edge
      if (orient(a, b, p) < 0) inside = !inside;
    }
  }
  return inside ? Loc::Inside : Loc::Outside;
}

namespace detail {

// Conservative candidate pairs for self-intersection checks: bucket edges on
// a uniform double grid (inflated), then test candidates exactly.
template <typename Body>
void for_each_nearby_edge_pair(const std::vector<Pt>& v, bool closed, Body&& body) {
  std::size_t n = v.size();
  std::size_t edge_count = closed ? n : n - 1;
  if (edge_count < 2) return;
  if (edge_count <= 64) {
    for (std::size_t i = 0; i < edge_count; ++i)
      for (std::size_t j = i + 1; j < edge_count; ++j) body(i, j);
    return;
  }
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = v[i].x.to_double();
    ys[i] = v[i].y.to_double();
    xmin = std::min(xmin, xs[i]);
    xmax = std::max(xmax, xs[i]);
    ymin = std::min(ymin, ys[i]);
    ymax = std::max(ymax, ys[i]);
  }
  int cells = static_cast<int>(std::sqrt(static_cast<double>(edge_count))) + 1;
  double hx = std::max((xmax - xmin) / cells, 1e-12);
  double hy = std::max((ymax - ymin) / cells, 1e-12);
  std::vector<std::vector<std::uint32_t>> buckets(
      static_cast<std::size_t>(cells) * cells);
  const double pad = 1e-9;
  for (std::size_t i = 0; i < edge_count; ++i) {
    std::size_t jn = (i + 1) % n;
    double lx = std::min(xs[i], xs[jn]) - pad, ux = std::max(xs[i], xs[jn]) + pad;
    double ly = std::min(ys[i], ys[jn]) - pad, uy = std::max(ys[i], ys[jn]) + pad;
    int c0x = std::clamp(static_cast<int>((lx - xmin) / hx), 0, cells - 1);
    int c1x = std::clamp(static_cast<int>((ux - xmin) / hx), 0, cells - 1);
    int c0y = std::clamp(static_cast<int>((ly - ymin) / hy), 0, cells - 1);
    int c1y = std::clamp(static_cast<int>((uy - ymin) / hy), 0, cells - 1);
    for (int cy = c0y; cy <= c1y; ++cy)
      for (int cx = c0x; cx <= c1x; ++cx)
        buckets[static_cast<std::size_t>(cy) * cells + cx].push_back(
            static_cast<std::uint32_t>(i));
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (auto& b : buckets)
    for (std::size_t s = 0; s < b.size(); ++s)
      for (std::size_t t = s + 1; t < b.size(); ++t)
        seen.emplace_back(std::min(b[s], b[t]), std::max(b[s], b[t]));
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  for (auto [i, j] : seen) body(i, j);
}

}  // namespace detail

// Simplicity of an open or closed polyline. With allow_slits, exact reversed
// duplicate edges and vertex-touches are tolerated (doubled slit walks);
// proper crossings and partial overlaps never are.
inline bool is_simple(const std::vector<Pt>& v, bool closed, bool allow_slits = false) {
  std::size_t n = v.size();
  if (n < 2 || (closed && n < 3)) return false;
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (v[i] == v[i + 1]) return false;  // consecutive vertices distinct
  if (closed && v.front() == v.back()) return false;
  std::size_t edge_count = closed ? n : n - 1;
  bool ok = true;
  detail::for_each_nearby_edge_pair(v, closed, [&](std::size_t i, std::size_t j) {
    if (!ok) return;
    const Pt &a = v[i], &b = v[(i + 1) % n], &c = v[j], &d = v[(j + 1) % n];
    bool adjacent = (j == i + 1) || (closed && i == 0 && j == edge_count - 1);
    SegRel rel = classify_segments(a, b, c, d);
    switch (rel) {
      case SegRel::Disjoint:
        return;
      case SegRel::Cross:
        ok = false;
        return;
      case SegRel::Overlap: {
        bool reversed_dup = (a == d && b == c);
        ok = allow_slits && reversed_dup;
        return;
      }
      case SegRel::Touch:
        // a unique common point; for adjacent edges it is the shared vertex
        if (adjacent) return;
        if (!allow_slits) {
          ok = false;
          return;
        }
        // slit walks may revisit vertices, never edge interiors
        ok = (a == c || a == d || b == c || b == d);
        return;
    }
  });
  return ok;
}

inline bool is_simple_curve(const PolyCurve& c, bool allow_slits = false) {
  return is_simple(c.v, c.closed, allow_slits);
}
inline bool is_simple_polygon(const Polygon& p, bool allow_slits = false) {
  return is_simple(p.v, true, allow_slits);
}

// ---------------------------------------------------------------------------
// Convex hull and certified diameter

// Strict monotone-chain hull (no collinear points retained), ccw.
inline std::vector<Pt> convex_hull(std::vector<Pt> pts) {
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<Pt> h;
  h.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {  // lower chain
    while (h.size() >= 2 && orient(h[h.size() - 2], h.back(), pts[i]) <= 0) h.pop_back();
    h.push_back(pts[i]);
  }
  std::size_t lower = h.size() + 1;
  for (std::size_t i = n - 1; i-- > 0;) {  // upper chain
    while (h.size() >= lower && orient(h[h.size() - 2], h.back(), pts[i]) <= 0) h.pop_back();
    h.push_back(pts[i]);
  }
  h.pop_back();  // first point repeated
  return h;
}

// Exact squared diameter of a point set: rotating calipers on the hull.
inline Dyadic squared_diameter(std::span<const Pt> pts) {
  if (pts.empty()) throw contract_fault("squared_diameter: empty point set");
  std::vector<Pt> h = convex_hull(std::vector<Pt>(pts.begin(), pts.end()));
  std::size_t n = h.size();
  if (n == 1) return Dyadic(0);
  if (n == 2) return dist2(h[0], h[1]);
  auto tri2 = [&](std::size_t a, std::size_t b, std::size_t c) {
    return abs(cross(h[b % n] - h[a % n], h[c % n] - h[a % n]));
  };
  Dyadic best(0);
  std::size_t j = 1;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t guard = 0;
    while (tri2(i, i + 1, j + 1) > tri2(i, i + 1, j)) {
      j = (j + 1) % n;
      if (++guard > 2 * n) throw contract_fault("squared_diameter: calipers stuck");
    }
    best = max(best, dist2(h[i], h[j % n]));
    best = max(best, dist2(h[(i + 1) % n], h[j % n]));
  }
  return best;
}

// Euclidean diameter of a polyline, as a certified interval of relative width
// <= 2^-50 (the diameter of a polyline is attained at hull vertices).
inline DyInterval curve_diameter(const PolyCurve& c) {
  if (c.v.empty()) throw contract_fault("curve_diameter: empty curve");
  Dyadic d2 = squared_diameter(c.v);
  if (d2.is_zero()) return {Dyadic(0), Dyadic(0)};
  // relative 2^-52 sqrt bracket: absolute precision keyed to the magnitude
  std::int64_t m = d2.msb_exp() / 2;
  int prec = static_cast<int>(52 - m) + 4;
  return sqrt_bracket(d2, std::max(prec, 8));
}

inline DyInterval points_diameter(std::span<const Pt> pts) {
  PolyCurve c;
  c.v.assign(pts.begin(), pts.end());
  return curve_diameter(c);
}

// ---------------------------------------------------------------------------
// Splitting a polygon along a crosscut

struct SplitResult {
  Polygon n_gamma;  // component not containing the basepoint
  Polygon w_side;
};

namespace detail {

// Is direction q (from walk vertex at position i) strictly inside the interior
// cone at that vertex? Interior lies to the left of the walk.
inline bool direction_enters_interior(const Polygon& poly, std::size_t i, const Pt& q) {
  std::size_t n = poly.v.size();
  const Pt& prev = poly.v[(i + n - 1) % n];
  const Pt& cur = poly.v[i];
  const Pt& next = poly.v[(i + 1) % n];
  int turn = orient(prev, cur, next);
  bool left_of_in = orient(prev, cur, q) > 0;
  bool left_of_out = orient(cur, next, q) > 0;
  if (turn > 0) return left_of_in && left_of_out;   // convex corner
  if (turn < 0) return left_of_in || left_of_out;   // reflex corner
  // straight or slit tip
  if (prev == next) {  // slit tip: anything off the slit line enters
    return orient(prev, cur, q) != 0;
  }
  return left_of_in;
}

}  // namespace detail

// Splits poly along the crosscut. The crosscut's endpoints must lie exactly on
// the boundary walk; its interior must be strictly inside; w strictly inside
// and not on the crosscut. Exact; throws contract_fault on invalid input.
inline SplitResult split_by_crosscut(const Polygon& poly, const Crosscut& cut, const Pt& w) {
  const std::vector<Pt>& cv = cut.curve.v;
  std::size_t n = poly.v.size();
  if (cv.size() < 2) throw contract_fault("split: crosscut needs >= 2 vertices");
  if (cut.curve.closed) throw contract_fault("split: crosscut must be an open curve");
  if (!is_simple_curve(cut.curve)) throw contract_fault("split: crosscut not simple");
  if (point_location(poly, w) != Loc::Inside)
    throw contract_fault("split: basepoint not strictly inside");
  for (const Pt& p : cv)
    if (p == w) throw contract_fault("split: invalid-basepoint (w on crosscut)");
  for (std::size_t i = 0; i + 1 < cv.size(); ++i)
    if (on_segment(w, cv[i], cv[i + 1]))
      throw contract_fault("split: invalid-basepoint (w on crosscut)");

  // interior vertices strictly inside
  for (std::size_t i = 1; i + 1 < cv.size(); ++i)
    if (point_location(poly, cv[i]) != Loc::Inside)
      throw contract_fault("split: invalid-crosscut (interior vertex not inside)");
  if (point_location(poly, cv.front()) != Loc::OnBoundary ||
      point_location(poly, cv.back()) != Loc::OnBoundary)
    throw contract_fault("split: invalid-crosscut (endpoints not on boundary)");

  // curve segments may not meet the boundary except at their own endpoints
  for (std::size_t i = 0; i + 1 < cv.size(); ++i) {
    for (std::size_t e = 0; e < n; ++e) {
      SegRel rel = classify_segments(cv[i], cv[i + 1], poly.v[e], poly.at(e + 1));
      if (rel == SegRel::Disjoint) continue;
      bool first_ok = i == 0 && on_segment(cv.front(), poly.v[e], poly.at(e + 1));
      bool last_ok = i + 2 == cv.size() && on_segment(cv.back(), poly.v[e], poly.at(e + 1));
      if (rel == SegRel::Touch && (first_ok || last_ok)) continue;
      throw contract_fault("split: invalid-crosscut (curve meets boundary)");
    }
  }

  // locate an attachment position in the walk for a crosscut endpoint;
  // approach = the adjacent interior point of the crosscut at that endpoint.
  auto locate = [&](const Pt& endpoint, const Pt& approach) -> std::pair<std::size_t, bool> {
    // returns (walk index, at_vertex); for edge attachments the index is the
    // edge's start position
    for (std::size_t i = 0; i < n; ++i) {
      if (poly.v[i] == endpoint) {
        if (detail::direction_enters_interior(poly, i, approach)) return {i, true};
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Pt& a = poly.v[i];
      const Pt& b = poly.at(i + 1);
      if (endpoint == a || endpoint == b) continue;
      if (!on_segment(endpoint, a, b)) continue;
      // interior of the walk edge: approach must be strictly left of a->b
      if (orient(a, b, approach) > 0) return {i, false};
    }
    throw contract_fault("split: invalid-crosscut (no attachment for endpoint)");
  };

  auto [i0, v0] = locate(cv.front(), cv[1]);
  auto [i1, v1] = locate(cv.back(), cv[cv.size() - 2]);

  // Build the boundary walk with endpoints inserted; record their positions.
  std::vector<Pt> walk;
  walk.reserve(n + 2);
  std::size_t pos0 = static_cast<std::size_t>(-1), pos1 = static_cast<std::size_t>(-1);
  for (std::size_t i = 0; i < n; ++i) {
    if (v0 && i == i0) pos0 = walk.size();
    if (v1 && i == i1) pos1 = walk.size();
    walk.push_back(poly.v[i]);
    // insertions on edge (i, i+1), ordered along the edge direction
    bool ins0 = !v0 && i == i0;
    bool ins1 = !v1 && i == i1;
    if (ins0 && ins1) {
      Pt dir = poly.at(i + 1) - poly.v[i];
      Dyadic t0 = dot(cv.front() - poly.v[i], dir);
      Dyadic t1 = dot(cv.back() - poly.v[i], dir);
      if (t0 == t1) throw contract_fault("split: crosscut endpoints coincide");
      if (t0 < t1) {
        pos0 = walk.size();
        walk.push_back(cv.front());
        pos1 = walk.size();
        walk.push_back(cv.back());
      } else {
        pos1 = walk.size();
        walk.push_back(cv.back());
        pos0 = walk.size();
        walk.push_back(cv.front());
      }
    } else if (ins0) {
      pos0 = walk.size();
      walk.push_back(cv.front());
    } else if (ins1) {
      pos1 = walk.size();
      walk.push_back(cv.back());
    }
  }
  std::size_t m = walk.size();
  if (pos0 >= m || pos1 >= m || pos0 == pos1)
    throw contract_fault("split: endpoint insertion failed");

  // side A: walk pos0 -> pos1 (forward), then crosscut reversed back to pos0
  auto build = [&](std::size_t from, std::size_t to, bool curve_forward) {
    Polygon out;
    for (std::size_t i = from; i != to; i = (i + 1) % m) out.v.push_back(walk[i]);
    out.v.push_back(walk[to]);
    if (curve_forward) {
      for (std::size_t i = 1; i + 1 < cv.size(); ++i) out.v.push_back(cv[i]);
    } else {
      for (std::size_t i = cv.size() - 1; i-- > 1;) out.v.push_back(cv[i]);
    }
    return out;
  };
  Polygon side_a = build(pos0, pos1, false);
  Polygon side_b = build(pos1, pos0, true);

  Dyadic total = area2(poly);
  if (area2(side_a) + area2(side_b) != total)
    throw contract_fault("split: area additivity violated (degenerate crosscut)");

  Loc wa = point_location(side_a, w);
  Loc wb = point_location(side_b, w);
  if (wa == Loc::Inside && wb == Loc::Outside) return {std::move(side_b), std::move(side_a)};
  if (wb == Loc::Inside && wa == Loc::Outside) return {std::move(side_a), std::move(side_b)};
  throw contract_fault("split: basepoint classification inconsistent");
}

// ---------------------------------------------------------------------------
// Hausdorff distance between compact unions of segments

struct SegSet {
  std::vector<std::pair<Pt, Pt>> segs;  // points enter as degenerate segments

  static SegSet of_curve(const PolyCurve& c) {
    SegSet s;
    if (c.v.size() == 1) {
      s.segs.emplace_back(c.v[0], c.v[0]);
      return s;
    }
    for (std::size_t i = 0; i + 1 < c.v.size(); ++i) s.segs.emplace_back(c.v[i], c.v[i + 1]);
    if (c.closed && c.v.size() > 2) s.segs.emplace_back(c.v.back(), c.v.front());
    return s;
  }
  static SegSet of_polygon_boundary(const Polygon& p) {
    SegSet s;
    for (std::size_t i = 0; i < p.v.size(); ++i) s.segs.emplace_back(p.v[i], p.at(i + 1));
    return s;
  }
  void append(const SegSet& o) { segs.insert(segs.end(), o.segs.begin(), o.segs.end()); }
};

namespace detail {

inline BigRat dist2_point_set(const Pt& p, const SegSet& s) {
  BigRat best = dist2_point_seg(p, s.segs[0].first, s.segs[0].second);
  for (std::size_t i = 1; i < s.segs.size(); ++i) {
    BigRat d = dist2_point_seg(p, s.segs[i].first, s.segs[i].second);
    if (d < best) best = d;
    if (best == 0) break;
  }
  return best;
}

// max over x in segment-union A of dist(x, B), exact branch-and-bound on
// squared quantities; returns [lo2, ub2] rationals with lo2 <= h^2 <= ub2.
inline std::pair<BigRat, BigRat> directed_h2(const SegSet& A, const SegSet& B, int n) {
  struct Piece {
    Pt a, b;
    BigRat ub2;
  };
  auto piece_ub2 = [&](const Pt& a, const Pt& b) {
    // convexity: max over [a,b] of dist(x, seg) is attained at a or b
    BigRat best;
    bool first = true;
    for (const auto& [c, d] : B.segs) {
      BigRat u = std::max(dist2_point_seg(a, c, d), dist2_point_seg(b, c, d));
      if (first || u < best) {
        best = u;
        first = false;
      }
    }
    return best;
  };
  auto cmp = [](const Piece& x, const Piece& y) { return x.ub2 < y.ub2; };
  std::priority_queue<Piece, std::vector<Piece>, decltype(cmp)> heap(cmp);
  BigRat lo2(0);
  for (const auto& [a, b] : A.segs) {
    lo2 = std::max(lo2, dist2_point_set(a, B));
    lo2 = std::max(lo2, dist2_point_set(b, B));
    heap.push({a, b, piece_ub2(a, b)});
  }
  // termination scale: squared tolerance keyed to magnitude of lo2/ub2
  for (int iter = 0; iter < 200000 && !heap.empty(); ++iter) {
    Piece top = heap.top();
    if (top.ub2 <= lo2) break;
    // gap check in sqrt domain: sqrt(ub2)-sqrt(lo2) <= ub2-lo2 over sqrt(ub2);
    // cheap conservative check first
    DyInterval ub = sqrt_bracket(top.ub2, n + 2);
    DyInterval lo = sqrt_bracket(lo2, n + 2);
    if (ub.hi - lo.lo <= Dyadic::pow2(-n)) break;
    heap.pop();
    Pt mid{(top.a.x + top.b.x).mul_pow2(-1), (top.a.y + top.b.y).mul_pow2(-1)};
    lo2 = std::max(lo2, dist2_point_set(mid, B));
    if (top.a != mid) heap.push({top.a, mid, piece_ub2(top.a, mid)});
    if (mid != top.b) heap.push({mid, top.b, piece_ub2(mid, top.b)});
  }
  BigRat ub2 = heap.empty() ? lo2 : std::max(lo2, heap.top().ub2);
  return {lo2, ub2};
}

}  // namespace detail

// Certified Hausdorff distance between two nonempty compact segment unions;
// interval width <= 2^-n (default n = 40).
inline DyInterval hausdorff_distance(const SegSet& a, const SegSet& b, int n = 40) {
  if (a.segs.empty() || b.segs.empty())
    throw contract_fault("hausdorff_distance: empty input");
  auto [lo1, ub1] = detail::directed_h2(a, b, n + 1);
  auto [lo2, ub2] = detail::directed_h2(b, a, n + 1);
  BigRat lo = std::max(lo1, lo2), ub = std::max(ub1, ub2);
  return {sqrt_bracket(lo, n + 2).lo, sqrt_bracket(ub, n + 2).hi};
}

}  // namespace carat::geom
