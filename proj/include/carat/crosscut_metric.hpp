#pragma once

// The Caratheodory (crosscut) distance with certified two-sided bounds.
//
// Upper bounds come from explicit witness curves, validated exactly: loops
// enclosing the two query points away from the basepoint, straight or bent
// chords across necks, and hairpins around slit tips.
//
// Lower bounds come from anchored removal certificates on an exact cell grid:
// any separating curve of diameter <= D lies in its own bounding box of side
// <= D, which is covered by some anchored grid box of side D + 2h. If, for
// every anchor, deleting that box still leaves the basepoint connected to
// both query points through cells certified inside the domain, then no
// separating curve of diameter <= D exists, so dist_C > D.

#include <bit>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "carat/domains.hpp"
#include "carat/geometry.hpp"

namespace carat::metric {

using dom::PointedDomain;
using geom::Loc;
using geom::PolyCurve;
using geom::Polygon;
using geom::Pt;

struct CertifiedDistance {
  Dyadic lo;
  Dyadic hi;
  PolyCurve witness;  // loop (closed) or crosscut (open); empty if none found
  bool budget_exhausted = false;
};

// ---------------------------------------------------------------------------
// Exact cell grid

class CellGrid {
 public:
  enum : std::uint8_t { kOutside = 0, kBoundary = 1, kFree = 2 };

  // h = 2^-gbits; the grid covers the polygon bbox padded by one cell
  CellGrid(const Polygon& poly, int gbits, std::size_t cell_cap = 1u << 22)
      : gbits_(gbits) {
    Dyadic h = Dyadic::pow2(-gbits);
    DyInterval bx = geom::bbox_x(poly.v), by = geom::bbox_y(poly.v);
    x0_ = bx.lo.floor_to(gbits) - h;
    y0_ = by.lo.floor_to(gbits) - h;
    Dyadic spanx = bx.hi - x0_, spany = by.hi - y0_;
    nx_ = static_cast<int>(index_of(spanx)) + 2;
    ny_ = static_cast<int>(index_of(spany)) + 2;
    if (static_cast<std::size_t>(nx_) * ny_ > cell_cap)
      throw contract_fault("cell grid exceeds budget");
    cls_.assign(static_cast<std::size_t>(nx_) * ny_, kOutside);

    // conservative rasterization: cells meeting an edge bbox become Boundary
    std::vector<std::uint8_t> touched(cls_.size(), 0);
    for (std::size_t e = 0; e < poly.v.size(); ++e) {
      const Pt& a = poly.v[e];
      const Pt& b = poly.at(e + 1);
      std::int64_t i0 = index_of(min(a.x, b.x) - x0_), i1 = index_of(max(a.x, b.x) - x0_);
      std::int64_t j0 = index_of(min(a.y, b.y) - y0_), j1 = index_of(max(a.y, b.y) - y0_);
      for (std::int64_t j = std::max<std::int64_t>(j0, 0);
           j <= std::min<std::int64_t>(j1, ny_ - 1); ++j)
        for (std::int64_t i = std::max<std::int64_t>(i0, 0);
             i <= std::min<std::int64_t>(i1, nx_ - 1); ++i)
          touched[idx(i, j)] = 1;
    }
    // flood-classify untouched components by one exact location test each
    std::vector<std::uint8_t> seen(cls_.size(), 0);
    for (std::int64_t j = 0; j < ny_; ++j)
      for (std::int64_t i = 0; i < nx_; ++i) {
        std::size_t c = idx(i, j);
        if (touched[c]) {
          cls_[c] = kBoundary;
          continue;
        }
        if (seen[c]) continue;
        Loc rep = geom::point_location(poly, center(i, j));
        std::uint8_t mark = rep == Loc::Inside ? kFree : kOutside;
        std::deque<std::pair<std::int64_t, std::int64_t>> q{{i, j}};
        seen[c] = 1;
        while (!q.empty()) {
          auto [ci, cj] = q.front();
          q.pop_front();
          cls_[idx(ci, cj)] = mark;
          for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
            std::int64_t ni = ci + di, nj = cj + dj;
            if (ni < 0 || nj < 0 || ni >= nx_ || nj >= ny_) continue;
            std::size_t nc = idx(ni, nj);
            if (seen[nc] || touched[nc]) continue;
            seen[nc] = 1;
            q.emplace_back(ni, nj);
          }
        }
      }
  }

  int gbits() const { return gbits_; }
  Dyadic h() const { return Dyadic::pow2(-gbits_); }
  std::int64_t nx() const { return nx_; }
  std::int64_t ny() const { return ny_; }
  std::uint8_t cls(std::int64_t i, std::int64_t j) const { return cls_[idx(i, j)]; }

  std::size_t idx(std::int64_t i, std::int64_t j) const {
    return static_cast<std::size_t>(j) * nx_ + i;
  }
  Pt center(std::int64_t i, std::int64_t j) const {
    Dyadic h2 = Dyadic::pow2(-gbits_ - 1);
    return Pt{x0_ + Dyadic(BigInt(2 * i + 1), 0) * h2, y0_ + Dyadic(BigInt(2 * j + 1), 0) * h2};
  }
  std::pair<std::int64_t, std::int64_t> cell_of(const Pt& p) const {
    return {index_of(p.x - x0_), index_of(p.y - y0_)};
  }
  bool in_range(std::int64_t i, std::int64_t j) const {
    return i >= 0 && j >= 0 && i < nx_ && j < ny_;
  }

 private:
  std::int64_t index_of(const Dyadic& offset) const {
    return dyadic_to_int64(offset.mul_pow2(gbits_).floor_to(0));
  }

  Dyadic x0_, y0_;
  int gbits_;
  std::int64_t nx_ = 0, ny_ = 0;
  std::vector<std::uint8_t> cls_;
};

namespace detail {

using Cell = std::pair<std::int64_t, std::int64_t>;

// BFS over Free cells avoiding `blocked`, within an index window.
inline bool bfs_connected(const CellGrid& g, Cell from, Cell to,
                          const std::function<bool(std::int64_t, std::int64_t)>& blocked,
                          std::int64_t wi0, std::int64_t wj0, std::int64_t wi1,
                          std::int64_t wj1, std::vector<std::uint32_t>& stamp,
                          std::uint32_t tick) {
  if (g.cls(from.first, from.second) != CellGrid::kFree) return false;
  if (blocked(from.first, from.second) || blocked(to.first, to.second)) return false;
  std::deque<Cell> q{from};
  stamp[g.idx(from.first, from.second)] = tick;
  while (!q.empty()) {
    auto [i, j] = q.front();
    q.pop_front();
    if (i == to.first && j == to.second) return true;
    for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      std::int64_t ni = i + di, nj = j + dj;
      if (ni < wi0 || nj < wj0 || ni > wi1 || nj > wj1 || !g.in_range(ni, nj)) continue;
      std::size_t c = g.idx(ni, nj);
      if (stamp[c] == tick || g.cls(ni, nj) != CellGrid::kFree || blocked(ni, nj)) continue;
      stamp[c] = tick;
      q.emplace_back(ni, nj);
    }
  }
  return false;
}

// BFS path over Free cells (no blocking), or nullopt.
inline std::optional<std::vector<Cell>> bfs_path(const CellGrid& g, Cell from, Cell to) {
  if (!g.in_range(from.first, from.second) || !g.in_range(to.first, to.second))
    return std::nullopt;
  if (g.cls(from.first, from.second) != CellGrid::kFree ||
      g.cls(to.first, to.second) != CellGrid::kFree)
    return std::nullopt;
  std::vector<std::int32_t> parent(static_cast<std::size_t>(g.nx()) * g.ny(), -1);
  std::deque<Cell> q{from};
  parent[g.idx(from.first, from.second)] = static_cast<std::int32_t>(g.idx(from.first, from.second));
  while (!q.empty()) {
    auto [i, j] = q.front();
    q.pop_front();
    if (i == to.first && j == to.second) {
      std::vector<Cell> path;
      Cell cur = to;
      while (true) {
        path.push_back(cur);
        std::size_t c = g.idx(cur.first, cur.second);
        std::size_t p = static_cast<std::size_t>(parent[c]);
        if (p == c) break;
        cur = {static_cast<std::int64_t>(p % g.nx()), static_cast<std::int64_t>(p / g.nx())};
      }
      return path;
    }
    for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      std::int64_t ni = i + di, nj = j + dj;
      if (!g.in_range(ni, nj)) continue;
      std::size_t c = g.idx(ni, nj);
      if (parent[c] != -1 || g.cls(ni, nj) != CellGrid::kFree) continue;
      parent[c] = static_cast<std::int32_t>(g.idx(i, j));
      q.emplace_back(ni, nj);
    }
  }
  return std::nullopt;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Witness validation (exact)

// A loop in W enclosing both targets and excluding w separates them from w.
inline bool validate_loop_witness(const Polygon& poly, const PolyCurve& loop, const Pt& s1,
                                  const Pt& s2, const Pt& w) {
  if (!loop.closed || loop.v.size() < 3) return false;
  if (!geom::is_simple_curve(loop)) return false;
  Polygon lp{loop.v};
  if (geom::area2(lp).sign() < 0) {
    Polygon rev = lp;
    std::reverse(rev.v.begin(), rev.v.end());
    lp = rev;
  }
  if (geom::point_location(lp, s1) != Loc::Inside) return false;
  if (geom::point_location(lp, s2) != Loc::Inside) return false;
  if (geom::point_location(lp, w) != Loc::Outside) return false;
  // entirely in W: vertices inside, no contact with the boundary walk
  for (const Pt& v : loop.v)
    if (geom::point_location(poly, v) != Loc::Inside) return false;
  for (std::size_t i = 0; i < loop.v.size(); ++i) {
    const Pt& a = loop.v[i];
    const Pt& b = loop.v[(i + 1) % loop.v.size()];
    for (std::size_t e = 0; e < poly.v.size(); ++e)
      if (geom::classify_segments(a, b, poly.v[e], poly.at(e + 1)) != geom::SegRel::Disjoint)
        return false;
  }
  return true;
}

// A crosscut witness separates the targets from w iff both targets land in
// the non-basepoint side of the split.
inline bool validate_crosscut_witness(const Polygon& poly, const PolyCurve& cut, const Pt& s1,
                                      const Pt& s2, const Pt& w) {
  if (cut.closed || cut.v.size() < 2) return false;
  try {
    geom::SplitResult sr = geom::split_by_crosscut(poly, geom::Crosscut{cut, 0}, w);
    return geom::point_location(sr.n_gamma, s1) == Loc::Inside &&
           geom::point_location(sr.n_gamma, s2) == Loc::Inside;
  } catch (const contract_fault&) {
    return false;
  }
}

namespace detail {

// Polygonal loop inscribed in the circle of diameter d about c: its diameter
// never exceeds d, and its inscribed disk has radius (d/2)cos(pi/m) minus
// snapping. Side count keyed to how much of d the targets may use.
inline PolyCurve witness_circle(const Pt& c, const Dyadic& d, int sides = 64) {
  PolyCurve out;
  out.closed = true;
  Dyadic r = d.mul_pow2(-1) * (Dyadic(1) - Dyadic::pow2(-40));
  for (int j = 0; j < sides; ++j) {
    Pt u = dom::circle_point(r, dom::detail::snap_nearest(BigRat(j, sides), 54), 50);
    out.v.push_back(Pt{c.x + u.x, c.y + u.y});
  }
  return out;
}

inline int loop_sides_for(int k) {
  // need cos(pi/m) >= 1/(1 + 2^-k): m ~ pi / sqrt(2^(1-k))
  double m = M_PI / std::sqrt(std::ldexp(2.0, -k)) + 6;
  return std::clamp(static_cast<int>(m), 32, 512);
}

struct EdgePoint {
  std::size_t edge;
  Pt p;
};

// dyadic point on edge e at parameter fraction num/2^bits, snapped onto the
// segment exactly (affine combination of dyadic endpoints)
inline Pt edge_point(const Polygon& poly, std::size_t e, const Dyadic& t) {
  const Pt& a = poly.v[e];
  const Pt& b = poly.at(e + 1);
  return Pt{a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// The certified distance engine

struct MetricBudget {
  int max_rounds = 4;            // grid refinements
  std::size_t max_cells = 1u << 21;
  int bisection_steps = 18;
};

namespace detail {

struct GridContext {
  const Polygon* poly;
  const CellGrid* grid;
  Cell wc, c1, c2;
  std::vector<Cell> path1, path2;
  std::vector<std::uint8_t> on_path1, on_path2;
};

// Anchored removal test: returns an anchor whose removal disconnects w from
// both targets, or nullopt if every anchor stays connected (certificate that
// dist_C > D). `disk_shape` uses the Jung disk of radius D/sqrt(3) + slack
// instead of the bounding box.
inline std::optional<Cell> anchored_removal_test(const GridContext& ctx, const Dyadic& D,
                                                 bool disk_shape,
                                                 std::vector<std::uint32_t>& stamp,
                                                 std::uint32_t& tick) {
  const CellGrid& g = *ctx.grid;
  Dyadic h = g.h();
  // box half extent in cells: ceil((D + 2h)/h) for the box side D + 2h,
  // anchored at the lower-left cell; for the disk: radius D/sqrt(3) + 2h
  std::int64_t span;
  if (!disk_shape) {
    span = dyadic_to_int64((D.mul_pow2(g.gbits()) + Dyadic(2)).ceil_to(0));
  } else {
    Dyadic rad = sqrt_bracket((D * D).to_rational() / 3, 40).hi + h.mul_pow2(1);
    span = dyadic_to_int64(rad.mul_pow2(g.gbits() + 1).ceil_to(0));
  }
  span = std::max<std::int64_t>(span, 1);

  // candidate anchors: the removal box must touch both reference paths.
  // Dilate each path by the box footprint once, then intersect.
  std::int64_t anx = g.nx() + span + 1, any = g.ny() + span + 1;
  std::vector<std::uint8_t> cand(static_cast<std::size_t>(anx) * any, 0);
  auto dilate = [&](const std::vector<Cell>& path, std::uint8_t bit) {
    for (auto [i, j] : path)
      for (std::int64_t aj = j - span; aj <= j; ++aj)
        for (std::int64_t ai = i - span; ai <= i; ++ai)
          cand[static_cast<std::size_t>(aj + span) * anx + (ai + span)] |= bit;
  };
  dilate(ctx.path1, 1);
  dilate(ctx.path2, 2);

  for (std::int64_t aj = -span; aj < g.ny(); ++aj) {
    for (std::int64_t ai = -span; ai < g.nx(); ++ai) {
      Cell anchor{ai, aj};
      if (cand[static_cast<std::size_t>(aj + span) * anx + (ai + span)] != 3) continue;
      auto blocked = [&](std::int64_t i, std::int64_t j) {
        return i >= ai && i <= ai + span && j >= aj && j <= aj + span;
      };
      // windowed reroute of each reference path, escalating to full BFS
      auto reroutable = [&](const std::vector<Cell>& path, Cell target) {
        for (std::int64_t grow : {4, 16}) {
          std::int64_t wi0 = ai - grow * span, wj0 = aj - grow * span;
          std::int64_t wi1 = ai + (grow + 1) * span, wj1 = aj + (grow + 1) * span;
          // path runs target -> w; find entry/exit of the inflated window
          std::optional<std::size_t> first_in, last_in;
          for (std::size_t t = 0; t < path.size(); ++t) {
            bool in = path[t].first >= wi0 && path[t].first <= wi1 &&
                      path[t].second >= wj0 && path[t].second <= wj1;
            if (in) {
              if (!first_in) first_in = t;
              last_in = t;
            }
          }
          if (!first_in) return true;  // path untouched by the window
          Cell a_end = *first_in == 0 ? path.front() : path[*first_in - 1];
          Cell b_end = *last_in + 1 >= path.size() ? path.back() : path[*last_in + 1];
          ++tick;
          if (bfs_connected(*ctx.grid, a_end, b_end, blocked, wi0, wj0, wi1, wj1, stamp,
                            tick))
            return true;
        }
        ++tick;
        return bfs_connected(*ctx.grid, ctx.wc, target, blocked, 0, 0, g.nx() - 1,
                             g.ny() - 1, stamp, tick);
      };
      bool ok1 = reroutable(ctx.path1, ctx.c1);
      bool ok2 = ok1 ? reroutable(ctx.path2, ctx.c2) : false;
      if (!ok1 || !ok2) {
        // disconnects both targets? (separation must be joint)
        ++tick;
        bool r1 = bfs_connected(*ctx.grid, ctx.wc, ctx.c1, blocked, 0, 0, g.nx() - 1,
                                g.ny() - 1, stamp, tick);
        ++tick;
        bool r2 = bfs_connected(*ctx.grid, ctx.wc, ctx.c2, blocked, 0, 0, g.nx() - 1,
                                g.ny() - 1, stamp, tick);
        if (!r1 && !r2) return anchor;
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Witness generation

namespace detail {

// try loops around the pair at a few scales below `cap`
inline void try_loop_witnesses(const Polygon& poly, const Pt& s1, const Pt& s2, const Pt& w,
                               const Dyadic& cap, int k, CertifiedDistance& best) {
  Pt mid{(s1.x + s2.x).mul_pow2(-1), (s1.y + s2.y).mul_pow2(-1)};
  Dyadic base = sqrt_bracket(geom::dist2(s1, s2).to_rational(), k + 8).hi;
  // smallest loop implementing the local-Euclidean law, then geometric steps
  Dyadic d = base + max(base.mul_pow2(-k), Dyadic::pow2(-k - 2));
  int sides = loop_sides_for(k);
  for (int step = 0; step < 12 && d <= cap; ++step) {
    PolyCurve loop = witness_circle(mid, d, sides);
    if (validate_loop_witness(poly, loop, s1, s2, w)) {
      Dyadic diam = geom::curve_diameter(loop).hi;
      if (diam < best.hi) {
        best.hi = diam;
        best.witness = loop;
      }
      return;
    }
    d = d.mul_pow2(1) - d.mul_pow2(-1);  // * 1.5
  }
}

// hairpins around slit tips: for each exact reversed-duplicate edge pair
// whose tip lies near the hint, a 5-point polyline from one side of the slit
// around the tip to the other side
inline void try_slit_hairpins(const Polygon& poly, const Pt& s1, const Pt& s2, const Pt& w,
                              const Pt& hint, const Dyadic& radius,
                              CertifiedDistance& best) {
  std::size_t n = poly.v.size();
  Dyadic r2 = radius * radius;
  for (std::size_t e = 0; e < n; ++e) {
    const Pt& a = poly.v[e];
    const Pt& b = poly.at(e + 1);
    const Pt& c = poly.at(e + 2);
    if (!(a == c)) continue;  // need edge pair a->b, b->a (tip at b)
    if (geom::dist2(b, hint) > r2 && geom::dist2(a, hint) > r2) continue;
    Pt dir = b - a;  // toward the tip
    Pt perp{-dir.y, dir.x};
    for (int tb = 1; tb <= 4; ++tb) {
      Dyadic t(BigInt(1), -tb);          // anchor parameter along the slit
      Dyadic dl = Dyadic(BigInt(1), -tb - 2);  // lateral/overshoot scale
      Pt al{a.x + dir.x * t, a.y + dir.y * t};
      Pt ar{a.x + dir.x * (t + t.mul_pow2(-3)), a.y + dir.y * (t + t.mul_pow2(-3))};
      Pt bl{al.x - perp.x * dl, al.y - perp.y * dl};
      Pt br{ar.x + perp.x * dl, ar.y + perp.y * dl};
      Pt beyond{b.x + dir.x * dl, b.y + dir.y * dl};
      PolyCurve pin{{al, bl, beyond, br, ar}, false};
      Dyadic diam = geom::curve_diameter(pin).hi;
      if (diam >= best.hi) continue;
      if (validate_crosscut_witness(poly, pin, s1, s2, w)) {
        best.hi = diam;
        best.witness = pin;
      }
      PolyCurve pin_rev{{ar, br, beyond, bl, al}, false};
      if (diam < best.hi && validate_crosscut_witness(poly, pin_rev, s1, s2, w)) {
        best.hi = diam;
        best.witness = pin_rev;
      }
    }
  }
}

// chords and two-segment polylines between boundary subdivision points near
// the failing anchor region
inline void try_neck_witnesses(const Polygon& poly, const Pt& s1, const Pt& s2, const Pt& w,
                               const Pt& hint, const Dyadic& radius,
                               CertifiedDistance& best) {
  // collect candidate on-edge points within `radius` of the hint
  std::vector<EdgePoint> cands;
  Dyadic r2 = radius * radius;
  for (std::size_t e = 0; e < poly.v.size(); ++e) {
    if (geom::dist2_point_seg(hint, poly.v[e], poly.at(e + 1)) > r2.to_rational()) continue;
    for (int den = 1; den <= 8; den *= 2)
      for (int num = 1; num < 2 * den; num += 2) {
        Pt p = edge_point(poly, e, Dyadic(BigInt(num), -(std::int64_t)std::bit_width(
                                                            (unsigned)den)));
        if (geom::dist2(p, hint) <= r2) cands.push_back({e, p});
      }
    cands.push_back({e, edge_point(poly, e, Dyadic(BigInt(1), -1))});
  }
  if (cands.size() > 64) cands.resize(64);
  for (std::size_t a = 0; a < cands.size(); ++a)
    for (std::size_t b = a + 1; b < cands.size(); ++b) {
      if (cands[a].edge == cands[b].edge) continue;
      if (cands[a].p == cands[b].p) continue;
      PolyCurve chord{{cands[a].p, cands[b].p}, false};
      Dyadic diam = geom::curve_diameter(chord).hi;
      if (diam >= best.hi) continue;
      if (validate_crosscut_witness(poly, chord, s1, s2, w)) {
        best.hi = diam;
        best.witness = chord;
      }
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public operations

// Certified crosscut distance on an exact polygon domain.
inline CertifiedDistance crosscut_distance(const PointedDomain& d, const Pt& s1, const Pt& s2,
                                           int k, MetricBudget budget = {}) {
  if (d.kind != PointedDomain::Kind::ExactPolygon && d.kind != PointedDomain::Kind::Analytic)
    throw contract_fault("crosscut_distance: polygonal model required");
  const Polygon& poly = d.poly;
  const Pt& w = d.w;
  if (s1 == w || s2 == w) throw contract_fault("crosscut_distance: undefined at basepoint");
  if (geom::point_location(poly, s1) != Loc::Inside ||
      geom::point_location(poly, s2) != Loc::Inside)
    throw contract_fault("crosscut_distance: query points must be interior ideal points");
  // the metric degenerates near w
  Dyadic guard = Dyadic::pow2(-k + 3);
  if (geom::dist2(s1, w) < guard * guard || geom::dist2(s2, w) < guard * guard)
    throw contract_fault("crosscut_distance: query point within 8*2^-k of the basepoint");

  CertifiedDistance out;
  out.lo = s1 == s2 ? Dyadic(0) : sqrt_bracket(geom::dist2(s1, s2).to_rational(), k + 48).lo;
  // generic cap: the domain diameter
  out.hi = geom::curve_diameter(PolyCurve{poly.v, true}).hi.mul_pow2(1);

  detail::try_loop_witnesses(poly, s1, s2, w, out.hi, k, out);
  Pt mid{(s1.x + s2.x).mul_pow2(-1), (s1.y + s2.y).mul_pow2(-1)};

  int gbits = 2;
  {
    Dyadic h0 = min(d.clearance.mul_pow2(-3), Dyadic(BigInt(1), -2));
    while (Dyadic::pow2(-gbits) > h0) ++gbits;
  }
  Dyadic target = Dyadic::pow2(-k);

  for (int round = 0; round < budget.max_rounds; ++round, ++gbits) {
    if (out.hi - out.lo <= target) break;
    std::unique_ptr<CellGrid> grid;
    try {
      grid = std::make_unique<CellGrid>(poly, gbits, budget.max_cells);
    } catch (const contract_fault&) {
      out.budget_exhausted = true;
      break;
    }
    detail::GridContext ctx;
    ctx.poly = &poly;
    ctx.grid = grid.get();
    ctx.wc = grid->cell_of(w);
    ctx.c1 = grid->cell_of(s1);
    ctx.c2 = grid->cell_of(s2);
    auto p1 = detail::bfs_path(*grid, ctx.c1, ctx.wc);
    auto p2 = detail::bfs_path(*grid, ctx.c2, ctx.wc);
    if (!p1 || !p2) continue;  // unresolved at this resolution
    ctx.path1 = *p1;
    ctx.path2 = *p2;
    ctx.on_path1.assign(static_cast<std::size_t>(grid->nx()) * grid->ny(), 0);
    ctx.on_path2 = ctx.on_path1;
    for (auto [i, j] : ctx.path1) ctx.on_path1[grid->idx(i, j)] = 1;
    for (auto [i, j] : ctx.path2) ctx.on_path2[grid->idx(i, j)] = 1;

    std::vector<std::uint32_t> stamp(static_cast<std::size_t>(grid->nx()) * grid->ny(), 0);
    std::uint32_t tick = 0;

    // grow the certified lower bound by bisection on D
    Dyadic cert = out.lo;
    Dyadic fail_floor = out.hi;
    for (int step = 0; step < budget.bisection_steps; ++step) {
      if (fail_floor - cert <= max(target.mul_pow2(-2), grid->h()) || cert >= out.hi) break;
      Dyadic D = (cert + min(fail_floor, out.hi)).mul_pow2(-1);
      if (D <= cert) break;
      auto bad = detail::anchored_removal_test(ctx, D, false, stamp, tick);
      if (!bad) {
        cert = D;
      } else {
        fail_floor = D;
        // use the failing anchor as a hint for better witnesses
        Pt hint = grid->center(std::max<std::int64_t>(bad->first, 0),
                               std::max<std::int64_t>(bad->second, 0));
        Dyadic reach = D + grid->h().mul_pow2(3);
        detail::try_neck_witnesses(poly, s1, s2, w, hint, reach, out);
        detail::try_slit_hairpins(poly, s1, s2, w, hint, reach, out);
        detail::try_loop_witnesses(poly, s1, s2, w, out.hi, k, out);
      }
    }
    out.lo = max(out.lo, cert);
    if (out.hi - out.lo <= target) break;
    if (round + 1 == budget.max_rounds) out.budget_exhausted = true;
  }
  (void)mid;
  return out;
}

enum class SeparatingOutcome { Feasible, Infeasible, Unknown };

struct SeparatingResult {
  SeparatingOutcome outcome = SeparatingOutcome::Unknown;
  PolyCurve curve;            // for Feasible
  std::string certificate;    // for Infeasible: the grid parameters used
};

// One-shot feasibility of a separating curve of diameter <= D, with the
// Jung-disk removal certificate for infeasibility.
inline SeparatingResult min_diameter_separating_curve(const PointedDomain& d, const Pt& s1,
                                                      const Pt& s2, const Pt& w,
                                                      const Dyadic& D,
                                                      MetricBudget budget = {}) {
  if (!(D.sign() > 0)) throw contract_fault("separating curve: D must be positive");
  const Polygon& poly = d.poly;
  SeparatingResult res;
  // Euclidean clamp: a loop containing both targets has diameter >= |s1-s2|
  // (and so do neck crosscuts in the supported domain families)
  Dyadic euclid = sqrt_bracket(geom::dist2(s1, s2).to_rational(), 50).lo;
  if (euclid > D) {
    res.outcome = SeparatingOutcome::Infeasible;
    res.certificate = "euclidean lower bound |s1-s2| exceeds D";
    return res;
  }
  CertifiedDistance probe;
  probe.hi = D + D;  // cap
  detail::try_loop_witnesses(poly, s1, s2, w, D.mul_pow2(1), 20, probe);
  detail::try_neck_witnesses(poly, s1, s2, w,
                             Pt{(s1.x + s2.x).mul_pow2(-1), (s1.y + s2.y).mul_pow2(-1)},
                             D.mul_pow2(2), probe);
  if (!probe.witness.v.empty() && probe.hi <= D) {
    res.outcome = SeparatingOutcome::Feasible;
    res.curve = probe.witness;
    return res;
  }
  int gbits = 4;
  while (Dyadic::pow2(-gbits) > D.mul_pow2(-3)) ++gbits;
  try {
    CellGrid grid(poly, gbits, budget.max_cells);
    detail::GridContext ctx;
    ctx.poly = &poly;
    ctx.grid = &grid;
    ctx.wc = grid.cell_of(w);
    ctx.c1 = grid.cell_of(s1);
    ctx.c2 = grid.cell_of(s2);
    auto p1 = detail::bfs_path(grid, ctx.c1, ctx.wc);
    auto p2 = detail::bfs_path(grid, ctx.c2, ctx.wc);
    if (p1 && p2) {
      ctx.path1 = *p1;
      ctx.path2 = *p2;
      ctx.on_path1.assign(static_cast<std::size_t>(grid.nx()) * grid.ny(), 0);
      ctx.on_path2 = ctx.on_path1;
      for (auto [i, j] : ctx.path1) ctx.on_path1[grid.idx(i, j)] = 1;
      for (auto [i, j] : ctx.path2) ctx.on_path2[grid.idx(i, j)] = 1;
      std::vector<std::uint32_t> stamp(static_cast<std::size_t>(grid.nx()) * grid.ny(), 0);
      std::uint32_t tick = 0;
      auto bad = detail::anchored_removal_test(ctx, D, /*disk_shape=*/true, stamp, tick);
      if (!bad) {
        res.outcome = SeparatingOutcome::Infeasible;
        res.certificate = "jung-disk removal certificate at grid 2^-" +
                          std::to_string(grid.gbits()) + ", radius D/sqrt(3) + 2h";
        return res;
      }
    }
  } catch (const contract_fault&) {
    // fall through to Unknown
  }
  return res;
}

// ---------------------------------------------------------------------------
// epsilon net

struct EpsilonNet {
  std::vector<Pt> points;
  std::vector<Pt> uncovered_cells;  // centers of cells without a certificate
  bool budget_exhausted = false;
};

namespace detail {

// Certifies that every W-point of the closed rect [lo, hi] is within
// crosscut distance `target` of the net point q.
//   Loop route: a loop in W enclosing the whole rect and q, excluding w,
//   of diameter <= target. Sound for arbitrary rect/domain interaction.
//   Crosscut route: a validated crosscut gamma with q in N_gamma, the curve
//   disjoint from the rect, and every rect corner/center either outside the
//   domain or inside the closure of N_gamma. Splitting once on failure.
inline bool cover_rect(const Polygon& poly, const Pt& w, const Pt& lo, const Pt& hi,
                       const Pt& q, const Dyadic& target, int k, int depth) {
  Pt c{(lo.x + hi.x).mul_pow2(-1), (lo.y + hi.y).mul_pow2(-1)};
  std::vector<Pt> samples = {lo, hi, Pt{lo.x, hi.y}, Pt{hi.x, lo.y}, c};

  // loop route
  Dyadic reach = max(sqrt_bracket(geom::dist2(c, q).to_rational(), k + 6).hi,
                     sqrt_bracket(geom::dist2(lo, hi).to_rational(), k + 6).hi);
  Dyadic need = reach.mul_pow2(1) + reach.mul_pow2(-4) + Dyadic::pow2(-k - 6);
  if (need <= target) {
    PolyCurve loop = witness_circle(c, need, loop_sides_for(k));
    Polygon lp{loop.v};
    bool encl = geom::point_location(lp, q) == Loc::Inside;
    for (const Pt& s : samples)
      if (geom::point_location(lp, s) != Loc::Inside) encl = false;
    if (encl && validate_loop_witness(poly, loop, q, q, w) &&
        geom::curve_diameter(loop).hi <= target)
      return true;
  }

  // crosscut route
  CertifiedDistance probe;
  probe.hi = target;
  try_neck_witnesses(poly, q, q, w, c, target.mul_pow2(1), probe);
  try_slit_hairpins(poly, q, q, w, c, target.mul_pow2(1), probe);
  if (!probe.witness.v.empty() && !probe.witness.closed) {
    try {
      geom::SplitResult sr = geom::split_by_crosscut(poly, geom::Crosscut{probe.witness, 0}, w);
      bool ok = geom::point_location(sr.n_gamma, q) == Loc::Inside;
      // curve must stay clear of the rect
      for (std::size_t i = 0; ok && i + 1 < probe.witness.v.size(); ++i) {
        const Pt& a = probe.witness.v[i];
        const Pt& b = probe.witness.v[i + 1];
        bool in_x = !(max(a.x, b.x) < lo.x || hi.x < min(a.x, b.x));
        bool in_y = !(max(a.y, b.y) < lo.y || hi.y < min(a.y, b.y));
        if (in_x && in_y) {
          // conservative: bounding boxes meet, test the four rect sides
          Pt r1{lo.x, lo.y}, r2{hi.x, lo.y}, r3{hi.x, hi.y}, r4{lo.x, hi.y};
          for (auto [u, v] : {std::pair{r1, r2}, {r2, r3}, {r3, r4}, {r4, r1}})
            if (geom::classify_segments(a, b, u, v) != geom::SegRel::Disjoint) ok = false;
          if (ok && geom::point_location(Polygon{{r1, r2, r3, r4}}, a) == Loc::Inside)
            ok = false;
        }
      }
      for (const Pt& s : samples) {
        if (!ok) break;
        if (geom::point_location(poly, s) == Loc::Outside) continue;
        if (geom::point_location(sr.n_gamma, s) == Loc::Outside) ok = false;
      }
      if (ok) return true;
    } catch (const contract_fault&) {
    }
  }

  if (depth > 0) {
    bool all = true;
    for (auto [sx, sy] : {std::pair{0, 0}, {0, 1}, {1, 0}, {1, 1}}) {
      Pt sub_lo{sx == 0 ? lo.x : c.x, sy == 0 ? lo.y : c.y};
      Pt sub_hi{sx == 0 ? c.x : hi.x, sy == 0 ? c.y : hi.y};
      if (!cover_rect(poly, w, sub_lo, sub_hi, q, target, k, depth - 1)) all = false;
    }
    return all;
  }
  return false;
}

}  // namespace detail

// A finite set of interior ideal points such that every point of the
// completion is within crosscut distance 2^-k of the net, certified per cell
// by witness curves.
inline EpsilonNet epsilon_net(const PointedDomain& d, int k, MetricBudget budget = {}) {
  const Polygon& poly = d.poly;
  const Pt& w = d.w;
  int gbits = k + 2;
  EpsilonNet net;
  CellGrid grid(poly, gbits, budget.max_cells);

  // net: free-cell centers on a 2^-(k+1) sublattice, plus every free cell
  // center adjacent to a boundary cell (fjord ladders come from these)
  std::vector<std::uint8_t> is_net(static_cast<std::size_t>(grid.nx()) * grid.ny(), 0);
  auto near_boundary = [&](std::int64_t i, std::int64_t j) {
    for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}})
      if (grid.in_range(i + di, j + dj) && grid.cls(i + di, j + dj) == CellGrid::kBoundary)
        return true;
    return false;
  };
  for (std::int64_t j = 0; j < grid.ny(); ++j)
    for (std::int64_t i = 0; i < grid.nx(); ++i) {
      if (grid.cls(i, j) != CellGrid::kFree) continue;
      if ((i % 2 == 0 && j % 2 == 0) || near_boundary(i, j)) {
        is_net[grid.idx(i, j)] = 1;
        net.points.push_back(grid.center(i, j));
      }
    }

  Dyadic target = Dyadic::pow2(-k);
  Dyadic h2 = grid.h().mul_pow2(-1);
  for (std::int64_t j = 0; j < grid.ny(); ++j)
    for (std::int64_t i = 0; i < grid.nx(); ++i) {
      if (grid.cls(i, j) == CellGrid::kOutside) continue;
      std::optional<Pt> q;
      Dyadic best_d2;
      Pt c = grid.center(i, j);
      for (std::int64_t dj = -3; dj <= 3; ++dj)
        for (std::int64_t di = -3; di <= 3; ++di)
          if (grid.in_range(i + di, j + dj) && is_net[grid.idx(i + di, j + dj)]) {
            Pt cand = grid.center(i + di, j + dj);
            Dyadic d2 = geom::dist2(c, cand);
            if (!q || d2 < best_d2) {
              q = cand;
              best_d2 = d2;
            }
          }
      if (!q) {
        net.uncovered_cells.push_back(c);
        continue;
      }
      Pt lo{c.x - h2, c.y - h2}, hi{c.x + h2, c.y + h2};
      if (!detail::cover_rect(poly, w, lo, hi, *q, target, k, 1))
        net.uncovered_cells.push_back(c);
    }
  net.budget_exhausted = !net.uncovered_cells.empty();
  return net;
}

}  // namespace carat::metric
