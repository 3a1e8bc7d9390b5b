#pragma once

// Pointed simply-connected domain models: exact polygons (slits allowed),
// analytic shapes with polygonal sandwiches, Hausdorff approximation pairs,
// and the constructed families: fjord, peninsula, wedge.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "carat/geometry.hpp"

namespace carat::dom {

using geom::Loc;
using geom::Polygon;
using geom::Pt;

// Simulated enumeration of a lower-computable set: the pair (index, step)
// means `index` is enumerated at `step`. A stand-in for a genuinely
// non-computable set, which no terminating program can provide.
struct EnumerationSchedule {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> events;  // (index, step)

  void validate() const {
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (events[i].second == 0) throw contract_fault("schedule: steps start at 1");
      for (std::size_t j = i + 1; j < events.size(); ++j)
        if (events[i].first == events[j].first)
          throw contract_fault("schedule: index enumerated twice");
    }
  }
  std::optional<std::uint64_t> step_of(std::uint64_t index) const {
    for (const auto& [i, t] : events)
      if (i == index) return t;
    return std::nullopt;
  }
  // indices enumerated by step s (monotone in s by construction)
  std::vector<std::uint64_t> enumerated_by(std::uint64_t s) const {
    std::vector<std::uint64_t> out;
    for (const auto& [i, t] : events)
      if (t <= s) out.push_back(i);
    return out;
  }
};

struct ApproximationPair {
  int n = 0;
  Polygon inner;  // L_n subset of W
  Polygon outer;  // U_n superset of W
  Dyadic inner_bound;  // certified dist_H(inner, closure W) bound
  Dyadic outer_bound;
};

enum class AnalyticShape { None, UnitDisk };

enum class DecorKind { Fjord, Peninsula };

struct DecorationData {
  DecorKind kind;
  EnumerationSchedule schedule;
  std::uint64_t stage = 0;
  std::uint64_t i_max = 0;
};

struct PointedDomain {
  enum class Kind { ExactPolygon, Analytic, OracleSandwich };

  Kind kind = Kind::ExactPolygon;
  Polygon poly;                 // ExactPolygon (and polygonal model for Analytic)
  AnalyticShape analytic = AnalyticShape::None;
  std::function<ApproximationPair(int)> pair_oracle;  // OracleSandwich only
  Pt w;                         // basepoint
  Dyadic area_upper;            // A >= area(W)
  Dyadic clearance;             // M <= dist(w, boundary)
  Dyadic hausdorff_tail;        // certified slack of poly vs the ideal domain
  bool has_slits = false;
  std::optional<DecorationData> decor;
};

namespace detail {

inline Dyadic snap_nearest(const BigRat& q, int bits) {
  BigInt num = boost::multiprecision::numerator(q) << static_cast<unsigned>(bits + 1);
  BigInt den = boost::multiprecision::denominator(q);
  BigInt fl = num / den;
  if (fl * den > num) fl -= 1;
  // round half up at the last bit
  return Dyadic((fl + 1) >> 1, -bits);
}
inline Dyadic snap_down(const BigRat& q, int bits) {
  BigInt num = boost::multiprecision::numerator(q) << static_cast<unsigned>(bits);
  BigInt den = boost::multiprecision::denominator(q);
  BigInt fl = num / den;
  if (fl * den > num) fl -= 1;
  return Dyadic(fl, -bits);
}

}  // namespace detail

// Convexity (no reflex turns), exact.
inline bool is_convex(const Polygon& p) {
  std::size_t n = p.v.size();
  for (std::size_t i = 0; i < n; ++i)
    if (geom::orient(p.v[i], p.at(i + 1), p.at(i + 2)) < 0) return false;
  return true;
}

// exact min squared distance from p to the boundary walk
inline BigRat boundary_dist2(const Polygon& poly, const Pt& p) {
  BigRat best = geom::dist2_point_seg(p, poly.v[0], poly.at(1));
  for (std::size_t i = 1; i < poly.v.size(); ++i)
    best = std::min(best, geom::dist2_point_seg(p, poly.v[i], poly.at(i + 1)));
  return best;
}

// B inside A (closed containment), exact sufficient test for our polygons.
inline bool polygon_contains(const Polygon& outer, const Polygon& inner) {
  for (const Pt& p : inner.v)
    if (geom::point_location(outer, p) == Loc::Outside) return false;
  for (std::size_t i = 0; i < inner.v.size(); ++i)
    for (std::size_t j = 0; j < outer.v.size(); ++j)
      if (geom::classify_segments(inner.v[i], inner.at(i + 1), outer.v[j],
                                  outer.at(j + 1)) == geom::SegRel::Cross)
        return false;
  return true;
}

// ---------------------------------------------------------------------------
// Decorated square builder

// A decoration attached to the top edge of the unit square.
struct TopFeature {
  enum class Kind { SlitDown, ChannelDown, BoxUp };
  Kind kind;
  Dyadic center;
  Dyadic half_width;  // zero for slits
  Dyadic far_y;       // bottom of the carved channel / top of the peninsula
  std::uint64_t index = 0;
};

// Builds the ccw boundary walk of [0,1]^2 with the features applied to the
// top edge. Features must be pairwise disjoint along the edge; validated
// exactly. Channels carve exterior strips downward; boxes add interior
// rectangles upward; slits are zero-width doubled walks.
inline Polygon decorated_square(std::vector<TopFeature> features) {
  const Dyadic one(1);
  std::sort(features.begin(), features.end(),
            [](const TopFeature& a, const TopFeature& b) { return b.center < a.center; });
  // disjointness along the top edge (walked right to left)
  for (std::size_t i = 0; i + 1 < features.size(); ++i) {
    Dyadic left_i = features[i].center - features[i].half_width;
    Dyadic right_next = features[i + 1].center + features[i + 1].half_width;
    if (!(right_next < left_i))
      throw contract_fault("decorated_square: features overlap (schedule collision)");
  }
  for (const TopFeature& f : features) {
    if (f.center - f.half_width <= Dyadic(0) || f.center + f.half_width >= one)
      throw contract_fault("decorated_square: feature leaves the top edge");
    if (f.kind != TopFeature::Kind::BoxUp && !(f.far_y < one && f.far_y.sign() > 0))
      throw contract_fault("decorated_square: channel depth out of range");
    if (f.kind == TopFeature::Kind::BoxUp && !(f.far_y > one))
      throw contract_fault("decorated_square: box top must lie above the square");
  }

  Polygon p;
  p.v = {Pt{Dyadic(0), Dyadic(0)}, Pt{one, Dyadic(0)}, Pt{one, one}};
  for (const TopFeature& f : features) {
    Dyadic l = f.center - f.half_width, r = f.center + f.half_width;
    switch (f.kind) {
      case TopFeature::Kind::SlitDown:
        p.v.push_back(Pt{f.center, one});
        p.v.push_back(Pt{f.center, f.far_y});
        p.v.push_back(Pt{f.center, one});
        break;
      case TopFeature::Kind::ChannelDown:
        p.v.push_back(Pt{r, one});
        p.v.push_back(Pt{r, f.far_y});
        p.v.push_back(Pt{l, f.far_y});
        p.v.push_back(Pt{l, one});
        break;
      case TopFeature::Kind::BoxUp:
        p.v.push_back(Pt{r, one});
        p.v.push_back(Pt{r, f.far_y});
        p.v.push_back(Pt{l, f.far_y});
        p.v.push_back(Pt{l, one});
        break;
    }
  }
  p.v.push_back(Pt{Dyadic(0), one});
  if (geom::area2(p).sign() <= 0) throw contract_fault("decorated_square: orientation bug");
  return p;
}

// ---------------------------------------------------------------------------
// Fjord / peninsula families

constexpr std::uint64_t kFeatureCap = 1024;  // desk-scale truncation of i_max = 2^s
constexpr int kSnapBits = 64;

// x_i = 1 - 1/(2i), snapped once and used consistently across stages.
inline Dyadic feature_position(std::uint64_t i) {
  return detail::snap_nearest(BigRat(1) - BigRat(1, BigInt(2) * i), kSnapBits);
}
// s_i = min{2^-t, 1/(3 i^2)} for enumeration step t, snapped downward.
inline Dyadic feature_half_width(std::uint64_t i, std::uint64_t t) {
  BigRat cap(1, BigInt(3) * i * i);
  if (t >= 200) return Dyadic(0);  // below every representable budget
  BigRat step_term(1, BigInt(1) << static_cast<unsigned>(t));
  return detail::snap_down(std::min(cap, step_term), kSnapBits);
}

inline std::uint64_t fjord_i_max(std::uint64_t s) {
  std::uint64_t full = s >= 63 ? kFeatureCap : std::min<std::uint64_t>(kFeatureCap, 1ull << s);
  return std::max<std::uint64_t>(full, 1);
}

// Boundary of the stage-s fjord domain: unit square with an i-line (slit) at
// x_i for unenumerated i, an i-fjord (carved channel of half-width s_i) for i
// enumerated by step s; indices i <= i_max realized, the tail accounted for in
// the certified Hausdorff term.
inline PointedDomain fjord_domain(const EnumerationSchedule& sched, std::uint64_t s) {
  if (s < 1) throw contract_fault("fjord_domain: stage must be >= 1");
  sched.validate();
  std::uint64_t imax = fjord_i_max(s);
  std::vector<TopFeature> fs;
  for (std::uint64_t i = 1; i <= imax; ++i) {
    Dyadic x = feature_position(i);
    auto t = sched.step_of(i);
    Dyadic hw = (t && *t <= s) ? feature_half_width(i, *t) : Dyadic(0);
    if (hw.sign() > 0)
      fs.push_back({TopFeature::Kind::ChannelDown, x, hw, x, i});
    else
      fs.push_back({TopFeature::Kind::SlitDown, x, Dyadic(0), x, i});
  }
  PointedDomain d;
  d.kind = PointedDomain::Kind::ExactPolygon;
  d.poly = decorated_square(std::move(fs));
  d.w = Pt{Dyadic(BigInt(1), -1), Dyadic(BigInt(1), -2)};  // (1/2, 1/4)
  d.clearance = Dyadic(BigInt(1), -2);
  d.area_upper = Dyadic(1);
  d.has_slits = true;
  // tail: omitted features are shallower than 1/(2(imax+1)); plus stage lag
  Dyadic tail = detail::snap_nearest(BigRat(1, BigInt(2) * (imax + 1)), kSnapBits) +
                Dyadic::pow2(-static_cast<std::int64_t>(std::min<std::uint64_t>(s, 200)));
  d.hausdorff_tail = tail + Dyadic::pow2(-(kSnapBits - 4));
  d.decor = DecorationData{DecorKind::Fjord, sched, s, imax};
  if (!geom::is_simple_polygon(d.poly, true))
    throw contract_fault("fjord_domain: boundary not simple");
  if (boundary_dist2(d.poly, d.w) < (d.clearance * d.clearance).to_rational())
    throw contract_fault("fjord_domain: clearance certificate failed");
  return d;
}

// Stage-s peninsula domain: unit square with an outward rectangular peninsula
// of height 1/2 at each index enumerated by step s; nothing elsewhere.
inline PointedDomain peninsula_domain(const EnumerationSchedule& sched, std::uint64_t s) {
  if (s < 1) throw contract_fault("peninsula_domain: stage must be >= 1");
  sched.validate();
  std::uint64_t imax = fjord_i_max(s);
  const Dyadic top{BigInt(3), -1};  // 1.5
  std::vector<TopFeature> fs;
  for (std::uint64_t i = 1; i <= imax; ++i) {
    auto t = sched.step_of(i);
    if (t && *t <= s) {
      Dyadic hw = feature_half_width(i, *t);
      if (hw.sign() > 0)
        fs.push_back({TopFeature::Kind::BoxUp, feature_position(i), hw, top, i});
    }
  }
  PointedDomain d;
  d.kind = PointedDomain::Kind::ExactPolygon;
  d.poly = decorated_square(std::move(fs));
  d.w = Pt{Dyadic(BigInt(1), -1), Dyadic(BigInt(1), -1)};
  d.clearance = Dyadic(BigInt(1), -1);
  d.area_upper = Dyadic(2);
  d.hausdorff_tail = detail::snap_nearest(BigRat(1, BigInt(2) * (imax + 1)), kSnapBits) +
                     Dyadic::pow2(-static_cast<std::int64_t>(std::min<std::uint64_t>(s, 200))) +
                     Dyadic::pow2(-(kSnapBits - 4));
  d.decor = DecorationData{DecorKind::Peninsula, sched, s, imax};
  if (!geom::is_simple_polygon(d.poly, false))
    throw contract_fault("peninsula_domain: boundary not simple");
  if (boundary_dist2(d.poly, d.w) < (d.clearance * d.clearance).to_rational())
    throw contract_fault("peninsula_domain: clearance certificate failed");
  return d;
}

inline PointedDomain square_domain() {
  PointedDomain d;
  d.kind = PointedDomain::Kind::ExactPolygon;
  d.poly = decorated_square({});
  d.w = Pt{Dyadic(BigInt(1), -1), Dyadic(BigInt(1), -1)};
  d.clearance = Dyadic(BigInt(1), -1);
  d.area_upper = Dyadic(1);
  return d;
}

inline PointedDomain polygon_domain(Polygon p, Pt w, bool slits = false) {
  PointedDomain d;
  d.kind = PointedDomain::Kind::ExactPolygon;
  d.poly = std::move(p);
  d.w = w;
  d.has_slits = slits;
  if (!geom::is_simple_polygon(d.poly, slits))
    throw contract_fault("polygon_domain: boundary not simple");
  if (geom::point_location(d.poly, w) != Loc::Inside)
    throw contract_fault("polygon_domain: basepoint not inside");
  BigRat m2 = boundary_dist2(d.poly, w);
  d.clearance = sqrt_bracket(m2, 48).lo;
  Dyadic a2 = geom::area2(d.poly);
  d.area_upper = a2.mul_pow2(-1) + Dyadic::pow2(-40);
  return d;
}

// Point near radius*e^{i 2 pi turns}, snapped to the 2^-grid_bits lattice.
// Approximate by design; callers certify what they need exactly.
inline Pt circle_point(const Dyadic& radius, const Dyadic& turns, int grid_bits) {
  DyInterval pi = pi_bracket(grid_bits + 8);
  Dyadic theta = (pi.lo + pi.hi) * turns;  // 2*pi*turns up to bracket width
  DyInterval c = cos_bracket(theta, grid_bits + 6);
  DyInterval s = sin_bracket(theta, grid_bits + 6);
  return Pt{(radius * (c.lo + c.hi).mul_pow2(-1)).round_to(grid_bits),
            (radius * (s.lo + s.hi).mul_pow2(-1)).round_to(grid_bits)};
}

// Inscribed regular m-gon of the unit disk with every vertex certified
// strictly inside; returns the polygon and a certified Hausdorff bound.
inline std::pair<Polygon, Dyadic> inscribed_disk_polygon(int m, int grid_bits = 48) {
  Polygon p;
  Dyadic shrink = Dyadic(1) - Dyadic::pow2(-grid_bits + 4);
  for (int j = 0; j < m; ++j)
    p.v.push_back(circle_point(shrink, detail::snap_nearest(BigRat(j, m), grid_bits + 8),
                               grid_bits));
  for (const Pt& v : p.v)
    if (!(v.x * v.x + v.y * v.y < Dyadic(1)))
      throw contract_fault("inscribed polygon vertex escaped the disk");
  if (!geom::is_simple_polygon(p)) throw contract_fault("inscribed polygon degenerate");
  // dist_H(polygon, closed disk) = 1 - apothem, apothem^2 exact
  BigRat apo2 = boundary_dist2(p, Pt{Dyadic(0), Dyadic(0)});
  return {p, Dyadic(1) - sqrt_bracket(apo2, grid_bits).lo};
}

// Circumscribed m-gon containing the closed unit disk (exact containment via
// origin-to-edge-line distance >= 1 plus convexity), with certified bound.
inline std::pair<Polygon, Dyadic> circumscribed_disk_polygon(int m, int grid_bits = 48) {
  DyInterval pi = pi_bracket(60);
  Dyadic pim = pi.hi * detail::snap_nearest(BigRat(1, m), 60) + Dyadic::pow2(-50);
  Dyadic c_lo = cos_bracket(pim, 60).lo;  // cos decreasing: lower bound of cos(pi/m)
  Dyadic radius = detail::snap_nearest(BigRat(1) / c_lo.to_rational(), grid_bits) +
                  Dyadic::pow2(-grid_bits + 6);
  Polygon p;
  for (int j = 0; j < m; ++j)
    p.v.push_back(circle_point(radius, detail::snap_nearest(BigRat(j, m), grid_bits + 8),
                               grid_bits));
  for (std::size_t i = 0; i < p.v.size(); ++i) {
    const Pt& a = p.v[i];
    const Pt& b = p.at(i + 1);
    Dyadic cr = geom::cross(a, b);
    if (!(cr.sign() > 0 && cr * cr >= geom::dist2(a, b)))
      throw contract_fault("circumscribed polygon edge dips into disk");
  }
  if (!geom::is_simple_polygon(p) || !is_convex(p))
    throw contract_fault("circumscribed polygon degenerate");
  Dyadic worst(0);
  for (const Pt& v : p.v)
    worst = max(worst, sqrt_bracket((v.x * v.x + v.y * v.y).to_rational(), grid_bits).hi -
                           Dyadic(1));
  return {p, worst};
}

inline PointedDomain unit_disk_domain(int model_edges = 256) {
  auto [p, err] = inscribed_disk_polygon(model_edges);
  PointedDomain d;
  d.kind = PointedDomain::Kind::Analytic;
  d.analytic = AnalyticShape::UnitDisk;
  d.poly = std::move(p);
  d.w = Pt{Dyadic(0), Dyadic(0)};
  d.area_upper = Dyadic(BigInt(13), -2);  // 3.25 > pi
  d.clearance = sqrt_bracket(boundary_dist2(d.poly, d.w), 48).lo;
  d.hausdorff_tail = err;
  return d;
}

// ---------------------------------------------------------------------------
// sandwich: inner/outer Hausdorff approximants

namespace detail {

inline int largest_feasible_n(const Dyadic& bound) {
  if (bound.is_zero()) return 200;
  std::int64_t e = bound.msb_exp();  // bound < 2^e
  return static_cast<int>(std::max<std::int64_t>(-e, 0));
}

}  // namespace detail

// Computes a certified ApproximationPair at index n. Supported shapes:
// convex exact polygons (scaling about the basepoint), the analytic unit
// disk (inscribed/circumscribed gons), and the fjord/peninsula families
// (stage constructions). Throws contract_fault otherwise.
inline ApproximationPair sandwich(const PointedDomain& d, int n) {
  if (n < 0) throw contract_fault("sandwich: n must be >= 0");
  ApproximationPair pair;
  pair.n = n;

  if (d.kind == PointedDomain::Kind::OracleSandwich) {
    if (!d.pair_oracle) throw contract_fault("sandwich: missing pair oracle");
    return d.pair_oracle(n);
  }

  if (d.kind == PointedDomain::Kind::Analytic && d.analytic == AnalyticShape::UnitDisk) {
    int m = std::max(64, 2 << ((n + 6) / 2));
    auto [inner, ierr] = inscribed_disk_polygon(m);
    auto [outer, oerr] = circumscribed_disk_polygon(m);
    if (!(ierr < Dyadic::pow2(-n)) || !(oerr < Dyadic::pow2(-n)))
      throw contract_fault("sandwich: disk polygon bound failed certification");
    pair.inner = std::move(inner);
    pair.outer = std::move(outer);
    pair.inner_bound = ierr;
    pair.outer_bound = oerr;
    return pair;
  }

  if (d.decor) {
    // Monotone families: fjords only shrink W as the schedule unfolds,
    // peninsulas only grow it, and closures are unaffected by slits. The
    // sandwich therefore comes from stage constructions directly.
    const DecorationData& dd = *d.decor;
    std::uint64_t final_step = 0;
    for (const auto& [i, t] : dd.schedule.events) final_step = std::max(final_step, t);
    // deep enough that the stage-lag term 2^-deep is dominated
    std::uint64_t deep =
        std::max<std::uint64_t>({dd.stage, final_step, static_cast<std::uint64_t>(n) + 8});
    PointedDomain final_stage = dd.kind == DecorKind::Fjord
                                    ? fjord_domain(dd.schedule, deep)
                                    : peninsula_domain(dd.schedule, deep);
    std::uint64_t imax = final_stage.decor->i_max;

    if (dd.kind == DecorKind::Fjord) {
      // inner: deepest stage with the top-right corner chamfered away by one
      // wide shallow channel that swallows all features at x >= cut_x
      Dyadic cut_x = detail::snap_down(
          BigRat(1) - BigRat(1, BigInt(2) * (imax + 1)) - BigRat(1, BigInt(1) << 30),
          kSnapBits);
      std::vector<TopFeature> fs;
      for (std::uint64_t i = 1; i <= imax; ++i) {
        Dyadic x = feature_position(i);
        auto t = dd.schedule.step_of(i);
        Dyadic hw = t ? feature_half_width(i, *t) : Dyadic(0);
        if (x + hw + Dyadic::pow2(-30) >= cut_x) {
          // extend the corner cut to keep features strictly clear of it
          cut_x = min(cut_x, x - hw - Dyadic::pow2(-30));
          continue;
        }
        if (t && !hw.is_zero())
          fs.push_back({TopFeature::Kind::ChannelDown, x, hw, x, i});
        else
          fs.push_back({TopFeature::Kind::SlitDown, x, Dyadic(0), x, i});
      }
      // drop any kept feature that the extended cut now reaches
      std::erase_if(fs, [&](const TopFeature& f) {
        return f.center + f.half_width + Dyadic::pow2(-32) >= cut_x;
      });
      Dyadic cc = (cut_x + Dyadic(1)).mul_pow2(-1);
      Dyadic hw = (Dyadic(1) - cut_x).mul_pow2(-1) - Dyadic::pow2(-kSnapBits + 2);
      fs.push_back({TopFeature::Kind::ChannelDown, cc, hw, cut_x, 0});
      Dyadic side = Dyadic(1) - cut_x;
      Dyadic box_diag = sqrt_bracket((side * side).to_rational() * 2, 48).hi;
      pair.inner = decorated_square(std::move(fs));
      pair.outer = final_stage.poly;
      pair.inner_bound = box_diag + final_stage.hausdorff_tail;
      pair.outer_bound = final_stage.hausdorff_tail;
    } else {
      // peninsulas: the fully-unfolded stage is the ideal domain up to tail
      pair.inner = final_stage.poly;
      pair.outer = final_stage.poly;
      pair.inner_bound = final_stage.hausdorff_tail;
      pair.outer_bound = final_stage.hausdorff_tail;
    }
    Dyadic target = Dyadic::pow2(-n);
    Dyadic worst = max(pair.inner_bound, pair.outer_bound);
    if (!(worst < target))
      throw contract_fault("sandwich: degenerate-inner at n=" + std::to_string(n) +
                           ", largest feasible n=" +
                           std::to_string(detail::largest_feasible_n(worst)));
    return pair;
  }

  if (d.kind == PointedDomain::Kind::ExactPolygon && is_convex(d.poly)) {
    // scale about w: Hausdorff <= lambda * max |v - w|
    Dyadic r2(0);
    for (const Pt& v : d.poly.v) r2 = max(r2, geom::dist2(v, d.w));
    Dyadic radius = sqrt_bracket(r2.to_rational(), 48).hi;
    std::int64_t k = 1;
    while (Dyadic::pow2(-k) * radius >= Dyadic::pow2(-n - 1)) ++k;
    Dyadic lam = Dyadic::pow2(-k);
    auto scaled = [&](const Dyadic& f) {
      Polygon out;
      for (const Pt& v : d.poly.v)
        out.v.push_back(Pt{d.w.x + (v.x - d.w.x) * f, d.w.y + (v.y - d.w.y) * f});
      return out;
    };
    pair.inner = scaled(Dyadic(1) - lam);
    pair.outer = scaled(Dyadic(1) + lam);
    pair.inner_bound = lam * radius;
    pair.outer_bound = lam * radius;
    if (!polygon_contains(d.poly, pair.inner) || !polygon_contains(pair.outer, d.poly))
      throw contract_fault("sandwich: scaling containment failed");
    return pair;
  }

  throw contract_fault(
      "sandwich: degenerate-inner (no certified construction for this domain shape)");
}

// ---------------------------------------------------------------------------
// Wedge Q(w, eps, r): the spiral-sheared boundary sector
// { (1-s) exp(i (1-s/r) theta) : s in [0,r], |theta - arg w| <= eps }.

struct WedgePolygon {
  Polygon poly;          // ccw boundary of the wedge region
  Dyadic hausdorff_bound;
  Dyadic anchor_angle;   // arg w
  Dyadic eps;
  Dyadic r;
  std::size_t arc_begin = 0;  // vertex index range of the outer arc
  std::size_t arc_end = 0;
};

namespace detail {

inline Pt spiral_point(const Dyadic& s, const Dyadic& r, const Dyadic& theta, int grid) {
  // (1-s) * e^{i (1 - s/r) theta }; s/r evaluated as a snapped ratio
  BigRat ratio = s.to_rational() / r.to_rational();
  Dyadic t = Dyadic(1) - snap_nearest(ratio, grid + 10);
  Dyadic phi = t * theta;
  Dyadic radius = Dyadic(1) - s;
  Dyadic c = (cos_bracket(phi, grid + 6).lo + cos_bracket(phi, grid + 6).hi).mul_pow2(-1);
  Dyadic sn = (sin_bracket(phi, grid + 6).lo + sin_bracket(phi, grid + 6).hi).mul_pow2(-1);
  return Pt{(radius * c).round_to(grid), (radius * sn).round_to(grid)};
}

}  // namespace detail

// Polygonal approximation of the wedge within Hausdorff 2^-tol_bits.
// Anchor given as the angle (radians, dyadic) of the unit-circle point w.
inline WedgePolygon wedge_at_angle(const Dyadic& anchor, const Dyadic& eps, const Dyadic& r,
                                   int tol_bits = 40) {
  if (!(r.sign() > 0) || !(r < Dyadic(BigInt(1), -1)))
    throw contract_fault("wedge: r out of range (0, 1/2)");
  if (!(eps.sign() > 0)) throw contract_fault("wedge: eps must be positive");
  const int grid = tol_bits + 10;
  // curvature bound |gamma''| <= 2u + u^2, u = |theta|/r over the sides
  Dyadic th_hi = abs(anchor) + eps;
  BigRat u = th_hi.to_rational() / r.to_rational();
  BigRat curv = 2 * u + u * u + 1;  // +1 covers the outer arc too
  // chord sagitta <= curv * step^2 / 8 <= 2^-(tol_bits+2)
  BigRat step2 = BigRat(1, BigInt(1) << static_cast<unsigned>(tol_bits + 2)) * 8 / curv;
  Dyadic step = sqrt_bracket(step2, grid).lo;
  if (step.sign() <= 0) throw contract_fault("wedge: tolerance too fine");

  auto steps_for = [&](const Dyadic& length) {
    BigRat q = length.to_rational() / step.to_rational();
    BigInt n = boost::multiprecision::numerator(q) / boost::multiprecision::denominator(q) + 1;
    if (n > 4'000'000) throw contract_fault("wedge: discretization too large");
    return static_cast<std::int64_t>(n.convert_to<long>());
  };

  WedgePolygon out;
  out.anchor_angle = anchor;
  out.eps = eps;
  out.r = r;
  Polygon& p = out.poly;

  Dyadic lo_ang = anchor - eps, hi_ang = anchor + eps;
  // outer arc from lo_ang to hi_ang at s=0 (ccw)
  std::int64_t arc_n = steps_for(eps.mul_pow2(1));
  out.arc_begin = p.v.size();
  for (std::int64_t j = 0; j <= arc_n; ++j) {
    BigRat f(j, arc_n);
    Dyadic ang = lo_ang + detail::snap_nearest(f * (hi_ang - lo_ang).to_rational(), grid + 8);
    Dyadic c = (cos_bracket(ang, grid + 6).lo + cos_bracket(ang, grid + 6).hi).mul_pow2(-1);
    Dyadic sn = (sin_bracket(ang, grid + 6).lo + sin_bracket(ang, grid + 6).hi).mul_pow2(-1);
    p.v.push_back(Pt{c.round_to(grid), sn.round_to(grid)});
  }
  out.arc_end = p.v.size();
  // hi-angle side, s: 0 -> r (skip s=0, shared with arc end)
  std::int64_t side_n = steps_for(r);
  for (std::int64_t j = 1; j < side_n; ++j) {
    Dyadic s = detail::snap_nearest(BigRat(j, side_n) * r.to_rational(), grid + 8);
    p.v.push_back(detail::spiral_point(s, r, hi_ang, grid));
  }
  // exact tip (1-r, 0)
  p.v.push_back(Pt{Dyadic(1) - r, Dyadic(0)});
  // lo-angle side, s: r -> 0 (skip tip and s=0)
  for (std::int64_t j = side_n - 1; j >= 1; --j) {
    Dyadic s = detail::snap_nearest(BigRat(j, side_n) * r.to_rational(), grid + 8);
    p.v.push_back(detail::spiral_point(s, r, lo_ang, grid));
  }
  // dedupe exact consecutive duplicates (deep-tail vertices can snap together)
  Polygon q;
  for (const Pt& v : p.v)
    if (q.v.empty() || !(v == q.v.back())) q.v.push_back(v);
  while (q.v.size() > 1 && q.v.front() == q.v.back()) q.v.pop_back();
  out.poly = std::move(q);
  if (geom::area2(out.poly).sign() < 0)
    std::reverse(out.poly.v.begin(), out.poly.v.end());

  out.hausdorff_bound = Dyadic::pow2(-tol_bits);
  if (out.poly.v.size() <= 200000 && !geom::is_simple_polygon(out.poly, true))
    throw contract_fault("wedge: discretized boundary not simple");
  return out;
}

inline WedgePolygon wedge(const Pt& w_on_circle, const Dyadic& eps, const Dyadic& r,
                          int tol_bits = 40) {
  DyInterval a = atan2_bracket(w_on_circle.y, w_on_circle.x, tol_bits + 16);
  Dyadic anchor = (a.lo + a.hi).mul_pow2(-1).round_to(tol_bits + 12);
  return wedge_at_angle(anchor, eps, r, tol_bits);
}

}  // namespace carat::dom
