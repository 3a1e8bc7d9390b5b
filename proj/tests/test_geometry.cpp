#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "carat/geometry.hpp"

using namespace carat;
using namespace carat::geom;

namespace {

Pt pt(long xm, int xe, long ym, int ye) {
  return {Dyadic(BigInt(xm), xe), Dyadic(BigInt(ym), ye)};
}
Pt pti(long x, long y) { return {Dyadic(x), Dyadic(y)}; }

Polygon unit_square() {
  return Polygon{{pti(0, 0), pti(1, 0), pti(1, 1), pti(0, 1)}};
}

Pt rand_pt(std::mt19937_64& rng, int denom_bits = 6, long range = 8) {
  std::uniform_int_distribution<long> d(-range << denom_bits, range << denom_bits);
  return {Dyadic(BigInt(d(rng)), -denom_bits), Dyadic(BigInt(d(rng)), -denom_bits)};
}

// independent O(n^2) diameter oracle
Dyadic brute_d2(const std::vector<Pt>& pts) {
  Dyadic best(0);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = max(best, dist2(pts[i], pts[j]));
  return best;
}

}  // namespace

TEST_CASE("predicates: orientation, on_segment, classification") {
  REQUIRE(orient(pti(0, 0), pti(1, 0), pti(0, 1)) > 0);
  REQUIRE(orient(pti(0, 0), pti(1, 0), pti(2, 0)) == 0);
  REQUIRE(on_segment(pt(1, -1, 1, -1), pti(0, 0), pti(1, 1)));
  REQUIRE(!on_segment(pt(1, -1, 1, -2), pti(0, 0), pti(1, 1)));

  REQUIRE(classify_segments(pti(0, 0), pti(2, 2), pti(0, 2), pti(2, 0)) == SegRel::Cross);
  REQUIRE(classify_segments(pti(0, 0), pti(1, 0), pti(1, 0), pti(2, 1)) == SegRel::Touch);
  REQUIRE(classify_segments(pti(0, 0), pti(1, 0), pti(0, 1), pti(1, 1)) == SegRel::Disjoint);
  REQUIRE(classify_segments(pti(0, 0), pti(2, 0), pti(1, 0), pti(3, 0)) == SegRel::Overlap);
  REQUIRE(classify_segments(pti(0, 0), pti(2, 0), pti(2, 0), pti(3, 0)) == SegRel::Touch);
  // T-touch in the middle of a segment
  REQUIRE(classify_segments(pti(0, 0), pti(2, 0), pti(1, 0), pti(1, 2)) == SegRel::Touch);
}

TEST_CASE("point_location on the unit square") {
  Polygon sq = unit_square();
  REQUIRE(point_location(sq, pt(1, -1, 1, -1)) == Loc::Inside);
  REQUIRE(point_location(sq, pti(2, 0)) == Loc::Outside);
  REQUIRE(point_location(sq, pt(1, 0, 1, -1)) == Loc::OnBoundary);  // (1, 1/2)
  REQUIRE(point_location(sq, pti(0, 0)) == Loc::OnBoundary);
}

TEST_CASE("point_location treats slit points as boundary, slit cancels parity") {
  // square with a vertical slit from (1/2,1) down to (1/2,1/2)
  Pt top{Dyadic(BigInt(1), -1), Dyadic(1)};
  Pt tip{Dyadic(BigInt(1), -1), Dyadic(BigInt(1), -1)};
  Polygon slit{{pti(0, 0), pti(1, 0), pti(1, 1), top, tip, top, pti(0, 1)}};
  REQUIRE(is_simple_polygon(slit, /*allow_slits=*/true));
  REQUIRE(!is_simple_polygon(slit, /*allow_slits=*/false));
  REQUIRE(point_location(slit, pt(1, -1, 3, -2)) == Loc::OnBoundary);  // on the slit
  REQUIRE(point_location(slit, pt(3, -3, 3, -2)) == Loc::Inside);     // left of slit
  REQUIRE(point_location(slit, pt(5, -3, 3, -2)) == Loc::Inside);     // right of slit
  REQUIRE(point_location(slit, pt(1, -1, 1, -2)) == Loc::Inside);     // below the tip
}

TEST_CASE("curve_diameter examples") {
  PolyCurve seg{{pti(0, 0), pti(3, 4)}, false};
  DyInterval d = curve_diameter(seg);
  REQUIRE(d.contains(Dyadic(5)));
  REQUIRE(d.width() <= Dyadic::pow2(-40));

  PolyCurve point{{pti(2, 7)}, false};
  REQUIRE(curve_diameter(point).hi == Dyadic(0));

  PolyCurve square_bnd{{pti(0, 0), pti(1, 0), pti(1, 1), pti(0, 1)}, true};
  DyInterval s = curve_diameter(square_bnd);
  DyInterval sqrt2 = sqrt_bracket(Dyadic(2), 60);
  REQUIRE(s.lo <= sqrt2.hi);
  REQUIRE(s.hi >= sqrt2.lo);
  REQUIRE(s.width() <= sqrt2.hi * Dyadic::pow2(-50));
}

TEST_CASE("squared_diameter matches brute force on random sets") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<int> cnt(1, 12);
    std::vector<Pt> pts;
    int n = cnt(rng);
    for (int i = 0; i < n; ++i) pts.push_back(rand_pt(rng));
    REQUIRE(squared_diameter(pts) == brute_d2(pts));
  }
}

TEST_CASE("sub-curve diameter never exceeds curve diameter") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    PolyCurve c;
    for (int i = 0; i < 8; ++i) c.v.push_back(rand_pt(rng));
    PolyCurve sub;
    sub.v.assign(c.v.begin() + 2, c.v.begin() + 6);
    REQUIRE(curve_diameter(sub).lo <= curve_diameter(c).hi);
  }
}

TEST_CASE("split_by_crosscut: vertical chord of the unit square") {
  Polygon sq = unit_square();
  Dyadic x34(BigInt(3), -2);
  Crosscut cut{PolyCurve{{Pt{x34, Dyadic(0)}, Pt{x34, Dyadic(1)}}, false}, 0};
  Pt w = pt(1, -3, 1, -3);  // (1/8,1/8), clearly left
  SplitResult r = split_by_crosscut(sq, cut, w);
  // n_gamma is the right strip [3/4,1]x[0,1]: area 1/4
  REQUIRE(area2(r.n_gamma) == Dyadic(BigInt(1), -1));
  REQUIRE(area2(r.w_side) == Dyadic(BigInt(3), -1));
  REQUIRE(point_location(r.n_gamma, pt(7, -3, 1, -1)) == Loc::Inside);
  REQUIRE(point_location(r.n_gamma, w) == Loc::Outside);
}

TEST_CASE("split_by_crosscut: full diagonal") {
  Polygon sq = unit_square();
  Crosscut cut{PolyCurve{{pti(0, 0), pti(1, 1)}, false}, 0};
  Pt w = pt(1, -3, 7, -3);  // (1/8, 7/8) upper-left
  SplitResult r = split_by_crosscut(sq, cut, w);
  // n_gamma = lower-right triangle
  REQUIRE(area2(r.n_gamma) == Dyadic(1));  // 2*area = 1
  REQUIRE(point_location(r.n_gamma, pt(3, -2, 1, -2)) == Loc::Inside);
}

TEST_CASE("split_by_crosscut rejects bad inputs") {
  Polygon sq = unit_square();
  Dyadic half(BigInt(1), -1);
  // basepoint on the crosscut
  Crosscut chord{PolyCurve{{Pt{half, Dyadic(0)}, Pt{half, Dyadic(1)}}, false}, 0};
  REQUIRE_THROWS_AS(split_by_crosscut(sq, chord, Pt{half, half}), contract_fault);
  // endpoint off the boundary
  Crosscut dangling{PolyCurve{{Pt{half, half}, Pt{half, Dyadic(1)}}, false}, 0};
  REQUIRE_THROWS_AS(split_by_crosscut(sq, dangling, pt(1, -3, 1, -3)), contract_fault);
}

TEST_CASE("split area additivity on random chords (shoelace oracle)") {
  std::mt19937_64 rng(7);
  Polygon sq = unit_square();
  std::uniform_int_distribution<long> d(1, 255);
  for (int trial = 0; trial < 100; ++trial) {
    // random chord from bottom edge to top edge
    Dyadic xa(BigInt(d(rng)), -8), xb(BigInt(d(rng)), -8);
    Crosscut cut{PolyCurve{{Pt{xa, Dyadic(0)}, Pt{xb, Dyadic(1)}}, false}, 0};
    // choose w on whichever side of the chord is fat enough
    Pt w = pt(1, -6, 1, -6);
    if (on_segment(w, cut.curve.v[0], cut.curve.v[1])) continue;
    SplitResult r = split_by_crosscut(sq, cut, w);
    REQUIRE(area2(r.n_gamma) + area2(r.w_side) == area2(sq));
    REQUIRE(area2(r.n_gamma).sign() > 0);
    REQUIRE(area2(r.w_side).sign() > 0);
  }
}

TEST_CASE("split works with polyline crosscut around a slit tip") {
  // square with slit down to (1/2,1/2); crosscut from left wall of the slit
  // around the tip to the right wall
  Pt top{Dyadic(BigInt(1), -1), Dyadic(1)};
  Pt tip{Dyadic(BigInt(1), -1), Dyadic(BigInt(1), -1)};
  Polygon slit{{pti(0, 0), pti(1, 0), pti(1, 1), top, tip, top, pti(0, 1)}};
  Pt below{Dyadic(BigInt(1), -1), Dyadic(BigInt(7), -4)};
  Pt left{Dyadic(BigInt(7), -4), Dyadic(BigInt(3), -2)};
  Pt right{Dyadic(BigInt(9), -4), Dyadic(BigInt(3), -2)};
  // anchor heights on the two sides of the slit (distinct points, open curve)
  Pt a_l{Dyadic(BigInt(1), -1), Dyadic(BigInt(13), -4)};
  Pt a_r{Dyadic(BigInt(1), -1), Dyadic(BigInt(3), -2)};
  Crosscut cut{PolyCurve{{a_l, left, below, right, a_r}, false}, 2};
  Pt w = pt(1, -3, 1, -3);
  SplitResult r = split_by_crosscut(slit, cut, w);
  REQUIRE(area2(r.n_gamma) + area2(r.w_side) == area2(slit));
  // the far side contains the region next to the slit above the cut
  REQUIRE(point_location(r.n_gamma, pt(15, -5, 15, -4)) == Loc::Outside);
}

TEST_CASE("hausdorff_distance basics") {
  Polygon sq = unit_square();
  SegSet a = SegSet::of_polygon_boundary(sq);
  DyInterval zero = hausdorff_distance(a, a);
  REQUIRE(zero.hi <= Dyadic::pow2(-40));

  SegSet p1, p2;
  p1.segs.emplace_back(pti(0, 0), pti(0, 0));
  p2.segs.emplace_back(pti(1, 0), pti(1, 0));
  DyInterval one = hausdorff_distance(p1, p2);
  REQUIRE(one.contains(Dyadic(1)));
  REQUIRE(one.width() <= Dyadic::pow2(-40));

  REQUIRE_THROWS_AS(hausdorff_distance(SegSet{}, p1), contract_fault);
}

TEST_CASE("hausdorff_distance: symmetry and triangle inequality within widths") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    auto rnd_set = [&](int k) {
      SegSet s;
      for (int i = 0; i < k; ++i) {
        Pt p = rand_pt(rng, 4, 4), q = rand_pt(rng, 4, 4);
        if (p == q) q.x += Dyadic(1);
        s.segs.emplace_back(p, q);
      }
      return s;
    };
    SegSet A = rnd_set(3), B = rnd_set(4), C = rnd_set(2);
    DyInterval ab = hausdorff_distance(A, B, 30);
    DyInterval ba = hausdorff_distance(B, A, 30);
    REQUIRE(ab.lo <= ba.hi);
    REQUIRE(ba.lo <= ab.hi);
    DyInterval ac = hausdorff_distance(A, C, 30);
    DyInterval cb = hausdorff_distance(C, B, 30);
    REQUIRE(ab.lo <= ac.hi + cb.hi + Dyadic::pow2(-28));
  }
}

TEST_CASE("convex hull is convex and contains all points") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Pt> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(rand_pt(rng, 3, 4));
    auto h = convex_hull(pts);
    if (h.size() >= 3) {
      for (std::size_t i = 0; i < h.size(); ++i)
        REQUIRE(orient(h[i], h[(i + 1) % h.size()], h[(i + 2) % h.size()]) > 0);
      Polygon hp{h};
      for (const Pt& p : pts) REQUIRE(point_location(hp, p) != Loc::Outside);
    }
  }
}
