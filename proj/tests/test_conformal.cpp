#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

#include "carat/conformal.hpp"

using namespace carat;
using namespace carat::conf;

namespace {

Cx cx(double re, double im) { return {dyadic_from_double(re), dyadic_from_double(im)}; }

double dist(const Cx& a, std::complex<double> b) {
  return std::abs(std::complex<double>(a.re.to_double(), a.im.to_double()) - b);
}

}  // namespace

TEST_CASE("identity oracle evaluates exactly") {
  ConformalOracle id = identity_disk_oracle(ConformalOracle::Dir::Forward);
  Cx z = cx(0.5, 0.0);
  Cx r = id.eval(z, 30);
  REQUIRE(abs(r.re - z.re) <= Dyadic::pow2(-30));
  REQUIRE(abs(r.im - z.im) <= Dyadic::pow2(-30));
}

TEST_CASE("disk automorphism: inverse sends a to 0") {
  Cx a = cx(0.375, -0.25);
  ConformalOracle o = disk_automorphism_oracle(a);
  // inverse direction: T(a) = 0
  BallEval r = eval_certified(o.inverse_map, a, 40);
  REQUIRE(sqrt_bracket(r.value.c.norm2().to_rational(), 40).hi <= Dyadic::pow2(-38));
  // forward sends 0 to a
  Cx fwd = o.eval(cx(0, 0), 40);
  REQUIRE(abs(fwd.re - a.re) <= Dyadic::pow2(-39));
  REQUIRE(abs(fwd.im - a.im) <= Dyadic::pow2(-39));
}

TEST_CASE("koebe_clearance") {
  REQUIRE(koebe_clearance(Dyadic(1)) == Dyadic(BigInt(1), -2));
  Dyadic M(BigInt(7), -3);
  REQUIRE(koebe_clearance(M.mul_pow2(2)) == M);  // deriv = 4M -> M
  REQUIRE_THROWS_AS(koebe_clearance(Dyadic(0)), contract_fault);
  // identity on the disk: deriv 1, true clearance 1 >= 1/4
  REQUIRE(koebe_clearance(Dyadic(1)) <= Dyadic(1));
}

TEST_CASE("distortion_bounds values") {
  auto [lo0, hi0] = distortion_bounds(Dyadic(0));
  REQUIRE(lo0 == Dyadic(1));
  REQUIRE(hi0 == Dyadic(1));
  auto [lo, hi] = distortion_bounds(Dyadic(BigInt(1), -1));
  REQUIRE(abs(lo - dyadic_from_double(4.0 / 27)) <= Dyadic::pow2(-50));
  REQUIRE(abs(hi - Dyadic(12)) <= Dyadic::pow2(-50));
  REQUIRE_THROWS_AS(distortion_bounds(Dyadic(1)), contract_fault);
  // identity map: |f'| = 1 within [lo, hi] for sampled rho
  for (double r : {0.1, 0.4, 0.8}) {
    auto [l, h] = distortion_bounds(dyadic_from_double(r));
    REQUIRE(l <= Dyadic(1));
    REQUIRE(Dyadic(1) <= h);
  }
}

TEST_CASE("boundary_proximity formula") {
  Dyadic b = boundary_proximity(Dyadic(1), dyadic_from_double(0.1));
  REQUIRE(std::abs(b.to_double() - 0.7) < 1e-9);
  Dyadic b2 = boundary_proximity(Dyadic(9), dyadic_from_double(0.3));
  REQUIRE(std::abs(b2.to_double() - 0.7) < 1e-9);
  // eps -> 0: bound -> 1 monotonically at sample points
  double prev = -1;
  for (double e : {0.1, 0.01, 0.001}) {
    double v = boundary_proximity(Dyadic(1), dyadic_from_double(e)).to_double();
    REQUIRE(v > prev);
    prev = v;
  }
}

TEST_CASE("slit disk maps: round-trip and slit-side separation") {
  SlitDiskMaps sd = slit_disk_maps(Dyadic(BigInt(1), -1));  // slit [1/2, 1)
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ur(-0.8, 0.8);
  int tested = 0;
  for (int t = 0; t < 200 && tested < 60; ++t) {
    std::complex<double> z{ur(rng), ur(rng)};
    if (std::abs(z) > 0.8) continue;
    // stay away from the slit [0.5, 1) x {0}
    if (std::abs(z.imag()) < 0.05 && z.real() > 0.4) continue;
    ++tested;
    Cx zc = cx(z.real(), z.imag());
    BallEval fwd = eval_certified(sd.to_disk.map, zc, 30);
    BallEval back = eval_certified(sd.to_disk.inverse_map, fwd.value.c, 30);
    REQUIRE(dist(back.value.c, z) < std::ldexp(1.0, -28));
  }
  REQUIRE(tested >= 40);

  // the slit's two prime ends at 3/4 land far apart on the circle
  Cx above = cx(0.75, 1e-9), below = cx(0.75, -1e-9);
  BallEval za = eval_certified(sd.to_disk.map, above, 20);
  BallEval zb = eval_certified(sd.to_disk.map, below, 20);
  double sep = dist(za.value.c, {zb.value.c.re.to_double(), zb.value.c.im.to_double()});
  REQUIRE(sep > 0.1);

  // images lie on (near) the unit circle
  REQUIRE(std::abs(std::abs(std::complex<double>(za.value.c.re.to_double(),
                                                 za.value.c.im.to_double())) -
                   1.0) < 1e-3);
}

TEST_CASE("half-disk closed form: normalization and round-trip") {
  HalfDiskMaps hd = half_disk_maps();
  // f(0) = i/2
  Cx c = eval_certified(hd.from_disk.map, cx(0, 0), 40).value.c;
  REQUIRE(dist(c, {0.0, 0.5}) < std::ldexp(1.0, -38));
  // f'(0) real-positive within rotation snapping tolerance
  BallEval d = eval_certified(hd.from_disk.map, cx(0, 0), 40, true);
  REQUIRE(d.deriv.c.re.sign() > 0);
  REQUIRE(std::abs(d.deriv.c.im.to_double()) < 1e-9 * d.deriv.c.re.to_double());
  // round-trip on sample points of the half disk
  for (auto z : {std::complex<double>{0.3, 0.2}, {-0.4, 0.35}, {0.0, 0.7}}) {
    Cx zc = cx(z.real(), z.imag());
    Cx img = eval_certified(hd.to_disk.map, zc, 30).value.c;
    Cx back = eval_certified(hd.from_disk.map, img, 30).value.c;
    REQUIRE(dist(back, z) < std::ldexp(1.0, -28));
  }
}

TEST_CASE("distortion sandwich holds for the half-disk map") {
  HalfDiskMaps hd = half_disk_maps();
  BallEval d0 = eval_certified(hd.from_disk.map, cx(0, 0), 40, true);
  double f0 = std::abs(
      std::complex<double>(d0.deriv.c.re.to_double(), d0.deriv.c.im.to_double()));
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ur(-0.7, 0.7);
  for (int t = 0; t < 25; ++t) {
    std::complex<double> z{ur(rng), ur(rng)};
    if (std::abs(z) > 0.7) continue;
    BallEval dv = eval_certified(hd.from_disk.map, cx(z.real(), z.imag()), 40, true);
    double fz = std::abs(
        std::complex<double>(dv.deriv.c.re.to_double(), dv.deriv.c.im.to_double()));
    auto [lo, hi] = distortion_bounds(dyadic_from_double(std::abs(z)));
    REQUIRE(fz / f0 >= lo.to_double() * (1 - 1e-6));
    REQUIRE(fz / f0 <= hi.to_double() * (1 + 1e-6));
  }
}

TEST_CASE("zipper fit: 64-gon disk matches identity within 2^-8 on the core") {
  auto [poly, err] = dom::inscribed_disk_polygon(64);
  ZipperResult zr = fit_numerical_map(poly, geom::Pt{Dyadic(0), Dyadic(0)}, 8);
  INFO("achieved bits: " << zr.report.achieved_bits
                         << ", samples: " << zr.report.samples);
  REQUIRE(zr.report.converged);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ur(-0.75, 0.75);
  double worst = 0;
  int tested = 0;
  while (tested < 200) {
    std::complex<double> z{ur(rng), ur(rng)};
    if (std::abs(z) > 0.75) continue;
    ++tested;
    Cx r = zr.from_disk.eval(cx(z.real(), z.imag()), 12);
    // true map of the 64-gon-inscribed disk is within sagitta of identity
    worst = std::max(worst, dist(r, z));
  }
  REQUIRE(worst < std::ldexp(1.0, -8) + err.to_double());
}

TEST_CASE("zipper fit: square symmetry f(iz) = i f(z)") {
  geom::Polygon sq{{geom::Pt{Dyadic(-1), Dyadic(-1)}, geom::Pt{Dyadic(1), Dyadic(-1)},
                    geom::Pt{Dyadic(1), Dyadic(1)}, geom::Pt{Dyadic(-1), Dyadic(1)}}};
  ZipperResult zr = fit_numerical_map(sq, geom::Pt{Dyadic(0), Dyadic(0)}, 8);
  INFO("achieved bits: " << zr.report.achieved_bits);
  REQUIRE(zr.report.achieved_bits >= 8);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ur(-0.7, 0.7);
  double tol = 4 * std::ldexp(1.0, -zr.report.achieved_bits);
  for (int t = 0; t < 40; ++t) {
    std::complex<double> z{ur(rng), ur(rng)};
    if (std::abs(z) > 0.7) continue;
    std::complex<double> iz = z * std::complex<double>(0, 1);
    Cx a = zr.from_disk.eval(cx(iz.real(), iz.imag()), 12);
    Cx b = zr.from_disk.eval(cx(z.real(), z.imag()), 12);
    std::complex<double> ib =
        std::complex<double>(0, 1) *
        std::complex<double>(b.re.to_double(), b.im.to_double());
    REQUIRE(dist(a, ib) < tol);
  }
}

TEST_CASE("zipper fit: half-disk polygonalization vs closed form") {
  // upper half of the disk: arc samples plus the diameter
  geom::Polygon hp;
  int arc = 64;
  for (int j = 0; j <= arc; ++j) {
    BigRat turns(j, 2 * arc);  // 0 .. 1/2 turn
    hp.v.push_back(dom::circle_point(Dyadic(1) - Dyadic::pow2(-44),
                                     dom::detail::snap_nearest(turns, 52), 48));
  }
  ZipperResult zr = fit_numerical_map(hp, geom::Pt{Dyadic(0), Dyadic(BigInt(1), -1)}, 8);
  INFO("achieved bits: " << zr.report.achieved_bits);
  REQUIRE(zr.report.achieved_bits >= 8);
  HalfDiskMaps hd = half_disk_maps();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ur(-0.75, 0.75);
  double tol = 4 * std::ldexp(1.0, -std::min(8, zr.report.achieved_bits));
  int tested = 0;
  while (tested < 60) {
    std::complex<double> z{ur(rng), ur(rng)};
    if (std::abs(z) > 0.75) continue;
    ++tested;
    Cx a = zr.from_disk.eval(cx(z.real(), z.imag()), 12);
    Cx b = eval_certified(hd.from_disk.map, cx(z.real(), z.imag()), 12).value.c;
    REQUIRE(dist(a, {b.re.to_double(), b.im.to_double()}) < tol);
  }
}

TEST_CASE("oracle refuses beyond validated precision") {
  geom::Polygon sq{{geom::Pt{Dyadic(-1), Dyadic(-1)}, geom::Pt{Dyadic(1), Dyadic(-1)},
                    geom::Pt{Dyadic(1), Dyadic(1)}, geom::Pt{Dyadic(-1), Dyadic(1)}}};
  ZipperResult zr = fit_numerical_map(sq, geom::Pt{Dyadic(0), Dyadic(0)}, 8);
  REQUIRE_THROWS_AS(zr.from_disk.eval(cx(0.1, 0.1), zr.report.achieved_bits + 10),
                    precision_unachievable);
}

TEST_CASE("deriv_at_center is a consistent real oracle") {
  HalfDiskMaps hd = half_disk_maps();
  RealOracle d = hd.from_disk.deriv_at_center();
  Dyadic a = approx(d, 20);
  Dyadic b = approx(d, 30);
  REQUIRE(abs(a - b) <= Dyadic::pow2(-19));
  REQUIRE(a.sign() > 0);
}
