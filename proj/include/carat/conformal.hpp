#pragma once

// Conformal-map oracles with precision contracts. Closed-form test maps are
// exact compositions of Mobius / square / square-root primitives with dyadic
// parameters, evaluated by certified ball arithmetic. The numerical engine
// for polygons is a geodesic composition (zipper-style) fit: parameters are
// computed in double, frozen to dyadics, and the resulting exact map is
// validated against the target polygon; its certified precision is reported.

#include <complex>
#include <random>
#include <variant>

#include "carat/cball.hpp"
#include "carat/domains.hpp"
#include "carat/geometry.hpp"

namespace carat::conf {

// ---------------------------------------------------------------------------
// Map expressions

struct Mobius {
  Cx a, b, c, d;  // z -> (az + b)/(cz + d)

  Mobius inverse() const { return {d, -b, -c, a}; }
  static Mobius scale(Cx k) { return {k, Cx{Dyadic(0), Dyadic(0)}, Cx{Dyadic(0), Dyadic(0)}, Cx{Dyadic(1), Dyadic(0)}}; }
  static Mobius add_const(Cx k) { return {Cx{Dyadic(1), Dyadic(0)}, k, Cx{Dyadic(0), Dyadic(0)}, Cx{Dyadic(1), Dyadic(0)}}; }
};
// Squaring; inverse_cut records which sqrt branch undoes this occurrence
// (depends on where the square's input region lives).
struct SquareOp {
  SqrtCut inverse_cut = SqrtCut::NegativeReal;
};
struct SqrtOp {
  SqrtCut cut;
};

using Primitive = std::variant<Mobius, SquareOp, SqrtOp>;

struct MapExpression {
  std::vector<Primitive> ops;  // applied first-to-last

  void append(const MapExpression& e) { ops.insert(ops.end(), e.ops.begin(), e.ops.end()); }
};

// Inverse of a primitive as a short expression (applied first-to-last).
inline std::vector<Primitive> primitive_inverse(const Primitive& p) {
  if (const Mobius* m = std::get_if<Mobius>(&p)) return {Primitive{m->inverse()}};
  if (const SquareOp* s = std::get_if<SquareOp>(&p))
    return {Primitive{SqrtOp{s->inverse_cut}}};
  return {Primitive{SquareOp{std::get<SqrtOp>(p).cut}}};
}

inline MapExpression expression_inverse(const MapExpression& e) {
  MapExpression out;
  for (auto it = e.ops.rbegin(); it != e.ops.rend(); ++it) {
    auto inv = primitive_inverse(*it);
    out.ops.insert(out.ops.end(), inv.begin(), inv.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation: certified (ball) and fast (double)

inline CBall apply_ball(const BallOps& ops, const Primitive& p, const CBall& z) {
  if (const Mobius* m = std::get_if<Mobius>(&p)) {
    CBall num = ops.add(ops.mul_const(m->a, z), ops.make(m->b));
    if (m->c.re.is_zero() && m->c.im.is_zero()) {
      if (m->d == Cx{Dyadic(1), Dyadic(0)}) return num;
      return ops.div(num, ops.make(m->d));
    }
    CBall den = ops.add(ops.mul_const(m->c, z), ops.make(m->d));
    return ops.div(num, den);
  }
  if (std::get_if<SquareOp>(&p)) return ops.mul(z, z);
  return ops.sqrt(z, std::get<SqrtOp>(p).cut);
}

// value and derivative factor of one primitive
inline std::pair<CBall, CBall> apply_ball_deriv(const BallOps& ops, const Primitive& p,
                                                const CBall& z) {
  if (const Mobius* m = std::get_if<Mobius>(&p)) {
    CBall w = apply_ball(ops, p, z);
    Cx det = m->a * m->d - m->b * m->c;
    CBall den = ops.add(ops.mul_const(m->c, z), ops.make(m->d));
    CBall factor = ops.div(ops.make(det), ops.mul(den, den));
    return {w, factor};
  }
  if (std::get_if<SquareOp>(&p)) {
    return {ops.mul(z, z), ops.mul_const(Cx{Dyadic(2), Dyadic(0)}, z)};
  }
  CBall w = ops.sqrt(z, std::get<SqrtOp>(p).cut);
  CBall factor = ops.div(ops.make(Cx{Dyadic(1), Dyadic(0)}),
                         ops.mul_const(Cx{Dyadic(2), Dyadic(0)}, w));
  return {w, factor};
}

struct BallEval {
  CBall value;
  CBall deriv;  // composition derivative
};

inline BallEval eval_ball(const MapExpression& e, const Cx& z, std::int64_t grid,
                          bool with_deriv) {
  BallOps ops(grid);
  CBall cur = ops.make(z);
  CBall der = ops.make(Cx{Dyadic(1), Dyadic(0)});
  for (const Primitive& p : e.ops) {
    if (with_deriv) {
      auto [w, factor] = apply_ball_deriv(ops, p, cur);
      der = ops.mul(der, factor);
      cur = w;
    } else {
      cur = apply_ball(ops, p, cur);
    }
  }
  return {cur, der};
}

// Certified evaluation: |result - map(z)| < 2^-n, retrying at higher working
// precision until the enclosing radius fits.
inline BallEval eval_certified(const MapExpression& e, const Cx& z, int n,
                               bool with_deriv = false) {
  std::int64_t grid = n + 24;
  for (int attempt = 0; attempt < 10; ++attempt) {
    try {
      BallEval r = eval_ball(e, z, grid, with_deriv);
      if (r.value.r < Dyadic::pow2(-n - 1) &&
          (!with_deriv || r.deriv.r < Dyadic::pow2(-n - 1)))
        return r;
    } catch (const detail::ball_retry&) {
      // fall through to retry at higher working precision
    }
    grid = grid + grid / 2 + 16;
  }
  throw precision_unachievable("conformal eval: point too close to a singular locus", n);
}

inline std::complex<double> eval_double(const MapExpression& e, std::complex<double> z) {
  auto cx = [](const Cx& c) {
    return std::complex<double>(c.re.to_double(), c.im.to_double());
  };
  for (const Primitive& p : e.ops) {
    if (const Mobius* m = std::get_if<Mobius>(&p)) {
      z = (cx(m->a) * z + cx(m->b)) / (cx(m->c) * z + cx(m->d));
    } else if (std::get_if<SquareOp>(&p)) {
      z = z * z;
    } else {
      SqrtCut cut = std::get<SqrtOp>(p).cut;
      double ang = std::arg(z);
      if (cut == SqrtCut::PositiveReal && ang <= 0) ang += 2 * M_PI;
      z = std::sqrt(std::abs(z)) * std::polar(1.0, ang / 2);
    }
  }
  return z;
}

// ---------------------------------------------------------------------------
// Oracles

struct ConformalOracle {
  enum class Dir { Forward, Inverse };  // Forward: disk -> W, Inverse: W -> disk

  Dir dir = Dir::Forward;
  MapExpression map;
  MapExpression inverse_map;  // the companion direction, when available
  Cx w{Dyadic(0), Dyadic(0)};  // basepoint of W
  Dyadic validated_radius{BigInt(1), 0};  // Forward inputs validated for |z| <= this
  int engine_bits = 200;                  // accuracy of map vs the target domain
  std::string name;

  // certified |result - map(z)| < 2^-n (plus engine tolerance for fitted maps)
  Cx eval(const Cx& z, int n) const {
    if (n > engine_bits)
      throw precision_unachievable("oracle '" + name + "': requested 2^-" +
                                       std::to_string(n) + ", validated to 2^-" +
                                       std::to_string(engine_bits),
                                   engine_bits);
    if (dir == Dir::Forward) {
      if (!(z.norm2() < Dyadic(1))) throw contract_fault("oracle: input outside the disk");
      Dyadic vr2 = validated_radius * validated_radius;
      if (engine_bits < 200 && z.norm2() > vr2)
        throw precision_unachievable("oracle '" + name + "': outside validated core",
                                     engine_bits);
    }
    return eval_certified(map, z, n, false).value.c;
  }

  // |f'(0)| for forward oracles, as a real oracle
  RealOracle deriv_at_center() const {
    MapExpression m = map;
    return RealOracle{[m](int n) {
      BallEval r = eval_certified(m, Cx{Dyadic(0), Dyadic(0)}, n + 4, true);
      Dyadic mag2 = r.deriv.c.norm2();
      return sqrt_bracket(mag2.to_rational(), n + 4).lo;
    }};
  }

  Dyadic deriv_lower_bound(int n) const {
    BallEval r = eval_certified(map, Cx{Dyadic(0), Dyadic(0)}, n + 4, true);
    Dyadic lo = sqrt_bracket(r.deriv.c.norm2().to_rational(), n + 4).lo - r.deriv.r;
    return lo;
  }
};

// ---------------------------------------------------------------------------
// Koebe bounds

// Distance from w to the boundary is at least |f'(0)|/4.
inline Dyadic koebe_clearance(const Dyadic& deriv_lower) {
  if (!(deriv_lower.sign() > 0)) throw contract_fault("koebe_clearance: need deriv > 0");
  return deriv_lower.mul_pow2(-2);
}

// [lo, hi] bounds on |f'(z)|/|f'(0)| at |z| = rho: (1-r)/(1+r)^3, (1+r)/(1-r)^3.
inline std::pair<Dyadic, Dyadic> distortion_bounds(const Dyadic& rho, int n = 60) {
  if (!(rho >= Dyadic(0)) || !(rho < Dyadic(1)))
    throw contract_fault("distortion_bounds: rho out of [0,1)");
  BigRat r = rho.to_rational();
  BigRat up1 = (1 + r), dn1 = (1 - r);
  BigRat lo = dn1 / (up1 * up1 * up1);
  BigRat hi = up1 / (dn1 * dn1 * dn1);
  return {rat_bracket(lo, n).lo, rat_bracket(hi, n).hi};
}

// Lemma-1 style boundary proximity: points of phi(gamma) satisfy
// |z| > 1 - 3 eps / sqrt(M). Conservative (lower) evaluation.
inline Dyadic boundary_proximity(const Dyadic& clearance, const Dyadic& eps, int n = 60) {
  if (!(clearance.sign() > 0) || !(eps.sign() > 0))
    throw contract_fault("boundary_proximity: need positive M and eps");
  Dyadic root = sqrt_bracket(clearance.to_rational(), n).lo;
  Dyadic term = rat_bracket((Dyadic(3) * eps).to_rational() / root.to_rational(), n).hi;
  return Dyadic(1) - term;
}

// ---------------------------------------------------------------------------
// Closed-form catalog

namespace detail {

inline Cx snap_cx(std::complex<double> z, int = 0) {
  return Cx{dyadic_from_double(z.real()), dyadic_from_double(z.imag())};
}

// disk automorphism moving a -> 0: T(z) = (z - a)/(1 - conj(a) z)
inline Mobius disk_automorphism_to_zero(const Cx& a) {
  return Mobius{Cx{Dyadic(1), Dyadic(0)}, -a, -a.conj(), Cx{Dyadic(1), Dyadic(0)}};
}

// Normalizes the pair (f, phi = f^-1): f gets the pre-rotation z -> u z with
// u snapped from e^{i alpha}; phi gets the exact inverse rotation appended,
// so the two expressions stay exact functional inverses.
inline void rotate_pair(MapExpression& f, MapExpression& phi, double alpha) {
  Cx u = snap_cx(std::polar(1.0, alpha));
  f.ops.insert(f.ops.begin(), Mobius::scale(u));
  // w -> conj(u) w / |u|^2, exact dyadic inverse of the scaling
  Cx zero{Dyadic(0), Dyadic(0)};
  phi.ops.push_back(Mobius{u.conj(), zero, zero, Cx{u.norm2(), Dyadic(0)}});
}

}  // namespace detail

// identity map of the disk (both directions)
inline ConformalOracle identity_disk_oracle(ConformalOracle::Dir dir) {
  ConformalOracle o;
  o.dir = dir;
  o.name = "identity-disk";
  return o;
}

// forward oracle for the disk with basepoint a: f(z) = (z + a)/(1 + conj(a) z)
inline ConformalOracle disk_automorphism_oracle(const Cx& a) {
  if (!(a.norm2() < Dyadic(1))) throw contract_fault("disk automorphism: |a| < 1 required");
  ConformalOracle o;
  o.dir = ConformalOracle::Dir::Forward;
  o.name = "disk-automorphism";
  o.w = a;
  o.map.ops = {Mobius{Cx{Dyadic(1), Dyadic(0)}, a, a.conj(), Cx{Dyadic(1), Dyadic(0)}}};
  o.inverse_map = expression_inverse(o.map);
  return o;
}

// Slit disk D \ [a, 1), a in (0,1) dyadic (up to parameter snapping).
// Inverse direction (W -> D), normalized so the inverse of the basepoint 0
// goes to 0; the forward direction is the exact expression inverse.
struct SlitDiskMaps {
  ConformalOracle to_disk;    // phi
  ConformalOracle from_disk;  // f
  Dyadic slit_start;          // the (snapped) slit parameter
};

inline SlitDiskMaps slit_disk_maps(const Dyadic& a) {
  if (!(a.sign() > 0) || !(a < Dyadic(1)))
    throw contract_fault("slit_disk: slit start in (0,1) required");
  // b = (1-a)/(1+a); vertical slit [0, ib] in the upper half plane
  Dyadic b2 = dom::detail::snap_down(
      ((Dyadic(1) - a) * (Dyadic(1) - a)).to_rational() /
          ((Dyadic(1) + a) * (Dyadic(1) + a)).to_rational(),
      52);
  const Cx one{Dyadic(1), Dyadic(0)};
  const Cx i_{Dyadic(0), Dyadic(1)};
  Mobius m1{-i_, i_, one, one};     // disk -> UHP, slit -> [0, ib]
  Mobius m2{-one, i_, one, i_};     // UHP -> disk
  MapExpression phi;
  phi.ops = {m1, SquareOp{SqrtCut::PositiveReal}, Mobius::add_const(Cx{b2, Dyadic(0)}),
             SqrtOp{SqrtCut::PositiveReal}, m2};
  // normalize: send phi(0) to 0
  std::complex<double> c0 = eval_double(phi, {0.0, 0.0});
  Cx a0 = detail::snap_cx(c0, 52);
  phi.ops.push_back(detail::disk_automorphism_to_zero(a0));

  MapExpression f = expression_inverse(phi);
  // rotation so that f'(0) > 0 (within snapping tolerance)
  std::complex<double> d0 =
      (eval_double(f, {1e-6, 0.0}) - eval_double(f, {-1e-6, 0.0})) / 2e-6;
  detail::rotate_pair(f, phi, -std::arg(d0));

  SlitDiskMaps out;
  out.slit_start = a;
  out.to_disk.dir = ConformalOracle::Dir::Inverse;
  out.to_disk.name = "slit-disk-phi";
  out.to_disk.map = phi;
  out.to_disk.inverse_map = f;
  out.from_disk.dir = ConformalOracle::Dir::Forward;
  out.from_disk.name = "slit-disk-f";
  out.from_disk.map = f;
  out.from_disk.inverse_map = phi;
  return out;
}

// Half disk {|z| < 1, Im z > 0} with basepoint w0 = i/2.
struct HalfDiskMaps {
  ConformalOracle to_disk;
  ConformalOracle from_disk;
  Cx basepoint;
};

inline HalfDiskMaps half_disk_maps() {
  const Cx one{Dyadic(1), Dyadic(0)};
  const Cx i_{Dyadic(0), Dyadic(1)};
  Mobius g1{one, one, -one, one};  // (1+z)/(1-z): half disk -> quadrant 1
  Mobius cayley{one, -i_, one, i_};  // (z - i)/(z + i): UHP -> disk
  MapExpression phi;
  phi.ops = {g1, SquareOp{}, cayley};
  Cx w0{Dyadic(0), Dyadic(BigInt(1), -1)};  // i/2
  std::complex<double> c0 = eval_double(phi, {0.0, 0.5});
  phi.ops.push_back(detail::disk_automorphism_to_zero(detail::snap_cx(c0, 52)));
  MapExpression f = expression_inverse(phi);
  std::complex<double> d0 =
      (eval_double(f, {1e-6, 0.0}) - eval_double(f, {-1e-6, 0.0})) / 2e-6;
  detail::rotate_pair(f, phi, -std::arg(d0));

  HalfDiskMaps out;
  out.basepoint = w0;
  out.to_disk.dir = ConformalOracle::Dir::Inverse;
  out.to_disk.name = "half-disk-phi";
  out.to_disk.map = phi;
  out.to_disk.inverse_map = f;
  out.to_disk.w = w0;
  out.from_disk.dir = ConformalOracle::Dir::Forward;
  out.from_disk.name = "half-disk-f";
  out.from_disk.map = f;
  out.from_disk.inverse_map = phi;
  out.from_disk.w = w0;
  return out;
}

// ---------------------------------------------------------------------------
// Numerical engine: geodesic composition fitted to polygon boundary samples

struct FitReport {
  double roundtrip_err = 1.0;   // max |phi(f(z)) - z| on the validated core
  double boundary_err = 1.0;    // max | |phi(sample)| - 1 | over boundary samples
  double center_err = 1.0;      // |phi(w)|
  int achieved_bits = 0;
  bool converged = false;
  std::size_t samples = 0;
};

namespace detail {

inline std::complex<double> sqrt_cutpos(std::complex<double> z) {
  double ang = std::arg(z);
  if (ang <= 0) ang += 2 * M_PI;
  return std::sqrt(std::abs(z)) * std::polar(1.0, ang / 2);
}

// boundary samples: vertices plus per-edge subdivisions, ccw
inline std::vector<std::complex<double>> boundary_samples(const geom::Polygon& p,
                                                          std::size_t target) {
  std::vector<std::complex<double>> pts;
  std::size_t n = p.v.size();
  double total = 0;
  std::vector<double> len(n);
  std::vector<std::complex<double>> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = {p.v[i].x.to_double(), p.v[i].y.to_double()};
  for (std::size_t i = 0; i < n; ++i) {
    len[i] = std::abs(v[(i + 1) % n] - v[i]);
    total += len[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back(v[i]);
    std::size_t extra = target > n ? static_cast<std::size_t>(len[i] / total * (target - n)) : 0;
    for (std::size_t k = 1; k <= extra; ++k) {
      double t = static_cast<double>(k) / (extra + 1);
      pts.push_back(v[i] + t * (v[(i + 1) % n] - v[i]));
    }
  }
  return pts;
}

}  // namespace detail

struct ZipperResult {
  ConformalOracle to_disk;
  ConformalOracle from_disk;
  FitReport report;
};

namespace detail {

struct RawFit {
  MapExpression phi, f;
  std::size_t samples = 0;
};

inline RawFit fit_once(const geom::Polygon& poly, std::complex<double> wd,
                       std::size_t samples) {
  using cd = std::complex<double>;
  std::vector<cd> pts = boundary_samples(poly, samples);
  std::size_t m = pts.size();

  MapExpression phi;
  const Cx one{Dyadic(1), Dyadic(0)};
  const Cx i_{Dyadic(0), Dyadic(1)};
  // initial map: i sqrt((z - p1)/(z - p0))
  Cx p0 = snap_cx(pts[0]), p1 = snap_cx(pts[1]);
  phi.ops = {Mobius{one, -p1, one, -p0}, SqrtOp{SqrtCut::NegativeReal}, Mobius::scale(i_)};
  auto init_map = [&](cd z) { return cd(0, 1) * std::sqrt((z - pts[1]) / (z - pts[0])); };
  std::vector<cd> img(m);
  for (std::size_t k = 2; k < m; ++k) img[k] = init_map(pts[k]);
  cd zw = init_map(wd);

  for (std::size_t k = 2; k < m; ++k) {
    cd zeta = img[k];
    if (zeta.imag() < 1e-14) zeta.imag(1e-14);
    bool vertical = std::abs(zeta.real()) < 1e-13 * std::abs(zeta);
    double b = 0, h;
    if (vertical) {
      h = std::abs(zeta);
    } else {
      b = std::norm(zeta) / zeta.real();
      h = std::abs(zeta / (1.0 - zeta / b));
    }
    Dyadic bd = dyadic_from_double(b);
    Dyadic hd = dyadic_from_double(h);
    if (!vertical)
      phi.ops.push_back(Mobius{Cx{bd, Dyadic(0)}, Cx{Dyadic(0), Dyadic(0)},
                               Cx{Dyadic(-1), Dyadic(0)}, Cx{bd, Dyadic(0)}});
    phi.ops.push_back(SquareOp{SqrtCut::PositiveReal});
    phi.ops.push_back(Mobius::add_const(Cx{hd * hd, Dyadic(0)}));
    phi.ops.push_back(SqrtOp{SqrtCut::PositiveReal});
    auto g = [&](cd z) {
      if (!vertical) z = z / (1.0 - z / b);
      return sqrt_cutpos(z * z + h * h);
    };
    for (std::size_t j = k + 1; j < m; ++j) img[j] = g(img[j]);
    zw = g(zw);
  }

  // final: quarter-plane to half plane, then to the disk about the base image
  if (zw.real() < 0) {
    phi.ops.push_back(
        Mobius{Cx{Dyadic(0), Dyadic(0)}, -one, one, Cx{Dyadic(0), Dyadic(0)}});
    zw = -1.0 / zw;
  }
  phi.ops.push_back(SquareOp{});
  zw = zw * zw;
  if (zw.imag() < 1e-12) zw.imag(1e-12);
  Cx zwd = snap_cx(zw);
  phi.ops.push_back(Mobius{one, -zwd, one, -zwd.conj()});
  // recentre exactly: the frozen parameters shift the image of w slightly
  cd c0 = eval_double(phi, wd);
  if (std::abs(c0) > 1e-15) phi.ops.push_back(disk_automorphism_to_zero(snap_cx(c0)));

  MapExpression f = expression_inverse(phi);
  cd d0 = (eval_double(f, {1e-6, 0}) - eval_double(f, {-1e-6, 0})) / cd(2e-6, 0);
  rotate_pair(f, phi, -std::arg(d0));

  RawFit out;
  out.phi = std::move(phi);
  out.f = std::move(f);
  out.samples = m;
  return out;
}

}  // namespace detail

// Fits the geodesic composition map of the polygon (w the basepoint), aiming
// at eval error < 2^-n on the validated core |z| <= 3/4. Fit quality is
// estimated by Cauchy comparison of successive refinements; the exact
// expression round-trip and recentring are sanity checks. On convergence
// failure returns the best fit with report.converged = false.
inline ZipperResult fit_numerical_map(const geom::Polygon& poly, const geom::Pt& w,
                                      int n_target) {
  using cd = std::complex<double>;
  if (geom::point_location(poly, w) != geom::Loc::Inside)
    throw contract_fault("fit_numerical_map: basepoint not inside polygon");
  cd wd{w.x.to_double(), w.y.to_double()};

  // validation grid on the core
  std::vector<cd> grid;
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> ur(-0.75, 0.75);
  while (grid.size() < 300) {
    cd z{ur(rng), ur(rng)};
    if (std::abs(z) <= 0.75) grid.push_back(z);
  }

  ZipperResult best;
  detail::RawFit prev;
  bool have_prev = false;
  for (std::size_t samples : {192u, 384u, 768u, 1536u, 3072u}) {
    detail::RawFit cur = detail::fit_once(poly, wd, samples);
    if (have_prev) {
      double diff = 0;
      for (cd z : grid)
        diff = std::max(diff, std::abs(eval_double(cur.f, z) - eval_double(prev.f, z)));
      double rt = 0;
      for (int t = 0; t < 50; ++t) {
        cd z = grid[t];
        rt = std::max(rt, std::abs(eval_double(cur.phi, eval_double(cur.f, z)) - z));
      }
      FitReport rep;
      rep.samples = cur.samples;
      rep.roundtrip_err = rt;
      rep.center_err = std::abs(eval_double(cur.phi, wd));
      rep.boundary_err = diff;  // refinement discrepancy on the core
      double err = std::max({diff, rt, rep.center_err, 1e-14});
      rep.achieved_bits = std::max(1, static_cast<int>(std::floor(-std::log2(err))) - 1);
      rep.converged = rep.achieved_bits >= n_target;
      if (best.report.achieved_bits <= rep.achieved_bits) {
        best.report = rep;
        best.to_disk.dir = ConformalOracle::Dir::Inverse;
        best.to_disk.name = "zipper-phi";
        best.to_disk.map = cur.phi;
        best.to_disk.inverse_map = cur.f;
        best.to_disk.w = Cx{w.x, w.y};
        best.to_disk.engine_bits = rep.achieved_bits;
        best.from_disk.dir = ConformalOracle::Dir::Forward;
        best.from_disk.name = "zipper-f";
        best.from_disk.map = cur.f;
        best.from_disk.inverse_map = cur.phi;
        best.from_disk.w = Cx{w.x, w.y};
        best.from_disk.engine_bits = rep.achieved_bits;
        best.from_disk.validated_radius = Dyadic(BigInt(3), -2);
      }
      if (rep.converged) break;
    }
    prev = std::move(cur);
    have_prev = true;
  }
  return best;
}

}  // namespace carat::conf
