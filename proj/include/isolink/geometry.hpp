#pragma once

// Universal-cover geometry for the torus R^2/Z^2, the open annulus
// (R/Z) x R and the plane: projections, deck transformations, sampled
// paths, winding numbers and algebraic intersection numbers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace isolink {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Coincidence tolerance for geometric predicates.
inline constexpr double kGeomTol = 1e-9;

enum class errc {
  center_on_path,
  refinement_exhausted,
  degenerate_crossing,
  collision,
  continuation_ambiguous,
  inverse_unavailable,
  integrator_blowup,
  not_fixed,
  degenerate_mobius,
  unknown_zoo_entry,
  no_return,
  not_converged,
  identity_mismatch,
  rotation_vector_nonzero,
  lift_dependence,
  coboundary_violation,
  too_many_divergent_samples,
  path_through_puncture,
  non_contractible_loop,
  hypothesis_unverified,
  inconclusive,
  config_error,
  invariant_violation,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::center_on_path: return "CenterOnPath";
    case errc::refinement_exhausted: return "RefinementExhausted";
    case errc::degenerate_crossing: return "DegenerateCrossing";
    case errc::collision: return "Collision";
    case errc::continuation_ambiguous: return "ContinuationAmbiguous";
    case errc::inverse_unavailable: return "InverseUnavailable";
    case errc::integrator_blowup: return "IntegratorBlowup";
    case errc::not_fixed: return "NotFixed";
    case errc::degenerate_mobius: return "DegenerateMobius";
    case errc::unknown_zoo_entry: return "UnknownZooEntry";
    case errc::no_return: return "NoReturn";
    case errc::not_converged: return "NotConverged";
    case errc::identity_mismatch: return "IdentityMismatch";
    case errc::rotation_vector_nonzero: return "RotationVectorNonzero";
    case errc::lift_dependence: return "LiftDependence";
    case errc::coboundary_violation: return "CoboundaryViolation";
    case errc::too_many_divergent_samples: return "TooManyDivergentSamples";
    case errc::path_through_puncture: return "PathThroughPuncture";
    case errc::non_contractible_loop: return "NonContractibleLoop";
    case errc::hypothesis_unverified: return "HypothesisUnverified";
    case errc::inconclusive: return "Inconclusive";
    case errc::config_error: return "ConfigError";
    case errc::invariant_violation: return "InvariantViolation";
  }
  return "Unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double xx, double yy) : x(xx), y(yy) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  // z-component of the 3D cross product; positive when o is
  // counterclockwise from *this.
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::sqrt(x * x + y * y); }
  double norm2() const { return x * x + y * y; }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

enum class Surface { Torus, Plane, Annulus };

inline const char* surface_name(Surface s) {
  switch (s) {
    case Surface::Torus: return "Torus";
    case Surface::Plane: return "Plane";
    case Surface::Annulus: return "Annulus";
  }
  return "?";
}

// Reduce to [0,1).
inline double wrap_unit(double v) {
  double r = v - std::floor(v);
  if (r >= 1.0) r = 0.0;  // guards v = -1e-17 style roundoff
  return r;
}

// A point of the base surface, coordinates reduced in the periodic
// directions (both for the torus, the first for the annulus).
struct BasePoint {
  Vec2 p;
  Surface surface = Surface::Plane;
};

inline BasePoint project(const Vec2& v, Surface s) {
  if (!v.finite()) throw error(errc::invariant_violation, "non-finite point");
  switch (s) {
    case Surface::Torus: return {{wrap_unit(v.x), wrap_unit(v.y)}, s};
    case Surface::Annulus: return {{wrap_unit(v.x), v.y}, s};
    case Surface::Plane: return {v, s};
  }
  return {v, s};
}

inline BasePoint project(const BasePoint& b) { return project(b.p, b.surface); }

// A covering translation. Torus: (a,b) in Z^2. Annulus: a = power of the
// generator T:(x,y) -> (x+1,y), b must be 0. Plane: both 0.
struct Deck {
  std::int64_t a = 0;
  std::int64_t b = 0;

  Deck() = default;
  Deck(std::int64_t aa, std::int64_t bb) : a(aa), b(bb) {}
  Deck compose(const Deck& o) const { return {a + o.a, b + o.b}; }
  Deck inverse() const { return {-a, -b}; }
  bool identity() const { return a == 0 && b == 0; }
  Vec2 shift() const { return {static_cast<double>(a), static_cast<double>(b)}; }
  bool operator==(const Deck& o) const { return a == o.a && b == o.b; }
};

inline bool deck_valid(const Deck& d, Surface s) {
  switch (s) {
    case Surface::Torus: return true;
    case Surface::Annulus: return d.b == 0;
    case Surface::Plane: return d.identity();
  }
  return false;
}

inline Vec2 apply_deck(const Deck& d, const Vec2& p) { return p + d.shift(); }

// Deck transform beta with apply_deck(beta, q) the lift of project(q)
// closest to p, together with that displacement.
inline Deck nearest_deck(const Vec2& p, const Vec2& q, Surface s) {
  switch (s) {
    case Surface::Plane: return {};
    case Surface::Annulus: return {std::llround(p.x - q.x), 0};
    case Surface::Torus: return {std::llround(p.x - q.x), std::llround(p.y - q.y)};
  }
  return {};
}

// Distance in the quotient metric of the base surface.
inline double base_distance(const Vec2& p, const Vec2& q, Surface s) {
  Vec2 d = apply_deck(nearest_deck(p, q, s), q) - p;
  return d.norm();
}

inline double base_distance(const BasePoint& p, const BasePoint& q) {
  return base_distance(p.p, q.p, p.surface);
}

// --------------------------------------------------------------------------
// Sampled paths
// --------------------------------------------------------------------------

// A piecewise-linear path through cover points, tagged with strictly
// increasing sample times in [t0, t1].
struct SampledPath {
  std::vector<Vec2> pts;
  std::vector<double> times;

  std::size_t size() const { return pts.size(); }
  const Vec2& front() const { return pts.front(); }
  const Vec2& back() const { return pts.back(); }
  bool closed(double tol = 1e-6) const { return (pts.front() - pts.back()).norm() <= tol; }
};

inline SampledPath make_path(std::vector<Vec2> pts, std::vector<double> times) {
  if (pts.size() < 2 || pts.size() != times.size())
    throw error(errc::invariant_violation, "path needs >= 2 samples with matching times");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw error(errc::invariant_violation, "path times must be strictly increasing");
  return SampledPath{std::move(pts), std::move(times)};
}

// Uniformly sampled polyline through the given points on [0,1].
inline SampledPath make_polyline(std::vector<Vec2> pts) {
  std::vector<double> times(pts.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    times[i] = static_cast<double>(i) / static_cast<double>(times.size() - 1);
  return make_path(std::move(pts), std::move(times));
}

// --------------------------------------------------------------------------
// Winding numbers
// --------------------------------------------------------------------------

struct WindingOptions {
  int initial_samples = 37;   // initial uniform grid on [t0,t1]; prime count
  int max_depth = 60;         // subdivision depth cap per interval
  double center_tol = kGeomTol;
  long max_nodes = 80000000;  // grid cap for speed-bounded sweeps
};

// A path together with a modulus of continuity. When the speed bound is
// known, winding computations are exact: the sample grid is refined until
// the possible motion per step rules out hidden turns. Without it the
// sweep falls back to a heuristic subdivision that can be defeated by
// adversarially fast rotation.
struct BoundedPath {
  std::function<Vec2(double)> f;
  double speed = -1.0;  // sup |df/dt| over the domain; negative when unknown

  Vec2 operator()(double t) const { return f(t); }
};

namespace detail {

inline double angle_step(const Vec2& d0, const Vec2& d1) {
  return std::atan2(d0.cross(d1), d0.dot(d1));  // in (-pi, pi]
}

// Splitting at the golden section rather than 1/2 defeats the aliasing of
// integer turn counts against power-of-two sample grids.
inline constexpr double kGoldenSplit = 0.6180339887498949;

// Unwrapped angle swept by path(t)-center over [ta,tb], subdividing until
// each step is below pi/2 and stable under one further split.
inline double sweep_interval(const std::function<Vec2(double)>& path, Vec2 center,
                             double ta, const Vec2& da, double tb, const Vec2& db,
                             int depth, const WindingOptions& opt) {
  double direct = angle_step(da, db);
  if (depth <= 0)
    throw error(errc::refinement_exhausted,
                "angular step not resolved; isotopy under-sampled near center");
  double tm = ta + kGoldenSplit * (tb - ta);
  Vec2 dm = path(tm) - center;
  if (dm.norm() <= opt.center_tol)
    throw error(errc::center_on_path, "path passes through the winding center");
  double left = angle_step(da, dm);
  double right = angle_step(dm, db);
  double split = left + right;
  if (std::abs(left) < kPi / 2 && std::abs(right) < kPi / 2 &&
      std::abs(split - direct) < 1e-9)
    return split;
  return sweep_interval(path, center, ta, da, tm, dm, depth - 1, opt) +
         sweep_interval(path, center, tm, dm, tb, db, depth - 1, opt);
}

}  // namespace detail

// Total unwrapped angle (radians) swept by t -> path(t) - center, t in [t0,t1].
inline double angle_sweep(const std::function<Vec2(double)>& path, double t0, double t1,
                          Vec2 center, const WindingOptions& opt = {}) {
  int n = opt.initial_samples < 2 ? 2 : opt.initial_samples;
  double total = 0.0;
  double ta = t0;
  Vec2 da = path(ta) - center;
  if (da.norm() <= opt.center_tol)
    throw error(errc::center_on_path, "path starts at the winding center");
  for (int i = 1; i <= n; ++i) {
    double tb = t0 + (t1 - t0) * static_cast<double>(i) / n;
    Vec2 db = path(tb) - center;
    if (db.norm() <= opt.center_tol)
      throw error(errc::center_on_path, "path passes through the winding center");
    total += detail::sweep_interval(path, center, ta, da, tb, db, opt.max_depth, opt);
    ta = tb;
    da = db;
  }
  return total;
}

// Exact sweep for a speed-bounded path: the grid is grown until the motion
// possible within one step is well below the sampled distance to the
// center, which makes hidden full turns impossible (completing a turn at
// distance d needs arc length 2 pi d, but a step moves at most
// speed * dt << d). Each per-step angle is then below pi/2 and the summed
// atan2 increments are exact.
inline double angle_sweep(const BoundedPath& path, double t0, double t1, Vec2 center,
                          const WindingOptions& opt = {}) {
  if (path.speed < 0.0) return angle_sweep(path.f, t0, t1, center, opt);
  const double T = t1 - t0;
  if (T == 0.0) return 0.0;
  long n = std::max<long>(opt.initial_samples, 8);
  for (;;) {
    double d_min = 1e300;
    double total = 0.0;
    Vec2 prev = path.f(t0) - center;
    if (prev.norm() <= opt.center_tol)
      throw error(errc::center_on_path, "path passes through the winding center");
    d_min = prev.norm();
    for (long i = 1; i <= n; ++i) {
      Vec2 d = path.f(t0 + T * static_cast<double>(i) / n) - center;
      double nd = d.norm();
      if (nd <= opt.center_tol)
        throw error(errc::center_on_path, "path passes through the winding center");
      d_min = std::min(d_min, nd);
      total += detail::angle_step(prev, d);
      prev = d;
    }
    // A step can move at most speed * dt. Hiding a full extra turn at
    // distance >= d_min - step/2 needs arc length beyond that, and each
    // step's angle stays below pi, so the accumulated total is exact.
    double step_move = path.speed * std::abs(T) / n;
    if (step_move <= 0.8 * d_min) return total;
    long needed = static_cast<long>(std::ceil(path.speed * std::abs(T) / (0.7 * d_min))) + 1;
    n = std::max(2 * n, needed);
    if (n > opt.max_nodes)
      throw error(errc::refinement_exhausted, "speed-bounded sweep exceeds the node budget");
  }
}

inline long long winding_number(const BoundedPath& path, double t0, double t1, Vec2 center,
                                const WindingOptions& opt = {}) {
  Vec2 a = path.f(t0), b = path.f(t1);
  if ((a - b).norm() > 1e-6)
    throw error(errc::invariant_violation, "winding_number needs a closed loop");
  double turns = angle_sweep(path, t0, t1, center, opt) / kTwoPi;
  long long w = std::llround(turns);
  if (std::abs(turns - static_cast<double>(w)) > 1e-3)
    throw error(errc::refinement_exhausted, "winding did not settle on an integer");
  return w;
}

// Degree of a closed loop around a center, computed by adaptive angle
// unwrapping with re-evaluation of the path.
inline long long winding_number(const std::function<Vec2(double)>& path, double t0, double t1,
                                Vec2 center, const WindingOptions& opt = {}) {
  Vec2 a = path(t0), b = path(t1);
  if ((a - b).norm() > 1e-6)
    throw error(errc::invariant_violation, "winding_number needs a closed loop");
  double turns = angle_sweep(path, t0, t1, center, opt) / kTwoPi;
  long long w = std::llround(turns);
  if (std::abs(turns - static_cast<double>(w)) > 1e-3)
    throw error(errc::refinement_exhausted, "winding did not settle on an integer");
  return w;
}

// Exact winding of a closed polyline around a center off the polyline.
inline long long winding_number(const SampledPath& loop, Vec2 center,
                                double center_tol = kGeomTol) {
  if (!loop.closed()) throw error(errc::invariant_violation, "polyline loop not closed");
  double total = 0.0;
  Vec2 prev = loop.pts.front() - center;
  if (prev.norm() <= center_tol) throw error(errc::center_on_path, "center on polyline");
  for (std::size_t i = 1; i < loop.pts.size(); ++i) {
    Vec2 cur = loop.pts[i] - center;
    if (cur.norm() <= center_tol) throw error(errc::center_on_path, "center on polyline");
    // center strictly off the segment keeps each step below pi
    Vec2 a = loop.pts[i - 1], b = loop.pts[i];
    Vec2 ab = b - a;
    double t = ab.norm2() > 0 ? std::clamp((center - a).dot(ab) / ab.norm2(), 0.0, 1.0) : 0.0;
    if ((a + ab * t - center).norm() <= center_tol)
      throw error(errc::center_on_path, "center on polyline segment");
    total += detail::angle_step(prev, cur);
    prev = cur;
  }
  double turns = total / kTwoPi;
  long long w = std::llround(turns);
  if (std::abs(turns - static_cast<double>(w)) > 1e-6)
    throw error(errc::invariant_violation, "polyline winding not an integer");
  return w;
}

// --------------------------------------------------------------------------
// Algebraic intersection numbers
// --------------------------------------------------------------------------

namespace detail {

struct Crossing {
  double s;  // parameter on the first segment
  int sign;
};

// Proper crossing of segments [a0,a1] and [b0,b1]. Sign is positive when
// (a1-a0, b1-b0) is a positively oriented frame. Crossings within tol of a
// segment endpoint, or tangential ones, are reported as degenerate.
inline bool segment_crossing(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1,
                             Crossing& out, double tol = kGeomTol) {
  Vec2 da = a1 - a0, db = b1 - b0;
  double denom = da.cross(db);
  Vec2 w = b0 - a0;
  double s_num = w.cross(db);
  double t_num = w.cross(da);
  double scale = std::max({da.norm(), db.norm(), 1e-30});
  if (std::abs(denom) <= tol * scale * scale) {
    // parallel: either disjoint or degenerate overlap
    double d0 = da.cross(b0 - a0), d1 = da.cross(b1 - a0);
    if (std::abs(d0) <= tol * scale && std::abs(d1) <= tol * scale) {
      // collinear; overlapping ranges are degenerate
      double lo = std::min(a0.dot(da), a1.dot(da)), hi = std::max(a0.dot(da), a1.dot(da));
      double p0 = b0.dot(da), p1 = b1.dot(da);
      if (std::max(p0, p1) >= lo - tol && std::min(p0, p1) <= hi + tol)
        throw error(errc::degenerate_crossing, "collinear overlapping segments");
    }
    return false;
  }
  double s = s_num / denom;
  double t = t_num / denom;
  if (s < -tol || s > 1 + tol || t < -tol || t > 1 + tol) return false;
  double end_tol = tol / std::max(std::abs(denom) / (scale * scale), 1e-30);
  (void)end_tol;
  double margin = 1e-9;
  if (s < margin || s > 1 - margin || t < margin || t > 1 - margin)
    throw error(errc::degenerate_crossing, "crossing too close to a sample endpoint");
  out.s = s;
  out.sign = denom > 0 ? 1 : -1;
  return true;
}

}  // namespace detail

// Signed count of transverse crossings between two piecewise-linear paths.
// Sign convention: a crossing counts +1 when (tangent of gamma, tangent of
// Gamma) is a positively oriented frame for the standard counterclockwise
// orientation of R^2; hence intersection_number(a,b) == -intersection_number(b,a).
inline long long intersection_number(const SampledPath& gamma, const SampledPath& Gamma,
                                     double tol = kGeomTol) {
  // endpoints of each path must be off the other
  auto off = [&](const Vec2& p, const SampledPath& path) {
    for (std::size_t i = 1; i < path.pts.size(); ++i) {
      Vec2 a = path.pts[i - 1], b = path.pts[i], ab = b - a;
      double t = ab.norm2() > 0 ? std::clamp((p - a).dot(ab) / ab.norm2(), 0.0, 1.0) : 0.0;
      if ((a + ab * t - p).norm() <= tol) return false;
    }
    return true;
  };
  if (!off(gamma.front(), Gamma) || !off(gamma.back(), Gamma) ||
      !off(Gamma.front(), gamma) || !off(Gamma.back(), gamma))
    throw error(errc::degenerate_crossing, "path endpoint lies on the other path");

  long long total = 0;
  detail::Crossing c;
  for (std::size_t i = 1; i < gamma.pts.size(); ++i)
    for (std::size_t j = 1; j < Gamma.pts.size(); ++j)
      if (detail::segment_crossing(gamma.pts[i - 1], gamma.pts[i], Gamma.pts[j - 1],
                                   Gamma.pts[j], c, tol))
        total += c.sign;
  return total;
}

// Crossings of a (long) polyline with one oriented segment, signed so that
// the result equals intersection_number(segment_path, polyline).
inline long long polyline_segment_crossings(const SampledPath& poly, const Vec2& seg0,
                                            const Vec2& seg1, double tol = kGeomTol) {
  long long total = 0;
  detail::Crossing c;
  for (std::size_t j = 1; j < poly.pts.size(); ++j)
    if (detail::segment_crossing(seg0, seg1, poly.pts[j - 1], poly.pts[j], c, tol))
      total += c.sign;
  return total;
}

}  // namespace isolink
