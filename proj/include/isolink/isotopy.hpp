#pragma once

// Identity isotopies: families t -> F_t of surface homeomorphisms with
// F_0 = id, their algebra (composition, inverse, iteration), lifts to the
// universal cover, and trajectory sampling.

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "isolink/geometry.hpp"

namespace isolink {

enum class IsotopyKind { ClosedForm, VectorField };

struct IntegratorConfig {
  double step = 1e-3;     // fixed step of the classical 4th-order scheme
  double bound = 1e6;     // bounding box guard in cover coordinates
};

namespace detail {

inline Vec2 rk4_step(const std::function<Vec2(double, Vec2)>& f, double t, Vec2 z, double h) {
  Vec2 k1 = f(t, z);
  Vec2 k2 = f(t + 0.5 * h, z + k1 * (0.5 * h));
  Vec2 k3 = f(t + 0.5 * h, z + k2 * (0.5 * h));
  Vec2 k4 = f(t + h, z + k3 * h);
  return z + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6.0);
}

inline Vec2 integrate(const std::function<Vec2(double, Vec2)>& f, double t0, double t1, Vec2 z,
                      const IntegratorConfig& cfg) {
  double span = t1 - t0;
  if (span == 0.0) return z;
  double h = span > 0 ? cfg.step : -cfg.step;
  long n = static_cast<long>(std::floor(std::abs(span) / cfg.step));
  double t = t0;
  for (long i = 0; i < n; ++i, t = t0 + i * h) {
    z = rk4_step(f, t, z, h);
    if (std::abs(z.x) > cfg.bound || std::abs(z.y) > cfg.bound)
      throw error(errc::integrator_blowup, "trajectory left the bounding box");
  }
  double rest = t1 - (t0 + n * h);
  if (rest != 0.0) z = rk4_step(f, t0 + n * h, z, rest);
  if (std::abs(z.x) > cfg.bound || std::abs(z.y) > cfg.bound)
    throw error(errc::integrator_blowup, "trajectory left the bounding box");
  return z;
}

}  // namespace detail

// An identity isotopy. The canonical representation is the lifted evaluator
// on the cover (deck-equivariant, F~_0 = id); base-space evaluation projects.
// Instances built from base-only data lift by continuation on demand.
class IdentityIsotopy {
 public:
  IdentityIsotopy() = default;

  static IdentityIsotopy from_cover(Surface s, std::function<Vec2(double, Vec2)> cover,
                                    std::function<Vec2(Vec2)> inverse_time_one = nullptr) {
    IdentityIsotopy iso;
    iso.surface_ = s;
    iso.kind_ = IsotopyKind::ClosedForm;
    iso.cover_ = std::move(cover);
    iso.inv1_ = std::move(inverse_time_one);
    return iso;
  }

  // Time-dependent vector field in cover coordinates (periodic in the deck
  // directions); the lift integrates the field with the fixed-step scheme.
  static IdentityIsotopy from_vector_field(Surface s, std::function<Vec2(double, Vec2)> field,
                                           IntegratorConfig cfg = {}) {
    IdentityIsotopy iso;
    iso.surface_ = s;
    iso.kind_ = IsotopyKind::VectorField;
    iso.field_ = std::move(field);
    iso.integ_ = cfg;
    auto f = iso.field_;
    auto c = cfg;
    iso.cover_ = [f, c](double t, Vec2 z) { return detail::integrate(f, 0.0, t, z, c); };
    return iso;
  }

  // Vector-field isotopies with a global bound on |field|.
  static IdentityIsotopy from_vector_field(Surface s, std::function<Vec2(double, Vec2)> field,
                                           double field_bound, IntegratorConfig cfg = {}) {
    IdentityIsotopy iso = from_vector_field(s, std::move(field), cfg);
    iso.speed_ = [field_bound](Vec2) { return field_bound; };
    return iso;
  }

  // Base-only evaluator (t, reduced point) -> reduced point. The cover
  // evaluator is built by continuation from t = 0.
  static IdentityIsotopy from_base(Surface s, std::function<Vec2(double, Vec2)> base,
                                   std::function<Vec2(Vec2)> inverse_time_one = nullptr);

  Surface surface() const { return surface_; }
  IsotopyKind kind() const { return kind_; }
  IntegratorConfig integrator() const { return integ_; }
  const std::function<Vec2(double, Vec2)>& field() const { return field_; }

  // Declared modulus of continuity: sup over t in [0,1] of |d/dt F~_t(z~)|
  // for the trajectory starting at z~. Exact winding computations require
  // it; isotopies without one fall back to heuristic refinement.
  bool has_speed_bound() const { return static_cast<bool>(speed_); }
  double speed_bound(const Vec2& z) const { return speed_ ? speed_(z) : -1.0; }
  IdentityIsotopy& with_speed_bound(std::function<double(Vec2)> s) {
    speed_ = std::move(s);
    return *this;
  }

  // Optional trajectory factory: derived isotopies (iterates, compositions)
  // install one so unit-path evaluation costs O(1) instead of replaying the
  // whole prefix of time-one maps on every call.
  using PathFactory = std::function<std::function<Vec2(double)>(Vec2)>;
  bool has_path_factory() const { return static_cast<bool>(path_factory_); }
  const PathFactory& path_factory() const { return path_factory_; }
  IdentityIsotopy& with_path_factory(PathFactory f) {
    path_factory_ = std::move(f);
    return *this;
  }

  // F~_t on the cover, t in [0,1].
  Vec2 cover(double t, const Vec2& z) const { return cover_(t, z); }

  // Extension to all t >= 0 by F_{t+1} = F_t o F_1.
  Vec2 cover_extended(double t, Vec2 z) const {
    long k = static_cast<long>(std::floor(t));
    if (k < 0) throw error(errc::invariant_violation, "extended evaluation needs t >= 0");
    for (long i = 0; i < k; ++i) z = cover_(1.0, z);
    double frac = t - static_cast<double>(k);
    return frac > 0 ? cover_(frac, z) : z;
  }

  BasePoint evaluate(double t, const BasePoint& z) const {
    return project(cover_extended(t, z.p), surface_);
  }

  Vec2 time_one(const Vec2& z) const { return cover_(1.0, z); }
  BasePoint time_one(const BasePoint& z) const { return evaluate(1.0, z); }

  bool has_inverse_time_one() const { return static_cast<bool>(inv1_); }

  // F_1^{-1} on the cover: closed form when available, otherwise
  // fixed-point iteration w <- w - (F_1(w) - z).
  Vec2 inverse_time_one(const Vec2& z) const {
    if (inv1_) return inv1_(z);
    Vec2 w = z;
    for (int it = 0; it < 100; ++it) {
      Vec2 r = cover_(1.0, w) - z;
      if (r.norm() < 1e-10) return w;
      w -= r;
    }
    throw error(errc::inverse_unavailable, "numeric inversion of the time-one map stalled");
  }

 private:
  Surface surface_ = Surface::Plane;
  IsotopyKind kind_ = IsotopyKind::ClosedForm;
  std::function<Vec2(double, Vec2)> cover_;
  std::function<Vec2(Vec2)> inv1_;
  std::function<Vec2(double, Vec2)> field_;  // VectorField kind only
  std::function<double(Vec2)> speed_;
  PathFactory path_factory_;
  IntegratorConfig integ_;
};

// --------------------------------------------------------------------------
// Lift by continuation
// --------------------------------------------------------------------------

// Tracks F_t(z) continuously from t = 0 starting at the lift z~, choosing at
// every step the branch that moves less than 1/2 in the base; the step is
// bisected when that fails.
inline Vec2 lift_by_continuation(Surface s, const std::function<Vec2(double, Vec2)>& base_eval,
                                 double t, const Vec2& z_tilde) {
  const Vec2 z0 = project(z_tilde, s).p;
  double cur_t = 0.0;
  Vec2 cur = z_tilde;
  Vec2 cur_base = z0;
  double dt = t / 16.0;
  const double min_dt = t / 4294967296.0;  // 2^32 subdivisions
  while (cur_t < t) {
    double next_t = std::min(cur_t + dt, t);
    Vec2 nb = project(base_eval(next_t, z0), s).p;
    if (base_distance(cur_base, nb, s) < 0.5 || s == Surface::Plane) {
      Vec2 shifted = apply_deck(nearest_deck(cur, nb, s), nb);
      // carry the non-periodic coordinates exactly
      cur = shifted;
      cur_base = nb;
      cur_t = next_t;
    } else {
      dt *= 0.5;
      if (dt < min_dt)
        throw error(errc::continuation_ambiguous,
                    "cannot keep per-step base motion below 1/2");
    }
  }
  return cur;
}

inline IdentityIsotopy IdentityIsotopy::from_base(Surface s,
                                                  std::function<Vec2(double, Vec2)> base,
                                                  std::function<Vec2(Vec2)> inverse_time_one) {
  IdentityIsotopy iso;
  iso.surface_ = s;
  iso.kind_ = IsotopyKind::ClosedForm;
  auto b = std::move(base);
  iso.cover_ = [s, b](double t, Vec2 z) { return lift_by_continuation(s, b, t, z); };
  iso.inv1_ = std::move(inverse_time_one);
  return iso;
}

// --------------------------------------------------------------------------
// Isotopy algebra
// --------------------------------------------------------------------------

inline BoundedPath unit_trajectory(const IdentityIsotopy& iso, Vec2 z_tilde);

// Time-rescaled concatenation: on [(k-1)/n, k/n] the k-th isotopy runs,
// applied after the completed time-one maps of its predecessors.
inline IdentityIsotopy compose(std::vector<IdentityIsotopy> isos) {
  if (isos.empty()) throw error(errc::invariant_violation, "compose needs >= 1 isotopy");
  Surface s = isos.front().surface();
  for (const auto& i : isos)
    if (i.surface() != s) throw error(errc::invariant_violation, "compose: mixed surfaces");
  if (isos.size() == 1) return isos.front();
  auto shared = std::make_shared<std::vector<IdentityIsotopy>>(std::move(isos));
  const double n = static_cast<double>(shared->size());
  auto cover = [shared, n](double t, Vec2 z) {
    double k_real = std::clamp(std::ceil(t * n), 1.0, n);
    std::size_t k = static_cast<std::size_t>(k_real);
    for (std::size_t i = 0; i + 1 < k; ++i) z = (*shared)[i].time_one(z);
    double local = n * t - static_cast<double>(k - 1);
    return (*shared)[k - 1].cover(std::clamp(local, 0.0, 1.0), z);
  };
  auto inv = [shared](Vec2 z) {
    for (auto it = shared->rbegin(); it != shared->rend(); ++it) z = it->inverse_time_one(z);
    return z;
  };
  IdentityIsotopy out = IdentityIsotopy::from_cover(s, cover, inv);
  bool all_bounded = true;
  for (const auto& i : *shared) all_bounded = all_bounded && i.has_speed_bound();
  if (all_bounded) {
    const double count = n;
    out.with_speed_bound([shared, count](Vec2 z) {
      double worst = 0.0;
      for (const auto& part : *shared) {
        worst = std::max(worst, part.speed_bound(z));
        z = part.time_one(z);
      }
      return count * worst;
    });
  }
  out.with_path_factory([shared](Vec2 z) {
    auto paths = std::make_shared<std::vector<std::function<Vec2(double)>>>();
    Vec2 cur = z;
    for (const auto& part : *shared) {
      paths->push_back(unit_trajectory(part, cur).f);
      cur = part.time_one(cur);
    }
    const double k0 = static_cast<double>(shared->size());
    return [paths, k0](double s) {
      double u = std::clamp(s, 0.0, 1.0) * k0;
      std::size_t k = std::min(static_cast<std::size_t>(u), paths->size() - 1);
      return (*paths)[k](u - static_cast<double>(k));
    };
  });
  return out;
}

// I^{-1} = (F_{1-t} o F_1^{-1}); the time-one map becomes F^{-1}.
inline IdentityIsotopy inverse(const IdentityIsotopy& iso) {
  auto held = std::make_shared<IdentityIsotopy>(iso);
  auto cover = [held](double t, Vec2 z) { return held->cover(1.0 - t, held->inverse_time_one(z)); };
  auto inv = [held](Vec2 z) { return held->time_one(z); };
  IdentityIsotopy out = IdentityIsotopy::from_cover(iso.surface(), cover, inv);
  if (iso.has_speed_bound())
    out.with_speed_bound([held](Vec2 z) { return held->speed_bound(held->inverse_time_one(z)); });
  out.with_path_factory([held](Vec2 z) {
    auto p = unit_trajectory(*held, held->inverse_time_one(z)).f;
    return [p](double s) { return p(1.0 - s); };
  });
  return out;
}

// I^n = (F_t)_{t in [0,n]} reparametrized to [0,1]; the time-one map is F^n.
inline IdentityIsotopy iterate(const IdentityIsotopy& iso, long n) {
  if (n < 1) throw error(errc::invariant_violation, "iterate needs n >= 1");
  if (n == 1) return iso;
  auto held = std::make_shared<IdentityIsotopy>(iso);
  auto cover = [held, n](double t, Vec2 z) {
    return held->cover_extended(t * static_cast<double>(n), z);
  };
  auto inv = [held, n](Vec2 z) {
    for (long i = 0; i < n; ++i) z = held->inverse_time_one(z);
    return z;
  };
  IdentityIsotopy out = IdentityIsotopy::from_cover(iso.surface(), cover, inv);
  if (iso.has_speed_bound()) {
    out.with_speed_bound([held, n](Vec2 z) {
      double worst = 0.0;
      for (long i = 0; i < n; ++i) {
        worst = std::max(worst, held->speed_bound(z));
        z = held->time_one(z);
      }
      return static_cast<double>(n) * worst;
    });
  }
  out.with_path_factory([held, n](Vec2 z) {
    auto paths = std::make_shared<std::vector<std::function<Vec2(double)>>>();
    Vec2 cur = z;
    for (long j = 0; j < n; ++j) {
      paths->push_back(unit_trajectory(*held, cur).f);
      cur = held->time_one(cur);
    }
    const double nn = static_cast<double>(n);
    return [paths, nn](double s) {
      double u = std::clamp(s, 0.0, 1.0) * nn;
      std::size_t k = std::min(static_cast<std::size_t>(u), paths->size() - 1);
      return (*paths)[k](u - static_cast<double>(k));
    };
  });
  return out;
}

// --------------------------------------------------------------------------
// Lifted isotopies
// --------------------------------------------------------------------------

struct LiftOptions {
  int space_samples = 24;       // per axis over the sampling window
  int time_samples = 17;        // prime, so rigid integer turn rates are seen
  Vec2 window_lo{0.0, 0.0};     // sampling window in cover coordinates
  Vec2 window_hi{1.0, 1.0};
  double safety_factor = 2.0;   // margin on the sampled displacement sup
};

// An isotopy together with its lift data: the displacement bound K is a
// sampled sup of |F~_t(z~) - z~| over a window x [0,1], times a safety factor.
struct LiftedIsotopy {
  IdentityIsotopy iso;
  double displacement_bound = 0.0;

  Surface surface() const { return iso.surface(); }
  Vec2 cover(double t, const Vec2& z) const { return iso.cover(t, z); }
  Vec2 cover_extended(double t, const Vec2& z) const { return iso.cover_extended(t, z); }
  Vec2 time_one(const Vec2& z) const { return iso.time_one(z); }
};

inline double sampled_displacement_bound(const IdentityIsotopy& iso, const LiftOptions& opt) {
  double sup = 0.0;
  for (int i = 0; i <= opt.space_samples; ++i) {
    for (int j = 0; j <= opt.space_samples; ++j) {
      Vec2 z{opt.window_lo.x + (opt.window_hi.x - opt.window_lo.x) * i / opt.space_samples,
             opt.window_lo.y + (opt.window_hi.y - opt.window_lo.y) * j / opt.space_samples};
      for (int k = 1; k <= opt.time_samples; ++k) {
        double t = static_cast<double>(k) / opt.time_samples;
        sup = std::max(sup, (iso.cover(t, z) - z).norm());
      }
    }
  }
  return sup * opt.safety_factor;
}

inline LiftedIsotopy lift(const IdentityIsotopy& iso, const LiftOptions& opt = {}) {
  return LiftedIsotopy{iso, sampled_displacement_bound(iso, opt)};
}

// --------------------------------------------------------------------------
// Trajectory sampling
// --------------------------------------------------------------------------

// Path s in [0,1] -> F~_s(z~), carrying the isotopy's declared speed
// bound. Vector-field isotopies cache the integration nodes once and
// interpolate; closed forms evaluate directly.
inline BoundedPath unit_trajectory(const IdentityIsotopy& iso, Vec2 z_tilde) {
  BoundedPath out;
  out.speed = iso.speed_bound(z_tilde);
  if (iso.kind() == IsotopyKind::VectorField) {
    auto nodes = std::make_shared<std::vector<Vec2>>();
    double h = iso.integrator().step;
    long n = std::max(1L, static_cast<long>(std::ceil(1.0 / h)));
    nodes->reserve(n + 1);
    nodes->push_back(z_tilde);
    Vec2 z = z_tilde;
    const auto& f = iso.field();
    for (long i = 0; i < n; ++i) {
      double t0 = static_cast<double>(i) / n;
      double t1 = static_cast<double>(i + 1) / n;
      z = detail::rk4_step(f, t0, z, t1 - t0);
      nodes->push_back(z);
    }
    out.f = [nodes, n](double s) {
      double u = std::clamp(s, 0.0, 1.0) * n;
      long i = std::min(static_cast<long>(u), n - 1);
      double frac = u - i;
      return (*nodes)[i] * (1.0 - frac) + (*nodes)[i + 1] * frac;
    };
    return out;
  }
  if (iso.has_path_factory()) {
    out.f = iso.path_factory()(z_tilde);
    return out;
  }
  auto held = std::make_shared<IdentityIsotopy>(iso);
  out.f = [held, z_tilde](double s) { return held->cover(s, z_tilde); };
  return out;
}

// Polyline sampling of a trajectory with local refinement: the possible
// motion within each step (speed * dt when a speed bound is declared, the
// chord length otherwise) must stay below max(floor_len, frac * distance
// to the given segment), so crossing counts against that segment are
// reliable.
inline SampledPath sample_trajectory_near_segment(const BoundedPath& path,
                                                  double t0, double t1, Vec2 seg_a, Vec2 seg_b,
                                                  double floor_len = 1e-3, double frac = 0.25,
                                                  int max_doublings = 40) {
  auto seg_dist = [&](const Vec2& p) {
    Vec2 ab = seg_b - seg_a;
    double t = ab.norm2() > 0 ? std::clamp((p - seg_a).dot(ab) / ab.norm2(), 0.0, 1.0) : 0.0;
    return (seg_a + ab * t - p).norm();
  };
  std::vector<Vec2> pts;
  std::vector<double> times;
  struct Item { double ta, tb; Vec2 pa, pb; };
  Vec2 p0 = path.f(t0);
  pts.push_back(p0);
  times.push_back(t0);
  // depth-first, emitting left-to-right; golden-section splits avoid the
  // aliasing of integer turn counts against dyadic grids
  constexpr double kSplit = 0.6180339887498949;
  std::function<void(const Item&, int)> emit = [&](const Item& it, int depth) {
    double move = path.speed >= 0.0 ? path.speed * (it.tb - it.ta) : (it.pb - it.pa).norm();
    Vec2 mid = (it.pa + it.pb) * 0.5;
    double allowed = std::max(floor_len, frac * seg_dist(mid));
    double tm = it.ta + kSplit * (it.tb - it.ta);
    if (move > allowed && depth < max_doublings && tm > it.ta && tm < it.tb) {
      Vec2 pm = path.f(tm);
      emit({it.ta, tm, it.pa, pm}, depth + 1);
      emit({tm, it.tb, pm, it.pb}, depth + 1);
    } else {
      pts.push_back(it.pb);
      times.push_back(it.tb);
    }
  };
  // prime seed count; a chord-length criterion alone cannot detect whole
  // missed turns, the irrational splits make them shrink instead
  int seed_n = 17;
  Vec2 prev = p0;
  double prev_t = t0;
  for (int i = 1; i <= seed_n; ++i) {
    double tb = t0 + (t1 - t0) * static_cast<double>(i) / seed_n;
    Vec2 pb = path.f(tb);
    emit({prev_t, tb, prev, pb}, 0);
    prev = pb;
    prev_t = tb;
  }
  return make_path(std::move(pts), std::move(times));
}

}  // namespace isolink
