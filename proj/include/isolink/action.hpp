#pragma once

// The measure-integrated action difference i_mu, the action functions on
// fixed lifts and on contractible fixed points, the action spectrum and
// width, and the classical symplectic action used as a smooth-case
// cross-check.
//
// Integration routes per measure component:
//   - Atomic: exact weighted sums of pointwise triple linkings.
//   - Radial closed form (balls and circles rotated rigidly about their
//     center, punctures fixed along the whole isotopy): exact 1D
//     quadrature of the enclosure rates.
//   - Grid densities: stratified sampling of the n-step Birkhoff-sum
//     estimator (crossing counts of orbit paths against the translates of
//     a reference path joining the punctures), which integrates to i_mu
//     exactly for invariant measures.
//   - ReturnBlocks: per-sample recurrent triple linkings with convergence
//     filtering; the literal definition, kept for cross-checks.

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "isolink/linking.hpp"
#include "isolink/measure.hpp"
#include "isolink/rng.hpp"
#include "isolink/zoo.hpp"

namespace isolink {

enum class ActionEstimator { OrbitCrossings, RadialSweep, ReturnBlocks };

// Memo for exact circle rates, keyed by (center, radius-scale, u). Owned by
// the caller and only valid for one isotopy; it caches pure evaluations, so
// results are unchanged with or without it.
struct RateCache {
  std::map<std::array<double, 4>, double> values;
};

struct QuadratureConfig {
  std::uint64_t seed = 42;
  int strata_x = 20;
  int strata_y = 20;
  int batches = 10;
  long orbit_steps = 48;        // n of the Birkhoff-sum estimator
  long radial_orbit_steps = 1;  // n for the radial sweep estimator
  int radial_strata = 150;      // per ball component
  int phase_samples = 4;        // equally spaced angular offsets per radius
  ActionEstimator grid_estimator = ActionEstimator::OrbitCrossings;
  bool radial_by_sampling = false;  // force the sampling route on radial components
  double drop_abort_fraction = 0.10;
  long return_n_max = 20000;    // ReturnBlocks per-sample budget
  double return_tol = 1e-2;
  LinkingOptions linking;
  std::shared_ptr<RateCache> rate_cache;  // optional, one isotopy per cache
};

struct ActionValue {
  double value = 0.0;
  double stderr_ = 0.0;
  long samples = 0;
  long dropped = 0;
};

namespace detail {

// Rotation rate, in turns per unit time, of the circle of radius r about
// the center under the isotopy (exact for rigid circle-by-circle maps).
inline double circle_rate(const IdentityIsotopy& iso, Vec2 center, double r,
                          const WindingOptions& wopt = {}) {
  if (r <= kGeomTol) return 0.0;
  BoundedPath p = unit_trajectory(iso, center + Vec2{r, 0.0});
  return angle_sweep(p, 0.0, 1.0, center, wopt) / kTwoPi;
}

inline void require_fixed_throughout(const IdentityIsotopy& iso, Vec2 p, const char* what) {
  for (int k = 0; k <= 17; ++k)
    if ((iso.cover(k / 17.0, p) - p).norm() > 1e-9)
      throw error(errc::config_error,
                  std::string(what) + ": puncture moves during the isotopy; the closed-form "
                                      "radial route needs punctures fixed for all t");
}

// Exact contribution of a rigidly rotated ball: each circle of radius r
// winds around an enclosed puncture at its rotation rate, so the integral
// is 2 pi Int rate(r) (chi_a(r) - chi_b(r)) rho r dr with chi the
// enclosure indicators.
inline double radial_ball_action(const IdentityIsotopy& iso, const RadialBallComponent& ball,
                                 Vec2 a, Vec2 b, double tol = 1e-10,
                                 RateCache* cache = nullptr) {
  double da = (a - ball.center).norm();
  double db = (b - ball.center).norm();
  auto rate_at = [&](double u) {
    if (!cache) return circle_rate(iso, ball.center, u * ball.radius);
    std::array<double, 4> key{ball.center.x, ball.center.y, ball.radius, u};
    auto it = cache->values.find(key);
    if (it != cache->values.end()) return it->second;
    double v = circle_rate(iso, ball.center, u * ball.radius);
    cache->values.emplace(key, v);
    return v;
  };
  // integrate in u = r / radius; the circulation constraints of the zoo
  // balls are pinned with the same quadrature rule
  auto integrand = [&](double u) {
    double r = u * ball.radius;
    double chi = (da < r ? 1.0 : 0.0) - (db < r ? 1.0 : 0.0);
    if (chi == 0.0) return 0.0;
    return kTwoPi * ball.density * rate_at(u) * chi * u * ball.radius * ball.radius;
  };
  std::vector<double> cuts{0.0, 1.0};
  if (da > 0 && da < ball.radius) cuts.push_back(da / ball.radius);
  if (db > 0 && db < ball.radius) cuts.push_back(db / ball.radius);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i)
    total += detail::integrate_1d(integrand, cuts[i - 1], cuts[i], tol);
  return total;
}

inline double radial_circle_action(const IdentityIsotopy& iso, const RadialCircleComponent& c,
                                   Vec2 a, Vec2 b) {
  double chi = ((a - c.center).norm() < c.radius ? 1.0 : 0.0) -
               ((b - c.center).norm() < c.radius ? 1.0 : 0.0);
  if (chi == 0.0) return 0.0;
  return c.mass * circle_rate(iso, c.center, c.radius) * chi;
}

// Crossings of the n-step orbit path of z~ with every deck translate of
// the reference segment. Valid when the punctures are fixed along the raw
// isotopy (trivial normalization), which makes the per-lift sum equal to
// the per-translate sum.
inline long long orbit_crossings(const LiftedIsotopy& L, Vec2 z0, long steps, Vec2 ga, Vec2 gb,
                                 const std::vector<Vec2>& waypoints, double chord_floor) {
  Surface s = L.surface();
  long long total = 0;
  Vec2 cur = z0;
  for (long j = 0; j < steps; ++j) {
    BoundedPath path = unit_trajectory(L.iso, cur);
    // bounding box of this step
    detail::Bbox box;
    for (int q = 0; q <= 17; ++q) box.add(path.f(q / 17.0));
    double margin = path.speed >= 0 ? path.speed / 17.0 : 0.5;
    box = box.inflated(margin + 1e-9);
    std::vector<std::pair<Vec2, Vec2>> segs;
    if (waypoints.empty())
      segs.push_back({ga, gb});
    else {
      segs.push_back({ga, waypoints[0]});
      segs.push_back({waypoints[0], gb});
    }
    for (const auto& [s0, s1] : segs) {
      // deck translates u with (seg + u) meeting the box
      long mlo = 0, mhi = 0, nlo = 0, nhi = 0;
      if (s != Surface::Plane) {
        mlo = static_cast<long>(std::floor(box.lo.x - std::max(s0.x, s1.x)));
        mhi = static_cast<long>(std::ceil(box.hi.x - std::min(s0.x, s1.x)));
        if (s == Surface::Torus) {
          nlo = static_cast<long>(std::floor(box.lo.y - std::max(s0.y, s1.y)));
          nhi = static_cast<long>(std::ceil(box.hi.y - std::min(s0.y, s1.y)));
        }
      }
      for (long m = mlo; m <= mhi; ++m) {
        for (long n = nlo; n <= nhi; ++n) {
          Vec2 u{static_cast<double>(m), static_cast<double>(n)};
          if (!box.meets_segment(s0 + u, s1 + u)) continue;
          SampledPath poly =
              sample_trajectory_near_segment(path, 0.0, 1.0, s0 + u, s1 + u, chord_floor);
          total += polyline_segment_crossings(poly, s0 + u, s1 + u);
        }
      }
    }
    cur = path.f(1.0);
  }
  return total;
}

// Real-valued sweep estimator for plane radial components: the unwrapped
// winding of the n-step trajectory about one puncture. Its mean under an
// invariant measure equals the winding-rate integral exactly (the crossing
// count against a ray plus a bounded coboundary), so the difference of the
// two puncture integrals is i_mu.
inline double orbit_sweep_one(const LiftedIsotopy& L, Vec2 z0, long steps, Vec2 center,
                              const WindingOptions& wopt) {
  double s = 0.0;
  Vec2 cur = z0;
  for (long j = 0; j < steps; ++j) {
    BoundedPath path = unit_trajectory(L.iso, cur);
    s += angle_sweep(path, 0.0, 1.0, center, wopt);
    cur = path.f(1.0);
  }
  return s / (kTwoPi * static_cast<double>(steps));
}

}  // namespace detail

// i_mu(F~; a~, b~): the mu-integral of the triple linking against the two
// fixed lifts.
inline ActionValue action_difference(const LiftedIsotopy& L, Vec2 a, Vec2 b,
                                     const InvariantMeasure& mu, const QuadratureConfig& q = {}) {
  if ((L.time_one(a) - a).norm() > 1e-9 || (L.time_one(b) - b).norm() > 1e-9)
    throw error(errc::not_fixed, "action_difference punctures must be fixed lifts");
  ActionValue out;
  double batch_acc[64] = {0};
  int used_batches = q.batches;
  if (used_batches < 2 || used_batches > 64)
    throw error(errc::config_error, "batches must be in [2, 64]");
  bool stochastic = false;
  double exact_part = 0.0;
  long long dropped_weighted = 0;
  double total_weight = 0.0;

  // reference path for the crossing estimators
  std::vector<Vec2> waypoints;

  for (const auto& comp : mu.components) {
    if (const auto* at = std::get_if<AtomicComponent>(&comp)) {
      for (const auto& atom : at->atoms) {
        total_weight += atom.weight;
        BasePoint zb = atom.point;
        if (base_distance(project(a, mu.surface), zb) < kGeomTol ||
            base_distance(project(b, mu.surface), zb) < kGeomTol)
          throw error(errc::invariant_violation, "atom sits on a puncture projection");
        BasePoint fz = project(L.time_one(zb.p), mu.surface);
        if (base_distance(fz, zb) < 1e-9) {
          exact_part += atom.weight *
                        static_cast<double>(triple_linking_fixed(L, a, b, zb, q.linking));
        } else {
          Disk U{zb, 0.03};
          auto rec = triple_linking_recurrent(L, a, b, zb, U, q.return_n_max, q.return_tol,
                                              q.linking);
          if (rec.estimate && rec.estimate->converged)
            exact_part += atom.weight * rec.value;
          else
            dropped_weighted += 1;
        }
        out.samples++;
      }
    } else if (const auto* ball = std::get_if<RadialBallComponent>(&comp)) {
      if (!q.radial_by_sampling) {
        detail::require_fixed_throughout(L.iso, a, "action_difference");
        detail::require_fixed_throughout(L.iso, b, "action_difference");
        exact_part += detail::radial_ball_action(L.iso, *ball, a, b, 1e-10, q.rate_cache.get());
        out.samples++;
      } else {
        if (mu.surface != Surface::Plane)
          throw error(errc::config_error, "radial sampling route requires the plane");
        // a ball whose circles enclose neither puncture integrates to zero
        if ((a - ball->center).norm() >= ball->radius &&
            (b - ball->center).norm() >= ball->radius)
          continue;
        stochastic = true;
        long steps = std::max(1L, q.radial_orbit_steps);
        for (int batch = 0; batch < used_batches; ++batch) {
          double acc = 0.0;
          for (int i = 0; i < q.radial_strata; ++i) {
            auto g = keyed_stream(q.seed, batch, 31 * i + 1, 2);
            double u1 = g.uniform();
            double jitter = g.uniform();
            // antithetic pair in the radial stratum, area-uniform
            for (double uu : {(i + u1) / q.radial_strata, (i + 1 - u1) / q.radial_strata}) {
              double r = ball->radius * std::sqrt(uu);
              // winding about the puncture near (or at) this ball's center
              // barely varies with the phase but costs most of the sweep
              // budget, so it is sampled at one phase; the cheap off-center
              // winding is phase-averaged densely.
              bool a_near = (a - ball->center).norm() < 2.0 * ball->radius;
              Vec2 nearp = a_near ? a : b;
              Vec2 farp = a_near ? b : a;
              double sgn_near = a_near ? 1.0 : -1.0;
              {
                double th = kTwoPi * jitter;
                Vec2 z = ball->center + Vec2{r * std::cos(th), r * std::sin(th)};
                double w = ball->mass() / (2.0 * q.radial_strata);
                acc += sgn_near * w *
                       detail::orbit_sweep_one(L, z, steps, nearp, q.linking.winding);
                out.samples++;
              }
              double w = ball->mass() / (2.0 * q.radial_strata * q.phase_samples);
              for (int p = 0; p < q.phase_samples; ++p) {
                double th = kTwoPi * (p + jitter) / q.phase_samples;
                Vec2 z = ball->center + Vec2{r * std::cos(th), r * std::sin(th)};
                acc -= sgn_near * w *
                       detail::orbit_sweep_one(L, z, steps, farp, q.linking.winding);
                out.samples++;
              }
            }
          }
          batch_acc[batch] += acc;
        }
      }
    } else if (const auto* circ = std::get_if<RadialCircleComponent>(&comp)) {
      detail::require_fixed_throughout(L.iso, a, "action_difference");
      detail::require_fixed_throughout(L.iso, b, "action_difference");
      exact_part += detail::radial_circle_action(L.iso, *circ, a, b);
      out.samples++;
    } else if (const auto* gd = std::get_if<GridDensityComponent>(&comp)) {
      stochastic = true;
      if (q.grid_estimator == ActionEstimator::RadialSweep)
        throw error(errc::config_error, "RadialSweep applies to radial components only");
      detail::require_fixed_throughout(L.iso, a, "grid estimator");
      detail::require_fixed_throughout(L.iso, b, "grid estimator");
      for (int batch = 0; batch < used_batches; ++batch) {
        double acc = 0.0;
        long drop_local = 0;
        for (int cy = 0; cy < q.strata_y; ++cy) {
          for (int cx = 0; cx < q.strata_x; ++cx) {
            auto g = keyed_stream(q.seed, batch, cx, cy);
            double u = (cx + g.uniform()) / q.strata_x;
            double v = (cy + g.uniform()) / q.strata_y;
            Vec2 z{gd->lo.x + (gd->hi.x - gd->lo.x) * u, gd->lo.y + (gd->hi.y - gd->lo.y) * v};
            int ix = std::min(gd->nx - 1, static_cast<int>(u * gd->nx));
            int iy = std::min(gd->ny - 1, static_cast<int>(v * gd->ny));
            double w = gd->cell_weights[static_cast<std::size_t>(iy) * gd->nx + ix] *
                       (static_cast<double>(gd->nx) * gd->ny) /
                       (static_cast<double>(q.strata_x) * q.strata_y);
            out.samples++;
            if (q.grid_estimator == ActionEstimator::ReturnBlocks) {
              BasePoint zb = project(z, mu.surface);
              Disk U{zb, 0.04};
              try {
                auto rec = triple_linking_recurrent(L, a, b, zb, U, q.return_n_max,
                                                    q.return_tol, q.linking);
                if (rec.estimate && rec.estimate->converged)
                  acc += w * rec.value;
                else
                  ++drop_local;
              } catch (const error& e) {
                if (e.code() == errc::no_return)
                  ++drop_local;
                else
                  throw;
              }
            } else {
              try {
                long long c = detail::orbit_crossings(L, z, q.orbit_steps, a, b, waypoints,
                                                      q.linking.chord_floor);
                acc += w * static_cast<double>(c) / static_cast<double>(q.orbit_steps);
              } catch (const error& e) {
                if (e.code() != errc::degenerate_crossing) throw;
                if (waypoints.empty()) {
                  Vec2 d = b - a;
                  Vec2 nrm{-d.y, d.x};
                  waypoints = {(a + b) * 0.5 + nrm * (7.3e-5 / std::max(nrm.norm(), kGeomTol))};
                  long long c = detail::orbit_crossings(L, z, q.orbit_steps, a, b, waypoints,
                                                        q.linking.chord_floor);
                  acc += w * static_cast<double>(c) / static_cast<double>(q.orbit_steps);
                } else {
                  ++drop_local;
                }
              }
            }
          }
        }
        batch_acc[batch] += acc;
        dropped_weighted += drop_local;
      }
    }
  }

  double mc_mean = 0.0, mc_se = 0.0;
  if (stochastic) {
    for (int bix = 0; bix < used_batches; ++bix) mc_mean += batch_acc[bix];
    mc_mean /= used_batches;
    double var = 0.0;
    for (int bix = 0; bix < used_batches; ++bix)
      var += (batch_acc[bix] - mc_mean) * (batch_acc[bix] - mc_mean);
    mc_se = std::sqrt(var / (used_batches * (used_batches - 1.0)));
  }
  out.value = exact_part + mc_mean;
  out.stderr_ = mc_se;
  out.dropped = dropped_weighted;
  if (out.samples > 0 &&
      static_cast<double>(dropped_weighted) >
          q.drop_abort_fraction * static_cast<double>(out.samples))
    throw error(errc::too_many_divergent_samples,
                "more than the allowed fraction of samples failed to converge");
  return out;
}

// ---------------------------------------------------------------------------
// Action functions and the spectrum
// ---------------------------------------------------------------------------

struct ActionEntry {
  std::string name;
  Vec2 point;          // lift (l_mu) or base point (L_mu)
  double value = 0.0;
  double stderr_ = 0.0;
  bool converged = true;
};

struct ActionSpectrum {
  Vec2 basepoint;
  std::vector<ActionEntry> entries;
  double width = 0.0;
  double max_stderr = 0.0;
};

// l_mu on a list of fixed lifts, gauge-fixed to 0 at the basepoint, with a
// coboundary residual check over sampled triples.
inline ActionSpectrum action_on_fixlift(const LiftedIsotopy& L, const std::vector<Vec2>& lifts,
                                        Vec2 basepoint, const InvariantMeasure& mu,
                                        const QuadratureConfig& q = {},
                                        const std::vector<std::string>* names = nullptr) {
  ActionSpectrum spec;
  spec.basepoint = basepoint;
  std::vector<ActionValue> vals;
  for (std::size_t i = 0; i < lifts.size(); ++i) {
    ActionEntry e;
    e.point = lifts[i];
    if (names && i < names->size()) e.name = (*names)[i];
    if ((lifts[i] - basepoint).norm() < kGeomTol) {
      e.value = 0.0;
      vals.push_back({0.0, 0.0, 0, 0});
    } else {
      ActionValue v = action_difference(L, basepoint, lifts[i], mu, q);
      e.value = v.value;
      e.stderr_ = v.stderr_;
      vals.push_back(v);
    }
    spec.entries.push_back(e);
    spec.max_stderr = std::max(spec.max_stderr, e.stderr_);
  }
  // coboundary residuals on a few triples: i(a,b) = l(b) - l(a) must chain
  for (std::size_t i = 0; i + 2 < lifts.size(); i += 3) {
    ActionValue ab = action_difference(L, lifts[i], lifts[i + 1], mu, q);
    double chained = spec.entries[i + 1].value - spec.entries[i].value;
    double budget = 3.0 * (ab.stderr_ + spec.entries[i].stderr_ + spec.entries[i + 1].stderr_) +
                    1e-9;
    if (std::abs(ab.value - chained) > budget)
      throw error(errc::coboundary_violation, "pairwise action differences fail to chain");
  }
  double lo = 0.0, hi = 0.0;
  for (const auto& e : spec.entries) {
    lo = std::min(lo, e.value);
    hi = std::max(hi, e.value);
  }
  spec.width = hi - lo;
  return spec;
}

// L_mu on contractible fixed points: requires the rotation vector of mu to
// vanish and the value to be independent of the lift choice.
inline ActionSpectrum action_on_contractible(const LiftedIsotopy& L,
                                             const std::vector<BasePoint>& points,
                                             const InvariantMeasure& mu,
                                             const QuadratureConfig& q = {},
                                             const std::vector<std::string>* names = nullptr) {
  MeasureQuadrature mq;
  mq.seed = q.seed;
  auto rot = rotation_vector_measure(L, mu, mq);
  double rot_tol = 3.0 * (rot.stderr_.x + rot.stderr_.y) + 1e-3;
  if (std::abs(rot.value.x) > rot_tol || std::abs(rot.value.y) > rot_tol)
    throw error(errc::rotation_vector_nonzero,
                "the measure's rotation vector must vanish for L_mu");
  if (points.empty()) return {};

  // lift-independence: i_mu(a~, alpha(a~)) must vanish for deck alpha
  Vec2 base_lift = points.front().p;
  if (L.surface() != Surface::Plane) {
    for (Deck alpha : {Deck{1, 0}, Deck{0, 1}}) {
      if (!deck_valid(alpha, L.surface())) continue;
      ActionValue v = action_difference(L, base_lift, apply_deck(alpha, base_lift), mu, q);
      if (std::abs(v.value) > 3.0 * v.stderr_ + 1e-3)
        throw error(errc::lift_dependence,
                    "i_mu(a~, alpha(a~)) does not vanish; L_mu would depend on lifts");
    }
  }

  std::vector<Vec2> lifts;
  lifts.reserve(points.size());
  for (const auto& p : points) lifts.push_back(p.p);
  ActionSpectrum spec = action_on_fixlift(L, lifts, base_lift, mu, q, names);
  return spec;
}

// Action spectrum over a fixed-lift sample, plus the width growth series
// width(F~^n) for n = 1..n_powers.
inline std::pair<ActionSpectrum, std::vector<double>> spectrum(
    const LiftedIsotopy& L, const InvariantMeasure& mu, const std::vector<Vec2>& fixed_sample,
    const QuadratureConfig& q = {}, int n_powers = 1) {
  if (fixed_sample.empty()) throw error(errc::invariant_violation, "empty fixed-set sample");
  ActionSpectrum spec = action_on_fixlift(L, fixed_sample, fixed_sample.front(), mu, q);
  std::vector<double> widths;
  widths.push_back(spec.width);
  for (int n = 2; n <= n_powers; ++n) {
    LiftedIsotopy Ln = lift(iterate(L.iso, n));
    QuadratureConfig qn = q;
    // the rate cache is keyed by geometry only, so each iterate needs its own
    if (q.rate_cache) qn.rate_cache = std::make_shared<RateCache>();
    ActionSpectrum sn = action_on_fixlift(Ln, fixed_sample, fixed_sample.front(), mu, qn);
    widths.push_back(sn.width);
  }
  return {spec, widths};
}

// ---------------------------------------------------------------------------
// Classical action (smooth-case cross-check)
// ---------------------------------------------------------------------------

struct HamiltonianIsotopy {
  IdentityIsotopy iso;                           // the flow of the field (-dH/dy, dH/dx)
  std::function<double(double, Vec2)> H;         // (t, cover point)
};

inline HamiltonianIsotopy hamiltonian_isotopy(const ZooEntry& e) {
  if (!e.hamiltonian) throw error(errc::config_error, "zoo entry has no Hamiltonian");
  return HamiltonianIsotopy{e.iso, *e.hamiltonian};
}

struct ClassicalActionConfig {
  int time_nodes = 512;    // composite Simpson nodes for the H integral
  int loop_nodes = 257;    // trajectory-loop polyline for the disk area
  int panel_t = 192;       // swept-rectangle grid
  int panel_s = 96;
  double loop_tol = 1e-6;  // closing tolerance of the trajectory loop
};

// A_H(x) = area(D_x) - Int H_t(F_t(x)) dt for a contractible fixed point x,
// with D_x the cone over the trajectory loop. Defined up to the shared
// additive constant.
inline double classical_action(const HamiltonianIsotopy& ham, BasePoint x,
                               const ClassicalActionConfig& cfg = {}) {
  BoundedPath traj = unit_trajectory(ham.iso, x.p);
  Vec2 start = traj.f(0.0), end = traj.f(1.0);
  if ((end - start).norm() > cfg.loop_tol)
    throw error(errc::non_contractible_loop,
                "trajectory loop has nonzero displacement in the cover");
  // signed area enclosed by the loop (shoelace over a fine polyline)
  double area = 0.0;
  Vec2 prev = traj.f(0.0);
  for (int i = 1; i <= cfg.loop_nodes; ++i) {
    Vec2 cur = traj.f(static_cast<double>(i) / cfg.loop_nodes);
    area += 0.5 * prev.cross(cur);
    prev = cur;
  }
  // composite Simpson for the H integral along the trajectory
  int n = cfg.time_nodes % 2 == 0 ? cfg.time_nodes : cfg.time_nodes + 1;
  double hint = 0.0;
  for (int i = 0; i <= n; ++i) {
    double t = static_cast<double>(i) / n;
    double wgt = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    hint += wgt * ham.H(t, traj.f(t));
  }
  hint /= 3.0 * n;
  return area - hint;
}

// delta(F; x, y): the signed area swept by a path from x to y under the
// isotopy, plus the disk areas of the two trajectory loops, computed as a
// 2-chain panel sum.
inline double classical_action_difference(const HamiltonianIsotopy& ham, BasePoint x,
                                          BasePoint y, const ClassicalActionConfig& cfg = {}) {
  // gamma: straight segment between the given lifts
  const int nt = cfg.panel_t, ns = cfg.panel_s;
  std::vector<std::vector<Vec2>> grid(static_cast<std::size_t>(nt) + 1);
  for (int j = 0; j <= ns; ++j) {
    double s = static_cast<double>(j) / ns;
    Vec2 gs = x.p + (y.p - x.p) * s;
    BoundedPath traj = unit_trajectory(ham.iso, gs);
    for (int i = 0; i <= nt; ++i) {
      if (j == 0) grid[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(ns) + 1);
      grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          traj.f(static_cast<double>(i) / nt);
    }
  }
  double swept = 0.0;
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < ns; ++j) {
      const Vec2& p00 = grid[i][j];
      const Vec2& p10 = grid[i + 1][j];
      const Vec2& p11 = grid[i + 1][j + 1];
      const Vec2& p01 = grid[i][j + 1];
      // shoelace of the (t,s)-oriented quad
      swept += 0.5 * (p00.cross(p10) + p10.cross(p11) + p11.cross(p01) + p01.cross(p00));
    }
  }
  auto loop_area = [&](BasePoint p) {
    BoundedPath traj = unit_trajectory(ham.iso, p.p);
    if ((traj.f(1.0) - traj.f(0.0)).norm() > cfg.loop_tol)
      throw error(errc::non_contractible_loop, "trajectory loop not closed");
    double area = 0.0;
    Vec2 prev = traj.f(0.0);
    for (int i = 1; i <= cfg.loop_nodes; ++i) {
      Vec2 cur = traj.f(static_cast<double>(i) / cfg.loop_nodes);
      area += 0.5 * prev.cross(cur);
      prev = cur;
    }
    return area;
  };
  return swept + loop_area(y) - loop_area(x);
}

}  // namespace isolink
