#pragma once

// First-return machinery on round disks, Birkhoff averaging with an
// explicit convergence criterion, rotation numbers on the annulus and
// rotation vectors on the torus, and a Kac's-lemma diagnostic.

#include <functional>
#include <optional>
#include <vector>

#include "isolink/isotopy.hpp"
#include "isolink/measure.hpp"

namespace isolink {

// Round disk in the base surface (quotient metric).
struct Disk {
  BasePoint center;
  double radius = 0.0;

  bool contains(const BasePoint& z) const {
    return base_distance(z, center) < radius;
  }
};

struct ReturnStep {
  long tau = 0;        // first-return time of this block
  BasePoint point;     // the return point Phi^i(z)
};

struct ReturnOrbit {
  BasePoint start;
  Disk disk;
  std::vector<ReturnStep> returns;
  std::vector<long> partial_sums;  // tau_n = sum of the first n return times

  long total_time() const { return partial_sums.empty() ? 0 : partial_sums.back(); }
};

// Successive first returns of z into U under the time-one map, consuming at
// most max_steps iterations in total.
inline ReturnOrbit first_return(const std::function<BasePoint(BasePoint)>& F, const Disk& U,
                                BasePoint z, long max_steps, long max_returns = 1000000) {
  if (!U.contains(z)) throw error(errc::invariant_violation, "first_return start not in U");
  ReturnOrbit orbit;
  orbit.start = z;
  orbit.disk = U;
  BasePoint cur = z;
  long tau = 0;
  long used = 0;
  while (used < max_steps && static_cast<long>(orbit.returns.size()) < max_returns) {
    cur = F(cur);
    ++tau;
    ++used;
    if (U.contains(cur)) {
      orbit.returns.push_back({tau, cur});
      orbit.partial_sums.push_back(orbit.total_time() + tau);
      tau = 0;
    }
  }
  if (orbit.returns.empty())
    throw error(errc::no_return, "orbit never re-entered the disk at this horizon");
  return orbit;
}

struct BirkhoffEstimate {
  double value = 0.0;
  long n_used = 0;          // iterates consumed
  std::vector<double> history;  // last partial averages
  bool converged = false;
};

struct ConvergenceConfig {
  double tol = 1e-3;
  int window = 5;  // partial averages that must agree pairwise within tol
};

namespace detail {

inline void push_history(BirkhoffEstimate& est, double avg, const ConvergenceConfig& cfg) {
  est.history.push_back(avg);
  if (static_cast<int>(est.history.size()) > cfg.window)
    est.history.erase(est.history.begin());
  est.value = avg;
  if (static_cast<int>(est.history.size()) == cfg.window) {
    double lo = est.history.front(), hi = est.history.front();
    for (double v : est.history) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    est.converged = (hi - lo) < cfg.tol;
  }
}

}  // namespace detail

struct RotationOptions {
  double disk_radius = 0.05;    // window certifying "recurrent at horizon"
  ConvergenceConfig conv;
  double fixed_tol = 1e-9;
};

// A lifted surface self-map (time-one maps, annulus homeomorphism lifts).
struct LiftedMap {
  Surface surface = Surface::Annulus;
  std::function<Vec2(Vec2)> lift;

  BasePoint base(const BasePoint& z) const { return project(lift(z.p), surface); }
};

inline LiftedMap time_one_map(const LiftedIsotopy& L) {
  auto held = L.iso;
  return LiftedMap{L.surface(), [held](Vec2 z) { return held.time_one(z); }};
}

// Rotation number of z for a lift of an annulus map: the limit of
// (p1(H^n(z~)) - p1(z~))/n along returns of the orbit to a disk around z.
// Fixed points report the exact one-step value.
inline BirkhoffEstimate rotation_number_annulus(const LiftedMap& H, BasePoint z, long n_max,
                                                double tol, const RotationOptions& opt = {}) {
  BirkhoffEstimate est;
  ConvergenceConfig conv = opt.conv;
  conv.tol = tol;
  Vec2 z0 = z.p;
  Vec2 one = H.lift(z0);
  if (base_distance(project(one, H.surface).p, z.p, H.surface) < opt.fixed_tol) {
    est.value = one.x - z0.x;
    est.n_used = 1;
    est.converged = true;
    est.history = {est.value};
    return est;
  }
  Disk U{z, opt.disk_radius};
  Vec2 cur = z0;
  long n = 0;
  while (n < n_max) {
    cur = H.lift(cur);
    ++n;
    if (U.contains(project(cur, H.surface))) {
      detail::push_history(est, (cur.x - z0.x) / static_cast<double>(n), conv);
      est.n_used = n;
      if (est.converged) return est;
    }
  }
  if (est.history.empty())
    throw error(errc::no_return, "point not recurrent at this horizon");
  return est;  // converged == false: NotConverged as a flag
}

// Rotation vector on the torus: displacement of the lift along returns
// divided by the elapsed iterates, both coordinates.
inline std::pair<BirkhoffEstimate, BirkhoffEstimate> rotation_vector_torus(
    const LiftedIsotopy& L, BasePoint z, long n_max, double tol,
    const RotationOptions& opt = {}) {
  BirkhoffEstimate ex, ey;
  ConvergenceConfig conv = opt.conv;
  conv.tol = tol;
  Vec2 z0 = z.p;
  Vec2 one = L.time_one(z0);
  if (base_distance(project(one, L.surface()).p, z.p, L.surface()) < opt.fixed_tol) {
    ex.value = one.x - z0.x;
    ey.value = one.y - z0.y;
    ex.converged = ey.converged = true;
    ex.n_used = ey.n_used = 1;
    ex.history = {ex.value};
    ey.history = {ey.value};
    return {ex, ey};
  }
  Disk U{z, opt.disk_radius};
  Vec2 cur = z0;
  long n = 0;
  while (n < n_max) {
    cur = L.time_one(cur);
    ++n;
    if (U.contains(project(cur, L.surface()))) {
      detail::push_history(ex, (cur.x - z0.x) / static_cast<double>(n), conv);
      detail::push_history(ey, (cur.y - z0.y) / static_cast<double>(n), conv);
      ex.n_used = ey.n_used = n;
      if (ex.converged && ey.converged) return {ex, ey};
    }
  }
  if (ex.history.empty()) throw error(errc::no_return, "point not recurrent at this horizon");
  return {ex, ey};
}

struct MeasureIntegral {
  Vec2 value;
  Vec2 stderr_;
  long samples = 0;
};

struct MeasureQuadrature {
  std::uint64_t seed = 42;
  int strata_x = 32;
  int strata_y = 32;
  int batches = 10;
};

// Rotation vector of an invariant measure. For invariant mu the Birkhoff
// averages integrate to the one-step displacement integral, which is what
// the stratified estimator samples.
inline MeasureIntegral rotation_vector_measure(const LiftedIsotopy& L,
                                               const InvariantMeasure& mu,
                                               const MeasureQuadrature& q = {}) {
  MeasureIntegral out;
  double mass = mu.total_mass();
  std::vector<Vec2> batch_means(q.batches, Vec2{0, 0});
  for (int batch = 0; batch < q.batches; ++batch) {
    Vec2 acc{0, 0};
    for (const auto& comp : mu.components) {
      if (const auto* gd = std::get_if<GridDensityComponent>(&comp)) {
        for (int cy = 0; cy < q.strata_y; ++cy) {
          for (int cx = 0; cx < q.strata_x; ++cx) {
            auto g = keyed_stream(q.seed, batch, cx, cy);
            double u = (cx + g.uniform()) / q.strata_x;
            double v = (cy + g.uniform()) / q.strata_y;
            Vec2 p{gd->lo.x + (gd->hi.x - gd->lo.x) * u, gd->lo.y + (gd->hi.y - gd->lo.y) * v};
            int ix = std::min(gd->nx - 1, static_cast<int>(u * gd->nx));
            int iy = std::min(gd->ny - 1, static_cast<int>(v * gd->ny));
            double w = gd->cell_weights[static_cast<std::size_t>(iy) * gd->nx + ix] *
                       (static_cast<double>(gd->nx) * gd->ny) /
                       (static_cast<double>(q.strata_x) * q.strata_y);
            acc += (L.time_one(p) - p) * w;
            out.samples++;
          }
        }
      } else if (const auto* ball = std::get_if<RadialBallComponent>(&comp)) {
        int n = q.strata_x * q.strata_y / 4 + 1;
        for (int i = 0; i < n; ++i) {
          auto g = keyed_stream(q.seed, batch, 7777, i);
          double r = ball->radius * std::sqrt(g.uniform());
          double th = kTwoPi * g.uniform();
          Vec2 p = ball->center + Vec2{r * std::cos(th), r * std::sin(th)};
          acc += (L.time_one(p) - p) * (ball->mass() / n);
          out.samples++;
        }
      } else if (const auto* circ = std::get_if<RadialCircleComponent>(&comp)) {
        int n = q.strata_x;
        for (int i = 0; i < n; ++i) {
          auto g = keyed_stream(q.seed, batch, 9999, i);
          double th = kTwoPi * (i + g.uniform()) / n;
          Vec2 p = circ->center + Vec2{circ->radius * std::cos(th), circ->radius * std::sin(th)};
          acc += (L.time_one(p) - p) * (circ->mass / n);
          out.samples++;
        }
      } else if (const auto* at = std::get_if<AtomicComponent>(&comp)) {
        for (const auto& a : at->atoms) acc += (L.time_one(a.point.p) - a.point.p) * a.weight;
      }
    }
    batch_means[batch] = acc * (1.0 / std::max(mass, 1e-300));
  }
  Vec2 mean{0, 0};
  for (const auto& m : batch_means) mean += m;
  mean = mean * (1.0 / q.batches);
  Vec2 var{0, 0};
  for (const auto& m : batch_means) {
    var.x += (m.x - mean.x) * (m.x - mean.x);
    var.y += (m.y - mean.y) * (m.y - mean.y);
  }
  out.value = mean;
  out.stderr_ = {std::sqrt(var.x / (q.batches * (q.batches - 1.0))),
                 std::sqrt(var.y / (q.batches * (q.batches - 1.0)))};
  return out;
}

// ---------------------------------------------------------------------------
// Kac's lemma diagnostic
// ---------------------------------------------------------------------------

struct KacReport {
  double lhs = 0.0;      // Integral over U of tau d(mu)
  double rhs = 0.0;      // mu of the union of forward images of U
  double lhs_stderr = 0.0;
  double rhs_stderr = 0.0;
  long non_returning = 0;

  double gap() const { return std::abs(lhs - rhs); }
};

// Both sides of Kac's identity estimated at the same horizon. The union
// side tests membership via backward iteration, so the inverse map is
// required.
inline KacReport kac_check(const std::function<BasePoint(BasePoint)>& F,
                           const std::function<BasePoint(BasePoint)>& F_inv, const Disk& U,
                           const InvariantMeasure& mu, long horizon,
                           const MeasureQuadrature& q = {}) {
  KacReport rep;
  std::vector<double> lhs_batches(q.batches, 0.0), rhs_batches(q.batches, 0.0);
  for (int batch = 0; batch < q.batches; ++batch) {
    double lhs = 0.0, rhs = 0.0;
    for (const auto& comp : mu.components) {
      const auto* gd = std::get_if<GridDensityComponent>(&comp);
      if (!gd) continue;  // diagnostic supports density measures
      for (int cy = 0; cy < q.strata_y; ++cy) {
        for (int cx = 0; cx < q.strata_x; ++cx) {
          auto g = keyed_stream(q.seed, batch, cx, cy + 100000);
          double u = (cx + g.uniform()) / q.strata_x;
          double v = (cy + g.uniform()) / q.strata_y;
          Vec2 p{gd->lo.x + (gd->hi.x - gd->lo.x) * u, gd->lo.y + (gd->hi.y - gd->lo.y) * v};
          int ix = std::min(gd->nx - 1, static_cast<int>(u * gd->nx));
          int iy = std::min(gd->ny - 1, static_cast<int>(v * gd->ny));
          double w = gd->cell_weights[static_cast<std::size_t>(iy) * gd->nx + ix] *
                     (static_cast<double>(gd->nx) * gd->ny) /
                     (static_cast<double>(q.strata_x) * q.strata_y);
          BasePoint z = project(p, mu.surface);
          if (U.contains(z)) {
            // tau(z) capped at the horizon
            BasePoint cur = z;
            long tau = 0;
            for (long k = 1; k <= horizon; ++k) {
              cur = F(cur);
              if (U.contains(cur)) {
                tau = k;
                break;
              }
            }
            if (tau == 0) {
              rep.non_returning++;
              tau = horizon;
            }
            lhs += w * static_cast<double>(tau);
          }
          // membership of z in some F^k(U), 0 <= k <= horizon
          BasePoint back = z;
          for (long k = 0; k <= horizon; ++k) {
            if (U.contains(back)) {
              rhs += w;
              break;
            }
            back = F_inv(back);
          }
        }
      }
    }
    lhs_batches[batch] = lhs;
    rhs_batches[batch] = rhs;
  }
  auto mean_se = [&](const std::vector<double>& b, double& mean, double& se) {
    mean = 0;
    for (double v : b) mean += v;
    mean /= b.size();
    double var = 0;
    for (double v : b) var += (v - mean) * (v - mean);
    se = std::sqrt(var / (b.size() * (b.size() - 1.0)));
  };
  mean_se(lhs_batches, rep.lhs, rep.lhs_stderr);
  mean_se(rhs_batches, rep.rhs, rep.rhs_stderr);
  return rep;
}

}  // namespace isolink
