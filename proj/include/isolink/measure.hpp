#pragma once

// Invariant finite measures in three representations: atomic, grid density
// over a box, and closed-form radial components (rotationally invariant
// Lebesgue balls and uniform circles).

#include <functional>
#include <variant>
#include <vector>

#include "isolink/geometry.hpp"
#include "isolink/rng.hpp"

namespace isolink {

struct Atom {
  BasePoint point;
  double weight = 0.0;  // >= 0
};

struct AtomicComponent {
  std::vector<Atom> atoms;
};

// Piecewise-constant density over a box split into nx * ny cells.
// For the torus the box is the fundamental domain [0,1)^2.
struct GridDensityComponent {
  Vec2 lo{0.0, 0.0};
  Vec2 hi{1.0, 1.0};
  int nx = 1, ny = 1;
  std::vector<double> cell_weights;  // nx*ny entries, each the cell's total mass

  double mass() const {
    double m = 0;
    for (double w : cell_weights) m += w;
    return m;
  }
};

inline GridDensityComponent uniform_grid_density(Vec2 lo, Vec2 hi, int nx, int ny,
                                                 double total_mass) {
  GridDensityComponent g;
  g.lo = lo;
  g.hi = hi;
  g.nx = nx;
  g.ny = ny;
  g.cell_weights.assign(static_cast<std::size_t>(nx) * ny,
                        total_mass / (static_cast<double>(nx) * ny));
  return g;
}

// Lebesgue measure of constant density on a disk, invariant under any map
// that rotates each circle about the center rigidly.
struct RadialBallComponent {
  Vec2 center;
  double radius = 0.0;
  double density = 1.0;

  double mass() const { return density * kPi * radius * radius; }
};

// Uniform probability-style mass on one circle.
struct RadialCircleComponent {
  Vec2 center;
  double radius = 0.0;
  double mass = 0.0;
};

using MeasureComponent =
    std::variant<AtomicComponent, GridDensityComponent, RadialBallComponent,
                 RadialCircleComponent>;

struct InvariantMeasure {
  Surface surface = Surface::Plane;
  std::vector<MeasureComponent> components;

  double total_mass() const {
    double m = 0;
    for (const auto& c : components) {
      if (const auto* a = std::get_if<AtomicComponent>(&c))
        for (const auto& at : a->atoms) m += at.weight;
      else if (const auto* g = std::get_if<GridDensityComponent>(&c))
        m += g->mass();
      else if (const auto* b = std::get_if<RadialBallComponent>(&c))
        m += b->mass();
      else if (const auto* s = std::get_if<RadialCircleComponent>(&c))
        m += s->mass;
    }
    return m;
  }
};

inline InvariantMeasure lebesgue_torus(double mass = 1.0) {
  InvariantMeasure mu;
  mu.surface = Surface::Torus;
  mu.components.push_back(uniform_grid_density({0, 0}, {1, 1}, 1, 1, mass));
  return mu;
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

// Deterministic area-drift check: the Jacobian determinant of the map by
// central finite differences, sampled over the fundamental domain. Robust
// even where the map stretches exponentially, unlike transported polygon
// areas.
inline double area_drift(const std::function<Vec2(Vec2)>& F, int grid = 16,
                         double fd_step = 1e-5, std::uint64_t seed = 19) {
  SplitMix64 g(seed);
  double worst = 0.0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      Vec2 z{(i + g.uniform()) / grid, (j + g.uniform()) / grid};
      Vec2 dx = (F(z + Vec2{fd_step, 0}) - F(z - Vec2{fd_step, 0})) * (0.5 / fd_step);
      Vec2 dy = (F(z + Vec2{0, fd_step}) - F(z - Vec2{0, fd_step})) * (0.5 / fd_step);
      worst = std::max(worst, std::abs(dx.cross(dy) - 1.0));
    }
  }
  return worst;
}

// Monte-Carlo invariance residual: for random round test sets A, compares
// mu(F^{-1}(A)) with mu(A) by sampling mu. Needs the inverse map only
// implicitly (membership of F(z) in A is used instead).
inline double invariance_residual(const InvariantMeasure& mu,
                                  const std::function<BasePoint(BasePoint)>& F,
                                  int test_sets = 8, long samples = 20000,
                                  std::uint64_t seed = 7) {
  // sampler restricted to grid/radial components (atoms handled exactly)
  struct Sample { BasePoint z; double w; };
  std::vector<Sample> pts;
  SplitMix64 g = keyed_stream(seed, 0);
  double mass = mu.total_mass();
  for (const auto& comp : mu.components) {
    if (const auto* gd = std::get_if<GridDensityComponent>(&comp)) {
      long per = samples / std::max<std::size_t>(mu.components.size(), 1);
      for (long i = 0; i < per; ++i) {
        double u = g.uniform(), v = g.uniform();
        Vec2 p{gd->lo.x + (gd->hi.x - gd->lo.x) * u, gd->lo.y + (gd->hi.y - gd->lo.y) * v};
        // piecewise-constant density: pick the covering cell weight
        int ix = std::min(gd->nx - 1, static_cast<int>(u * gd->nx));
        int iy = std::min(gd->ny - 1, static_cast<int>(v * gd->ny));
        double cell = gd->cell_weights[static_cast<std::size_t>(iy) * gd->nx + ix];
        double w = cell * gd->nx * gd->ny / per;  // importance weight vs uniform draw
        pts.push_back({project(p, mu.surface), w});
      }
    } else if (const auto* ball = std::get_if<RadialBallComponent>(&comp)) {
      long per = samples / std::max<std::size_t>(mu.components.size(), 1);
      for (long i = 0; i < per; ++i) {
        double r = ball->radius * std::sqrt(g.uniform());
        double th = kTwoPi * g.uniform();
        Vec2 p = ball->center + Vec2{r * std::cos(th), r * std::sin(th)};
        pts.push_back({project(p, mu.surface), ball->mass() / per});
      }
    } else if (const auto* circ = std::get_if<RadialCircleComponent>(&comp)) {
      long per = samples / std::max<std::size_t>(mu.components.size(), 1);
      for (long i = 0; i < per; ++i) {
        double th = kTwoPi * g.uniform();
        Vec2 p = circ->center + Vec2{circ->radius * std::cos(th), circ->radius * std::sin(th)};
        pts.push_back({project(p, mu.surface), circ->mass / per});
      }
    }
  }
  if (pts.empty()) return 0.0;

  double worst = 0.0;
  SplitMix64 gs = keyed_stream(seed, 1);
  for (int k = 0; k < test_sets; ++k) {
    Vec2 c{gs.uniform(), gs.uniform()};
    double rad = 0.05 + 0.15 * gs.uniform();
    double in_a = 0, in_fa = 0;
    for (const auto& s : pts) {
      if (base_distance(s.z.p, c, mu.surface) < rad) in_a += s.w;
      BasePoint img = F(s.z);
      if (base_distance(img.p, c, mu.surface) < rad) in_fa += s.w;
    }
    worst = std::max(worst, std::abs(in_a - in_fa) / std::max(mass, 1e-300));
  }
  return worst;
}

}  // namespace isolink
