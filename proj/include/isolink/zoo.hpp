#pragma once

// Named example isotopies with their known fixed points, invariant
// measures and constants: a torus shear, a zero-rotation-vector torus
// flow, a plane map with unbounded circulation speeds across a family of
// invariant circles, a family of bump-rotated annuli with pinned
// circulation integrals, and an explicit torus Hamiltonian.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isolink/isotopy.hpp"
#include "isolink/measure.hpp"

namespace isolink {

namespace detail {

// C-infinity transition: 0 for u <= 0, 1 for u >= 1.
inline double smooth_transition(double u) {
  auto g = [](double v) { return v > 0 ? std::exp(-1.0 / v) : 0.0; };
  double a = g(u), b = g(1.0 - u);
  return a / (a + b);
}

// C-infinity bump supported in (0,1) with value 1 at u = 1/2.
inline double smooth_bump(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (4.0 * u * (1.0 - u)));
}

// Panel-doubling 24-point Gauss-Legendre quadrature. The action module
// integrates with the same rule, so constants pinned here reproduce there
// to quadrature accuracy.
inline double integrate_1d(const std::function<double(double)>& f, double a, double b,
                           double tol = 1e-12) {
  if (a == b) return 0.0;
  static const double X[12] = {
      0.0640568928626056, 0.1911188674736163, 0.3150426796961634, 0.4337935076260451,
      0.5454214713888396, 0.6480936519369755, 0.7401241915785544, 0.8200019859739029,
      0.8864155270044011, 0.9382745520027328, 0.9747285559713095, 0.9951872199970213};
  static const double W[12] = {
      0.1279381953467522, 0.1258374563468283, 0.1216704729278034, 0.1155056680537256,
      0.1074442701159656, 0.0976186521041139, 0.0861901615319533, 0.0733464814110803,
      0.0592985849154368, 0.0442774388174198, 0.0285313886289337, 0.0123412297999872};
  auto gl_panels = [&](int m) {
    double h = (b - a) / m;
    double total = 0.0;
    for (int p = 0; p < m; ++p) {
      double c = a + (p + 0.5) * h;
      double acc = 0.0;
      for (int i = 0; i < 12; ++i) {
        double dx = 0.5 * h * X[i];
        acc += W[i] * (f(c - dx) + f(c + dx));
      }
      total += acc * 0.5 * h;
    }
    return total;
  };
  double prev = gl_panels(1);
  for (int m = 2; m <= 256; m *= 2) {
    double cur = gl_panels(m);
    if (std::abs(cur - prev) < tol) return cur;
    prev = cur;
  }
  return prev;
}

// Monotone scalar inversion by bisection (f increasing on [lo,hi]).
inline double invert_increasing(const std::function<double(double)>& f, double target, double lo,
                                double hi) {
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

struct ZooParams {
  int k_max = 8;              // truncation of the infinite families
  double integrator_step = 1e-3;
};

// One ball of the bump-annulus family.
struct BumpBall {
  Vec2 center;
  double radius = 0.0;
  double amp_main = 0.0;   // value of the rate on the half-radius circle
  double amp_corr = 0.0;   // correction solving the circulation constraint
  double circulation = 0.0;  // 2*pi*Integral(rate(r) r dr) over the ball

  // rotation rate in turns per unit time at distance r from the center
  double rate(double r) const {
    double u = r / radius;
    return amp_main * detail::smooth_bump(u) +
           amp_corr * (u - 0.5) * detail::smooth_bump(u);
  }
};

struct ZooEntry {
  std::string name;
  std::string summary;
  IdentityIsotopy iso;
  std::map<std::string, Vec2> named_points;    // cover coordinates
  std::optional<InvariantMeasure> measure;     // a known invariant measure
  std::optional<std::function<double(double, Vec2)>> hamiltonian;  // (t, cover point)
  std::vector<BumpBall> bump_balls;            // BumpAnnuli only
  int k_max = 0;
};

// ---------------------------------------------------------------------------
// Shear: (x, y) -> (x, y + t sin(2 pi x)) on the torus.
// ---------------------------------------------------------------------------

inline ZooEntry zoo_shear() {
  ZooEntry e;
  e.name = "Shear";
  e.summary = "torus shear (x, y + t sin(2 pi x)); fixes the vertical lines x in Z/2";
  auto cover = [](double t, Vec2 z) { return Vec2{z.x, z.y + t * std::sin(kTwoPi * z.x)}; };
  auto inv = [](Vec2 z) { return Vec2{z.x, z.y - std::sin(kTwoPi * z.x)}; };
  e.iso = IdentityIsotopy::from_cover(Surface::Torus, cover, inv);
  e.iso.with_speed_bound([](Vec2 z) { return std::abs(std::sin(kTwoPi * z.x)); });
  // the shear is the time-one map of the flow of H(x) = -cos(2 pi x)/(2 pi)
  e.hamiltonian = [](double, Vec2 z) { return -std::cos(kTwoPi * z.x) / kTwoPi; };
  e.named_points = {{"a0", {0.0, 0.5}},  {"a1", {1.0, 0.5}}, {"a2", {2.0, 0.5}},
                    {"a3", {3.0, 0.5}},  {"a4", {4.0, 0.5}}, {"a5", {5.0, 0.5}},
                    {"half", {0.5, 0.5}}, {"z", {0.25, 0.0}}};
  e.measure = lebesgue_torus();
  return e;
}

// ---------------------------------------------------------------------------
// CosineFlow: (x + t cos(2 pi y)/(2 pi), y + t sin(2 pi y)/(2 pi)) on the
// torus; the time-one map has no fixed points and the Lebesgue rotation
// vector vanishes.
// ---------------------------------------------------------------------------

inline ZooEntry zoo_cosine_flow() {
  ZooEntry e;
  e.name = "CosineFlow";
  e.summary = "torus flow along (cos(2 pi y), sin(2 pi y))/(2 pi); fixed-point free";
  auto cover = [](double t, Vec2 z) {
    return Vec2{z.x + t * std::cos(kTwoPi * z.y) / kTwoPi,
                z.y + t * std::sin(kTwoPi * z.y) / kTwoPi};
  };
  auto inv = [](Vec2 z) {
    // y + sin(2 pi y)/(2 pi) is increasing in y; invert then recover x
    auto f = [](double y) { return y + std::sin(kTwoPi * y) / kTwoPi; };
    double y = detail::invert_increasing(f, z.y, z.y - 0.5, z.y + 0.5);
    return Vec2{z.x - std::cos(kTwoPi * y) / kTwoPi, y};
  };
  e.iso = IdentityIsotopy::from_cover(Surface::Torus, cover, inv);
  e.iso.with_speed_bound([](Vec2) { return 1.0 / kTwoPi; });
  e.measure = lebesgue_torus();
  return e;
}

// ---------------------------------------------------------------------------
// RadialFast: supported on the disk of radius 3/4 about the origin in the
// plane. Circles C_k of radius 1/k are invariant and turn at speed
// 2^k + 1/2; radii drift outward across each band between circles.
// ---------------------------------------------------------------------------

namespace detail {

inline double radial_fast_alpha(double r) {
  if (r <= 0.5) return 1.0;
  if (r >= 0.72) return 0.0;
  return smooth_transition((0.72 - r) / 0.22);
}

// turns per unit time at radius r; the exponent is clamped so the map
// stays numerically evaluable arbitrarily close to the center
inline double radial_fast_speed(double r) {
  double a = radial_fast_alpha(r);
  if (a == 0.0) return 0.0;
  double e = std::min(1.0 / r, 48.0);
  return a * (std::exp2(e) + 0.5);
}

// C-infinity radial map fixing 1/k for all k >= 2 and the identity on
// [1/2, 3/4); points in (1/(k+1), 1/k) drift toward 1/k.
inline double radial_fast_rho(double r) {
  if (r >= 0.5 || r <= 0.0) return r;
  int k = static_cast<int>(std::floor(1.0 / r));  // r in (1/(k+1), 1/k]
  double b = 1.0 / k, a = 1.0 / (k + 1);
  if (r == b || r == a) return r;
  double u = (r - a) / (b - a);
  return r + 0.1 * (b - a) * smooth_bump(u);
}

inline double radial_fast_rho_t(double t, double r) {
  return (1.0 - t) * r + t * radial_fast_rho(r);
}

}  // namespace detail

inline ZooEntry zoo_radial_fast(const ZooParams& params = {}) {
  ZooEntry e;
  e.name = "RadialFast";
  e.summary = "plane disk map with invariant circles C_k = {r = 1/k} turning 2^k + 1/2 per step";
  auto cover = [](double t, Vec2 z) {
    double r = z.norm();
    if (r >= 0.75 || r < 1e-300) return z;
    double theta = std::atan2(z.y, z.x) / kTwoPi;  // turns
    double dtheta = std::fmod(t * detail::radial_fast_speed(r), 1.0);
    double rn = detail::radial_fast_rho_t(t, r);
    double ang = kTwoPi * (theta + dtheta);
    return Vec2{rn * std::cos(ang), rn * std::sin(ang)};
  };
  auto inv = [](Vec2 z) {
    double r = z.norm();
    if (r >= 0.75 || r < 1e-300) return z;
    double rp = r < 0.5 ? detail::invert_increasing(detail::radial_fast_rho, r,
                                                    std::nextafter(1.0 / (std::floor(1.0 / r) + 1), 1.0),
                                                    1.0 / std::floor(1.0 / r))
                        : r;
    // careful: r is the image radius; preimage lies in the same band
    double theta = std::atan2(z.y, z.x) / kTwoPi;
    double dtheta = std::fmod(detail::radial_fast_speed(rp), 1.0);
    double ang = kTwoPi * (theta - dtheta);
    return Vec2{rp * std::cos(ang), rp * std::sin(ang)};
  };
  e.iso = IdentityIsotopy::from_cover(Surface::Plane, cover, inv);
  e.iso.with_speed_bound([](Vec2 z) {
    double r = z.norm();
    if (r >= 0.75 || r < 1e-300) return 0.0;
    double rr = std::max(r, detail::radial_fast_rho(r));
    return kTwoPi * rr * detail::radial_fast_speed(r) + std::abs(detail::radial_fast_rho(r) - r);
  });
  e.named_points["z0"] = {0.0, 0.0};
  e.named_points["z1"] = {0.8, 0.0};
  e.k_max = params.k_max;
  InvariantMeasure mu;
  mu.surface = Surface::Plane;
  for (int k = 2; k <= std::max(2, params.k_max); ++k)
    mu.components.push_back(RadialCircleComponent{{0.0, 0.0}, 1.0 / k, std::exp2(-(k - 1))});
  e.measure = mu;
  for (int k = 2; k <= std::max(2, params.k_max); ++k)
    e.named_points["zc" + std::to_string(k)] = {1.0 / k, 0.0};
  return e;
}

// ---------------------------------------------------------------------------
// BumpAnnuli: disjoint balls B_k on the x-axis accumulating at the origin;
// each ball is rotated rigidly circle-by-circle with a smooth rate alpha_k
// pinned by alpha_k(r_k/2) = 2 (-1)^k (k+1)^5 and circulation
// 2 pi Integral(alpha_k(r) r dr) = (-1)^k k.
// ---------------------------------------------------------------------------

inline ZooEntry zoo_bump_annuli(const ZooParams& params = {}) {
  ZooEntry e;
  e.name = "BumpAnnuli";
  e.summary = "disjoint rotated balls with fifth-power rates but linear circulations";
  e.k_max = std::max(1, params.k_max);

  static const double I_s = detail::integrate_1d(
      [](double u) { return detail::smooth_bump(u) * u; }, 0.0, 1.0);
  static const double I_q = detail::integrate_1d(
      [](double u) { return (u - 0.5) * detail::smooth_bump(u) * u; }, 0.0, 1.0);

  auto balls = std::make_shared<std::vector<BumpBall>>();
  for (int k = 1; k <= e.k_max; ++k) {
    BumpBall b;
    double kk = k, k1 = k + 1.0;
    b.center = {1.0 / k1 + 1.0 / (2.0 * kk * k1), 0.0};
    b.radius = 1.0 / (2.0 * k1 * k1);
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    b.amp_main = 2.0 * sign * std::pow(k1, 5);
    b.circulation = sign * kk;
    // solve 2 pi r^2 (A I_s + B I_q) = circulation for the correction B
    b.amp_corr = (b.circulation / (kTwoPi * b.radius * b.radius) - b.amp_main * I_s) / I_q;
    balls->push_back(b);
  }
  e.bump_balls = *balls;

  auto cover = [balls](double t, Vec2 z) {
    for (const auto& b : *balls) {
      Vec2 d = z - b.center;
      if (std::abs(d.x) >= b.radius || std::abs(d.y) >= b.radius) continue;
      double r = d.norm();
      if (r < b.radius && r > 1e-300) {
        double dtheta = std::fmod(t * b.rate(r), 1.0);
        double c = std::cos(kTwoPi * dtheta), s = std::sin(kTwoPi * dtheta);
        return b.center + Vec2{d.x * c - d.y * s, d.x * s + d.y * c};
      }
    }
    return z;
  };
  auto inv = [balls](Vec2 z) {
    for (const auto& b : *balls) {
      Vec2 d = z - b.center;
      if (std::abs(d.x) >= b.radius || std::abs(d.y) >= b.radius) continue;
      double r = d.norm();
      if (r < b.radius && r > 1e-300) {
        double dtheta = std::fmod(b.rate(r), 1.0);
        double c = std::cos(-kTwoPi * dtheta), s = std::sin(-kTwoPi * dtheta);
        return b.center + Vec2{d.x * c - d.y * s, d.x * s + d.y * c};
      }
    }
    return z;
  };
  e.iso = IdentityIsotopy::from_cover(Surface::Plane, cover, inv);
  e.iso.with_speed_bound([balls](Vec2 z) {
    for (const auto& b : *balls) {
      double r = (z - b.center).norm();
      if (r < b.radius) return kTwoPi * r * std::abs(b.rate(r));
    }
    return 0.0;
  });

  e.named_points["z0"] = {0.0, 0.0};
  InvariantMeasure mu;
  mu.surface = Surface::Plane;
  for (int k = 1; k <= e.k_max; ++k) {
    const auto& b = (*balls)[k - 1];
    e.named_points["z" + std::to_string(k)] = b.center;
    e.named_points["zp" + std::to_string(k)] = b.center + Vec2{b.radius / 2.0, 0.0};
    mu.components.push_back(RadialBallComponent{b.center, b.radius, 1.0});
  }
  e.measure = mu;
  return e;
}

// ---------------------------------------------------------------------------
// HamiltonianPendulum: the flow of H(x,y) = -cos(2 pi x) cos(2 pi y)/(2 pi)
// on the torus, integrated with the fixed-step 4th-order scheme. The field
// is (-dH/dy, dH/dx), so the flow preserves the area form dx ^ dy.
// ---------------------------------------------------------------------------

inline ZooEntry zoo_pendulum(const ZooParams& params = {}) {
  ZooEntry e;
  e.name = "HamiltonianPendulum";
  e.summary = "torus Hamiltonian H = -cos(2 pi x) cos(2 pi y)/(2 pi)";
  auto field = [](double, Vec2 z) {
    double cx = std::cos(kTwoPi * z.x), sx = std::sin(kTwoPi * z.x);
    double cy = std::cos(kTwoPi * z.y), sy = std::sin(kTwoPi * z.y);
    return Vec2{-cx * sy, sx * cy};
  };
  IntegratorConfig cfg;
  cfg.step = params.integrator_step;
  e.iso = IdentityIsotopy::from_vector_field(Surface::Torus, field, 1.0, cfg);
  e.hamiltonian = [](double, Vec2 z) {
    return -std::cos(kTwoPi * z.x) * std::cos(kTwoPi * z.y) / kTwoPi;
  };
  e.named_points = {{"elliptic", {0.0, 0.0}},
                    {"elliptic2", {0.5, 0.5}},
                    {"max1", {0.0, 0.5}},
                    {"max2", {0.5, 0.0}},
                    {"hyperbolic", {0.25, 0.25}},
                    {"hyperbolic2", {0.75, 0.25}}};
  e.measure = lebesgue_torus();
  return e;
}

// ---------------------------------------------------------------------------

inline std::vector<std::string> zoo_names() {
  return {"Shear", "CosineFlow", "RadialFast", "BumpAnnuli", "HamiltonianPendulum"};
}

inline ZooEntry zoo(const std::string& name, const ZooParams& params = {}) {
  if (name == "Shear") return zoo_shear();
  if (name == "CosineFlow") return zoo_cosine_flow();
  if (name == "RadialFast") return zoo_radial_fast(params);
  if (name == "BumpAnnuli") return zoo_bump_annuli(params);
  if (name == "HamiltonianPendulum") return zoo_pendulum(params);
  throw error(errc::unknown_zoo_entry, name);
}

}  // namespace isolink
