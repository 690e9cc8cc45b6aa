#pragma once

// Time-dependent Moebius normalization: given an isotopy and up to three
// fixed points of its time-one map, produce the homotopic isotopy
// I'(z)(t) = M(t, F_t(z)) that fixes every listed point for all t. When
// fewer than three points are listed, the point at infinity is appended,
// which degenerates the Moebius map to an affine map or a translation.

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "isolink/isotopy.hpp"

namespace isolink {

namespace detail {

using cplx = std::complex<double>;

inline cplx to_cplx(const Vec2& v) { return {v.x, v.y}; }
inline Vec2 to_vec(const cplx& c) { return {c.real(), c.imag()}; }

inline cplx det3(const cplx m[3][3]) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Coefficients of the Moebius map sending the triple v to the triple w.
struct MobiusCoeffs {
  cplx a{1.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 0.0};

  Vec2 apply(const Vec2& z) const {
    cplx zz = to_cplx(z);
    cplx den = c * zz + d;
    if (std::abs(den) < kGeomTol)
      throw error(errc::degenerate_mobius, "c_t z + d_t vanishes along a trajectory");
    return to_vec((a * zz + b) / den);
  }
};

inline MobiusCoeffs mobius_through(const cplx v[3], const cplx w[3]) {
  MobiusCoeffs m;
  cplx A[3][3], B[3][3], C[3][3], D[3][3];
  for (int i = 0; i < 3; ++i) {
    A[i][0] = v[i] * w[i]; A[i][1] = w[i]; A[i][2] = 1.0;
    B[i][0] = v[i] * w[i]; B[i][1] = v[i]; B[i][2] = w[i];
    C[i][0] = v[i];        C[i][1] = w[i]; C[i][2] = 1.0;
    D[i][0] = v[i] * w[i]; D[i][1] = v[i]; D[i][2] = 1.0;
  }
  m.a = det3(A);
  m.b = det3(B);
  m.c = det3(C);
  m.d = det3(D);
  if (std::abs(m.a * m.d - m.b * m.c) < 1e-30)
    throw error(errc::degenerate_mobius, "degenerate point configuration");
  return m;
}

}  // namespace detail

// The correcting map family M_t for a list of 1..3 fixed points of the
// time-one map. With one point the family is a translation, with two an
// affine map (infinity appended as the third fixed point), with three the
// full Moebius map built from the determinant formulas.
class PointNormalizer {
 public:
  PointNormalizer(const IdentityIsotopy& iso, std::vector<Vec2> pts, double fix_tol = 1e-9)
      : points_(std::move(pts)) {
    if (points_.empty() || points_.size() > 3)
      throw error(errc::invariant_violation, "normalizer needs 1..3 fixed points");
    for (std::size_t i = 0; i < points_.size(); ++i)
      for (std::size_t j = i + 1; j < points_.size(); ++j)
        if ((points_[i] - points_[j]).norm() < kGeomTol)
          throw error(errc::invariant_violation, "normalizer points must be distinct");
    for (const auto& p : points_) {
      if ((iso.time_one(p) - p).norm() > fix_tol)
        throw error(errc::not_fixed, "listed point moves under the time-one map");
      paths_.push_back(unit_trajectory(iso, p));
    }
    trivial_ = true;
    for (const auto& path : paths_) {
      for (int k = 0; k <= 17 && trivial_; ++k)
        if ((path(k / 17.0) - path(0.0)).norm() > fix_tol) trivial_ = false;
      // golden offsets catch trajectories that alias the uniform grid
      for (int k = 1; k <= 12 && trivial_; ++k) {
        double t = std::fmod(k * 0.6180339887498949, 1.0);
        if ((path(t) - path(0.0)).norm() > fix_tol) trivial_ = false;
      }
    }
  }

  bool trivial() const { return trivial_; }
  const std::vector<Vec2>& points() const { return points_; }

  // Sampled Lipschitz data of the correcting family over a box: sup of the
  // local spatial expansion and of the time derivative. Used to transport
  // speed bounds through the normalization.
  struct WrapBounds {
    double scale = 1.0;
    double drift = 0.0;
  };
  WrapBounds wrap_bounds(Vec2 lo, Vec2 hi) const {
    if (trivial_) return {};
    WrapBounds wb{0.0, 0.0};
    const double dw = 1e-5, dt = 1e-3;
    for (int i = 0; i <= 6; ++i) {
      for (int j = 0; j <= 6; ++j) {
        Vec2 w{lo.x + (hi.x - lo.x) * i / 6.0, lo.y + (hi.y - lo.y) * j / 6.0};
        for (int k = 0; k <= 13; ++k) {
          double t = k / 13.0;
          Vec2 base = map(t, w);
          wb.scale = std::max(wb.scale, (map(t, w + Vec2{dw, 0}) - base).norm() / dw);
          wb.scale = std::max(wb.scale, (map(t, w + Vec2{0, dw}) - base).norm() / dw);
          wb.drift = std::max(wb.drift, (map(std::min(t + dt, 1.0), w) - base).norm() / dt);
        }
      }
    }
    wb.scale *= 1.5;  // sampling margin
    wb.drift *= 1.5;
    return wb;
  }

  // M_t(w); t is taken mod 1, matching the unit periodicity of the
  // trajectories of the fixed points under the extended isotopy.
  Vec2 map(double t, const Vec2& w) const {
    if (trivial_) return w;
    double frac = t - std::floor(t);
    using detail::cplx;
    using detail::to_cplx;
    using detail::to_vec;
    switch (points_.size()) {
      case 1: {
        return w + (points_[0] - paths_[0](frac));
      }
      case 2: {
        cplx v1 = to_cplx(paths_[0](frac)), v2 = to_cplx(paths_[1](frac));
        cplx w1 = to_cplx(points_[0]), w2 = to_cplx(points_[1]);
        cplx denom = v1 - v2;
        if (std::abs(denom) < kGeomTol)
          throw error(errc::degenerate_mobius, "normalization points collide");
        cplx a = (w1 - w2) / denom;
        return to_vec(a * to_cplx(w) + (w1 - a * v1));
      }
      default: {
        cplx v[3] = {to_cplx(paths_[0](frac)), to_cplx(paths_[1](frac)),
                     to_cplx(paths_[2](frac))};
        cplx wt[3] = {to_cplx(points_[0]), to_cplx(points_[1]), to_cplx(points_[2])};
        return detail::mobius_through(v, wt).apply(w);
      }
    }
  }

 private:
  std::vector<Vec2> points_;
  std::vector<BoundedPath> paths_;
  bool trivial_ = false;
};

// Normalized isotopy as a value: I'(z)(t) = M(t, F_t(z)). The result lives
// on the plane (the normalization is not deck-equivariant) and agrees with
// the input at t = 0 and t = 1.
inline IdentityIsotopy mobius_normalize(const IdentityIsotopy& iso, std::vector<Vec2> fixpts) {
  auto norm = std::make_shared<PointNormalizer>(iso, std::move(fixpts));
  auto held = std::make_shared<IdentityIsotopy>(iso);
  auto cover = [norm, held](double t, Vec2 z) { return norm->map(t, held->cover(t, z)); };
  auto inv = [held](Vec2 z) { return held->inverse_time_one(z); };
  IdentityIsotopy out = IdentityIsotopy::from_cover(Surface::Plane, cover, inv);
  if (norm->trivial() && iso.has_speed_bound())
    out.with_speed_bound([held](Vec2 z) { return held->speed_bound(z); });
  return out;
}

}  // namespace isolink
