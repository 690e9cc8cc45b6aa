#include <catch2/catch_amalgamated.hpp>

#include "isolink/isotopy.hpp"
#include "isolink/measure.hpp"
#include "isolink/mobius.hpp"
#include "isolink/rng.hpp"
#include "isolink/zoo.hpp"

using namespace isolink;

namespace {

IdentityIsotopy rigid_rotation_loop() {
  // full counterclockwise turn about the origin over one period
  return IdentityIsotopy::from_cover(
             Surface::Plane,
             [](double t, Vec2 z) {
               double c = std::cos(kTwoPi * t), s = std::sin(kTwoPi * t);
               return Vec2{z.x * c - z.y * s, z.x * s + z.y * c};
             },
             [](Vec2 z) { return z; })
      .with_speed_bound([](Vec2 z) { return kTwoPi * z.norm(); });
}

}  // namespace

TEST_CASE("every zoo entry starts at the identity") {
  for (const auto& name : zoo_names()) {
    ZooParams zp;
    zp.k_max = 4;
    auto e = zoo(name, zp);
    double worst = 0.0;
    for (int i = 0; i < 32; ++i)
      for (int j = 0; j < 32; ++j) {
        Vec2 z{i / 32.0, j / 32.0};
        worst = std::max(worst, (e.iso.cover(0.0, z) - z).norm());
      }
    INFO(name);
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("zoo endpoint values") {
  auto sh = zoo_shear();
  auto end = sh.iso.evaluate(1.0, {{0.25, 0.0}, Surface::Torus});
  CHECK(end.p.x == Catch::Approx(0.25));
  CHECK(end.p.y == Catch::Approx(0.0).margin(1e-12));
  // the lift shows the vertical displacement
  CHECK(sh.iso.cover(1.0, {0.25, 0.0}).y == Catch::Approx(1.0));

  auto cf = zoo_cosine_flow();
  auto c = cf.iso.cover(1.0, {0.0, 0.0});
  CHECK(c.x == Catch::Approx(1.0 / kTwoPi));
  CHECK(c.y == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("shear fixes the half-integer vertical lines") {
  auto sh = zoo_shear();
  for (double x : {0.0, 0.5, 1.0, -1.5}) {
    for (int j = 0; j < 8; ++j) {
      Vec2 z{x, j / 8.0};
      CHECK((sh.iso.cover(1.0, z) - z).norm() < 1e-12);
    }
  }
}

TEST_CASE("composition: single entry, cancellation, doubling") {
  auto sh = zoo_shear();
  auto only = compose({sh.iso});
  CHECK((only.cover(0.7, {0.3, 0.4}) - sh.iso.cover(0.7, {0.3, 0.4})).norm() < 1e-12);

  auto cancel = compose({sh.iso, inverse(sh.iso)});
  double worst = 0.0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      Vec2 z{i / 16.0, j / 16.0};
      worst = std::max(worst, (cancel.time_one(z) - z).norm());
    }
  CHECK(worst < 1e-6);

  // oracle: direct double evaluation
  auto twice = compose({sh.iso, sh.iso});
  worst = 0.0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      Vec2 z{i / 16.0, j / 16.0};
      Vec2 direct = sh.iso.time_one(sh.iso.time_one(z));
      worst = std::max(worst, (twice.time_one(z) - direct).norm());
    }
  CHECK(worst < 1e-12);
}

TEST_CASE("inverses") {
  // rigid rotation by angle theta t inverts to rotation by -theta
  double theta = 0.7;
  auto rot = IdentityIsotopy::from_cover(
      Surface::Plane,
      [theta](double t, Vec2 z) {
        double c = std::cos(theta * t), s = std::sin(theta * t);
        return Vec2{z.x * c - z.y * s, z.x * s + z.y * c};
      },
      [theta](Vec2 z) {
        double c = std::cos(-theta), s = std::sin(-theta);
        return Vec2{z.x * c - z.y * s, z.x * s + z.y * c};
      });
  auto rinv = inverse(rot);
  Vec2 p{0.6, -0.2};
  double c = std::cos(-theta), s = std::sin(-theta);
  Vec2 expect{p.x * c - p.y * s, p.x * s + p.y * c};
  CHECK((rinv.time_one(p) - expect).norm() < 1e-12);

  auto sh = zoo_shear();
  auto shinv = inverse(sh.iso);
  double worst = 0.0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      Vec2 z{i / 16.0 + 0.01, j / 16.0};
      Vec2 expect2{z.x, z.y - std::sin(kTwoPi * z.x)};
      worst = std::max(worst, (shinv.time_one(z) - expect2).norm());
      // involution on endpoints
      worst = std::max(worst, (inverse(shinv).time_one(z) - sh.iso.time_one(z)).norm());
    }
  CHECK(worst < 1e-9);
}

TEST_CASE("numeric inversion of the time-one map") {
  // drop the closed-form inverse; the fixed-point iteration must recover it
  auto sh = zoo_shear();
  auto held = sh.iso;
  auto noinv = IdentityIsotopy::from_cover(
      Surface::Torus, [held](double t, Vec2 z) { return held.cover(t, z); });
  Vec2 z{0.3, 0.7};
  Vec2 w = noinv.inverse_time_one(z);
  CHECK((noinv.time_one(w) - z).norm() < 1e-9);
}

TEST_CASE("iteration") {
  auto sh = zoo_shear();
  auto i1 = iterate(sh.iso, 1);
  CHECK((i1.time_one({0.3, 0.2}) - sh.iso.time_one({0.3, 0.2})).norm() < 1e-12);

  // closed form of shear iterates
  auto i3 = iterate(sh.iso, 3);
  double worst = 0.0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      Vec2 z{i / 16.0, j / 16.0};
      Vec2 expect{z.x, z.y + 3.0 * std::sin(kTwoPi * z.x)};
      worst = std::max(worst, (i3.time_one(z) - expect).norm());
    }
  CHECK(worst < 1e-12);

  auto cf = zoo_cosine_flow();
  auto i2 = iterate(cf.iso, 2);
  Vec2 z{0.13, 0.41};
  CHECK((i2.time_one(z) - cf.iso.time_one(cf.iso.time_one(z))).norm() < 1e-12);

  // the iterate's trajectory is the concatenation of the orbit trajectories
  auto path = unit_trajectory(i3, {0.2, 0.1});
  Vec2 mid = path.f(1.0 / 3.0);
  CHECK((mid - sh.iso.time_one(Vec2{0.2, 0.1})).norm() < 1e-9);
}

TEST_CASE("lift by continuation matches closed forms") {
  auto sh = zoo_shear();
  auto held = sh.iso;
  // base-only evaluator: continuation must find the vertical displacement
  auto base_only = IdentityIsotopy::from_base(Surface::Torus, [held](double t, Vec2 z) {
    return project(held.cover(t, z), Surface::Torus).p;
  });
  Vec2 lifted = base_only.cover(1.0, {0.25, 0.0});
  CHECK(lifted.x == Catch::Approx(0.25));
  CHECK(lifted.y == Catch::Approx(1.0).margin(1e-6));

  double worst = 0.0;
  SplitMix64 g(5);
  for (int i = 0; i < 40; ++i) {
    Vec2 z{g.uniform(), g.uniform()};
    double t = g.uniform();
    worst = std::max(worst, (base_only.cover(t, z) - held.cover(t, z)).norm());
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("lift data: displacement bounds and equivariance") {
  auto id = IdentityIsotopy::from_cover(Surface::Torus, [](double, Vec2 z) { return z; },
                                        [](Vec2 z) { return z; });
  CHECK(lift(id).displacement_bound == 0.0);

  auto cf = zoo_cosine_flow();
  auto L = lift(cf.iso);
  CHECK(L.displacement_bound <= 2.0 * (1.0 / kTwoPi) + 1e-9);

  // deck commutation of the lift
  auto sh = zoo_shear();
  SplitMix64 g(7);
  double worst = 0.0;
  for (int i = 0; i < 60; ++i) {
    Vec2 z{g.uniform(), g.uniform()};
    Deck v{static_cast<long>(g.next() % 5) - 2, static_cast<long>(g.next() % 5) - 2};
    double t = g.uniform();
    worst = std::max(worst, (sh.iso.cover(t, apply_deck(v, z)) -
                             apply_deck(v, sh.iso.cover(t, z)))
                                .norm());
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("normalization fixes the listed points for all t") {
  // the identity isotopy normalizes to itself
  auto id = IdentityIsotopy::from_cover(Surface::Plane, [](double, Vec2 z) { return z; },
                                        [](Vec2 z) { return z; });
  auto idn = mobius_normalize(id, {{0.2, 0.0}});
  CHECK((idn.cover(0.37, {1.0, 2.0}) - Vec2{1.0, 2.0}).norm() < 1e-12);

  // a full rotation loop normalized at {0, 1}: both points pinned
  auto R = rigid_rotation_loop();
  auto norm2 = mobius_normalize(R, {{0.0, 0.0}, {1.0, 0.0}});
  double worst = 0.0;
  for (int k = 0; k <= 24; ++k) {
    double t = k / 24.0;
    worst = std::max(worst, (norm2.cover(t, {0.0, 0.0}) - Vec2{0.0, 0.0}).norm());
    worst = std::max(worst, (norm2.cover(t, {1.0, 0.0}) - Vec2{1.0, 0.0}).norm());
  }
  CHECK(worst < 1e-9);

  // endpoints agree with the input as maps
  SplitMix64 g(9);
  for (int i = 0; i < 20; ++i) {
    Vec2 z{g.uniform(-1, 2), g.uniform(-1, 2)};
    CHECK((norm2.cover(0.0, z) - z).norm() < 1e-9);
    CHECK((norm2.cover(1.0, z) - R.cover(1.0, z)).norm() < 1e-9);
  }

  // three-point normalization through the full determinant formulas
  auto norm3 = mobius_normalize(R, {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.5}});
  for (int k = 0; k <= 12; ++k) {
    double t = k / 12.0;
    CHECK((norm3.cover(t, {0.0, 1.5}) - Vec2{0.0, 1.5}).norm() < 1e-9);
  }

  // a moving point is rejected
  CHECK_THROWS_AS(mobius_normalize(zoo_shear().iso, {{0.25, 0.0}}), error);
}

TEST_CASE("pendulum flow preserves area") {
  auto pend = zoo_pendulum();
  auto held = pend.iso;
  double drift = area_drift([held](Vec2 z) { return held.time_one(z); });
  CHECK(drift < 1e-3);
  // the sampled invariance residual is noisier and only bounds gross errors
  double residual = invariance_residual(
      lebesgue_torus(), [held](BasePoint z) { return held.evaluate(1.0, z); }, 6, 8000, 3);
  CHECK(residual < 5e-2);
}

TEST_CASE("bump-annulus circulation constraints hold by construction") {
  ZooParams zp;
  zp.k_max = 6;
  auto ba = zoo_bump_annuli(zp);
  for (const auto& b : ba.bump_balls) {
    double integral = detail::integrate_1d(
        [&](double u) { return b.rate(u * b.radius) * u * kTwoPi * b.radius * b.radius; },
        0.0, 1.0);
    CHECK(integral == Catch::Approx(b.circulation).margin(1e-10));
    CHECK(b.rate(0.5 * b.radius) == Catch::Approx(b.amp_main));
  }
}

TEST_CASE("radial map fixes the named circles and drifts outward between them") {
  for (int k = 2; k <= 5; ++k) {
    double r = 1.0 / k;
    CHECK(detail::radial_fast_rho(r) == Catch::Approx(r));
    double mid = 0.5 * (1.0 / (k + 1) + 1.0 / k);
    CHECK(detail::radial_fast_rho(mid) > mid);
    CHECK(detail::radial_fast_rho(mid) < 1.0 / k);
  }
}

TEST_CASE("unknown zoo names are rejected") {
  CHECK_THROWS_AS(zoo("NoSuchEntry"), error);
}
