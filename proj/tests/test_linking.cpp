#include <catch2/catch_amalgamated.hpp>

#include "isolink/linking.hpp"
#include "isolink/rng.hpp"
#include "isolink/zoo.hpp"

using namespace isolink;

namespace {

IdentityIsotopy identity_iso(Surface s) {
  return IdentityIsotopy::from_cover(s, [](double, Vec2 z) { return z; },
                                     [](Vec2 z) { return z; })
      .with_speed_bound([](Vec2) { return 0.0; });
}

IdentityIsotopy rotation_loop() {
  return IdentityIsotopy::from_cover(
             Surface::Plane,
             [](double t, Vec2 z) {
               double c = std::cos(kTwoPi * t), s = std::sin(kTwoPi * t);
               return Vec2{z.x * c - z.y * s, z.x * s + z.y * c};
             },
             [](Vec2 z) { return z; })
      .with_speed_bound([](Vec2 z) { return kTwoPi * z.norm() + 1e-12; });
}

// brute-force degree of the direction map by dense sampling and unwrapping
long long brute_planar_linking(const IdentityIsotopy& iso, Vec2 z, Vec2 zp, int n) {
  double total = 0.0;
  Vec2 prev = iso.cover(0.0, zp) - iso.cover(0.0, z);
  for (int i = 1; i <= n; ++i) {
    double t = static_cast<double>(i) / n;
    Vec2 cur = iso.cover(t, zp) - iso.cover(t, z);
    total += std::atan2(prev.cross(cur), prev.dot(cur));
    prev = cur;
  }
  return std::llround(total / kTwoPi);
}

}  // namespace

TEST_CASE("planar linking basics") {
  auto id = identity_iso(Surface::Plane);
  CHECK(planar_linking(id, {0, 0}, {1, 0}) == 0);

  auto R = rotation_loop();
  CHECK(planar_linking(R, {0.2, 0.1}, {-0.4, 0.9}) == 1);
  CHECK(planar_linking(R, {0.2, 0.1}, {-0.4, 0.9}) ==
        brute_planar_linking(R, {0.2, 0.1}, {-0.4, 0.9}, 4096));
}

TEST_CASE("bump pair linkings match the pinned amplitudes") {
  ZooParams zp;
  zp.k_max = 4;
  auto ba = zoo_bump_annuli(zp);
  for (int k = 1; k <= 4; ++k) {
    Vec2 zk = ba.named_points.at("z" + std::to_string(k));
    Vec2 zpk = ba.named_points.at("zp" + std::to_string(k));
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    long long expect = static_cast<long long>(2.0 * sign * std::pow(k + 1.0, 5));
    CHECK(planar_linking(ba.iso, zk, zpk) == expect);
  }
}

TEST_CASE("deck-summed linking") {
  auto id = identity_iso(Surface::Torus);
  auto L = lift(id);
  auto rec = deck_summed_linking(L, {0.2, 0.3}, {0.7, 0.9});
  CHECK(rec.value == 0.0);
  for (const auto& t : rec.deck_terms) CHECK(t.value == 0);

  // a loop isotopy whose time-one map is the identity: moving trajectories,
  // nonzero displacement bound, deck sums must still be translation
  // invariant and vanish on lifts of one point
  auto sh = zoo_shear();
  auto loop = compose({sh.iso, inverse(sh.iso)});
  auto Ll = lift(loop);
  SplitMix64 g(31);
  for (int trial = 0; trial < 10; ++trial) {
    Vec2 a{g.uniform(), g.uniform()};
    Vec2 b{g.uniform() + 1.0, g.uniform()};
    Deck alpha{static_cast<long>(g.next() % 5) - 2, static_cast<long>(g.next() % 3) - 1};
    auto r1 = deck_summed_linking(Ll, a, b);
    auto r2 = deck_summed_linking(Ll, apply_deck(alpha, a), apply_deck(alpha, b));
    CHECK(r1.value == r2.value);
    auto self = deck_summed_linking(Ll, a, apply_deck({1, 0}, a));
    CHECK(self.value == 0.0);
  }
}

TEST_CASE("shear triple linkings and local constancy") {
  auto sh = zoo_shear();
  auto L = lift(sh.iso);
  BasePoint z{{0.25, 0.0}, Surface::Torus};
  for (int k = 1; k <= 5; ++k)
    CHECK(triple_linking_fixed(L, {0.0, 0.5}, {static_cast<double>(k), 0.5}, z) == k);

  // moving the punctures along their fixed lines does not change the value
  for (double y : {0.1, 0.35, 0.8})
    CHECK(triple_linking_fixed(L, {0.0, y}, {2.0, 1.0 - y}, z) == 2);
}

TEST_CASE("coboundary, deck shift and conjugation of triple linkings") {
  auto sh = zoo_shear();
  auto L = lift(sh.iso);
  SplitMix64 g(17);
  for (int trial = 0; trial < 12; ++trial) {
    auto pick = [&]() {
      return Vec2{0.5 * (static_cast<double>(static_cast<long>(g.next() % 7)) - 3.0),
                  g.uniform(-1, 2)};
    };
    Vec2 a = pick(), b = pick(), c = pick();
    if ((a - b).norm() < 1e-9 || (b - c).norm() < 1e-9 || (c - a).norm() < 1e-9) continue;
    BasePoint z{{0.25, g.uniform()}, Surface::Torus};
    long long sum = triple_linking_fixed(L, a, b, z) + triple_linking_fixed(L, b, c, z) +
                    triple_linking_fixed(L, c, a, z);
    CHECK(sum == 0);

    Deck alpha{static_cast<long>(g.next() % 5) - 2, static_cast<long>(g.next() % 5) - 2};
    CHECK(triple_linking_fixed(L, apply_deck(alpha, a), apply_deck(alpha, b), z) ==
          triple_linking_fixed(L, a, b, z));
  }

  // conjugation by a rigid translation
  Vec2 shift{0.3, -0.2};
  auto held = sh.iso;
  auto conj = IdentityIsotopy::from_cover(
                  Surface::Torus,
                  [held, shift](double t, Vec2 p) { return held.cover(t, p - shift) + shift; })
                  .with_speed_bound([held, shift](Vec2 p) { return held.speed_bound(p - shift); });
  auto Lc = lift(conj);
  BasePoint z{{0.25, 0.0}, Surface::Torus};
  BasePoint hz = project(z.p + shift, Surface::Torus);
  CHECK(triple_linking_fixed(Lc, Vec2{0.0, 0.5} + shift, Vec2{3.0, 0.5} + shift, hz) ==
        triple_linking_fixed(L, {0.0, 0.5}, {3.0, 0.5}, z));
}

TEST_CASE("recurrent triple linkings on invariant circles") {
  // enclosure-rate oracle: a circle orbit winds at its rotation rate around
  // enclosed punctures and not at all around outside ones
  ZooParams zp;
  zp.k_max = 3;
  auto ba = zoo_bump_annuli(zp);
  auto L = lift(ba.iso);
  const auto& b2 = ba.bump_balls[1];
  double r = b2.radius * 0.37;
  BasePoint z{b2.center + Vec2{r, 0.0}, Surface::Plane};
  Disk U{z, 0.1 * r};
  auto rec = triple_linking_recurrent(L, ba.named_points.at("z0"),
                                      ba.named_points.at("z2"), z, U, 400000, 1e-3);
  REQUIRE(rec.estimate.has_value());
  CHECK(rec.estimate->converged);
  CHECK(rec.value == Catch::Approx(-b2.rate(r)).margin(5e-3));

  // fast radial circles and the iterate scaling
  auto rf = zoo_radial_fast();
  auto Lr = lift(rf.iso);
  for (int k = 2; k <= 3; ++k) {
    BasePoint zk{{1.0 / k, 0.0}, Surface::Plane};
    Disk Uk{zk, 0.01};
    auto base = triple_linking_recurrent(Lr, {0, 0}, {0.8, 0.0}, zk, Uk, 100000, 1e-6);
    CHECK(base.value == Catch::Approx(std::exp2(k) + 0.5).margin(1e-6));
    for (long q : {2L, 3L}) {
      auto Lq = lift(iterate(rf.iso, q));
      auto scaled = triple_linking_recurrent(Lq, {0, 0}, {0.8, 0.0}, zk, Uk, 100000, 1e-5);
      CHECK(scaled.value == Catch::Approx(q * base.value).margin(q * 1e-5));
    }
  }
}

TEST_CASE("fixed points short-circuit the recurrent estimator") {
  auto sh = zoo_shear();
  auto L = lift(sh.iso);
  BasePoint z{{0.25, 0.0}, Surface::Torus};
  Disk U{z, 0.05};
  auto rec = triple_linking_recurrent(L, {0.0, 0.5}, {3.0, 0.5}, z, U, 1000, 1e-3);
  CHECK(rec.value == 3.0);
  CHECK(rec.estimate->converged);
}

TEST_CASE("two-puncture rotation numbers") {
  auto id = identity_iso(Surface::Plane);
  auto Lid = lift(id);
  CHECK(two_puncture_rotation(Lid, {0, 0}, {1, 0}, {0.5, 0.5}) == 0);

  ZooParams zp;
  zp.k_max = 3;
  auto ba = zoo_bump_annuli(zp);
  auto L = lift(ba.iso);
  for (int k = 1; k <= 3; ++k) {
    Vec2 zk = ba.named_points.at("z" + std::to_string(k));
    Vec2 zpk = ba.named_points.at("zp" + std::to_string(k));
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    long long expect = static_cast<long long>(-2.0 * sign * std::pow(k + 1.0, 5));
    CHECK(two_puncture_rotation(L, ba.named_points.at("z0"), zk, zpk) == expect);
  }

  // composing with a full rotation loop shifts planar linkings by one on
  // both sides of the identity
  auto R = rotation_loop();
  auto pend_pair = [&](const IdentityIsotopy& iso) {
    return planar_linking(iso, {0.1, 0.0}, {0.4, 0.2});
  };
  auto base = identity_iso(Surface::Plane);
  CHECK(pend_pair(compose({base, R})) == pend_pair(base) + 1);
}

TEST_CASE("boundedness diagnostics") {
  auto id = identity_iso(Surface::Plane);
  auto Lid = lift(id);
  std::vector<Vec2> pts{{0, 0}, {0.3, 0}, {0.6, 0.1}, {0.2, 0.5}};
  auto rep = wb_diagnostic(Lid, pts, 100);
  CHECK(rep.max_abs_linking == 0.0);
  CHECK(rep.verdict == WBReport::Verdict::BoundedAtHorizon);

  // shear: all pair linkings of fixed lifts vanish
  auto sh = zoo_shear();
  auto Lsh = lift(sh.iso);
  std::vector<Vec2> lattice;
  for (int i = -2; i <= 2; ++i)
    for (int j = 0; j < 3; ++j) lattice.push_back({0.5 * i, j / 3.0});
  auto rsh = wb_diagnostic(Lsh, lattice, 200);
  CHECK(rsh.max_abs_linking == 0.0);
  CHECK(rsh.verdict == WBReport::Verdict::BoundedAtHorizon);

  // bump annuli grow like 2 (k+1)^5 across the scales
  ZooParams zp;
  zp.k_max = 8;
  auto ba = zoo_bump_annuli(zp);
  auto Lba = lift(ba.iso);
  std::vector<Vec2> sample;
  for (int k = 1; k <= 8; ++k) {
    sample.push_back(ba.named_points.at("z" + std::to_string(k)));
    sample.push_back(ba.named_points.at("zp" + std::to_string(k)));
  }
  auto rba = wb_diagnostic(Lba, sample, 2000);
  CHECK(rba.verdict == WBReport::Verdict::GrowthDetected);
  CHECK(rba.max_abs_linking == Catch::Approx(2.0 * std::pow(9.0, 5)));
}

TEST_CASE("collisions and non-fixed inputs are rejected") {
  auto R = rotation_loop();
  CHECK_THROWS_AS(planar_linking(zoo_shear().iso, {0.25, 0.0}, {0.3, 0.3}), error);
  auto L = lift(R);
  CHECK_THROWS_AS(two_puncture_rotation(L, {0, 0}, {0, 0}, {1, 1}), error);
}
