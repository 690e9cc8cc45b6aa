#include <catch2/catch_amalgamated.hpp>

#include "isolink/action.hpp"
#include "isolink/rng.hpp"

using namespace isolink;

namespace {

const double kShearGap = 1.0 / kPi;  // integral of sin(2 pi x) over half a period

IdentityIsotopy identity_iso(Surface s) {
  return IdentityIsotopy::from_cover(s, [](double, Vec2 z) { return z; },
                                     [](Vec2 z) { return z; })
      .with_speed_bound([](Vec2) { return 0.0; });
}

}  // namespace

TEST_CASE("action differences vanish for the identity isotopy") {
  auto id = identity_iso(Surface::Torus);
  auto L = lift(id);
  auto v = action_difference(L, {0.2, 0.3}, {0.7, 0.9}, lebesgue_torus());
  CHECK(v.value == 0.0);
  CHECK(v.stderr_ == 0.0);
}

TEST_CASE("bump-annulus closed-form values and coboundary") {
  ZooParams zp;
  zp.k_max = 4;
  auto ba = zoo_bump_annuli(zp);
  auto L = lift(ba.iso);
  QuadratureConfig q;
  q.rate_cache = std::make_shared<RateCache>();
  Vec2 z0 = ba.named_points.at("z0");
  double prev = 0.0;
  for (int k = 1; k <= 3; ++k) {
    Vec2 zk = ba.named_points.at("z" + std::to_string(k));
    double sign = (k % 2 == 0) ? -1.0 : 1.0;
    auto v = action_difference(L, z0, zk, *ba.measure, q);
    CHECK(v.value == Catch::Approx(sign * k).margin(1e-9));
    if (k >= 2) {
      Vec2 zk1 = ba.named_points.at("z" + std::to_string(k - 1));
      auto adj = action_difference(L, zk, zk1, *ba.measure, q);
      CHECK(adj.value == Catch::Approx(prev - v.value).margin(1e-9));
    }
    prev = v.value;
  }
}

TEST_CASE("atomic measures integrate triple linkings exactly") {
  auto sh = zoo_shear();
  auto L = lift(sh.iso);
  InvariantMeasure mu;
  mu.surface = Surface::Torus;
  mu.components.push_back(
      AtomicComponent{{{{{0.25, 0.0}, Surface::Torus}, 0.5},
                       {{{0.75, 0.0}, Surface::Torus}, 0.25}}});
  auto v = action_difference(L, {0.0, 0.5}, {2.0, 0.5}, mu);
  // i(a0, a2, (1/4, 0)) = 2 and the mirrored point links oppositely
  CHECK(v.value == Catch::Approx(0.5 * 2.0 + 0.25 * (-2.0)).margin(1e-12));
}

TEST_CASE("shear action gap matches the sheared-area integral") {
  auto sh = zoo_shear();
  auto L = lift(sh.iso);
  QuadratureConfig q;
  q.seed = 42;
  q.strata_x = q.strata_y = 16;
  q.orbit_steps = 64;
  auto v = action_difference(L, {0.0, 0.5}, {0.5, 0.5}, *sh.measure, q);
  CHECK(std::abs(v.value - kShearGap) < 3.0 * v.stderr_ + 5e-3);

  // the classical oracle: swept-area difference of the generating flow
  auto ham = hamiltonian_isotopy(sh);
  BasePoint a{{0.0, 0.5}, Surface::Torus};
  BasePoint b{{0.5, 0.5}, Surface::Torus};
  double delta = classical_action_difference(ham, a, b);
  CHECK(delta == Catch::Approx(-kShearGap).margin(1e-4));
  CHECK(std::abs(delta + v.value) < 3.0 * v.stderr_ + 5e-3);
  double Aa = classical_action(ham, a);
  double Ab = classical_action(ham, b);
  CHECK(delta == Catch::Approx(Ab - Aa).margin(1e-4));
}

TEST_CASE("gauge freedom of the fixed-lift action") {
  ZooParams zp;
  zp.k_max = 3;
  auto ba = zoo_bump_annuli(zp);
  auto L = lift(ba.iso);
  QuadratureConfig q;
  q.rate_cache = std::make_shared<RateCache>();
  std::vector<Vec2> lifts{ba.named_points.at("z0"), ba.named_points.at("z1"),
                          ba.named_points.at("z2")};
  auto s0 = action_on_fixlift(L, lifts, lifts[0], *ba.measure, q);
  auto s1 = action_on_fixlift(L, lifts, lifts[1], *ba.measure, q);
  CHECK(s0.entries[0].value == 0.0);
  CHECK(s1.entries[1].value == 0.0);
  // differences are gauge invariant
  for (std::size_t i = 0; i + 1 < lifts.size(); ++i) {
    double d0 = s0.entries[i + 1].value - s0.entries[i].value;
    double d1 = s1.entries[i + 1].value - s1.entries[i].value;
    CHECK(d0 == Catch::Approx(d1).margin(1e-9));
  }
  CHECK(s0.width == Catch::Approx(s1.width).margin(1e-9));
}

TEST_CASE("iterate scaling of the action difference") {
  ZooParams zp;
  zp.k_max = 2;
  auto ba = zoo_bump_annuli(zp);
  auto L1 = lift(ba.iso);
  Vec2 z0 = ba.named_points.at("z0");
  Vec2 z1 = ba.named_points.at("z1");
  auto v1 = action_difference(L1, z0, z1, *ba.measure);
  for (long qq : {2L, 3L}) {
    auto Lq = lift(iterate(ba.iso, qq));
    auto vq = action_difference(Lq, z0, z1, *ba.measure);
    CHECK(vq.value == Catch::Approx(qq * v1.value).margin(1e-9));
  }
}

TEST_CASE("contractible action requires a vanishing rotation vector") {
  double beta = 0.4;
  auto trans = IdentityIsotopy::from_cover(
                   Surface::Torus,
                   [beta](double t, Vec2 z) { return Vec2{z.x + beta * t, z.y}; },
                   [beta](Vec2 z) { return Vec2{z.x - beta, z.y}; })
                   .with_speed_bound([beta](Vec2) { return beta; });
  auto L = lift(trans);
  // no fixed points anyway, but the rotation-vector gate trips first
  std::vector<BasePoint> pts{{{0.0, 0.0}, Surface::Torus}};
  CHECK_THROWS_AS(action_on_contractible(L, pts, lebesgue_torus()), error);
}

TEST_CASE("contractible action of the shear separates the two fixed lines") {
  auto sh = zoo_shear();
  auto L = lift(sh.iso);
  QuadratureConfig q;
  q.seed = 9;
  q.strata_x = q.strata_y = 12;
  q.orbit_steps = 48;
  std::vector<BasePoint> pts{{{0.0, 0.5}, Surface::Torus}, {{0.5, 0.5}, Surface::Torus}};
  auto spec = action_on_contractible(L, pts, *sh.measure, q);
  double gap = spec.entries[1].value - spec.entries[0].value;
  CHECK(std::abs(gap - kShearGap) < 3.0 * spec.max_stderr + 1e-2);
}

TEST_CASE("return-block estimator agrees on the shear") {
  auto sh = zoo_shear();
  auto L = lift(sh.iso);
  QuadratureConfig q;
  q.seed = 5;
  q.strata_x = q.strata_y = 8;
  q.batches = 2;
  q.grid_estimator = ActionEstimator::ReturnBlocks;
  q.return_n_max = 60000;
  q.return_tol = 3e-2;
  q.drop_abort_fraction = 0.25;
  auto v = action_difference(L, {0.0, 0.5}, {0.5, 0.5}, *sh.measure, q);
  CHECK(std::abs(v.value - kShearGap) < 0.08);
}

TEST_CASE("too many divergent samples abort the integral") {
  auto sh = zoo_shear();
  auto L = lift(sh.iso);
  QuadratureConfig q;
  q.seed = 5;
  q.strata_x = q.strata_y = 6;
  q.batches = 2;
  q.grid_estimator = ActionEstimator::ReturnBlocks;
  q.return_n_max = 3;  // nothing returns this fast
  CHECK_THROWS_AS(action_difference(L, {0.0, 0.5}, {0.5, 0.5}, *sh.measure, q), error);
}

TEST_CASE("classical action at critical points of an autonomous flow") {
  auto pend = zoo_pendulum();
  auto ham = hamiltonian_isotopy(pend);
  // constant trajectory: the action is minus the energy
  BasePoint ell{{0.0, 0.0}, Surface::Torus};
  CHECK(classical_action(ham, ell) == Catch::Approx(1.0 / kTwoPi).margin(1e-9));
  BasePoint hyp{{0.25, 0.25}, Surface::Torus};
  CHECK(classical_action(ham, hyp) == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("pendulum: swept area, action difference and the measure value") {
  auto pend = zoo_pendulum();
  auto ham = hamiltonian_isotopy(pend);
  BasePoint ell{{0.0, 0.0}, Surface::Torus};
  BasePoint hyp{{0.25, 0.25}, Surface::Torus};
  double delta = classical_action_difference(ham, ell, hyp);
  double Ae = classical_action(ham, ell);
  double Ah = classical_action(ham, hyp);
  CHECK(delta == Catch::Approx(Ah - Ae).margin(2e-4));

  auto L = lift(pend.iso);
  QuadratureConfig q;
  q.seed = 3;
  q.strata_x = q.strata_y = 10;
  q.batches = 4;
  q.orbit_steps = 24;
  auto v = action_difference(L, ell.p, hyp.p, *pend.measure, q);
  CHECK(std::abs(delta + v.value) < 3.0 * v.stderr_ + 5e-3);
}

TEST_CASE("spectrum width and growth for the bump measure") {
  ZooParams zp;
  zp.k_max = 3;
  auto ba = zoo_bump_annuli(zp);
  auto L = lift(ba.iso);
  QuadratureConfig q;
  q.rate_cache = std::make_shared<RateCache>();
  std::vector<Vec2> lifts;
  for (int k = 0; k <= 3; ++k) lifts.push_back(ba.named_points.at("z" + std::to_string(k)));
  auto [spec, widths] = spectrum(L, *ba.measure, lifts, q, 2);
  // values 0, 1, -2, 3 relative to the basepoint: width 5
  CHECK(spec.width == Catch::Approx(5.0).margin(1e-9));
  CHECK(widths[1] == Catch::Approx(2.0 * widths[0]).margin(1e-9));
}

TEST_CASE("measure invariants are validated") {
  // atoms sitting on a puncture projection are rejected
  auto sh = zoo_shear();
  auto L = lift(sh.iso);
  InvariantMeasure bad;
  bad.surface = Surface::Torus;
  bad.components.push_back(AtomicComponent{{{{{0.0, 0.5}, Surface::Torus}, 1.0}}});
  CHECK_THROWS_AS(action_difference(L, {0.0, 0.5}, {2.0, 0.5}, bad), error);
}
