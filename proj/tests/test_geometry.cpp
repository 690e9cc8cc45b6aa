#include <catch2/catch_amalgamated.hpp>

#include "isolink/geometry.hpp"
#include "isolink/rng.hpp"

using namespace isolink;

namespace {

// Independent brute-force crossing counter: dense parameter scan of the
// first path against every segment of the second, orientation by the sign
// of the cross product. Used as the oracle for intersection_number.
long long brute_crossings(const SampledPath& gamma, const SampledPath& Gamma) {
  long long total = 0;
  for (std::size_t i = 1; i < gamma.pts.size(); ++i) {
    Vec2 a0 = gamma.pts[i - 1], a1 = gamma.pts[i];
    for (std::size_t j = 1; j < Gamma.pts.size(); ++j) {
      Vec2 b0 = Gamma.pts[j - 1], b1 = Gamma.pts[j];
      Vec2 da = a1 - a0, db = b1 - b0;
      double den = da.cross(db);
      if (std::abs(den) < 1e-14) continue;
      double s = (b0 - a0).cross(db) / den;
      double t = (b0 - a0).cross(da) / den;
      if (s > 0 && s < 1 && t > 0 && t < 1) total += den > 0 ? 1 : -1;
    }
  }
  return total;
}

}  // namespace

TEST_CASE("projection reduces periodic directions") {
  auto t = project(Vec2{1.25, -0.5}, Surface::Torus);
  CHECK(t.p.x == Catch::Approx(0.25));
  CHECK(t.p.y == Catch::Approx(0.5));
  auto a = project(Vec2{1.25, -0.5}, Surface::Annulus);
  CHECK(a.p.x == Catch::Approx(0.25));
  CHECK(a.p.y == Catch::Approx(-0.5));
  auto p = project(Vec2{0.3, 0.7}, Surface::Plane);
  CHECK(p.p.x == 0.3);
  CHECK(p.p.y == 0.7);
}

TEST_CASE("deck transforms translate and project away") {
  CHECK(apply_deck({1, 0}, {0.25, 0.5}) == Vec2{1.25, 0.5});
  CHECK(apply_deck({0, 0}, {0.3, -0.4}) == Vec2{0.3, -0.4});
  CHECK(apply_deck({2, -1}, {0.0, 0.0}) == Vec2{2.0, -1.0});

  // project o apply_deck = project, exactly, on random points
  SplitMix64 g(11);
  for (int i = 0; i < 200; ++i) {
    Vec2 p{g.uniform(-5, 5), g.uniform(-5, 5)};
    Deck d{static_cast<long>(g.next() % 9) - 4, static_cast<long>(g.next() % 9) - 4};
    for (Surface s : {Surface::Torus, Surface::Annulus}) {
      if (!deck_valid(d, s)) continue;
      auto lhs = project(apply_deck(d, p), s);
      auto rhs = project(p, s);
      CHECK(lhs.p.x == Catch::Approx(rhs.p.x).margin(1e-12));
      CHECK(lhs.p.y == Catch::Approx(rhs.p.y).margin(1e-12));
    }
  }
}

TEST_CASE("winding numbers of circles") {
  auto circle = [](double t) { return Vec2{std::cos(kTwoPi * t), std::sin(kTwoPi * t)}; };
  CHECK(winding_number(circle, 0.0, 1.0, {0, 0}) == 1);
  CHECK(winding_number(circle, 0.0, 1.0, {5, 0}) == 0);
  auto cw3 = [](double t) { return Vec2{std::cos(-3 * kTwoPi * t), std::sin(-3 * kTwoPi * t)}; };
  CHECK(winding_number(cw3, 0.0, 1.0, {0, 0}) == -3);
}

TEST_CASE("winding is a reparametrization and refinement invariant") {
  auto loop = [](double t) {
    double s = t * t * (3 - 2 * t);  // monotone reparametrization
    return Vec2{std::cos(kTwoPi * s) * (1.0 + 0.3 * std::sin(3 * kTwoPi * s)),
                std::sin(kTwoPi * s)};
  };
  WindingOptions coarse;
  coarse.initial_samples = 11;
  WindingOptions fine;
  fine.initial_samples = 101;
  CHECK(winding_number(loop, 0.0, 1.0, {0, 0}, coarse) ==
        winding_number(loop, 0.0, 1.0, {0, 0}, fine));
}

TEST_CASE("same complementary component gives the same winding") {
  auto loop = [](double t) { return Vec2{2.0 * std::cos(kTwoPi * t), 2.0 * std::sin(kTwoPi * t)}; };
  // centers inside the loop
  for (Vec2 c : {Vec2{0, 0}, Vec2{0.5, 0.3}, Vec2{-1.2, 0.4}})
    CHECK(winding_number(loop, 0.0, 1.0, c) == 1);
  // centers outside
  for (Vec2 c : {Vec2{3, 0}, Vec2{0, -4}, Vec2{2.5, 2.5}})
    CHECK(winding_number(loop, 0.0, 1.0, c) == 0);
}

TEST_CASE("speed-bounded sweeps count very fast turning exactly") {
  // regression: integer turn counts used to alias against the sample grid
  for (double rate : {64.0, 486.0, 2048.0, 6250.0, 118098.0, 487.25}) {
    BoundedPath p;
    p.f = [rate](double t) {
      double a = kTwoPi * std::fmod(t * rate, 1.0);
      return Vec2{std::cos(a), std::sin(a)};
    };
    p.speed = kTwoPi * rate;
    double turns = angle_sweep(p, 0.0, 1.0, {0, 0}) / kTwoPi;
    // roundoff accumulates over the ~10 rate atan2 steps of the sweep
    CHECK(turns == Catch::Approx(rate).margin(1e-5 + 1e-10 * rate));
  }
}

TEST_CASE("intersection numbers: pinned convention and brute-force oracle") {
  // standard counterclockwise convention: (tangent of gamma, tangent of
  // Gamma) positively oriented counts +1; for this pair the frame is
  // negatively oriented
  auto g1 = make_polyline({{0, -1}, {0, 1}});
  auto G1 = make_polyline({{-1, 0}, {1, 0}});
  CHECK(intersection_number(g1, G1) == -1);
  CHECK(intersection_number(G1, g1) == 1);

  // disjoint segments
  CHECK(intersection_number(make_polyline({{0, 0}, {1, 0}}),
                            make_polyline({{0, 2}, {1, 2}})) == 0);

  // three upward unit segments against a horizontal path: +3
  auto horiz = make_polyline({{0, 0.5}, {3, 0.5}});
  long long total = 0;
  for (int m = 0; m < 3; ++m) {
    auto seg = make_polyline({{0.25 + m, 0.0}, {0.25 + m, 1.0}});
    total += intersection_number(horiz, seg);
    CHECK(intersection_number(horiz, seg) == brute_crossings(horiz, seg));
  }
  CHECK(total == 3);
}

TEST_CASE("intersection number is antisymmetric on random polylines") {
  SplitMix64 g(23);
  int done = 0;
  while (done < 60) {
    std::vector<Vec2> a, b;
    for (int i = 0; i < 5; ++i) a.push_back({g.uniform(-1, 1), g.uniform(-1, 1)});
    for (int i = 0; i < 5; ++i) b.push_back({g.uniform(-1, 1), g.uniform(-1, 1)});
    try {
      auto pa = make_polyline(a), pb = make_polyline(b);
      long long ab = intersection_number(pa, pb);
      long long ba = intersection_number(pb, pa);
      CHECK(ab == -ba);
      CHECK(ab == brute_crossings(pa, pb));
      ++done;
    } catch (const error& e) {
      if (e.code() != errc::degenerate_crossing) throw;
    }
  }
}

TEST_CASE("degenerate crossings are reported, not guessed") {
  // crossing exactly at a sample endpoint of the second path
  auto gamma = make_polyline({{-1, 0}, {1, 0}});
  auto Gamma = make_polyline({{0, -1}, {0, 0}, {0.0, 1}});
  CHECK_THROWS_AS(intersection_number(gamma, Gamma), error);
}

TEST_CASE("winding center on the path is rejected") {
  auto circle = [](double t) { return Vec2{std::cos(kTwoPi * t), std::sin(kTwoPi * t)}; };
  CHECK_THROWS_AS(winding_number(circle, 0.0, 1.0, {1.0, 0.0}), error);
}
