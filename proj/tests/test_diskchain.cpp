#include <catch2/catch_amalgamated.hpp>

#include "isolink/diskchain.hpp"

using namespace isolink;

TEST_CASE("freeness of disks under rigid rotations") {
  FreeDisk D{"D", {0.0, 0.5}, 0.1};
  // the identity map keeps every disk on itself
  AnnulusMap id{[](Vec2 z) { return z; }, [](Vec2 z) { return z; }};
  auto c1 = is_free(id, D);
  CHECK_FALSE(c1.free_);
  CHECK(c1.witness.has_value());

  CHECK(is_free(annulus_rotation(0.5), D).free_);

  auto c3 = is_free(annulus_rotation(0.05), D);
  CHECK_FALSE(c3.free_);
  REQUIRE(c3.witness.has_value());
  // the witness genuinely lands back inside the disk
  Vec2 img = annulus_rotation(0.05).base(*c3.witness);
  CHECK(base_distance(img, D.center, Surface::Annulus) < D.radius);
}

TEST_CASE("inconclusive freeness margins are flagged") {
  // image displaced by exactly one diameter: the margin collapses
  FreeDisk D{"D", {0.0, 0.5}, 0.1};
  CHECK_THROWS_AS(is_free(annulus_rotation(0.2), D), error);
}

TEST_CASE("periodic chain of the one-third rotation") {
  auto rot = annulus_rotation(1.0 / 3.0);
  FreeDisk D{"D", {0.0, 0.5}, 0.1};
  auto chain = find_periodic_chain(rot, {D}, 12);
  REQUIRE(chain.has_value());
  CHECK(chain->chain.periodic);
  CHECK(chain->chain.length() == 3);
  CHECK(chain->width == 1);
  // every certificate replays
  for (const auto& cert : chain->certificates) CHECK(verify_certificate(rot, {D}, cert));
}

TEST_CASE("irrational rotations produce chains tracking the rotation number") {
  double golden = 0.6180339887498949;
  auto rot = annulus_rotation(golden);
  FreeDisk D{"D", {0.0, 0.5}, 0.05};
  auto chain = find_periodic_chain(rot, {D}, 50);
  REQUIRE(chain.has_value());
  double ratio = static_cast<double>(chain->width) / chain->chain.length();
  CHECK(std::abs(ratio - golden) < 2.0 * 0.05 / chain->chain.length() + 0.05);
}

TEST_CASE("width algebra identities") {
  auto rot = annulus_rotation(1.0 / 3.0);
  FreeDisk D{"D", {0.0, 0.5}, 0.1};
  auto chain = find_periodic_chain(rot, {D}, 12);
  REQUIRE(chain.has_value());
  auto [w0a, w0b] = chain_width_algebra(*chain, 0);
  CHECK(w0a == 1);
  CHECK(w0b == 1);
  auto [w1a, w1b] = chain_width_algebra(*chain, 1);
  CHECK(w1a == 1);
  CHECK(w1b == 4);
  auto [w2a, w2b] = chain_width_algebra(*chain, -2);
  CHECK(w2a == 1);
  CHECK(w2b == -5);
}

TEST_CASE("width adds under chain concatenation") {
  auto rot = annulus_rotation(1.0 / 3.0);
  FreeDisk D{"D", {0.0, 0.5}, 0.1};
  auto chain = find_periodic_chain(rot, {D}, 12);
  REQUIRE(chain.has_value());
  LiftedChain doubled = *chain;
  for (std::size_t i = 1; i < chain->chain.disks.size(); ++i) {
    doubled.chain.disks.push_back(chain->chain.disks[i]);
    doubled.offsets.push_back(chain->offsets[i] + chain->width);
  }
  for (long p : chain->chain.powers) doubled.chain.powers.push_back(p);
  doubled.width = doubled.offsets.back();
  CHECK(doubled.width == 2 * chain->width);
  CHECK(doubled.chain.length() == 2 * chain->chain.length());
  auto [wa, wb] = chain_width_algebra(doubled, 1);
  CHECK(wa == doubled.width);
  CHECK(wb == doubled.chain.length() + doubled.width);
}

TEST_CASE("rotation hulls") {
  FreeDisk D{"D", {0.0, 0.5}, 0.1};
  auto h3 = rot_hull(annulus_rotation(1.0 / 3.0), D, 36);
  REQUIRE(h3.any);
  CHECK(h3.lo == Catch::Approx(1.0 / 3.0).margin(1e-12));
  CHECK(h3.hi == Catch::Approx(1.0 / 3.0).margin(1e-12));
  for (auto [p, q] : h3.witnesses) CHECK(3 * p == q);

  // rotation just below one half with a small disk
  FreeDisk Ds{"D", {0.0, 0.5}, 0.02};
  auto hh = rot_hull(annulus_rotation(0.4999), Ds, 60);
  REQUIRE(hh.any);
  CHECK(hh.lo >= 0.45);
  CHECK(hh.hi <= 0.55);

  // deck-composed map shifts the hull by k
  auto h_shift = rot_hull(compose_with_deck(annulus_rotation(1.0 / 3.0), 2), D, 36);
  REQUIRE(h_shift.any);
  CHECK(h_shift.lo == Catch::Approx(1.0 / 3.0 + 2.0).margin(1e-12));
}

TEST_CASE("twist map: nondegenerate hull and located integer-offset points") {
  auto tw = annulus_twist();
  // a free mid-annulus disk has a genuinely nondegenerate hull; freeness
  // forces a gap around the integer-rotation heights, so no integer can
  // enter the hull of the pure twist
  FreeDisk D{"D", {0.0, 0.5}, 0.1};
  CHECK(is_free(tw, D).free_);
  auto hull = rot_hull(tw, D, 40);
  REQUIRE(hull.any);
  CHECK(hull.lo < hull.hi);
  CHECK(hull.lo > 0.3);
  CHECK(hull.hi < 0.7);
  // the integer-rotation conclusion itself: H(z) = T^k(z) is solvable at
  // every height carrying integer rotation
  auto z = locate_fixed_point(tw, 1, {0.0, 0.5}, {1.0, 1.5});
  REQUIRE(z.has_value());
  CHECK((tw.lift(*z) - *z - Vec2{1.0, 0.0}).norm() < 1e-9);
  // no fixed point pretends to exist at unreachable offsets
  CHECK_FALSE(locate_fixed_point(annulus_rotation(0.5), 0, {0, 0}, {1, 1}).has_value());
}

TEST_CASE("width bound report and synthetic violation") {
  auto rot = annulus_rotation(1.0 / 3.0);
  FreeDisk D{"D", {0.0, 0.5}, 0.1};
  auto chain = find_periodic_chain(rot, {D}, 12);
  REQUIRE(chain.has_value());
  auto rep = verify_chain_bound(rot, {D}, *chain, 1);
  CHECK(rep.bound_holds);  // |1| < 2 * 3

  LiftedChain fake;
  fake.chain.disks = {0, 0};
  fake.chain.powers = {1};
  fake.chain.periodic = true;
  fake.offsets = {0, 2};
  fake.width = 2;
  auto bad = verify_chain_bound(rot, {D}, fake, 1);
  CHECK_FALSE(bad.bound_holds);
}

TEST_CASE("disks must be equal or disjoint") {
  auto rot = annulus_rotation(1.0 / 3.0);
  FreeDisk D1{"D1", {0.0, 0.5}, 0.1};
  FreeDisk D2{"D2", {0.05, 0.5}, 0.1};
  CHECK_THROWS_AS(find_periodic_chain(rot, {D1, D2}, 12), error);
}
