#pragma once

// Linking numbers: the planar two-point linking (a circle-map degree), the
// deck-summed pair linking, triple linkings of fixed and recurrent points
// against two punctures, the two-puncture annulus rotation identity, and
// boundedness diagnostics.
//
// Orientation is the standard counterclockwise one throughout: degrees of
// direction maps are positive for counterclockwise turning, and a crossing
// of Gamma through gamma counts +1 when (tangent of gamma, tangent of
// Gamma) is a positively oriented frame.

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "isolink/isotopy.hpp"
#include "isolink/mobius.hpp"
#include "isolink/recurrence.hpp"

namespace isolink {

struct LinkingOptions {
  double conv_tol = 1e-3;
  int conv_window = 5;
  long n_max = 200000;          // iterate budget for recurrent estimates
  long max_returns = 2000;      // return-block budget
  double truncation_factor = 3.0;
  double ring_width = 1.0;      // outer band whose terms must vanish
  double fix_tol = 1e-9;
  double chord_floor = 2e-3;    // polyline resolution floor near the reference path
  WindingOptions winding;
};

// Degree of t -> (F_t(z') - F_t(z)) / |...| over one period, for two fixed
// points of the time-one map of a plane (or lifted) isotopy.
inline long long planar_linking(const IdentityIsotopy& iso, Vec2 z, Vec2 zp,
                                const LinkingOptions& opt = {}) {
  if ((z - zp).norm() < kGeomTol)
    throw error(errc::invariant_violation, "planar_linking needs distinct points");
  if ((iso.time_one(z) - z).norm() > opt.fix_tol ||
      (iso.time_one(zp) - zp).norm() > opt.fix_tol)
    throw error(errc::not_fixed, "planar_linking arguments must be fixed by the time-one map");
  BoundedPath pa = unit_trajectory(iso, z);
  BoundedPath pb = unit_trajectory(iso, zp);
  BoundedPath diff;
  diff.f = [pa, pb](double t) { return pb.f(t) - pa.f(t); };
  if (pa.speed >= 0.0 && pb.speed >= 0.0) diff.speed = pa.speed + pb.speed;
  try {
    return winding_number(diff, 0.0, 1.0, {0.0, 0.0}, opt.winding);
  } catch (const error& e) {
    if (e.code() == errc::center_on_path)
      throw error(errc::collision, "trajectories collide during the isotopy");
    throw;
  }
}

enum class LinkingKind { PlanarPair, DeckSummed, TripleFixed, TripleRecurrent };

struct DeckTerm {
  Deck deck;
  long long value = 0;
  double distance = 0.0;
  bool in_ring = false;
};

struct LinkingRecord {
  LinkingKind kind = LinkingKind::DeckSummed;
  double value = 0.0;
  std::vector<DeckTerm> deck_terms;
  double truncation_radius = 0.0;
  std::optional<BirkhoffEstimate> estimate;
};

namespace detail {

// Deck transforms v with dist(p + v, segment [s0,s1]) <= radius.
inline std::vector<Deck> decks_near_segment(Surface s, Vec2 p, Vec2 s0, Vec2 s1, double radius,
                                            std::vector<double>* distances = nullptr) {
  auto seg_dist = [&](const Vec2& q) {
    Vec2 ab = s1 - s0;
    double t = ab.norm2() > 0 ? std::clamp((q - s0).dot(ab) / ab.norm2(), 0.0, 1.0) : 0.0;
    return (s0 + ab * t - q).norm();
  };
  std::vector<Deck> out;
  if (s == Surface::Plane) {
    out.push_back({});
    if (distances) distances->push_back(seg_dist(p));
    return out;
  }
  double xlo = std::min(s0.x, s1.x) - radius - p.x, xhi = std::max(s0.x, s1.x) + radius - p.x;
  long mlo = static_cast<long>(std::floor(xlo)), mhi = static_cast<long>(std::ceil(xhi));
  long nlo = 0, nhi = 0;
  if (s == Surface::Torus) {
    double ylo = std::min(s0.y, s1.y) - radius - p.y, yhi = std::max(s0.y, s1.y) + radius - p.y;
    nlo = static_cast<long>(std::floor(ylo));
    nhi = static_cast<long>(std::ceil(yhi));
  }
  for (long m = mlo; m <= mhi; ++m) {
    for (long n = nlo; n <= nhi; ++n) {
      Vec2 q = p + Vec2{static_cast<double>(m), static_cast<double>(n)};
      double d = seg_dist(q);
      if (d <= radius) {
        out.push_back({m, n});
        if (distances) distances->push_back(d);
      }
    }
  }
  return out;
}

// Minimal representative of a base displacement in the cover.
inline Vec2 reduce_displacement(Vec2 d, Surface s) {
  if (s == Surface::Torus || s == Surface::Annulus) d.x -= std::round(d.x);
  if (s == Surface::Torus) d.y -= std::round(d.y);
  return d;
}

struct Bbox {
  Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  void add(const Vec2& p) {
    lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y);
  }
  Bbox shifted(const Vec2& v) const { return {lo + v, hi + v}; }
  Bbox inflated(double m) const { return {lo - Vec2{m, m}, hi + Vec2{m, m}}; }
  bool contains(const Vec2& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
  bool meets_segment(const Vec2& a, const Vec2& b) const {
    // conservative: segment bbox overlap
    return std::max(a.x, b.x) >= lo.x && std::min(a.x, b.x) <= hi.x &&
           std::max(a.y, b.y) >= lo.y && std::min(a.y, b.y) <= hi.y;
  }
};

}  // namespace detail

// Deck-summed pair linking of two fixed lifts: the sum over covering
// transforms of the planar linking of one lift against the translates of
// the other, truncated at radius 3K; terms in the outer band are computed
// and must vanish.
inline LinkingRecord deck_summed_linking(const LiftedIsotopy& L, Vec2 za, Vec2 zb,
                                         const LinkingOptions& opt = {}) {
  LinkingRecord rec;
  rec.kind = LinkingKind::DeckSummed;
  const double R = opt.truncation_factor * L.displacement_bound + opt.ring_width;
  rec.truncation_radius = R;
  std::vector<double> dists;
  auto decks = detail::decks_near_segment(L.surface(), zb, za, za, R, &dists);
  long long sum = 0;
  for (std::size_t i = 0; i < decks.size(); ++i) {
    Vec2 shifted = apply_deck(decks[i], zb);
    if ((shifted - za).norm() < kGeomTol) continue;  // the diagonal is excluded
    DeckTerm term;
    term.deck = decks[i];
    term.distance = dists[i];
    term.in_ring = dists[i] > R - opt.ring_width;
    term.value = planar_linking(L.iso, za, shifted, opt);
    if (term.in_ring && term.value != 0)
      throw error(errc::invariant_violation,
                  "nonzero pair linking at the truncation boundary; increase the bound");
    sum += term.value;
    rec.deck_terms.push_back(term);
  }
  rec.value = static_cast<double>(sum);
  return rec;
}

// ---------------------------------------------------------------------------
// Triple linkings
// ---------------------------------------------------------------------------

namespace detail {

// Workspace for triple linkings against the punctures a and b: the
// normalizing family fixing both, the reference path, displacement bounds,
// and the per-block sum over lifts.
class TripleContext {
 public:
  TripleContext(const LiftedIsotopy& L, Vec2 a, Vec2 b, const LinkingOptions& opt)
      : L_(L), a_(a), b_(b), opt_(opt), norm_(L.iso, {a, b}, opt.fix_tol) {
    seg_mid_.clear();
    // displacement of the correcting map over the working box, sampled
    norm_disp_ = 0.0;
    if (!norm_.trivial()) {
      Bbox box;
      box.add(a_); box.add(b_);
      box = box.inflated(3.0 * L_.displacement_bound + 2.0);
      wrap_ = norm_.wrap_bounds(box.lo, box.hi);
      for (int i = 0; i <= 8; ++i)
        for (int j = 0; j <= 8; ++j)
          for (int k = 1; k <= 13; ++k) {
            Vec2 w{box.lo.x + (box.hi.x - box.lo.x) * i / 8.0,
                   box.lo.y + (box.hi.y - box.lo.y) * j / 8.0};
            norm_disp_ = std::max(norm_disp_, (norm_.map(k / 13.0, w) - w).norm());
          }
    }
  }

  bool reference_perturbed() const { return perturbed_; }

  // One-shot perturbation of the reference path after a degenerate crossing.
  void perturb_reference() {
    if (perturbed_)
      throw error(errc::path_through_puncture,
                  "reference path still degenerate after perturbation");
    perturbed_ = true;
    Vec2 d = b_ - a_;
    Vec2 n{-d.y, d.x};
    double len = n.norm();
    if (len < kGeomTol) throw error(errc::invariant_violation, "punctures coincide");
    seg_mid_ = {(a_ + b_) * 0.5 + n * (7.3e-5 / len)};
  }

  //

  // L1 of the return block starting at base point w with return time tau,
  // summed over the lifts of w. with_chord closes the block through the
  // return disk; wn is the return point.
  long long block_sum(const BasePoint& w, long tau, const BasePoint& wn, bool with_chord) {
    Surface s = L_.surface();
    Vec2 w0 = w.p;

    // raw orbit points and cached raw unit paths
    std::vector<Vec2> orbit(static_cast<std::size_t>(tau) + 1);
    orbit[0] = w0;
    for (long j = 1; j <= tau; ++j) orbit[j] = L_.time_one(orbit[j - 1]);
    std::vector<BoundedPath> paths;
    paths.reserve(tau);
    for (long j = 0; j < tau; ++j) paths.push_back(unit_trajectory(L_.iso, orbit[j]));

    // chord displacement and loop detection (lift independent)
    Vec2 end = orbit[static_cast<std::size_t>(tau)];
    Vec2 target = end;
    if (with_chord) target = end + reduce_displacement(w.p - wn.p, s);
    const bool loop = (target - w0).norm() < 1e-6;

    // coarse nodes for the prefilter; with a declared speed bound the true
    // path stays within the sampling tube, which makes the box sound even
    // when the sample grid aliases a fast integer turn rate
    Bbox raw_box;
    {
      raw_box.add(orbit[0]);
      double infl = 0.0;
      for (long j = 0; j < tau; ++j) {
        const BoundedPath& pj = paths[static_cast<std::size_t>(j)];
        Vec2 prev = pj.f(0.0);
        raw_box.add(prev);
        double max_step = 0.0;
        for (int q = 1; q <= 17; ++q) {
          Vec2 p = pj.f(q / 17.0);
          raw_box.add(p);
          max_step = std::max(max_step, (p - prev).norm());
          prev = p;
        }
        double tube = pj.speed >= 0.0 ? 0.5 * pj.speed / 17.0 : 3.0 * max_step + 0.1;
        infl = std::max(infl, tube);
      }
      raw_box.add(target);
      raw_box = raw_box.inflated(infl + 1e-9);
    }
    double spread = std::max((raw_box.hi - raw_box.lo).x, (raw_box.hi - raw_box.lo).y);

    const double R = opt_.truncation_factor * (L_.displacement_bound + norm_disp_) + spread +
                     opt_.ring_width;
    std::vector<double> dists;
    auto decks = decks_near_segment(s, w0, a_, b_, R, &dists);

    long long sum = 0;
    for (std::size_t i = 0; i < decks.size(); ++i) {
      Vec2 v = decks[i].shift();
      bool ring = dists[i] > R - opt_.ring_width;
      long long term = lift_term(paths, orbit, v, target, loop, with_chord, raw_box);
      if (ring && term != 0)
        throw error(errc::invariant_violation,
                    "nonzero triple-linking term at the truncation boundary");
      sum += term;
    }
    return sum;
  }

 private:
  long long lift_term(const std::vector<BoundedPath>& paths,
                      const std::vector<Vec2>& orbit, Vec2 v, Vec2 target, bool loop,
                      bool with_chord, const Bbox& raw_box) {
    // conservative prefilter for the shifted, normalized trajectory
    Bbox box = raw_box.shifted(v).inflated(norm_disp_ + 1e-9);
    const Vec2 sa = a_, sb = b_;
    if (loop) {
      if (!box.contains(sa) && !box.contains(sb)) return 0;
      double sweep_a = 0.0, sweep_b = 0.0;
      for (std::size_t j = 0; j < paths.size(); ++j) {
        BoundedPath f = wrapped_path(paths[j], v);
        if (box.contains(sa)) sweep_a += angle_sweep(f, 0.0, 1.0, sa, opt_.winding);
        if (box.contains(sb)) sweep_b += angle_sweep(f, 0.0, 1.0, sb, opt_.winding);
      }
      if (with_chord) {
        Vec2 c0 = orbit.back() + v, c1 = target + v;
        if ((c1 - c0).norm() > kGeomTol) {
          BoundedPath chord;
          chord.f = [c0, c1](double t) { return c0 + (c1 - c0) * t; };
          chord.speed = (c1 - c0).norm();
          if (box.contains(sa)) sweep_a += angle_sweep(chord, 0.0, 1.0, sa, opt_.winding);
          if (box.contains(sb)) sweep_b += angle_sweep(chord, 0.0, 1.0, sb, opt_.winding);
        }
      }
      double turns = (sweep_a - sweep_b) / kTwoPi;
      long long val = std::llround(turns);
      if (std::abs(turns - static_cast<double>(val)) > 1e-3)
        throw error(errc::refinement_exhausted, "block winding did not settle on an integer");
      return val;
    }

    // multi-path block: count crossings with the reference path
    Vec2 ga = a_, gb = b_;
    if (!box.meets_segment(ga, gb) && seg_mid_.empty()) return 0;
    long long total = 0;
    for (std::size_t j = 0; j < paths.size(); ++j) {
      BoundedPath f = wrapped_path(paths[j], v);
      total += segment_crossings(f, ga, gb);
    }
    if (with_chord) {
      Vec2 c0 = orbit.back() + v, c1 = target + v;
      if ((c1 - c0).norm() > kGeomTol) {
        BoundedPath chord;
        chord.f = [c0, c1](double t) { return c0 + (c1 - c0) * t; };
        chord.speed = (c1 - c0).norm();
        total += segment_crossings(chord, ga, gb);
      }
    }
    return total;
  }

  // normalized, deck-shifted path: s -> M_s(F~_s(p) + v)
  BoundedPath wrapped_path(const BoundedPath& raw, Vec2 v) const {
    if (norm_.trivial() && v.x == 0.0 && v.y == 0.0) return raw;
    if (norm_.trivial()) {
      BoundedPath out;
      out.speed = raw.speed;
      auto f = raw.f;
      out.f = [f, v](double t) { return f(t) + v; };
      return out;
    }
    const PointNormalizer* n = &norm_;
    BoundedPath out;
    auto f = raw.f;
    out.f = [f, v, n](double t) { return n->map(t, f(t) + v); };
    if (raw.speed >= 0.0) out.speed = wrap_.scale * raw.speed + wrap_.drift;
    return out;
  }

  // crossings of one path (over [0,1]) with the possibly perturbed
  // reference polyline; counted so the reference path is the first factor
  long long segment_crossings(const BoundedPath& f, Vec2 ga, Vec2 gb) {
    std::vector<std::pair<Vec2, Vec2>> segs;
    if (seg_mid_.empty()) {
      segs.push_back({ga, gb});
    } else {
      segs.push_back({ga, seg_mid_[0]});
      segs.push_back({seg_mid_[0], gb});
    }
    long long total = 0;
    for (const auto& [s0, s1] : segs) {
      SampledPath poly =
          sample_trajectory_near_segment(f, 0.0, 1.0, s0, s1, opt_.chord_floor);
      // stability: recount at double resolution and require agreement
      long long c1 = polyline_segment_crossings(poly, s0, s1);
      SampledPath fine =
          sample_trajectory_near_segment(f, 0.0, 1.0, s0, s1, opt_.chord_floor * 0.5);
      long long c2 = polyline_segment_crossings(fine, s0, s1);
      if (c1 != c2)
        throw error(errc::refinement_exhausted, "crossing count unstable under refinement");
      total += c1;
    }
    return total;
  }

  const LiftedIsotopy& L_;
  Vec2 a_, b_;
  LinkingOptions opt_;
  PointNormalizer norm_;
  PointNormalizer::WrapBounds wrap_;
  double norm_disp_ = 0.0;
  bool perturbed_ = false;
  std::vector<Vec2> seg_mid_;  // perturbation waypoint, when present
};

}  // namespace detail

// Triple linking of a fixed point z of the time-one map against the fixed
// lifts a and b: the winding of the multi-loop (or crossing count of the
// multi-path) of all lifts of z under the isotopy normalized to fix a and
// b. For contractible z this is cross-checked against the difference of
// the two deck-summed pair linkings.
inline long long triple_linking_fixed(const LiftedIsotopy& L, Vec2 a, Vec2 b, BasePoint z,
                                      const LinkingOptions& opt = {}) {
  if ((L.time_one(a) - a).norm() > opt.fix_tol || (L.time_one(b) - b).norm() > opt.fix_tol)
    throw error(errc::not_fixed, "punctures must be fixed lifts");
  BasePoint fz = project(L.time_one(z.p), L.surface());
  if (base_distance(fz, z) > opt.fix_tol)
    throw error(errc::not_fixed, "z must be a fixed point of the time-one map");
  if (base_distance(project(a, L.surface()), z) < kGeomTol ||
      base_distance(project(b, L.surface()), z) < kGeomTol)
    throw error(errc::invariant_violation, "z must avoid the punctures' projections");

  detail::TripleContext ctx(L, a, b, opt);
  long long value = 0;
  for (int attempt = 0;; ++attempt) {
    try {
      value = ctx.block_sum(z, 1, z, false);
      break;
    } catch (const error& e) {
      if (e.code() != errc::degenerate_crossing) throw;
      ctx.perturb_reference();
    }
  }

  // dual route for contractible fixed points
  Vec2 disp = L.time_one(z.p) - z.p;
  if (disp.norm() < 1e-6) {
    const double R = opt.truncation_factor * L.displacement_bound + opt.ring_width;
    long long pair_route = 0;
    for (const Vec2& punct : {a, b}) {
      std::vector<double> dists;
      auto decks = detail::decks_near_segment(L.surface(), z.p, punct, punct, R, &dists);
      long long part = 0;
      for (const auto& d : decks) {
        Vec2 lift_z = apply_deck(d, z.p);
        if ((lift_z - punct).norm() < kGeomTol) continue;
        part += planar_linking(L.iso, punct, lift_z, opt);
      }
      pair_route += (punct == a ? part : -part);
    }
    if (pair_route != value)
      throw error(errc::identity_mismatch,
                  "multi-loop route and pair-sum route disagree on a contractible fixed point");
  }
  return value;
}

// Triple linking of a recurrent point: Birkhoff estimate of L_n / tau_n
// over return blocks into U, each block closed through the return disk.
inline LinkingRecord triple_linking_recurrent(const LiftedIsotopy& L, Vec2 a, Vec2 b,
                                              BasePoint z, const Disk& U, long n_max, double tol,
                                              const LinkingOptions& opt_in = {}) {
  LinkingOptions opt = opt_in;
  opt.conv_tol = tol;
  LinkingRecord rec;
  rec.kind = LinkingKind::TripleRecurrent;

  BasePoint fz = project(L.time_one(z.p), L.surface());
  if (base_distance(fz, z) < opt.fix_tol) {
    rec.value = static_cast<double>(triple_linking_fixed(L, a, b, z, opt));
    BirkhoffEstimate est;
    est.value = rec.value;
    est.converged = true;
    est.n_used = 1;
    est.history = {rec.value};
    rec.estimate = est;
    return rec;
  }
  if (!U.contains(z)) throw error(errc::invariant_violation, "z must lie in U");
  if (U.contains(project(a, L.surface())) || U.contains(project(b, L.surface())))
    throw error(errc::invariant_violation, "U must avoid the punctures' projections");

  detail::TripleContext ctx(L, a, b, opt);
  ConvergenceConfig conv{opt.conv_tol, opt.conv_window};
  BirkhoffEstimate est;
  long long L_acc = 0;
  long tau_acc = 0;
  BasePoint block_start = z;
  BasePoint cur = z;
  long tau = 0;
  long used = 0;
  long blocks = 0;
  while (used < n_max && blocks < opt.max_returns) {
    cur = project(L.time_one(cur.p), L.surface());
    ++tau;
    ++used;
    if (U.contains(cur)) {
      long long blk;
      for (;;) {
        try {
          blk = ctx.block_sum(block_start, tau, cur, true);
          break;
        } catch (const error& e) {
          if (e.code() != errc::degenerate_crossing) throw;
          ctx.perturb_reference();
          // restart the whole estimate under the perturbed reference
          L_acc = 0;
          tau_acc = 0;
          est = BirkhoffEstimate{};
        }
      }
      L_acc += blk;
      tau_acc += tau;
      ++blocks;
      detail::push_history(est, static_cast<double>(L_acc) / tau_acc, conv);
      est.n_used = tau_acc;
      if (est.converged) break;
      block_start = cur;
      tau = 0;
    }
  }
  if (est.history.empty())
    throw error(errc::no_return, "point not recurrent at this horizon");
  rec.value = est.value;
  rec.estimate = est;
  return rec;
}

// Rotation number of a third fixed lift in the annulus obtained by
// puncturing at a and b, computed two independent ways: crossings of the
// normalized trajectory loop with the reference path, and the difference
// of the two planar linkings.
inline long long two_puncture_rotation(const LiftedIsotopy& L, Vec2 a, Vec2 b, Vec2 z,
                                       const LinkingOptions& opt = {}) {
  if ((a - b).norm() < kGeomTol || (a - z).norm() < kGeomTol || (b - z).norm() < kGeomTol)
    throw error(errc::invariant_violation, "two_puncture_rotation needs three distinct lifts");
  for (const Vec2& p : {a, b, z})
    if ((L.time_one(p) - p).norm() > opt.fix_tol)
      throw error(errc::not_fixed, "all three lifts must be fixed");

  // left: crossings of the normalized trajectory loop of z with a path
  // from a to b (the annulus rotation number read through the chord)
  PointNormalizer norm(L.iso, {a, b}, opt.fix_tol);
  BoundedPath raw = unit_trajectory(L.iso, z);
  BoundedPath f;
  {
    auto rf = raw.f;
    const PointNormalizer* np = &norm;
    f.f = [rf, np](double t) { return np->map(t, rf(t)); };
    if (norm.trivial()) {
      f.speed = raw.speed;
    } else if (raw.speed >= 0.0) {
      detail::Bbox box;
      box.add(a);
      box.add(b);
      box.add(z);
      box = box.inflated(3.0 * L.displacement_bound + 2.0);
      auto wb = norm.wrap_bounds(box.lo, box.hi);
      f.speed = wb.scale * raw.speed + wb.drift;
    }
  }
  long long left = 0;
  bool counted = false;
  std::vector<Vec2> waypoints{};  // empty: straight chord
  for (int attempt = 0; attempt < 2 && !counted; ++attempt) {
    try {
      std::vector<std::pair<Vec2, Vec2>> segs;
      if (waypoints.empty())
        segs.push_back({a, b});
      else {
        segs.push_back({a, waypoints[0]});
        segs.push_back({waypoints[0], b});
      }
      long long total = 0;
      for (const auto& [s0, s1] : segs) {
        SampledPath poly = sample_trajectory_near_segment(f, 0.0, 1.0, s0, s1, opt.chord_floor);
        long long c1 = polyline_segment_crossings(poly, s0, s1);
        SampledPath fine =
            sample_trajectory_near_segment(f, 0.0, 1.0, s0, s1, opt.chord_floor * 0.5);
        long long c2 = polyline_segment_crossings(fine, s0, s1);
        if (c1 != c2)
          throw error(errc::refinement_exhausted, "crossing count unstable under refinement");
        total += c1;
      }
      left = total;
      counted = true;
    } catch (const error& e) {
      if (e.code() != errc::degenerate_crossing || attempt == 1)
        throw attempt == 1 ? error(errc::path_through_puncture,
                                   "reference path still degenerate after perturbation")
                           : e;
      Vec2 d = b - a;
      Vec2 n{-d.y, d.x};
      waypoints = {(a + b) * 0.5 + n * (7.3e-5 / std::max(n.norm(), kGeomTol))};
    }
  }
  long long right = planar_linking(L.iso, a, z, opt) - planar_linking(L.iso, b, z, opt);
  if (left != right)
    throw error(errc::identity_mismatch,
                "two-puncture rotation: winding route and degree route disagree");
  return left;
}

// ---------------------------------------------------------------------------
// Boundedness diagnostics
// ---------------------------------------------------------------------------

struct WBReport {
  long sampled_pairs = 0;
  double max_abs_linking = 0.0;
  std::map<long long, long> histogram;               // |i| -> count
  std::vector<std::pair<double, double>> octave_max;  // (pair distance <=, max |i|)
  enum class Verdict { BoundedAtHorizon, GrowthDetected } verdict =
      Verdict::BoundedAtHorizon;
};

// Max |i(F~; a~, b~)| over sampled pairs of fixed lifts, with a growth
// analysis across pair-distance octaves: growth is reported only when the
// octave maxima increase monotonically over at least three doublings.
inline WBReport wb_diagnostic(const LiftedIsotopy& L, const std::vector<Vec2>& fixed_sample,
                              long pair_budget, const LinkingOptions& opt = {}) {
  WBReport rep;
  std::vector<std::pair<double, double>> pts;  // (distance, |i|)
  long long npairs = static_cast<long long>(fixed_sample.size()) *
                     (static_cast<long long>(fixed_sample.size()) - 1) / 2;
  long long stride = std::max<long long>(1, npairs / std::max<long>(pair_budget, 1));
  long long idx = 0;
  for (std::size_t i = 0; i < fixed_sample.size(); ++i) {
    for (std::size_t j = i + 1; j < fixed_sample.size(); ++j, ++idx) {
      if (idx % stride != 0) continue;
      double d = (fixed_sample[i] - fixed_sample[j]).norm();
      if (d < kGeomTol) continue;
      long long v = planar_linking(L.iso, fixed_sample[i], fixed_sample[j], opt);
      rep.sampled_pairs++;
      rep.max_abs_linking = std::max(rep.max_abs_linking, static_cast<double>(std::llabs(v)));
      rep.histogram[std::llabs(v)]++;
      pts.push_back({d, static_cast<double>(std::llabs(v))});
    }
  }
  if (pts.empty()) return rep;
  // octave analysis by pair distance
  double dmin = pts.front().first, dmax = pts.front().first;
  for (const auto& p : pts) {
    dmin = std::min(dmin, p.first);
    dmax = std::max(dmax, p.first);
  }
  int octaves = std::max(1, static_cast<int>(std::ceil(std::log2(dmax / dmin))) + 1);
  std::vector<double> omax(octaves, -1.0);
  for (const auto& p : pts) {
    int o = std::min(octaves - 1, static_cast<int>(std::floor(std::log2(p.first / dmin))));
    omax[o] = std::max(omax[o], p.second);
  }
  std::vector<std::pair<double, double>> kept;
  for (int o = 0; o < octaves; ++o)
    if (omax[o] >= 0) kept.push_back({dmin * std::exp2(o + 1), omax[o]});
  rep.octave_max = kept;
  // monotone growth toward finer or coarser scales over >= 3 doublings
  int run_up = 1, run_down = 1, best = 1;
  for (std::size_t i = 1; i < kept.size(); ++i) {
    run_up = kept[i].second > kept[i - 1].second ? run_up + 1 : 1;
    run_down = kept[i].second < kept[i - 1].second ? run_down + 1 : 1;
    best = std::max({best, run_up, run_down});
  }
  if (best >= 4)  // 3 doublings = 4 consecutive octaves
    rep.verdict = WBReport::Verdict::GrowthDetected;
  return rep;
}

}  // namespace isolink
