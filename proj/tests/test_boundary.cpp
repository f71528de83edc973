#include <cmath>
#include <random>

#include "doctest.h"
#include "nullcontact/boundary.hpp"
#include "nullcontact/error.hpp"

using namespace nc;

namespace {

Region ellipsoid(double a, double b) { return make_revolution(RadiusSquaredProfile::ellipsoid(a, b)); }

Event on_ellipsoid(double a, double b, double t, double phi) {
  const double r = b * std::sqrt(1.0 - t * t / (a * a));
  return {t, r * std::cos(phi), r * std::sin(phi)};
}

double dH(const HValue& h, const TangentVec& v) { return h.grad.vt * v.vt + h.grad.vx * v.vx + h.grad.vy * v.vy; }

}  // namespace

TEST_CASE("null directions of a level set") {
  // Timelike part: two null tangents, tangent to the level set.
  const TangentVec g{0.2, 1.0, 0.0};
  const auto two = null_directions_from_gradient(g, 1e-9);
  REQUIRE(two.size() == 2);
  for (const auto& v : two) {
    CHECK(v.vt == 1.0);
    CHECK(std::abs(eta(v, v)) < 1e-14);
    CHECK(std::abs(g.vt * v.vt + g.vx * v.vx + g.vy * v.vy) < 1e-14);
  }
  // Plus turns counterclockwise from the outward normal -g.
  CHECK(cross(Vec2{-1.0, 0.0}, two[0].spatial()) > 0.0);
  CHECK(null_directions_from_gradient({1.0, 1.0, 0.0}, 1e-9).size() == 1);
  CHECK(null_directions_from_gradient({2.0, 1.0, 0.0}, 1e-9).empty());
  CHECK(band_indicator({0.2, 1.0, 0.0}) > 0.0);
  CHECK(band_indicator({2.0, 1.0, 0.0}) < 0.0);
  CHECK(band_indicator({1.0, 0.0, 1.0}) == 0.0);
}

TEST_CASE("classification of ellipsoid boundaries") {
  for (auto [a, b] : {std::pair{1.0, 1.0}, {1.0, 2.0}, {2.0, 1.0}, {1.0, 0.5}, {1.5, 0.7}}) {
    const Region r = ellipsoid(a, b);
    const double tl = a * a / std::hypot(a, b);
    const auto [lo, hi] = lightlike_latitudes(r.revolution()->profile);
    CHECK(std::abs(lo + tl) < 1e-10);
    CHECK(std::abs(hi - tl) < 1e-10);
    for (double phi : {0.0, 1.0, 4.0}) {
      CHECK(classify_boundary_point(r, on_ellipsoid(a, b, 0.0, phi)).causal_class == BoundaryClass::TimelikePart);
      CHECK(classify_boundary_point(r, on_ellipsoid(a, b, 0.5 * (tl + a), phi)).causal_class ==
            BoundaryClass::SpacelikePart);
      const BoundaryPoint bp = classify_boundary_point(r, on_ellipsoid(a, b, tl, phi));
      CHECK(bp.causal_class == BoundaryClass::LightlikePart);
      CHECK(bp.null_dirs.size() == 1);
    }
  }
  const Region ball = ellipsoid(1.0, 1.0);
  CHECK_THROWS_AS(classify_boundary_point(ball, {0.0, 0.5, 0.0}), Error);
}

TEST_CASE("null tangents on a boosted ball are null and tangent") {
  const Region ball = ellipsoid(1.0, 1.0);
  const ConformalMap m({boost(0.5, {1.0, 0.0}), Translation{{0.3, 0.2, -0.1}}});
  const Region r = make_transformed(ball, m);
  for (double phi = 0.0; phi < kTwoPi; phi += 0.7) {
    const Event p = m.apply(on_ellipsoid(1.0, 1.0, 0.2, phi));
    const auto dirs = null_tangent_directions(r, p);
    REQUIRE(dirs.size() == 2);
    const HValue h = r.eval(p);
    for (const auto& v : dirs) {
      CHECK(std::abs(eta(v, v)) < 1e-12);
      CHECK(std::abs(dH(h, v)) < 1e-12);
    }
  }
}

TEST_CASE("ray tangency") {
  const Region ball = ellipsoid(1.0, 1.0);
  // A ray tangent to the unit sphere S^2 in (t, x, y) at a timelike-band point.
  const Event p = on_ellipsoid(1.0, 1.0, 0.3, 0.4);
  const auto dirs = null_tangent_directions(ball, p);
  const NullRay ray = chart_of_geodesic(p, dirs[0]);
  const Tangency tg = tangency_point(ball, ray);
  CHECK(std::abs(tg.G) < 1e-12);
  CHECK(std::abs(tg.event.t - p.t) < 1e-6);
  // A ray through the centre reaches H = 1 there.
  const Tangency c = tangency_point(ball, NullRay({0.0, 0.0}, 0.3));
  CHECK(c.G > 0.4);
  CHECK_THROWS_AS(ray_window(NullRay({10.0, 10.0}, 0.0), ball.bbox()), Error);
}

TEST_CASE("boundary sampling lands on the boundary") {
  const Region r = make_transformed(ellipsoid(1.0, 2.0), ConformalMap({boost(0.3, {0.0, 1.0})}));
  const auto pts = sample_boundary(r, 8, 16);
  CHECK(pts.size() > 50);
  for (const auto& p : pts) CHECK(std::abs(r.value(p)) < 1e-10);
}

TEST_CASE("strong null convexity") {
  const ConvexityReport ball = check_strong_null_convexity(ellipsoid(1.0, 1.0));
  CHECK(ball.passed());
  CHECK(std::abs(ball.hessian_min_abs - 4.0) < 1e-9);
  CHECK(ball.failures.empty());

  const Region waist = make_revolution(
      RadiusSquaredProfile::polynomial({1.0, 0.0, 1.0, 0.0, -1.0}, -std::sqrt((1.0 + std::sqrt(5.0)) / 2.0),
                                       std::sqrt((1.0 + std::sqrt(5.0)) / 2.0)));
  const ConvexityReport w = check_strong_null_convexity(waist);
  CHECK_FALSE(w.passed());
  CHECK_FALSE(w.hessian_ok);
  CHECK(std::abs(w.hessian_argmin.t) < 1e-6);
  REQUIRE_FALSE(w.failures.empty());
  CHECK(w.failures.front().kind == "hessian");

  const ConvexityReport u = check_strong_null_convexity(smoothed_ball_union({-2.0, -2.0, 0.0}, {2.0, 2.0, 0.0}, 1.0));
  CHECK_FALSE(u.chord_connected_ok);
  CHECK_FALSE(u.passed());

  CHECK_THROWS_AS(check_strong_null_convexity(make_diamond()), Error);
}

TEST_CASE("convexity is conformally invariant in sign") {
  // Hessian values scale, but the verdict does not change.
  const Region r =
      make_transformed(ellipsoid(1.0, 1.0), ConformalMap({boost(0.5, {1.0, 0.0}), Dilation{2.0}}));
  const ConvexityReport c = check_strong_null_convexity(r);
  CHECK(c.passed());
}
