#include <cmath>
#include <random>

#include "doctest.h"
#include "nullcontact/error.hpp"
#include "nullcontact/regions.hpp"
#include "nullcontact/spec.hpp"

using namespace nc;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

const double kWaist = std::sqrt((1.0 + std::sqrt(5.0)) / 2.0);

}  // namespace

TEST_CASE("ellipsoid profile") {
  const auto p = RadiusSquaredProfile::ellipsoid(2.0, 3.0);
  CHECK(p.t_min() == -2.0);
  CHECK(p.t_max() == 2.0);
  CHECK(p.rho(0.0) == doctest::Approx(9.0));
  CHECK(p.rho(1.0) == doctest::Approx(9.0 * 0.75));
  CHECK(p.d1(1.0) == doctest::Approx(-4.5));
  CHECK(p.d2(0.3) == doctest::Approx(-4.5));
  CHECK(p.ellipsoid_axes().has_value());
  // Dilation image: rho_s(t) = s^2 rho(t/s).
  const auto d = p.dilated(1.5);
  CHECK(d.t_max() == doctest::Approx(3.0));
  CHECK(d.rho(1.2) == doctest::Approx(2.25 * p.rho(0.8)));
}

TEST_CASE("lightlike latitudes of profiles") {
  for (auto [a, b] : {std::pair{1.0, 1.0}, {1.0, 2.0}, {2.0, 1.0}, {0.5, 1.5}}) {
    const auto [lo, hi] = profile_latitudes(RadiusSquaredProfile::ellipsoid(a, b));
    CHECK(std::abs(hi - a * a / std::hypot(a, b)) < 1e-12);
    CHECK(std::abs(lo + a * a / std::hypot(a, b)) < 1e-12);
  }
  // rho = (1 - t^2)(1 + t/5); roots of rho'^2 - 4 rho from an independent
  // 30-digit computation.
  const auto skew = RadiusSquaredProfile::polynomial({1.0, 0.2, -1.0, -0.2}, -1.0, 1.0);
  const auto [lo, hi] = profile_latitudes(skew);
  CHECK(std::abs(lo - -0.705899187825162805990891921744) < 1e-12);
  CHECK(std::abs(hi - 0.706425246379450322976132691139) < 1e-12);
  const auto waist = profile_latitudes(RadiusSquaredProfile::polynomial({1.0, 0.0, 1.0, 0.0, -1.0}, -kWaist, kWaist));
  CHECK(std::abs(waist.second - 1.0) < 1e-12);
}

TEST_CASE("profile validation names the violated condition") {
  CHECK(code_of([] { RadiusSquaredProfile::ellipsoid(-1.0, 1.0); }) == ErrorCode::BadProfile);
  CHECK(code_of([] { RadiusSquaredProfile::polynomial({}, -1.0, 1.0); }) == ErrorCode::BadProfile);
  CHECK(code_of([] { RadiusSquaredProfile::polynomial({1.0}, 1.0, -1.0); }) == ErrorCode::BadProfile);
  // Does not vanish at the ends.
  CHECK(code_of([] { make_revolution(RadiusSquaredProfile::polynomial({1.0, 0.0, 1.0}, -1.0, 1.0)); }) ==
        ErrorCode::BadProfile);
  try {
    make_revolution(RadiusSquaredProfile::polynomial({1.0, 0.0, 1.0}, -1.0, 1.0));
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("vanish") != std::string::npos);
  }
}

TEST_CASE("revolution region value and derivatives") {
  const Region ball = make_revolution(RadiusSquaredProfile::ellipsoid(1.0, 1.0));
  CHECK(ball.kind() == RegionKind::Revolution);
  CHECK(ball.smooth());
  CHECK(ball.value({0.0, 0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(ball.value({0.6, 0.8, 0.0}) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(ball.value({0.0, 1.5, 0.0}) < 0.0);
  const HValue h = ball.eval({0.3, 0.2, -0.4});
  CHECK(h.grad.vt == doctest::Approx(-0.6));
  CHECK(h.grad.vx == doctest::Approx(-0.4));
  CHECK(h.grad.vy == doctest::Approx(0.8));
  CHECK(h.hess[0][0] == doctest::Approx(-2.0));
  CHECK(h.hess[1][1] == doctest::Approx(-2.0));
  CHECK(h.hess[0][1] == doctest::Approx(0.0));
  CHECK(ball.revolution()->t_upper == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(ball.bbox().contains({0.0, 0.9, 0.0}));
}

TEST_CASE("gradients agree with finite differences") {
  const Region e = make_revolution(RadiusSquaredProfile::polynomial({1.0, 0.2, -1.0, -0.2}, -1.0, 1.0));
  const Region t = make_transformed(e, ConformalMap({boost(0.4, {0.0, 1.0}), Translation{{0.2, 0.0, 0.1}}}));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> c(-0.5, 0.5);
  for (const Region* r : {&e, &t}) {
    for (int i = 0; i < 30; ++i) {
      const Event p{c(rng), c(rng), c(rng)};
      const HValue hv = r->eval(p);
      const double h = 1e-6;
      const double gt = (r->value({p.t + h, p.x, p.y}) - r->value({p.t - h, p.x, p.y})) / (2 * h);
      const double gx = (r->value({p.t, p.x + h, p.y}) - r->value({p.t, p.x - h, p.y})) / (2 * h);
      const double gy = (r->value({p.t, p.x, p.y + h}) - r->value({p.t, p.x, p.y - h})) / (2 * h);
      CHECK(std::abs(hv.grad.vt - gt) < 1e-7);
      CHECK(std::abs(hv.grad.vx - gx) < 1e-7);
      CHECK(std::abs(hv.grad.vy - gy) < 1e-7);
    }
  }
}

TEST_CASE("transformed regions are images of their base") {
  const Region ball = make_revolution(RadiusSquaredProfile::ellipsoid(1.0, 1.0));
  const ConformalMap m({boost(0.5, {1.0, 0.0}), Dilation{1.3}, Translation{{0.3, 0.2, -0.1}}});
  const Region img = make_transformed(ball, m);
  CHECK(img.kind() == RegionKind::Transformed);
  CHECK(img.base() != nullptr);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> c(-1.2, 1.2);
  for (int i = 0; i < 200; ++i) {
    const Event p{c(rng), c(rng), c(rng)};
    if (std::abs(ball.value(p)) < 1e-6) continue;
    CHECK((ball.value(p) > 0.0) == (img.value(m.apply(p)) > 0.0));
  }
  CHECK(img.value(img.interior_point()) > 0.0);
  CHECK(img.bbox().contains(m.apply({0.7, 0.0, 0.0})));
}

TEST_CASE("diamond and implicit domains") {
  const Region d = make_diamond();
  CHECK_FALSE(d.smooth());
  CHECK(d.value({0.0, 0.0, 0.0}) > 0.0);
  CHECK(d.value({0.0, 0.99, 0.0}) > 0.0);
  CHECK(d.value({0.5, 0.6, 0.0}) < 0.0);
  CHECK(code_of([&] { d.eval({0.0, 0.0, 0.0}); }) == ErrorCode::NotSupported);
  const Region u = smoothed_ball_union({-2.0, -2.0, 0.0}, {2.0, 2.0, 0.0}, 1.0);
  CHECK(u.value({-2.0, -2.0, 0.0}) > 0.0);
  CHECK(u.value({0.0, 0.0, 0.0}) < 0.0);
  CHECK_FALSE(u.in_domain({100.0, 0.0, 0.0}));
  CHECK(code_of([&] { u.eval({100.0, 0.0, 0.0}); }) == ErrorCode::OutsideDomain);
  CHECK(code_of([] { make_implicit(ImplicitSpec{}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("star-shapedness") {
  const Region ball = make_revolution(RadiusSquaredProfile::ellipsoid(1.0, 1.0));
  CHECK(star_shaped_check(ball, {0.0, 0.0, 0.0}, 200).passed);
  const Region u = smoothed_ball_union({-2.0, -2.0, 0.0}, {2.0, 2.0, 0.0}, 1.0);
  CHECK_FALSE(star_shaped_check(u, {-2.0, -2.0, 0.0}, 200).passed);
  const auto dirs = sphere_directions(100);
  REQUIRE(dirs.size() == 100);
  for (const auto& v : dirs) CHECK(std::abs(std::sqrt(v.vt * v.vt + v.vx * v.vx + v.vy * v.vy) - 1.0) < 1e-14);
}

TEST_CASE("region spec files") {
  const Region b = load_region_spec(NC_TEST_DATA "/ball.json");
  CHECK(b.revolution()->t_upper == doctest::Approx(1.0 / std::sqrt(2.0)));
  const Region boosted = load_region_spec(NC_TEST_DATA "/boosted_ball.json");
  CHECK(boosted.kind() == RegionKind::Transformed);
  CHECK(boosted.value({0.3, 0.2, -0.1}) > 0.0);
  CHECK(load_region_spec(NC_TEST_DATA "/diamond.json").kind() == RegionKind::Diamond);
  CHECK(load_region_spec(NC_TEST_DATA "/two_ball_union.json").kind() == RegionKind::Implicit);
  CHECK(code_of([] { load_region_spec(NC_TEST_DATA "/malformed.json"); }) == ErrorCode::Parse);
  CHECK(code_of([] { load_region_spec(NC_TEST_DATA "/unknown_kind.json"); }) == ErrorCode::Parse);
  CHECK(code_of([] { load_region_spec(NC_TEST_DATA "/absent.json"); }) == ErrorCode::Parse);
  CHECK(code_of([] { load_region_spec(NC_TEST_DATA "/bad_profile.json"); }) == ErrorCode::BadProfile);
  CHECK(code_of([] { parse_region_spec(R"({"kind": "ellipsoid", "a": "one", "b": 1})"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_region_spec(R"({"kind": "ellipsoid", "a": 1})"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_region_spec(R"([1, 2])"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_region_spec(R"({"kind": "transformed", "base": {"kind": "diamond"}, "translate": [1, 2]})"); }) ==
        ErrorCode::Parse);
  CHECK(code_of([] { parse_region_spec(R"({"kind": "transformed", "base": {"kind": "diamond"}, "dilate": 0})"); }) ==
        ErrorCode::InvalidArgument);
  // Factor order: boost, rotate, dilate, translate.
  const Region t = parse_region_spec(
      R"({"kind": "transformed", "base": {"kind": "ellipsoid", "a": 1, "b": 1}, "dilate": 2, "translate": [5, 0, 0]})");
  CHECK(t.value({5.0, 0.0, 0.0}) > 0.0);
  CHECK(t.value({5.0, 1.9, 0.0}) > 0.0);
  CHECK(t.value({5.0, 2.1, 0.0}) < 0.0);
}
