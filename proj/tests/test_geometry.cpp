#include <cmath>
#include <random>

#include "doctest.h"
#include "nullcontact/error.hpp"
#include "nullcontact/geometry.hpp"

using namespace nc;

namespace {

bool throws_code(const std::function<void()>& f, ErrorCode code) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

double dist(const Event& a, const Event& b) { return std::max({std::abs(a.t - b.t), std::abs(a.x - b.x), std::abs(a.y - b.y)}); }

// Minimal distance between the spatial point of `p` and the ray's position at time p.t.
double off_ray(const NullRay& r, const Event& p) { return dist(r.at(p.t), p); }

}  // namespace

TEST_CASE("angle reduction") {
  CHECK(wrap_angle(-0.5) == doctest::Approx(kTwoPi - 0.5));
  CHECK(wrap_angle(kTwoPi) == 0.0);
  CHECK(wrap_angle(7.0 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_difference(kPi) == doctest::Approx(kPi));
  CHECK(wrap_difference(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_difference(3.0 * kPi / 2.0) == doctest::Approx(-kPi / 2.0));
}

TEST_CASE("causal character") {
  CHECK(causal_character({1.0, 0.0, 0.0}).type == CausalType::Timelike);
  CHECK(causal_character({1.0, 0.0, 0.0}).orientation == TimeOrientation::Future);
  CHECK(causal_character({-1.0, 0.6, 0.8}).type == CausalType::Null);
  CHECK(causal_character({-1.0, 0.6, 0.8}).orientation == TimeOrientation::Past);
  CHECK(causal_character({0.5, 1.0, 0.0}).type == CausalType::Spacelike);
  CHECK_FALSE(causal_character({0.5, 1.0, 0.0}).orientation.has_value());
  CHECK(causal_character({0.0, 0.0, 0.0}).type == CausalType::Zero);
  CHECK(eta({1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}) == -4.0 + 10.0 + 18.0);
}

TEST_CASE("chart of a null geodesic") {
  const Event p{0.7, 1.0, -2.0};
  const NullRay r = chart_of_geodesic(p, {2.0, 0.0, 2.0});
  CHECK(r.theta == doctest::Approx(kPi / 2.0));
  CHECK(off_ray(r, p) < 1e-15);
  CHECK(r.q.x == doctest::Approx(1.0));
  CHECK(r.q.y == doctest::Approx(-2.7));
  CHECK(throws_code([&] { chart_of_geodesic(p, {1.0, 0.5, 0.0}); }, ErrorCode::NotNull));
  CHECK(throws_code([&] { chart_of_geodesic(p, {-1.0, 1.0, 0.0}); }, ErrorCode::NotFuture));
}

TEST_CASE("skies are Legendrian and pass through their event") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> c(-5.0, 5.0), a(0.0, kTwoPi);
  for (int i = 0; i < 1000; ++i) {
    const Event p{c(rng), c(rng), c(rng)};
    const double th = a(rng);
    CHECK(std::abs(contact_form_eval(sky(p, th), sky_derivative(p, th))) < 1e-12);
    CHECK(off_ray(sky(p, th), p) < 1e-12);
  }
}

TEST_CASE("contact form is non-degenerate on the chart") {
  // lambda(d/dq along u(theta)) = 1 and lambda(d/dtheta) = 0.
  const NullRay r({0.3, -0.2}, 1.1);
  CHECK(contact_form_eval(r, {unit(1.1), 0.0}) == doctest::Approx(1.0));
  CHECK(contact_form_eval(r, {{0.0, 0.0}, 1.0}) == 0.0);
  CHECK(contact_form_eval(r, {perp(unit(1.1)), 0.0}) == doctest::Approx(0.0).epsilon(1e-16));
}

TEST_CASE("Lorentz maps preserve the metric and time orientation") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  for (double rap : {0.1, 0.5, 1.7}) {
    const Lorentz L = boost(rap, {c(rng), c(rng)});
    CHECK_NOTHROW(validate_lorentz(L.matrix));
    for (int i = 0; i < 50; ++i) {
      const TangentVec v{c(rng), c(rng), c(rng)}, w{c(rng), c(rng), c(rng)};
      const ConformalMap m({L});
      CHECK(std::abs(eta(m.push(v), m.push(w)) - eta(v, w)) < 1e-11 * (1.0 + std::cosh(2.0 * rap)) * 10.0);
    }
  }
  Mat3 flip = identity3();
  flip[0][0] = -1.0;
  CHECK(throws_code([&] { validate_lorentz(flip); }, ErrorCode::InvalidArgument));
  CHECK(throws_code([] { boost(0.3, {0.0, 0.0}); }, ErrorCode::InvalidArgument));
  CHECK(throws_code([] { ConformalMap({Dilation{-1.0}}); }, ErrorCode::InvalidArgument));
}

TEST_CASE("conformal maps compose and invert") {
  const ConformalMap m({boost(0.4, {0.6, 0.8}), rotation(0.3), Dilation{2.5}, Translation{{0.1, -0.4, 0.7}}});
  const ConformalMap n({Translation{{1.0, 1.0, 1.0}}, boost(-0.2, {1.0, 0.0})});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> c(-3.0, 3.0);
  CHECK(m.scale() == doctest::Approx(2.5));
  for (int i = 0; i < 100; ++i) {
    const Event p{c(rng), c(rng), c(rng)};
    CHECK(dist(m.apply_inverse(m.apply(p)), p) < 1e-12);
    CHECK(dist(m.then(n).apply(p), n.apply(m.apply(p))) < 1e-12);
    // Dilations scale the metric by s^2.
    const TangentVec v{c(rng), c(rng), c(rng)};
    CHECK(std::abs(eta(m.push(v), m.push(v)) - 6.25 * eta(v, v)) < 1e-9);
    const TangentVec back = m.pull(m.push(v));
    CHECK(std::abs(back.vt - v.vt) + std::abs(back.vx - v.vx) + std::abs(back.vy - v.vy) < 1e-12);
  }
}

TEST_CASE("conformal maps act on the chart and preserve skies") {
  const ConformalMap m({boost(0.5, {1.0, 0.0}), Dilation{0.8}, Translation{{0.3, 0.2, -0.1}}});
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> c(-2.0, 2.0), a(0.0, kTwoPi);
  for (int i = 0; i < 200; ++i) {
    const Event p{c(rng), c(rng), c(rng)};
    const NullRay r = sky(p, a(rng));
    const NullRay image = apply_conformal_ray(m, r);
    // The image of every event on the ray lies on the image ray.
    for (double s : {-1.0, 0.0, 2.0}) CHECK(off_ray(image, m.apply(r.at(s))) < 1e-11);
    CHECK(off_ray(image, apply_conformal(m, p)) < 1e-11);
  }
}
