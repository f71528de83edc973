#include <cmath>
#include <random>

#include "doctest.h"
#include "nullcontact/error.hpp"
#include "nullcontact/foliation.hpp"

using namespace nc;

namespace {

Region ellipsoid(double a, double b) { return make_revolution(RadiusSquaredProfile::ellipsoid(a, b)); }

Region boosted_ball() {
  return make_transformed(ellipsoid(1.0, 1.0), ConformalMap({boost(0.5, {1.0, 0.0}), Translation{{0.3, 0.2, -0.1}}}));
}

double chart_gap(const NullRay& a, const NullRay& b) {
  return std::max({std::abs(a.q.x - b.q.x), std::abs(a.q.y - b.q.y), std::abs(wrap_difference(a.theta - b.theta))});
}

}  // namespace

TEST_CASE("closed-form torus points are tangent null rays") {
  const Region r = ellipsoid(1.0, 2.0);
  const RevolutionData& rev = *r.revolution();
  for (double t : {-0.3, 0.0, 0.25}) {
    for (Branch b : {Branch::Plus, Branch::Minus}) {
      const TorusPoint p = revolution_torus_point(rev, t, 0.9, b);
      CHECK(std::abs(r.value(p.event)) < 1e-14);
      CHECK(std::abs(eta(p.direction, p.direction)) < 1e-13);
      CHECK(std::abs(p.chart.at(p.event.t).x - p.event.x) < 1e-13);
      const Tangency tg = tangency_point(r, p.chart);
      CHECK(std::abs(tg.G) < 1e-12);
    }
  }
  CHECK_THROWS_AS(revolution_torus_point(rev, 0.0, 0.0, Branch::Merged), Error);
  CHECK_NOTHROW(revolution_torus_point(rev, rev.t_upper, 0.0, Branch::Merged));
}

TEST_CASE("boundary torus of transformed regions") {
  const auto pts = boundary_torus(boosted_ball(), 8, 8);
  CHECK(pts.size() >= 100);
  const Region r = boosted_ball();
  for (const auto& p : pts) CHECK(std::abs(r.value(p.event)) < 1e-10);
}

TEST_CASE("torus chart partial derivatives") {
  for (const Region& r : {ellipsoid(1.0, 1.0), ellipsoid(1.0, 2.0), make_diamond()}) {
    const TorusChart chart = TorusChart::of(r);
    for (double u : {0.3, 2.0}) {
      for (double dv : {0.7, 2.1, 4.0}) {
        const double v = chart.lower_v(u) + dv;
        const ChartSample s = chart.eval(u, v);
        const double h = 1e-6;
        const ChartSample up = chart.eval(u + h, v), um = chart.eval(u - h, v);
        const ChartSample vp = chart.eval(u, v + h), vm = chart.eval(u, v - h);
        for (int k = 0; k < 2; ++k) {
          CHECK(std::abs((up.value[k] - um.value[k]) / (2 * h) - s.su[k]) < 1e-6);
          CHECK(std::abs((vp.value[k] - vm.value[k]) / (2 * h) - s.sv[k]) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("chart foliation direction lies in the contact kernel") {
  const TorusChart chart = TorusChart::of(ellipsoid(1.0, 2.0));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> a(0.0, kTwoPi), off(0.1, kPi - 0.1);
  for (int i = 0; i < 100; ++i) {
    const double u = a(rng);
    const double v = chart.lower_v(u) + off(rng) + (i % 2 ? kPi : 0.0);
    const FoliationDirection d = chart_foliation_direction(chart, u, v);
    CHECK_FALSE(d.singular);
    const ChartSample s = chart.eval(u, v);
    CHECK(std::abs(contact_form_on(s.ray, d.direction)) < 1e-12);
  }
  // Singular on the lightlike circles.
  CHECK(chart_foliation_direction(chart, 0.5, chart.lower_v(0.5)).singular);
  CHECK(chart_foliation_direction(chart, 0.5, chart.lower_v(0.5) + kPi).singular);
}

TEST_CASE("singular sets match the lightlike circles") {
  CHECK(singular_set(ellipsoid(1.0, 1.0), 256, 1e-6).hausdorff < 1e-8);
  CHECK(singular_set(ellipsoid(1.0, 2.0), 256, 1e-6).hausdorff < 1e-8);
  const SingularSet d = singular_set(make_diamond(), 256, 1e-8);
  CHECK(d.hausdorff < 1e-8);
  // Diamond: theta = azimuth(q) and azimuth(q) + pi on the unit circle.
  for (const auto& p : d.lower.points) {
    CHECK(std::abs(p.chart.q.norm() - 1.0) < 1e-14);
    CHECK(std::abs(wrap_difference(p.chart.theta - std::atan2(p.chart.q.y, p.chart.q.x))) < 1e-12);
  }
  for (const auto& p : d.upper.points)
    CHECK(std::abs(wrap_difference(p.chart.theta - std::atan2(p.chart.q.y, p.chart.q.x) - kPi)) < 1e-12);
  CHECK(singular_set(boosted_ball(), 128, 1e-6).hausdorff < 1e-6);
}

TEST_CASE("leaves run between the singular circles with monotone time") {
  for (const Region& r : {ellipsoid(1.0, 1.0), ellipsoid(2.0, 1.0), boosted_ball()}) {
    const auto leaves = leaf_family(r, 8);
    REQUIRE(leaves.size() == 16);
    for (std::size_t k = 0; k < leaves.size(); ++k) {
      const Leaf& leaf = leaves[k];
      CHECK(leaf.end == (k % 2 == 0 ? LeafEnd::HitUpperSingular : LeafEnd::HitLowerSingular));
      for (std::size_t i = 1; i < leaf.points.size(); ++i) {
        const double step = leaf.points[i].time_T - leaf.points[i - 1].time_T;
        CHECK((k % 2 == 0 ? step : -step) > 0.0);
      }
      for (const auto& p : leaf.points) CHECK(std::abs(r.value(p.event)) < 1e-8);
    }
  }
}

TEST_CASE("revolution leaves from the generic tracer agree with the scalar equation") {
  const Region r = ellipsoid(1.0, 2.0);
  const TorusPoint start = revolution_torus_point(*r.revolution(), r.revolution()->t_lower, 0.4, Branch::Plus);
  LeafOptions o;
  const Leaf scalar = integrate_leaf(r, start, o);
  o.ambient = true;
  const Leaf ambient = integrate_leaf(r, start, o);
  CHECK(std::abs(scalar.delta_phi - ambient.delta_phi) < 1e-6);
  CHECK(std::abs(scalar.points.back().t - r.revolution()->t_upper) < 1e-9);
}

TEST_CASE("leaf tangents are colinear with the chart foliation") {
  const Region r = ellipsoid(1.0, 1.0);
  const TorusChart chart = TorusChart::of(r);
  for (double u : {0.2, 3.0}) {
    for (double dv : {0.4, 1.3, 2.8, 4.0, 5.5}) {
      const double v = chart.lower_v(u) + dv;
      const ChartSample s = chart.eval(u, v);
      TorusPoint p;
      p.t = p.time_T = s.t;
      p.phi = std::atan2(s.event.y, s.event.x);
      p.branch = s.branch;
      p.chart = s.ray;
      p.event = s.event;
      p.direction = s.direction;
      CHECK(line_angle(chart_foliation_direction(chart, u, v).direction, leaf_chart_tangent(r, p)) < 1e-6);
    }
  }
}

TEST_CASE("lightlike set of a boosted ball") {
  const Region r = boosted_ball();
  const LightlikeSet ls = lightlike_set(r, 16);
  REQUIRE(ls.lower.size() == 16);
  for (const auto* ring : {&ls.lower, &ls.upper})
    for (const Event& p : *ring) {
      CHECK(std::abs(r.value(p)) < 1e-9);
      CHECK(std::abs(band_indicator(r.eval(p).grad)) < 1e-8);
    }
  CHECK_THROWS_AS(lightlike_set(r, 4), Error);
}

TEST_CASE("dividing set of the dilation field") {
  // lambda(Y) at q = u(phi), theta: the closed form (q - c) . u(theta).
  const NullRay ray({0.3, -0.2}, 1.0);
  CHECK(lambda_dilation(ray, {0.0, 0.0, 0.0}) == doctest::Approx(0.3 * std::cos(1.0) - 0.2 * std::sin(1.0)));
  for (const Region& r : {ellipsoid(1.0, 1.0), ellipsoid(1.0, 2.0)}) {
    const DividingSet d = dividing_set(r, {0.0, 0.0, 0.0}, 64, 128);
    REQUIRE(d.components.size() == 2);
    for (const auto& c : d.components) {
      CHECK(std::abs(c.latitude) < 1e-9);
      CHECK(c.latitude_spread < 1e-9);
    }
    CHECK(d.y_transverse);
    CHECK(d.foliation_transverse);
    CHECK(d.separates);
  }
  // Not star-shaped about a point outside.
  CHECK_THROWS_AS(dividing_set(ellipsoid(1.0, 1.0), {0.0, 3.0, 0.0}, 16, 32), Error);
}

TEST_CASE("chart points of the diamond") {
  const TorusChart chart = TorusChart::of(make_diamond());
  const ChartSample s = chart.eval(0.7, 2.0);
  CHECK(chart_gap(s.ray, diamond_boundary_torus(0.7, 2.0)) < 1e-15);
}
