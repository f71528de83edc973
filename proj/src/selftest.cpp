#include "nullcontact/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "nullcontact/error.hpp"
#include "nullcontact/invariants.hpp"

namespace nc {

namespace {

struct Outcome {
  bool passed;
  double value;
  double threshold;
  std::string detail;
};

class Suite {
public:
  void check(int criterion, std::string name, const std::function<Outcome()>& body) {
    CheckResult r;
    r.criterion = criterion;
    r.name = std::move(name);
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = body();
      r.passed = o.passed;
      r.value = o.value;
      r.threshold = o.threshold;
      r.detail = o.detail;
    } catch (const Error& e) {
      r.passed = false;
      r.value = NAN;
      r.detail = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }

  std::vector<CheckResult> results;
};

Outcome below(double value, double threshold, std::string detail = {}) {
  return {value < threshold, value, threshold, std::move(detail)};
}

Outcome holds(bool ok, std::string detail = {}) { return {ok, ok ? 1.0 : 0.0, 1.0, std::move(detail)}; }

double ellipsoid_angle(double e) { return kTwoPi * (std::sqrt(1.0 + e * e) - e) / e; }

Region ellipsoid(double a, double b) { return make_revolution(RadiusSquaredProfile::ellipsoid(a, b)); }

Region boosted_ball() {
  return make_transformed(ellipsoid(1.0, 1.0), ConformalMap({boost(0.5, {1.0, 0.0}), Translation{{0.3, 0.2, -0.1}}}));
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// Max angle between the chart foliation line and the traced leaf tangent on
// an n_u x n_v grid kept off the singular circles.
double foliation_mismatch(const Region& r, int n_u, int n_v) {
  const TorusChart chart = TorusChart::of(r);
  double worst = 0.0;
  for (int i = 0; i < n_u; ++i) {
    const double u = kTwoPi * (i + 0.25) / n_u;
    for (int j = 0; j < n_v; ++j) {
      const double v = chart.lower_v(u) + kTwoPi * (j + 0.3) / n_v;
      const FoliationDirection fd = chart_foliation_direction(chart, u, v);
      const ChartSample s = chart.eval(u, v);
      TorusPoint p;
      p.t = p.time_T = s.t;
      p.phi = std::atan2(s.event.y, s.event.x);
      p.branch = s.branch;
      p.chart = s.ray;
      p.event = s.event;
      p.direction = s.direction;
      worst = std::max(worst, line_angle(fd.direction, leaf_chart_tangent(r, p)));
    }
  }
  return worst;
}

// f(x) = x + w + eps sin x, conjugated by h(x) = x + k sin x.
CircleMap sampled_map(int n, double w, double eps, double k) {
  auto f = [&](double x) { return x + w + eps * std::sin(x); };
  auto h = [&](double x) { return x + k * std::sin(x); };
  auto h_inv = [&](double y) {
    double x = y;
    for (int it = 0; it < 60; ++it) x -= (h(x) - y) / (1.0 + k * std::cos(x));
    return x;
  };
  CircleMap m;
  for (int i = 0; i < n; ++i) {
    const double x = kTwoPi * i / n;
    m.input.push_back(x);
    m.lift.push_back(k == 0.0 ? f(x) : h(f(h_inv(x))));
  }
  return m;
}

}  // namespace

std::vector<CheckResult> run_selftest(const SelftestOptions& options) {
  Suite s;
  const bool full = !options.quick;
  const Region ball = ellipsoid(1.0, 1.0);
  const double ball_angle = kTwoPi * (std::sqrt(2.0) - 1.0);

  // 1. Ellipsoid family: closed form, quadrature, tracing.
  for (double e : {0.5, 1.0, 2.0}) {
    const std::string tag = "ellipsoid e=" + fmt("%g", e);
    const Region r = ellipsoid(1.0, e);
    const double exact = ellipsoid_angle(e);
    const auto start = std::chrono::steady_clock::now();
    s.check(1, tag + " quadrature rel err", [&] {
      return below(std::abs(rotation_angle_quadrature(r.revolution()->profile).total_angle / exact - 1.0), 1e-8);
    });
    s.check(1, tag + " traced rel err", [&] {
      return below(std::abs(rotation_angle_traced(r).total_angle / exact - 1.0), options.traced_rel_tol);
    });
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    s.check(1, tag + " runtime [s]", [&] { return below(secs, 1.0); });
  }

  // 2. Unit ball anchor.
  s.check(2, "ball |reduced| quadrature", [&] {
    return below(std::abs(std::abs(rotation_angle_quadrature(ball.revolution()->profile).reduced) - ball_angle), 1e-6);
  });
  s.check(2, "ball |reduced| traced", [&] {
    return below(std::abs(std::abs(rotation_angle_traced(ball).reduced) - ball_angle), 1e-6);
  });

  // 3. Conformal invariance.
  if (full) {
    s.check(3, "boosted+translated ball traced", [&] {
      const RotationResult r = rotation_angle_traced(boosted_ball());
      return below(rotation_distance(r.reduced, ball_angle), 1e-3, "reduced " + fmt("%.10f", r.reduced));
    });
    s.check(3, "dilated ball traced", [&] {
      const Region d = make_transformed(ball, ConformalMap({Dilation{1.7}}));
      return below(rotation_distance(rotation_angle_traced(d).reduced, ball_angle), 1e-3);
    });
  }

  // 4. Diamond.
  const Region diamond = make_diamond();
  s.check(4, "diamond singular set", [&] { return below(singular_set(diamond, 256, 1e-8).hausdorff, 1e-8); });
  s.check(4, "diamond return map identity", [&] {
    return below(std::abs(rotation_angle_traced(diamond).total_angle), 1e-6);
  });
  s.check(4, "compare(ball, diamond) distinguished", [&] {
    const CompareVerdict v = compare_regions(ball, diamond);
    return holds(v.verdict == Verdict::Distinguished, "distance " + fmt("%.6f", v.distance));
  });

  // 5. Chart foliation against traced leaves.
  {
    const int n_u = full ? 40 : 10, n_v = full ? 25 : 10;
    for (double e : {1.0, 2.0}) {
      const Region r = ellipsoid(1.0, e);
      const std::string tag = e == 1.0 ? "ball" : "ellipsoid(1,2)";
      s.check(5, tag + " foliation colinearity [rad]", [&] { return below(foliation_mismatch(r, n_u, n_v), 1e-6); });
      s.check(5, tag + " singular set", [&] { return below(singular_set(r, 256, 1e-6).hausdorff, 1e-6); });
    }
  }

  // 6. Lightlike latitudes.
  for (auto [a, b] : {std::pair{1.0, 1.0}, {1.0, 2.0}, {2.0, 1.0}, {1.0, 0.5}, {1.5, 0.7}}) {
    s.check(6, "latitudes a=" + fmt("%g", a) + " b=" + fmt("%g", b), [&] {
      const Region r = ellipsoid(a, b);
      const double expect = a * a / std::sqrt(a * a + b * b);
      const auto [lo, hi] = lightlike_latitudes(r.revolution()->profile);
      const BoundaryPoint bp = classify_boundary_point(r, {hi, std::sqrt(r.revolution()->profile.rho(hi)), 0.0});
      const double err = std::max(std::abs(lo + expect), std::abs(hi - expect));
      return Outcome{err < 1e-10 && bp.causal_class == BoundaryClass::LightlikePart, err, 1e-10,
                     std::string("class at t+: ") + to_string(bp.causal_class)};
    });
  }

  // 7. Strong null convexity.
  s.check(7, "ball hessian_min_abs = 4", [&] {
    const ConvexityReport c = check_strong_null_convexity(ball);
    return Outcome{c.passed() && std::abs(c.hessian_min_abs - 4.0) < 1e-9, std::abs(c.hessian_min_abs - 4.0), 1e-9,
                   c.passed() ? "passed" : "failed"};
  });
  s.check(7, "rho=1+t^2-t^4 flagged at t=0", [&] {
    const double tm = std::sqrt((1.0 + std::sqrt(5.0)) / 2.0);
    const Region w = make_revolution(RadiusSquaredProfile::polynomial({1.0, 0.0, 1.0, 0.0, -1.0}, -tm, tm));
    const ConvexityReport c = check_strong_null_convexity(w);
    return Outcome{!c.passed() && !c.hessian_ok && std::abs(c.hessian_argmin.t) < 1e-6, std::abs(c.hessian_argmin.t),
                   1e-6, "hessian_min_abs " + fmt("%.3g", c.hessian_min_abs)};
  });
  s.check(7, "two-ball union fails chord test", [&] {
    const ConvexityReport c = check_strong_null_convexity(smoothed_ball_union({-2.0, -2.0, 0.0}, {2.0, 2.0, 0.0}, 1.0));
    return holds(!c.chord_connected_ok);
  });

  // 8. Dividing set of the dilation field.
  for (double e : {1.0, 2.0}) {
    const std::string tag = e == 1.0 ? "ball" : "ellipsoid(1,2)";
    s.check(8, tag + " dividing set", [&] {
      const DividingSet d = dividing_set(ellipsoid(1.0, e), {0.0, 0.0, 0.0}, full ? 128 : 32, full ? 256 : 64);
      double lat = 0.0;
      for (const auto& c : d.components) lat = std::max({lat, std::abs(c.latitude), c.latitude_spread});
      const bool ok = d.components.size() == 2 && lat < 1e-6 && d.y_transverse && d.foliation_transverse && d.separates;
      return Outcome{ok, lat, 1e-6,
                     std::to_string(d.components.size()) + " components, transverse " +
                         (d.foliation_transverse ? "yes" : "no") + ", separates " + (d.separates ? "yes" : "no")};
    });
  }

  // 9. Properties.
  s.check(9, "skies Legendrian", [&] {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-3.0, 3.0), angle(0.0, kTwoPi);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      const Event p{coord(rng), coord(rng), coord(rng)};
      const double th = angle(rng);
      worst = std::max(worst, std::abs(contact_form_eval(sky(p, th), sky_derivative(p, th))));
    }
    return below(worst, 1e-12);
  });
  {
    std::vector<std::pair<std::string, Region>> regions{{"ball", ball}, {"ellipsoid(1,2)", ellipsoid(1.0, 2.0)}};
    if (full) regions.emplace_back("boosted ball", boosted_ball());
    for (const auto& [tag, r] : regions) {
      s.check(9, tag + " leaves: time_T monotone, none closed", [&] {
        const std::vector<Leaf> leaves = leaf_family(r, full ? 16 : 4);
        int bad_monotone = 0, closed = 0;
        for (const Leaf& leaf : leaves) {
          const double dir = leaf.points.back().time_T > leaf.points.front().time_T ? 1.0 : -1.0;
          for (std::size_t i = 1; i < leaf.points.size(); ++i)
            if (!(dir * (leaf.points[i].time_T - leaf.points[i - 1].time_T) > 0.0)) ++bad_monotone;
          if (leaf.end == LeafEnd::Budget) ++closed;
        }
        return holds(bad_monotone == 0 && closed == 0, std::to_string(leaves.size()) + " leaves, " +
                                                           std::to_string(bad_monotone) + " non-monotone steps, " +
                                                           std::to_string(closed) + " unterminated");
      });
    }
  }
  s.check(9, "rotation number conjugacy invariance", [&] {
    const double a = lifted_rotation_number(sampled_map(64, 1.1, 0.2, 0.0), 20000);
    const double b = lifted_rotation_number(sampled_map(64, 1.1, 0.2, 0.25), 20000);
    return below(std::abs(a - b), 1e-6);
  });
  if (full) {
    s.check(9, "boosted ball azimuth vs arclength", [&] {
      const RotationResult r = rotation_angle_traced(boosted_ball());
      return below(std::abs(r.total_angle - r.arclength_rotation), 1e-6);
    });
  }
  s.check(9, "angle(e) strictly decreasing", [&] {
    double prev = INFINITY, min_drop = INFINITY;
    for (int i = 0; i < 20; ++i) {
      const double e = 0.25 * std::pow(16.0, i / 19.0);
      const double angle = rotation_angle_quadrature(RadiusSquaredProfile::ellipsoid(1.0, e)).total_angle;
      min_drop = std::min(min_drop, prev - angle);
      prev = angle;
    }
    return Outcome{min_drop > 0.0, min_drop, 0.0, "smallest decrease"};
  });
  return s.results;
}

std::string selftest_table(const std::vector<CheckResult>& results) {
  std::string out;
  char line[256];
  int failed = 0;
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%-4s [%d] %-46s value %-12.4g bound %-10.3g %7.3fs  %s\n",
                  r.passed ? "PASS" : "FAIL", r.criterion, r.name.c_str(), r.value, r.threshold, r.seconds,
                  r.detail.c_str());
    out += line;
    if (!r.passed) ++failed;
  }
  std::snprintf(line, sizeof line, "%d checks, %d failed\n", static_cast<int>(results.size()), failed);
  return out + line;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

}  // namespace nc
