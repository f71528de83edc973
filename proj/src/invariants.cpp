#include "nullcontact/invariants.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "nullcontact/error.hpp"

namespace nc {

const char* to_string(RotationMethod m) { return m == RotationMethod::Quadrature ? "quadrature" : "traced"; }
const char* to_string(Orientation o) { return o == Orientation::CCW ? "ccw" : "cw"; }
const char* to_string(Verdict v) {
  return v == Verdict::Distinguished ? "Distinguished" : "IndistinguishableByInvariant";
}

RotationResult rotation_from_total(double total, RotationMethod method) {
  RotationResult r;
  r.total_angle = total;
  r.reduced = wrap_difference(total);
  r.method = method;
  r.orientation = total < 0.0 ? Orientation::CW : Orientation::CCW;
  return r;
}

RotationResult rotation_angle_quadrature(const RadiusSquaredProfile& profile, const Tolerance& tol) {
  tol.validate();
  const auto [lo, hi] = profile_latitudes(profile);
  auto f = [&profile](double t) {
    const double disc = 4.0 * profile.rho(t) - profile.d1(t) * profile.d1(t);
    return disc > 0.0 ? std::sqrt(disc) / profile.rho(t) : 0.0;
  };
  // The Plus family turns counterclockwise, so the angle is positive.
  return rotation_from_total(integrate(f, lo, hi, tol).value, RotationMethod::Quadrature);
}

// ---------------------------------------------------------------------------

CircleMapInterpolant::CircleMapInterpolant(const CircleMap& m) {
  const std::size_t n = m.input.size();
  if (n < 3 || m.lift.size() != n) throw Error(ErrorCode::InvalidArgument, "circle map needs >= 3 matched samples");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = wrap_angle(m.input[i]);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    x_.push_back(xs[i]);
    // Same lift value re-expressed at the reduced input.
    y_.push_back(m.lift[i] - m.input[i]);
  }
  // Displacements of one continuous lift differ by less than pi between
  // neighbours; remove stray multiples of 2pi.
  for (std::size_t k = 1; k < n; ++k) y_[k] = y_[k - 1] + wrap_difference(y_[k] - y_[k - 1]);
  double gap = kTwoPi - (x_.back() - x_.front());
  for (std::size_t k = 1; k < n; ++k) {
    if (x_[k] - x_[k - 1] <= 0.0) throw Error(ErrorCode::InvalidArgument, "duplicate circle-map inputs");
    gap = std::max(gap, x_[k] - x_[k - 1]);
  }
  if (gap >= kPi / 8.0) {
    std::ostringstream os;
    os << "circle-map samples too sparse: gap " << gap << " >= pi/8";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }

  auto h = [&](std::size_t i) { return i + 1 < n ? x_[i + 1] - x_[i] : x_[0] + kTwoPi - x_[n - 1]; };
  auto y = [&](std::size_t i) { return y_[i % n]; };
  Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t prev = (i + n - 1) % n, next = (i + 1) % n;
    const double hp = h(prev), hi = h(i);
    trip.emplace_back(i, prev, hp);
    trip.emplace_back(i, i, 2.0 * (hp + hi));
    trip.emplace_back(i, next, hi);
    rhs[static_cast<Eigen::Index>(i)] = 6.0 * ((y(i + 1) - y(i)) / hi - (y(i) - y(i + n - 1)) / hp);
  }
  a.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw Error(ErrorCode::IllConditioned, "periodic spline system is singular");
  const Eigen::VectorXd sol = lu.solve(rhs);
  m_.assign(sol.data(), sol.data() + sol.size());
}

std::size_t CircleMapInterpolant::locate(double& x) const {
  const double x0 = x_.front();
  x = x0 + wrap_angle(x - x0);
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double CircleMapInterpolant::displacement(double x) const {
  const std::size_t n = x_.size();
  const std::size_t i = locate(x);
  const std::size_t j = (i + 1) % n;
  const double xi = x_[i], xj = i + 1 < n ? x_[j] : x_[0] + kTwoPi, h = xj - xi;
  const double a = xj - x, b = x - xi;
  return m_[i] * a * a * a / (6 * h) + m_[j] * b * b * b / (6 * h) + (y_[i] / h - m_[i] * h / 6) * a +
         (y_[j] / h - m_[j] * h / 6) * b;
}

double CircleMapInterpolant::displacement_derivative(double x) const {
  const std::size_t n = x_.size();
  const std::size_t i = locate(x);
  const std::size_t j = (i + 1) % n;
  const double xi = x_[i], xj = i + 1 < n ? x_[j] : x_[0] + kTwoPi, h = xj - xi;
  const double a = xj - x, b = x - xi;
  return -m_[i] * a * a / (2 * h) + m_[j] * b * b / (2 * h) - (y_[i] / h - m_[i] * h / 6) + (y_[j] / h - m_[j] * h / 6);
}

double lifted_rotation_number(const CircleMap& m, long iterations) {
  if (iterations < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 iterations");
  const CircleMapInterpolant f(m);
  const int check = static_cast<int>(16 * m.input.size());
  for (int k = 0; k < check; ++k) {
    const double x = kTwoPi * (k + 0.5) / check;
    if (!(1.0 + f.displacement_derivative(x) > 0.0)) {
      std::ostringstream os;
      os << "interpolated lift is not increasing near x=" << x;
      throw Error(ErrorCode::NotMonotone, os.str());
    }
  }
  // Weighted Birkhoff average with the smooth bump exp(-1/(s(1-s))).
  double x = 0.0, num = 0.0, den = 0.0;
  for (long k = 0; k < iterations; ++k) {
    const double s = (k + 0.5) / static_cast<double>(iterations);
    const double w = std::exp(-1.0 / (s * (1.0 - s)));
    const double d = f.displacement(x);
    num += w * d;
    den += w;
    x += d;
  }
  return num / den;
}

double rotation_number_of_circle_map(const CircleMap& m, long iterations) {
  return wrap_difference(lifted_rotation_number(m, iterations));
}

// ---------------------------------------------------------------------------

namespace {

bool diamond_based(const Region& r) {
  if (r.kind() == RegionKind::Diamond) return true;
  return r.base() && diamond_based(*r.base());
}

RotationResult traced_revolution(const Region& r, const TraceOptions& o) {
  const RevolutionData& rev = *r.revolution();
  std::vector<double> angles;
  for (int k = 0; k < o.n_base_points; ++k) {
    const double phi = kTwoPi * k / o.n_base_points;
    const TorusPoint start = revolution_torus_point(rev, rev.t_lower, phi, Branch::Plus);
    const Leaf up = integrate_leaf(r, start, {o.tol, LeafDirection::Forward});
    if (up.end != LeafEnd::HitUpperSingular) throw Error(ErrorCode::Budget, "plus leaf did not reach the upper circle");
    TorusPoint turn = up.points.back();
    turn.branch = Branch::Minus;
    const Leaf down = integrate_leaf(r, turn, {o.tol, LeafDirection::Backward});
    if (down.end != LeafEnd::HitLowerSingular)
      throw Error(ErrorCode::Budget, "minus leaf did not return to the lower circle");
    angles.push_back(up.delta_phi + down.delta_phi);
  }
  const auto [mn, mx] = std::minmax_element(angles.begin(), angles.end());
  const double spread = *mx - *mn;
  if (spread > o.spread_tol) {
    std::ostringstream os;
    os << "per-point return angles spread by " << spread << " (tolerance " << o.spread_tol << ")";
    throw Error(ErrorCode::InconsistentHolonomy, os.str());
  }
  RotationResult res =
      rotation_from_total(std::accumulate(angles.begin(), angles.end(), 0.0) / angles.size(), RotationMethod::Traced);
  res.n_base_points = o.n_base_points;
  res.spread = spread;
  return res;
}

// Leaves of the chart foliation with v as parameter: du/dv = -lambda(S_v)/lambda(S_u).
double chart_half_leaf(const TorusChart& chart, double u0, double v_start, const Tolerance& tol, double* v_end) {
  auto lam = [&](double u, double v) {
    const ChartSample s = chart.eval(u, v);
    return std::pair{contact_form_on(s.ray, s.su), contact_form_on(s.ray, s.sv)};
  };
  OdeOptions opt;
  opt.tol = tol;
  opt.max_step = kPi / 32.0;
  const OdeEvent singular{[&](double v, std::span<const double> y) {
                            const ChartSample s = chart.eval(y[0], v);
                            return contact_form_on(s.ray, s.su) / std::sqrt(s.su[0] * s.su[0] + s.su[1] * s.su[1] +
                                                                             s.su[2] * s.su[2]);
                          },
                          EventDirection::Any, true};
  const OdeSolution sol = ode_integrate(
      [&](double v, std::span<const double> y, std::span<double> dy) {
        const auto [lu, lv] = lam(y[0], v);
        dy[0] = -lv / lu;
      },
      {u0}, v_start, v_start + kTwoPi, std::span<const OdeEvent>(&singular, 1), opt);
  if (!sol.stopped_by_event) throw Error(ErrorCode::Budget, "chart leaf did not reach a singular circle");
  *v_end = sol.trajectory.back_time();
  return sol.trajectory.back()[0] - u0;
}

RotationResult traced_chart(const Region& r, const TraceOptions& o) {
  const TorusChart chart = TorusChart::of(r);
  constexpr double offset = 1e-6;
  std::vector<double> angles;
  for (int k = 0; k < o.n_base_points; ++k) {
    const double u0 = kTwoPi * k / o.n_base_points;
    double v_mid, v_end;
    const double d1 = chart_half_leaf(chart, u0, chart.lower_v(u0) + offset, o.tol, &v_mid);
    const double d2 = chart_half_leaf(chart, u0 + d1, v_mid + offset, o.tol, &v_end);
    angles.push_back(d1 + d2);
  }
  const auto [mn, mx] = std::minmax_element(angles.begin(), angles.end());
  RotationResult res =
      rotation_from_total(std::accumulate(angles.begin(), angles.end(), 0.0) / angles.size(), RotationMethod::Traced);
  res.n_base_points = o.n_base_points;
  res.spread = *mx - *mn;
  return res;
}

RotationResult traced_ambient(const Region& r, const TraceOptions& o) {
  const LightlikeSet ls = lightlike_set(r, o.n_base_points);
  CircleMap map;
  std::vector<std::pair<double, double>> by_azimuth;  // (psi, displacement)
  std::vector<std::pair<double, Event>> circle;
  for (std::size_t k = 0; k < ls.lower.size(); ++k) {
    TorusPoint start;
    start.t = start.time_T = ls.lower[k].t;
    start.event = ls.lower[k];
    start.phi = ls.psi[k];
    start.branch = Branch::Plus;
    LeafOptions lo{o.tol, LeafDirection::Forward, &ls.axis, true};
    const Leaf up = integrate_leaf(r, start, lo);
    if (up.end != LeafEnd::HitUpperSingular) throw Error(ErrorCode::Budget, "plus leaf did not reach the upper circle");
    TorusPoint turn = up.points.back();
    turn.branch = Branch::Minus;
    lo.direction = LeafDirection::Backward;
    const Leaf down = integrate_leaf(r, turn, lo);
    if (down.end != LeafEnd::HitLowerSingular)
      throw Error(ErrorCode::Budget, "minus leaf did not return to the lower circle");
    const double disp = up.delta_phi + down.delta_phi;
    map.input.push_back(ls.psi[k]);
    map.lift.push_back(ls.psi[k] + disp);
    by_azimuth.emplace_back(wrap_angle(ls.psi[k]), disp);
    circle.emplace_back(wrap_angle(ls.psi[k]), ls.lower[k]);
  }
  const double total = lifted_rotation_number(map, o.iterations);

  // Arclength parametrisation of the lower circle: h(psi) = 2pi s(psi)/S.
  std::sort(circle.begin(), circle.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<double> s(circle.size() + 1, 0.0);
  for (std::size_t i = 0; i < circle.size(); ++i) {
    const Event& a = circle[i].second;
    const Event& b = circle[(i + 1) % circle.size()].second;
    s[i + 1] = s[i] + std::sqrt((b.t - a.t) * (b.t - a.t) + (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y));
  }
  CircleMap h;
  for (std::size_t i = 0; i < circle.size(); ++i) {
    h.input.push_back(circle[i].first);
    h.lift.push_back(kTwoPi * s[i] / s.back());
  }
  const CircleMapInterpolant hf(h);
  CircleMap in_arclength;
  for (const auto& [psi, disp] : by_azimuth) {
    in_arclength.input.push_back(hf(psi));
    in_arclength.lift.push_back(hf(psi + disp));
  }
  RotationResult res = rotation_from_total(total, RotationMethod::Traced);
  res.arclength_rotation = lifted_rotation_number(in_arclength, o.iterations);
  res.n_base_points = o.n_base_points;
  double mn = INFINITY, mx = -INFINITY;
  for (const auto& p : by_azimuth) {
    mn = std::min(mn, p.second);
    mx = std::max(mx, p.second);
  }
  res.spread = mx - mn;
  return res;
}

}  // namespace

RotationResult rotation_angle_traced(const Region& r, const TraceOptions& options) {
  options.tol.validate();
  if (options.n_base_points < 8) throw Error(ErrorCode::InvalidArgument, "need at least 8 base points");
  if (r.revolution()) return traced_revolution(r, options);
  if (diamond_based(r)) return traced_chart(r, options);
  return traced_ambient(r, options);
}

RotationResult best_rotation(const Region& r, const TraceOptions& options) {
  if (const RevolutionData* rev = r.revolution()) {
    RotationResult q = rotation_angle_quadrature(rev->profile);
    q.n_base_points = 0;
    return q;
  }
  return rotation_angle_traced(r, options);
}

double rotation_distance(double a, double b) {
  return std::min(std::abs(wrap_difference(a - b)), std::abs(wrap_difference(a + b)));
}

CompareVerdict compare_regions(const Region& a, const Region& b, double tol, const TraceOptions& options) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "comparison tolerance must be positive");
  CompareVerdict v;
  v.a = best_rotation(a, options);
  v.b = best_rotation(b, options);
  v.angle_a = v.a.reduced;
  v.angle_b = v.b.reduced;
  v.distance = rotation_distance(v.angle_a, v.angle_b);
  v.verdict = v.distance > tol ? Verdict::Distinguished : Verdict::IndistinguishableByInvariant;
  return v;
}

}  // namespace nc
