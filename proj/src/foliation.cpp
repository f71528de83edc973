#include "nullcontact/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nullcontact/error.hpp"

namespace nc {

const char* to_string(Branch b) {
  switch (b) {
    case Branch::Plus: return "plus";
    case Branch::Minus: return "minus";
    case Branch::Merged: return "merged";
  }
  return "?";
}

const char* to_string(LeafEnd e) {
  switch (e) {
    case LeafEnd::HitLowerSingular: return "lower_singular";
    case LeafEnd::HitUpperSingular: return "upper_singular";
    case LeafEnd::Budget: return "budget";
  }
  return "?";
}

namespace {

double lift_near(double raw, double reference) { return reference + wrap_difference(raw - reference); }

ChartCoords coords_of(const NullRay& ray, double theta_reference) {
  return {ray.q.x, ray.q.y, lift_near(ray.theta, theta_reference)};
}

ChartCoords sub(const ChartCoords& a, const ChartCoords& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
ChartCoords scaled(double s, const ChartCoords& a) { return {s * a[0], s * a[1], s * a[2]}; }
double norm3(const ChartCoords& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }
ChartCoords cross3(const ChartCoords& a, const ChartCoords& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double det3(const ChartCoords& a, const ChartCoords& b, const ChartCoords& c) {
  const ChartCoords x = cross3(b, c);
  return a[0] * x[0] + a[1] * x[1] + a[2] * x[2];
}

// Chart distance with theta compared on the circle.
double chart_distance(const ChartCoords& a, const ChartCoords& b) {
  const double dq1 = a[0] - b[0], dq2 = a[1] - b[1], dth = wrap_difference(a[2] - b[2]);
  return std::sqrt(dq1 * dq1 + dq2 * dq2 + dth * dth);
}

struct RevolutionLocal {
  double r, dr, c;  // r, r', sqrt(1 - r'^2) clamped at 0
};

RevolutionLocal revolution_local(const RadiusSquaredProfile& p, double t) {
  const double rho = p.rho(t);
  if (!(rho > 0.0)) {
    std::ostringstream os;
    os << "latitude t=" << t << " is outside the profile's open span";
    throw Error(ErrorCode::OutsideDomain, os.str());
  }
  const double r = std::sqrt(rho);
  const double dr = p.d1(t) / (2.0 * r);
  return {r, dr, std::sqrt(std::max(0.0, 1.0 - dr * dr))};
}

// r'' = (2 rho rho'' - rho'^2) / (4 rho^{3/2})
double revolution_r2(const RadiusSquaredProfile& p, double t) {
  const double rho = p.rho(t), d1 = p.d1(t), d2 = p.d2(t);
  return (2.0 * rho * d2 - d1 * d1) / (4.0 * rho * std::sqrt(rho));
}

double branch_sign(Branch b) {
  if (b == Branch::Merged) throw Error(ErrorCode::InvalidArgument, "a merged point has no lightlike family");
  return b == Branch::Plus ? 1.0 : -1.0;
}

TorusPoint assemble(const Event& e, Vec2 d, double phi, Branch branch) {
  d = (1.0 / d.norm()) * d;
  TorusPoint tp;
  tp.t = e.t;
  tp.phi = phi;
  tp.branch = branch;
  tp.event = e;
  tp.direction = {1.0, d.x, d.y};
  tp.chart = chart_of_geodesic(e, tp.direction);
  tp.time_T = e.t;
  return tp;
}

// Torus point with the square root clamped; used along leaves that end on a
// singular circle.
TorusPoint revolution_point_clamped(const RadiusSquaredProfile& p, double t, double phi, double sign,
                                    Branch branch) {
  const RevolutionLocal loc = revolution_local(p, t);
  const Vec2 u = unit(phi);
  const Vec2 d = loc.dr * u + (sign * loc.c) * perp(u);
  return assemble({t, loc.r * u.x, loc.r * u.y}, d, phi, branch);
}

TorusPoint map_point(const ConformalMap& m, const TorusPoint& p) {
  const Event e = m.apply(p.event);
  const TangentVec v = m.push(p.direction);
  const Vec2 d = (1.0 / v.vt) * v.spatial();
  return assemble(e, d, p.phi, p.branch);
}

TorusPoint diamond_point(double phi, double theta) {
  const double s = std::sin(theta - phi);
  const Branch b = std::abs(s) < 1e-14 ? Branch::Merged : (s > 0.0 ? Branch::Plus : Branch::Minus);
  const Vec2 u = unit(phi);
  return assemble({0.0, u.x, u.y}, unit(theta), phi, b);
}

Axis default_axis(const Region& r) {
  if (r.revolution()) return {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
  return time_axis(r);
}

}  // namespace

TorusPoint revolution_torus_point(const RevolutionData& rev, double t, double phi, Branch branch) {
  const double scale = std::max(1.0, std::abs(rev.t_upper - rev.t_lower));
  const double edge = 1e-9 * scale;
  if (t < rev.t_lower - edge || t > rev.t_upper + edge) {
    std::ostringstream os;
    os << "latitude t=" << t << " is outside the timelike band [" << rev.t_lower << ", " << rev.t_upper << "]";
    throw Error(ErrorCode::OutsideDomain, os.str());
  }
  if (branch == Branch::Merged) {
    if (std::min(std::abs(t - rev.t_lower), std::abs(t - rev.t_upper)) > edge)
      throw Error(ErrorCode::InvalidArgument, "branches merge only at the lightlike latitudes");
    return revolution_point_clamped(rev.profile, t, phi, 0.0, Branch::Merged);
  }
  return revolution_point_clamped(rev.profile, t, phi, branch_sign(branch), branch);
}

std::vector<TorusPoint> boundary_torus(const Region& r, int n_t, int n_phi) {
  if (n_t < 2 || n_phi < 1) throw Error(ErrorCode::InvalidArgument, "torus resolution must be at least 2 x 1");
  std::vector<TorusPoint> out;
  switch (r.kind()) {
    case RegionKind::Revolution: {
      const RevolutionData& rev = *r.revolution();
      for (int i = 0; i < n_t; ++i) {
        const double t = i == n_t - 1 ? rev.t_upper : rev.t_lower + (rev.t_upper - rev.t_lower) * i / (n_t - 1);
        for (int j = 0; j < n_phi; ++j) {
          const double phi = kTwoPi * j / n_phi;
          if (i == 0 || i == n_t - 1) {
            out.push_back(revolution_torus_point(rev, t, phi, Branch::Merged));
          } else {
            out.push_back(revolution_torus_point(rev, t, phi, Branch::Plus));
            out.push_back(revolution_torus_point(rev, t, phi, Branch::Minus));
          }
        }
      }
      return out;
    }
    case RegionKind::Diamond: {
      for (int j = 0; j < n_phi; ++j) {
        const double phi = kTwoPi * j / n_phi;
        for (int i = 0; i < 2 * (n_t - 1); ++i) out.push_back(diamond_point(phi, phi + kPi * i / (n_t - 1)));
      }
      return out;
    }
    case RegionKind::Transformed: {
      for (const TorusPoint& p : boundary_torus(*r.base(), n_t, n_phi)) out.push_back(map_point(*r.map(), p));
      return out;
    }
    case RegionKind::Implicit: break;
  }
  const Axis axis = default_axis(r);
  const double L = r.length_scale();
  for (const Event& e : sample_boundary(r, n_t, std::max(16, 4 * n_phi))) {
    const BoundaryPoint bp = classify_boundary_point(r, e);
    for (std::size_t k = 0; k < bp.null_dirs.size(); ++k) {
      const Branch b = bp.null_dirs.size() == 1 ? Branch::Merged : (k == 0 ? Branch::Plus : Branch::Minus);
      TorusPoint tp = assemble(e, bp.null_dirs[k].spatial(), axis.azimuth(e), b);
      const Tangency tg = tangency_point(r, tp.chart);
      const TangentVec g = r.eval(e).grad;
      if (tg.G > 1e-7 * L * std::sqrt(g.vt * g.vt + g.vx * g.vx + g.vy * g.vy)) {
        std::ostringstream os;
        os << "ray tangent at (" << e.t << ", " << e.x << ", " << e.y << ") enters the region (G=" << tg.G << ")";
        throw Error(ErrorCode::NotOnBoundary, os.str());
      }
      out.push_back(tp);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

ChartSample TorusChart::eval(double u, double v) const { return eval_(u, v); }

TorusChart TorusChart::of(const Region& r) {
  TorusChart chart;
  switch (r.kind()) {
    case RegionKind::Revolution: {
      const RevolutionData rev = *r.revolution();
      const auto& prof = rev.profile;
      constexpr int n = 2000;
      for (int i = 0; i <= n; ++i) {
        const double t = rev.t_lower + (rev.t_upper - rev.t_lower) * i / n;
        if (!(revolution_r2(prof, t) < 0.0))
          throw Error(ErrorCode::NotSupported, "torus chart needs r'' < 0 across the timelike band");
      }
      chart.coords_ = "phi,alpha";
      chart.lower_v_ = [](double) { return 0.0; };
      chart.eval_ = [rev](double phi, double alpha) {
        const auto& p = rev.profile;
        const double ca = std::cos(alpha), sa = std::sin(alpha);
        double t;
        if (ca >= 1.0) {
          t = rev.t_lower;
        } else if (ca <= -1.0) {
          t = rev.t_upper;
        } else {
          auto f = [&](double s) { return p.d1(s) / (2.0 * std::sqrt(p.rho(s))) - ca; };
          const double fl = f(rev.t_lower), fu = f(rev.t_upper);
          if (fl <= 0.0) t = rev.t_lower;
          else if (fu >= 0.0) t = rev.t_upper;
          else t = find_root(f, rev.t_lower, rev.t_upper, Tolerance{1e-15, 1e-15, 500});
        }
        const double r = std::sqrt(p.rho(t));
        const double t_alpha = -sa / revolution_r2(p, t);
        const Vec2 u = unit(phi), d = unit(phi + alpha), n = perp(u), dn = perp(d);
        const Vec2 q = r * u - t * d;
        const Vec2 q_phi = r * n - t * dn;
        const Vec2 q_alpha = t_alpha * (ca * u - d) - t * dn;
        ChartSample s;
        s.value = {q.x, q.y, phi + alpha};
        s.su = {q_phi.x, q_phi.y, 1.0};
        s.sv = {q_alpha.x, q_alpha.y, 1.0};
        s.ray = NullRay{q, phi + alpha};
        s.event = {t, r * u.x, r * u.y};
        s.direction = {1.0, d.x, d.y};
        s.t = t;
        s.branch = std::abs(sa) < 1e-14 ? Branch::Merged : (sa > 0.0 ? Branch::Plus : Branch::Minus);
        return s;
      };
      return chart;
    }
    case RegionKind::Diamond: {
      chart.coords_ = "phi,theta";
      chart.lower_v_ = [](double u) { return u; };
      chart.eval_ = [](double phi, double theta) {
        const TorusPoint p = diamond_point(phi, theta);
        const Vec2 n = perp(unit(phi));
        ChartSample s;
        s.value = {p.chart.q.x, p.chart.q.y, theta};
        s.su = {n.x, n.y, 0.0};
        s.sv = {0.0, 0.0, 1.0};
        s.ray = p.chart;
        s.event = p.event;
        s.direction = p.direction;
        s.t = 0.0;
        s.branch = p.branch;
        return s;
      };
      return chart;
    }
    case RegionKind::Transformed: {
      const TorusChart base = TorusChart::of(*r.base());
      const ConformalMap m = *r.map();
      chart.coords_ = base.coords_;
      chart.lower_v_ = base.lower_v_;
      auto mapped = [base, m](double u, double v, ChartSample* full) {
        const ChartSample b = base.eval(u, v);
        const NullRay ray = apply_conformal_ray(m, b.ray);
        if (full) {
          full->ray = ray;
          full->event = m.apply(b.event);
          const TangentVec d = m.push(b.direction);
          full->direction = (1.0 / d.vt) * d;
          full->t = full->event.t;
          full->branch = b.branch;
        }
        return coords_of(ray, b.value[2]);
      };
      chart.eval_ = [mapped](double u, double v) {
        constexpr double h = 1e-5;
        ChartSample s;
        s.value = mapped(u, v, &s);
        s.su = scaled(0.5 / h, sub(mapped(u + h, v, nullptr), mapped(u - h, v, nullptr)));
        s.sv = scaled(0.5 / h, sub(mapped(u, v + h, nullptr), mapped(u, v - h, nullptr)));
        return s;
      };
      return chart;
    }
    case RegionKind::Implicit: break;
  }
  throw Error(ErrorCode::NotSupported, "no global torus chart for implicit regions; use leaf tracing");
}

double contact_form_on(const NullRay& ray, const ChartCoords& w) {
  return std::cos(ray.theta) * w[0] + std::sin(ray.theta) * w[1];
}

FoliationDirection chart_foliation_direction(const TorusChart& chart, double u, double v,
                                             const FoliationTolerances& tol) {
  const ChartSample s = chart.eval(u, v);
  const double nu = norm3(s.su), nv = norm3(s.sv);
  if (!(norm3(cross3(s.su, s.sv)) > tol.conditioning * nu * nv)) {
    std::ostringstream os;
    os << "torus tangent basis degenerates at (" << u << ", " << v << ")";
    throw Error(ErrorCode::IllConditioned, os.str());
  }
  FoliationDirection f;
  f.lambda_u = contact_form_on(s.ray, s.su);
  f.lambda_v = contact_form_on(s.ray, s.sv);
  f.singular = std::abs(f.lambda_u) < tol.singular * nu && std::abs(f.lambda_v) < tol.singular * nv;
  if (f.singular) return f;
  double a = f.lambda_v, b = -f.lambda_u;
  ChartCoords d{a * s.su[0] + b * s.sv[0], a * s.su[1] + b * s.sv[1], a * s.su[2] + b * s.sv[2]};
  const double n = norm3(d);
  f.a = a / n;
  f.b = b / n;
  f.direction = scaled(1.0 / n, d);
  return f;
}

double line_angle(const ChartCoords& a, const ChartCoords& b) {
  const double c = std::abs(a[0] * b[0] + a[1] * b[1] + a[2] * b[2]);
  return std::atan2(norm3(cross3(a, b)), c);
}

// ---------------------------------------------------------------------------

Vec2 Axis::centre(double t) const {
  const double span = upper.t - lower.t;
  if (span == 0.0) return lower.spatial();
  const double w = (t - lower.t) / span;
  return lower.spatial() + w * (upper.spatial() - lower.spatial());
}

double Axis::azimuth(const Event& p) const {
  const Vec2 d = p.spatial() - centre(p.t);
  return std::atan2(d.y, d.x);
}

namespace {

// The null direction field of one family on the boundary, with time as the
// independent variable and the spatial position as state.
struct AmbientField {
  const Region& r;
  bool plus;
  double scale;

  HValue at(double t, std::span<const double> y) const { return r.eval({t, y[0], y[1]}); }

  void rhs(double t, std::span<const double> y, std::span<double> dy) const {
    const TangentVec w = null_direction_clamped(at(t, y).grad, plus);
    dy[0] = w.vx;
    dy[1] = w.vy;
  }

  void project(double t, std::span<double> y) const {
    for (int k = 0; k < 8; ++k) {
      const HValue h = at(t, y);
      const double g2 = h.grad.vx * h.grad.vx + h.grad.vy * h.grad.vy;
      if (!(g2 > 0.0)) throw Error(ErrorCode::LostSurface, "spatial gradient vanished during projection");
      if (std::abs(h.value) <= 1e-14 * std::sqrt(g2) * scale) return;
      y[0] -= h.value * h.grad.vx / g2;
      y[1] -= h.value * h.grad.vy / g2;
    }
    const HValue h = at(t, y);
    const double g = std::hypot(h.grad.vx, h.grad.vy);
    if (!std::isfinite(h.value) || std::abs(h.value) > 1e-10 * g * scale) {
      std::ostringstream os;
      os << "projection onto the boundary diverged at t=" << t << " (H=" << h.value << ")";
      throw Error(ErrorCode::LostSurface, os.str());
    }
  }

  double guard(double t, std::span<const double> y) const { return band_indicator(at(t, y).grad); }

  TorusPoint point(double t, std::span<const double> y, double phi, Branch branch) const {
    const TangentVec w = null_direction_clamped(at(t, y).grad, plus);
    return assemble({t, y[0], y[1]}, w.spatial(), phi, branch);
  }

  OdeSolution trace(const Event& start, double t_end, bool stop_at_lightlike, const Tolerance& tol,
                    double max_step) const {
    OdeOptions opt;
    opt.tol = tol;
    opt.max_step = max_step;
    opt.project = [this](double t, std::span<double> y) { project(t, y); };
    std::vector<OdeEvent> events;
    if (stop_at_lightlike)
      events.push_back({[this](double t, std::span<const double> y) { return guard(t, y); }, EventDirection::Falling,
                        true});
    OdeState y0{start.x, start.y};
    project(start.t, y0);
    return ode_integrate([this](double t, std::span<const double> y, std::span<double> dy) { rhs(t, y, dy); }, y0,
                         start.t, t_end, events, opt);
  }
};

Leaf revolution_leaf(const RevolutionData& rev, const TorusPoint& start, const LeafOptions& o) {
  const auto& p = rev.profile;
  const double sign = branch_sign(start.branch);
  const bool forward = o.direction == LeafDirection::Forward;
  auto rate = [&p, sign](double t) {
    const double disc = 4.0 * p.rho(t) - p.d1(t) * p.d1(t);
    return disc > 0.0 ? sign * std::sqrt(disc) / (2.0 * p.rho(t)) : 0.0;
  };
  OdeOptions opt;
  opt.tol = o.tol;
  opt.max_step = (rev.t_upper - rev.t_lower) / 32.0;
  const OdeEvent latitude{[&p](double t, std::span<const double>) { return p.band_discriminant(t); },
                          EventDirection::Rising, true};
  const double t_end = forward ? p.t_max() : p.t_min();
  const OdeSolution sol = ode_integrate([&](double t, std::span<const double>, std::span<double> dy) { dy[0] = rate(t); },
                                        {start.phi}, start.t, t_end, std::span<const OdeEvent>(&latitude, 1), opt);
  Leaf leaf;
  const auto& tr = sol.trajectory;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const bool last = i + 1 == tr.size() && sol.stopped_by_event;
    leaf.points.push_back(
        revolution_point_clamped(p, tr.times()[i], tr.states()[i][0], sign, last ? Branch::Merged : start.branch));
  }
  leaf.end = !sol.stopped_by_event ? LeafEnd::Budget
                                   : (forward ? LeafEnd::HitUpperSingular : LeafEnd::HitLowerSingular);
  leaf.delta_phi = tr.back()[0] - start.phi;
  return leaf;
}

Leaf ambient_leaf(const Region& r, const TorusPoint& start, const LeafOptions& o) {
  const bool plus = branch_sign(start.branch) > 0.0;
  const AmbientField field{r, plus, r.length_scale()};
  const Axis axis = o.axis ? *o.axis : default_axis(r);
  const Bbox box = r.bbox();
  const double span = box.hi.t - box.lo.t;
  const bool forward = o.direction == LeafDirection::Forward;
  const double t_end = forward ? box.hi.t + 0.25 * span : box.lo.t - 0.25 * span;
  const OdeSolution sol = field.trace(start.event, t_end, true, o.tol, span / 64.0);

  Leaf leaf;
  const auto& tr = sol.trajectory;
  double phi = start.phi + wrap_difference(axis.azimuth(start.event) - start.phi);
  const double phi0 = phi;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double t = tr.times()[i];
    const Event e{t, tr.states()[i][0], tr.states()[i][1]};
    if (i > 0) phi += wrap_difference(axis.azimuth(e) - phi);
    const bool last = i + 1 == tr.size() && sol.stopped_by_event;
    leaf.points.push_back(field.point(t, tr.states()[i], phi, last ? Branch::Merged : start.branch));
  }
  leaf.end = !sol.stopped_by_event ? LeafEnd::Budget
                                   : (forward ? LeafEnd::HitUpperSingular : LeafEnd::HitLowerSingular);
  leaf.delta_phi = phi - phi0;
  return leaf;
}

}  // namespace

Leaf integrate_leaf(const Region& r, const TorusPoint& start, const LeafOptions& options) {
  options.tol.validate();
  if (start.branch == Branch::Merged)
    throw Error(ErrorCode::InvalidArgument, "leaf start must carry a family (plus or minus)");
  if (!r.smooth()) throw Error(ErrorCode::NotSupported, "leaf tracing needs a smooth boundary");
  if (const RevolutionData* rev = r.revolution(); rev && !options.ambient) return revolution_leaf(*rev, start, options);
  return ambient_leaf(r, start, options);
}

ChartCoords leaf_chart_tangent(const Region& r, const TorusPoint& p) {
  const double sign = branch_sign(p.branch);
  std::function<ChartCoords(double)> chart_at;
  double dist;
  if (const RevolutionData* rev = r.revolution()) {
    const auto& prof = rev->profile;
    dist = std::min(p.t - rev->t_lower, rev->t_upper - p.t);
    auto rate = [&prof, sign](double t) {
      const double disc = 4.0 * prof.rho(t) - prof.d1(t) * prof.d1(t);
      return disc > 0.0 ? sign * std::sqrt(disc) / (2.0 * prof.rho(t)) : 0.0;
    };
    chart_at = [&, rate](double dt) {
      const double phi = p.phi + integrate(rate, p.t, p.t + dt, Tolerance{1e-15, 1e-14, 100000}).value;
      const TorusPoint q = revolution_point_clamped(prof, p.t + dt, phi, sign, p.branch);
      return coords_of(q.chart, p.chart.theta);
    };
  } else {
    const AmbientField field{r, sign > 0.0, r.length_scale()};
    dist = 1e-2 * r.length_scale();
    chart_at = [&, field](double dt) {
      const OdeSolution sol = field.trace(p.event, p.t + dt, false, Tolerance{1e-13, 1e-13, 100000}, INFINITY);
      const TorusPoint q = field.point(sol.trajectory.back_time(), sol.trajectory.back(), 0.0, p.branch);
      return coords_of(q.chart, p.chart.theta);
    };
  }
  if (!(dist > 0.0)) throw Error(ErrorCode::InvalidArgument, "leaf tangent requested on a singular circle");
  const double h = std::min(1e-3, 0.01 * dist);
  auto central = [&](double step) { return scaled(0.5 / step, sub(chart_at(step), chart_at(-step))); };
  const ChartCoords d1 = central(h), d2 = central(0.5 * h);
  return {(4.0 * d2[0] - d1[0]) / 3.0, (4.0 * d2[1] - d1[1]) / 3.0, (4.0 * d2[2] - d1[2]) / 3.0};
}

// ---------------------------------------------------------------------------

namespace {

struct Meridians {
  const Region& r;
  Axis axis;
  double reach;

  Event at(double t, double psi, double rho) const {
    const Vec2 p = axis.centre(t) + rho * unit(psi);
    return {t, p.x, p.y};
  }

  // Boundary point on the half-plane at azimuth psi and height t; the axis
  // point must be interior.
  Event boundary(double t, double psi) const {
    auto f = [&](double rho) { return r.value(at(t, psi, rho)); };
    constexpr int n = 64;
    double prev = f(0.0);
    for (int i = 1; i <= n; ++i) {
      const double hi = reach * i / n;
      const double cur = f(hi);
      if (prev > 0.0 && cur <= 0.0)
        return at(t, psi, find_root(f, reach * (i - 1) / n, hi, Tolerance{1e-15 * reach, 1e-15, 500}));
      prev = cur;
    }
    throw Error(ErrorCode::NoBracket, "meridian never leaves the region");
  }

  std::pair<Event, Event> circles_at(double psi, std::pair<double, double> span) const {
    auto d = [&](double t) { return band_indicator(r.eval(boundary(t, psi)).grad); };
    const double eps = 1e-6 * (span.second - span.first);
    const double lo = span.first + eps, hi = span.second - eps;
    constexpr int n = 400;
    std::vector<double> ts(n + 1), ds(n + 1);
    for (int i = 0; i <= n; ++i) {
      ts[i] = lo + (hi - lo) * i / n;
      ds[i] = d(ts[i]);
    }
    const Tolerance tol{1e-14 * (hi - lo), 1e-15, 500};
    int a = -1, b = -1;
    for (int i = 0; i < n; ++i)
      if (ds[i] < 0.0 && ds[i + 1] >= 0.0) {
        a = i;
        break;
      }
    for (int i = n; i > 0; --i)
      if (ds[i] < 0.0 && ds[i - 1] >= 0.0) {
        b = i - 1;
        break;
      }
    if (a < 0 || b < 0 || b < a) throw Error(ErrorCode::NoBracket, "meridian does not cross two lightlike points");
    const double t_lo = find_root(d, ts[a], ts[a + 1], tol);
    const double t_hi = find_root(d, ts[b], ts[b + 1], tol);
    return {boundary(t_lo, psi), boundary(t_hi, psi)};
  }
};

// Critical point of the time function on the boundary (H = H_x = H_y = 0)
// by Newton's method from a nearby boundary sample.
Event time_extreme(const Region& r, Event p, bool lowest) {
  const double L = r.length_scale();
  for (int it = 0; it < 60; ++it) {
    const HValue h = r.eval(p);
    const std::array<double, 3> f{h.value, h.grad.vx, h.grad.vy};
    const double gn = std::sqrt(h.grad.vt * h.grad.vt + h.grad.vx * h.grad.vx + h.grad.vy * h.grad.vy);
    if (std::abs(f[0]) < 1e-14 * gn * L && std::hypot(f[1], f[2]) < 1e-13 * gn) {
      if ((h.grad.vt > 0.0) != lowest) break;
      return p;
    }
    const Mat3 j{{{h.grad.vt, h.grad.vx, h.grad.vy}, h.hess[1], h.hess[2]}};
    const auto step = mul(inverse(j), f);
    p = {p.t - step[0], p.x - step[1], p.y - step[2]};
  }
  throw Error(ErrorCode::NoBracket, lowest ? "lowest boundary point not found" : "highest boundary point not found");
}

}  // namespace

Axis time_axis(const Region& r) {
  if (!r.smooth()) throw Error(ErrorCode::NotSupported, "time axis needs a smooth boundary");
  const std::vector<Event> pts = sample_boundary(r, 16, 64);
  if (pts.empty()) throw Error(ErrorCode::NoBracket, "no boundary samples");
  auto by_t = [](const Event& a, const Event& b) { return a.t < b.t; };
  const Event lo = *std::min_element(pts.begin(), pts.end(), by_t);
  const Event hi = *std::max_element(pts.begin(), pts.end(), by_t);
  return {time_extreme(r, lo, true), time_extreme(r, hi, false)};
}

LightlikeSet lightlike_set(const Region& r, int n_psi) {
  if (n_psi < 8) throw Error(ErrorCode::InvalidArgument, "need at least 8 azimuths");
  LightlikeSet out;
  out.axis = time_axis(r);
  const Meridians m{r, out.axis, 2.0 * r.bbox().half_diagonal()};
  const std::pair<double, double> span{out.axis.lower.t, out.axis.upper.t};
  for (int i = 0; i < n_psi; ++i) {
    const double psi = kTwoPi * i / n_psi;
    const auto [lo, hi] = m.circles_at(psi, span);
    out.psi.push_back(psi);
    out.lower.push_back(lo);
    out.upper.push_back(hi);
  }
  return out;
}

std::vector<Leaf> leaf_family(const Region& r, int n_base_points, const Tolerance& tol) {
  if (n_base_points < 1) throw Error(ErrorCode::InvalidArgument, "need at least one base point");
  if (!r.smooth()) throw Error(ErrorCode::NotSupported, "leaves are traced on smooth boundaries only");
  std::vector<TorusPoint> starts;
  std::optional<LightlikeSet> ls;
  if (const RevolutionData* rev = r.revolution()) {
    for (int k = 0; k < n_base_points; ++k)
      starts.push_back(revolution_torus_point(*rev, rev->t_lower, kTwoPi * k / n_base_points, Branch::Plus));
  } else {
    ls = lightlike_set(r, std::max(8, n_base_points));
    const int stride = static_cast<int>(ls->psi.size()) / std::min(n_base_points, static_cast<int>(ls->psi.size()));
    for (std::size_t k = 0; k < ls->psi.size(); k += static_cast<std::size_t>(stride)) {
      TorusPoint p;
      p.t = p.time_T = ls->lower[k].t;
      p.event = ls->lower[k];
      p.phi = ls->psi[k];
      starts.push_back(p);
    }
  }
  std::vector<Leaf> out;
  for (const TorusPoint& start : starts) {
    LeafOptions o{tol, LeafDirection::Forward, ls ? &ls->axis : nullptr, false};
    out.push_back(integrate_leaf(r, start, o));
    TorusPoint turn = out.back().points.back();
    turn.branch = Branch::Minus;
    o.direction = LeafDirection::Backward;
    out.push_back(integrate_leaf(r, turn, o));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::pair<std::vector<TorusPoint>, std::vector<TorusPoint>> closed_form_singular(const Region& r, int n) {
  std::vector<TorusPoint> lower, upper;
  for (int i = 0; i < n; ++i) {
    const double phi = kTwoPi * i / n;
    switch (r.kind()) {
      case RegionKind::Revolution:
        lower.push_back(revolution_torus_point(*r.revolution(), r.revolution()->t_lower, phi, Branch::Merged));
        upper.push_back(revolution_torus_point(*r.revolution(), r.revolution()->t_upper, phi, Branch::Merged));
        break;
      case RegionKind::Diamond:
        lower.push_back(diamond_point(phi, phi));
        upper.push_back(diamond_point(phi, phi + kPi));
        break;
      default: break;
    }
  }
  if (r.kind() == RegionKind::Transformed) {
    auto base = closed_form_singular(*r.base(), n);
    for (auto& p : base.first) lower.push_back(map_point(*r.map(), p));
    for (auto& p : base.second) upper.push_back(map_point(*r.map(), p));
  }
  if (lower.empty()) throw Error(ErrorCode::NotSupported, "closed-form singular circles need a revolution or diamond base");
  return {lower, upper};
}

double set_distance(const std::vector<ChartCoords>& a, const std::vector<ChartCoords>& b) {
  double h = 0.0;
  for (const auto& x : a) {
    double best = INFINITY;
    for (const auto& y : b) best = std::min(best, chart_distance(x, y));
    h = std::max(h, best);
  }
  return h;
}

// Roots of f on one v-line window [v0, v0 + 2pi).
std::vector<double> line_roots(const std::function<double(double)>& f, double v0, int samples) {
  return find_all_roots(f, v0, v0 + kTwoPi, samples, Tolerance{1e-14, 1e-15, 500});
}

double lambda_u_normalised(const TorusChart& chart, double u, double v) {
  const ChartSample s = chart.eval(u, v);
  return contact_form_on(s.ray, s.su) / norm3(s.su);
}

}  // namespace

SingularSet singular_set(const Region& r, int n_samples, double tol) {
  if (n_samples < 8) throw Error(ErrorCode::InvalidArgument, "need at least 8 samples");
  const TorusChart chart = TorusChart::of(r);
  SingularSet out;
  auto cf = closed_form_singular(r, n_samples);
  out.lower.points = std::move(cf.first);
  out.upper.points = std::move(cf.second);

  std::vector<ChartCoords> lower_cf, upper_cf;
  for (const auto& p : out.lower.points) lower_cf.push_back(coords_of(p.chart, p.chart.theta));
  for (const auto& p : out.upper.points) upper_cf.push_back(coords_of(p.chart, p.chart.theta));

  const FoliationTolerances ftol;
  for (int i = 0; i < n_samples; ++i) {
    const double u = kTwoPi * i / n_samples;
    const double v0 = chart.lower_v(u) - 0.5 * kPi;
    auto f = [&](double v) { return lambda_u_normalised(chart, u, v); };
    for (double v : line_roots(f, v0, 64)) {
      const FoliationDirection fd = chart_foliation_direction(chart, u, v, ftol);
      if (!fd.singular) continue;
      const ChartSample s = chart.eval(u, v);
      const ChartCoords c = coords_of(s.ray, s.ray.theta);
      (v - v0 < kPi ? out.lower.detected : out.upper.detected).push_back(c);
    }
  }
  if (out.lower.detected.empty() || out.upper.detected.empty())
    throw Error(ErrorCode::Mismatch, "chart foliation found no singular points on one of the circles");
  out.hausdorff = std::max({set_distance(lower_cf, out.lower.detected), set_distance(out.lower.detected, lower_cf),
                            set_distance(upper_cf, out.upper.detected), set_distance(out.upper.detected, upper_cf)});
  if (out.hausdorff > tol) {
    std::ostringstream os;
    os << "singular circles disagree: Hausdorff distance " << out.hausdorff << " exceeds " << tol;
    throw Error(ErrorCode::Mismatch, os.str());
  }
  return out;
}

// ---------------------------------------------------------------------------

double lambda_dilation(const NullRay& ray, const Event& center) {
  const Vec2 u = unit(ray.theta);
  const Vec2 y = ray.q - center.spatial() + center.t * u;
  return dot(y, u);
}

DividingSet dividing_set(const Region& r, const Event& center, int n_u, int n_v) {
  if (n_u < 8 || n_v < 8) throw Error(ErrorCode::InvalidArgument, "sample counts must be at least 8");
  const StarShapedReport star = star_shaped_check(r, center, 200);
  if (!star.passed) {
    std::ostringstream os;
    os << "region is not star-shaped about (" << center.t << ", " << center.x << ", " << center.y << "): " << star.note;
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  const TorusChart chart = TorusChart::of(r);
  DividingSet out;

  auto g = [&](double u, double v) { return lambda_dilation(chart.eval(u, v).ray, center); };

  // Y-transversality and per-line roots.
  out.y_min_det = INFINITY;
  std::vector<std::vector<double>> roots(n_u);
  bool separates = true;
  for (int i = 0; i < n_u; ++i) {
    const double u = kTwoPi * i / n_u;
    const double v0 = chart.lower_v(u) - 0.5 * kPi;
    for (int j = 0; j < n_v; ++j) {
      const ChartSample s = chart.eval(u, v0 + kTwoPi * j / n_v);
      const Vec2 uu = unit(s.ray.theta);
      const Vec2 yq = s.ray.q - center.spatial() + center.t * uu;
      const ChartCoords y{yq.x, yq.y, 0.0};
      const double d = std::abs(det3(y, s.su, s.sv)) / (norm3(y) * norm3(s.su) * norm3(s.sv));
      out.y_min_det = std::min(out.y_min_det, d);
      ++out.samples;
    }
    // The window starts on the lower singular circle, which lambda(Y) does not vanish on.
    roots[i] = line_roots([&](double v) { return g(u, v); }, v0 + 0.5 * kPi, n_v);
    std::vector<double> sing = line_roots([&](double v) { return lambda_u_normalised(chart, u, v); }, v0, 64);
    if (sing.size() != 2) {
      separates = false;
      continue;
    }
    int inside = 0;
    const double arc = wrap_angle(sing[1] - sing[0]);
    for (double v : roots[i]) inside += wrap_angle(v - sing[0]) < arc ? 1 : 0;
    const int outside = static_cast<int>(roots[i].size()) - inside;
    if (inside % 2 == 0 || outside % 2 == 0) separates = false;
  }
  out.y_transverse = out.y_min_det > 1e-8;
  if (!out.y_transverse) {
    std::ostringstream os;
    os << "dilation field is tangent to the torus (min normalised det " << out.y_min_det << ")";
    throw Error(ErrorCode::NotTransverse, os.str());
  }
  out.separates = separates;

  const std::size_t count = roots[0].size();
  for (const auto& rs : roots)
    if (rs.size() != count) throw Error(ErrorCode::Mismatch, "dividing set changes its root count between v-lines");

  // Link roots line to line by nearest circular distance, then close cycles.
  std::vector<std::vector<double>> tracks(count);
  std::vector<std::size_t> current(count);
  for (std::size_t k = 0; k < count; ++k) current[k] = k;
  auto nearest = [&](const std::vector<double>& rs, double v) {
    std::size_t best = 0;
    for (std::size_t m = 1; m < rs.size(); ++m)
      if (std::abs(wrap_difference(rs[m] - v)) < std::abs(wrap_difference(rs[best] - v))) best = m;
    return best;
  };
  for (std::size_t k = 0; k < count; ++k) tracks[k].push_back(roots[0][k]);
  for (int i = 1; i < n_u; ++i)
    for (std::size_t k = 0; k < count; ++k) tracks[k].push_back(roots[i][nearest(roots[i], tracks[k].back())]);
  std::vector<std::size_t> next(count);
  for (std::size_t k = 0; k < count; ++k) next[k] = nearest(roots[0], tracks[k].back());

  std::vector<bool> used(count, false);
  double min_angle = INFINITY;
  const FoliationTolerances ftol;
  for (std::size_t k0 = 0; k0 < count; ++k0) {
    if (used[k0]) continue;
    DividingComponent comp;
    int laps = 0;
    for (std::size_t k = k0; !used[k]; k = next[k], ++laps) {
      used[k] = true;
      for (int i = 0; i < n_u; ++i) {
        const double u = kTwoPi * i / n_u + kTwoPi * laps;
        const double v = tracks[k][i];
        const ChartSample s = chart.eval(u, v);
        comp.u.push_back(u);
        comp.v.push_back(v);
        TorusPoint tp;
        tp.t = s.t;
        tp.time_T = s.t;
        tp.phi = u;
        tp.branch = s.branch;
        tp.chart = s.ray;
        tp.event = s.event;
        tp.direction = s.direction;
        comp.points.push_back(tp);

        constexpr double h = 1e-6;
        const double gu = (g(u + h, v) - g(u - h, v)) / (2 * h);
        const double gv = (g(u, v + h) - g(u, v - h)) / (2 * h);
        const double slope = -gu / gv;
        const ChartCoords tangent{s.su[0] + slope * s.sv[0], s.su[1] + slope * s.sv[1], s.su[2] + slope * s.sv[2]};
        const FoliationDirection fd = chart_foliation_direction(chart, u, v, ftol);
        min_angle = std::min(min_angle, fd.singular ? 0.0 : line_angle(tangent, fd.direction));
      }
    }
    double mean = 0.0;
    for (const auto& p : comp.points) mean += p.t;
    mean /= static_cast<double>(comp.points.size());
    comp.latitude = mean;
    for (const auto& p : comp.points) comp.latitude_spread = std::max(comp.latitude_spread, std::abs(p.t - mean));
    out.components.push_back(std::move(comp));
  }
  out.min_foliation_angle = count ? min_angle : 0.0;
  out.foliation_transverse = count > 0 && min_angle > 1e-6;
  return out;
}

}  // namespace nc
