#include "nullcontact/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "nullcontact/error.hpp"

namespace nc {

const char* to_string(BoundaryClass c) {
  switch (c) {
    case BoundaryClass::TimelikePart: return "timelike";
    case BoundaryClass::LightlikePart: return "lightlike";
    case BoundaryClass::SpacelikePart: return "spacelike";
  }
  return "?";
}

double band_indicator(const TangentVec& grad) {
  const double g2 = grad.vx * grad.vx + grad.vy * grad.vy;
  const double t2 = grad.vt * grad.vt;
  const double n = g2 + t2;
  return n > 0.0 ? (g2 - t2) / n : 0.0;
}

namespace {

// Spatial null direction w with |w| = 1 and H_t + g.w = 0 is
// w0 +- s n, where w0 = -H_t g/|g|^2, s = sqrt(1 - H_t^2/|g|^2) and n is the
// counterclockwise unit tangent to the spatial level curve.
struct NullSplit {
  Vec2 w0;
  Vec2 n;
  double disc = 0.0;  // 1 - H_t^2/|g|^2
};

NullSplit split(const TangentVec& grad) {
  const Vec2 g{grad.vx, grad.vy};
  const double g2 = dot(g, g);
  NullSplit s;
  s.w0 = (-grad.vt / g2) * g;
  s.n = (1.0 / std::sqrt(g2)) * perp(-1.0 * g);
  s.disc = 1.0 - grad.vt * grad.vt / g2;
  return s;
}

}  // namespace

std::vector<TangentVec> null_directions_from_gradient(const TangentVec& grad, double lightlike_tol) {
  const double e2 = grad.vt * grad.vt + grad.vx * grad.vx + grad.vy * grad.vy;
  if (!(e2 > 0.0)) throw Error(ErrorCode::DegenerateGradient, "gradient of H vanishes");
  const double g2 = grad.vx * grad.vx + grad.vy * grad.vy;
  const double d = -grad.vt * grad.vt + g2;  // eta of the index-raised gradient
  if (std::abs(d) <= lightlike_tol * e2) {
    // Single null tangent; normalise w0 onto the unit circle.
    const Vec2 g{grad.vx, grad.vy};
    Vec2 w = (-grad.vt / g2) * g;
    w = (1.0 / w.norm()) * w;
    return {TangentVec{1.0, w.x, w.y}};
  }
  if (d < 0.0) return {};
  const NullSplit s = split(grad);
  const double root = std::sqrt(s.disc);
  const Vec2 plus = s.w0 + root * s.n;
  const Vec2 minus = s.w0 - root * s.n;
  return {TangentVec{1.0, plus.x, plus.y}, TangentVec{1.0, minus.x, minus.y}};
}

TangentVec null_direction_clamped(const TangentVec& grad, bool plus) {
  const double g2 = grad.vx * grad.vx + grad.vy * grad.vy;
  if (!(g2 > 0.0)) throw Error(ErrorCode::DegenerateGradient, "spatial gradient of H vanishes");
  const NullSplit s = split(grad);
  const double root = std::sqrt(std::max(0.0, s.disc));
  const Vec2 w = plus ? s.w0 + root * s.n : s.w0 - root * s.n;
  return {1.0, w.x, w.y};
}

namespace {

void require_on_boundary(const Region& r, const Event& p, const HValue& h, const BoundaryTolerances& tol) {
  const double gnorm = std::sqrt(h.grad.vt * h.grad.vt + h.grad.vx * h.grad.vx + h.grad.vy * h.grad.vy);
  if (!(gnorm > 0.0)) throw Error(ErrorCode::DegenerateGradient, "gradient of H vanishes on the boundary");
  if (std::abs(h.value) > tol.boundary * gnorm * r.length_scale()) {
    std::ostringstream os;
    os << "H(" << p.t << ", " << p.x << ", " << p.y << ") = " << h.value << " is not on the boundary";
    throw Error(ErrorCode::NotOnBoundary, os.str());
  }
}

}  // namespace

BoundaryPoint classify_boundary_point(const Region& r, const Event& p, const BoundaryTolerances& tol) {
  const HValue h = r.eval(p);
  require_on_boundary(r, p, h, tol);
  BoundaryPoint bp;
  bp.event = p;
  bp.null_dirs = null_directions_from_gradient(h.grad, tol.lightlike);
  switch (bp.null_dirs.size()) {
    case 2: bp.causal_class = BoundaryClass::TimelikePart; break;
    case 1: bp.causal_class = BoundaryClass::LightlikePart; break;
    default: bp.causal_class = BoundaryClass::SpacelikePart; break;
  }
  return bp;
}

std::vector<TangentVec> null_tangent_directions(const Region& r, const Event& p, const BoundaryTolerances& tol) {
  return classify_boundary_point(r, p, tol).null_dirs;
}

std::pair<double, double> lightlike_latitudes(const RadiusSquaredProfile& profile) {
  return profile_latitudes(profile);
}

double directional_derivative(const Region& r, const Event& p, const TangentVec& v) {
  if (r.smooth() && r.in_domain(p)) {
    const HValue h = r.eval(p);
    return h.grad.vt * v.vt + h.grad.vx * v.vx + h.grad.vy * v.vy;
  }
  const double step = 1e-6 * r.length_scale();
  return (r.value(p + step * v) - r.value(p + (-step) * v)) / (2.0 * step);
}

std::pair<double, double> ray_window(const NullRay& ray, const Bbox& box) {
  const Vec2 u = unit(ray.theta);
  double lo = box.lo.t, hi = box.hi.t;
  auto clip = [&](double origin, double dir, double a, double b) {
    if (dir == 0.0) {
      if (origin < a || origin > b) hi = lo - 1.0;
      return;
    }
    double s0 = (a - origin) / dir, s1 = (b - origin) / dir;
    if (s0 > s1) std::swap(s0, s1);
    lo = std::max(lo, s0);
    hi = std::min(hi, s1);
  };
  clip(ray.q.x, u.x, box.lo.x, box.hi.x);
  clip(ray.q.y, u.y, box.lo.y, box.hi.y);
  if (!(hi > lo)) {
    std::ostringstream os;
    os << "ray q=(" << ray.q.x << ", " << ray.q.y << "), theta=" << ray.theta << " misses the region's box";
    throw Error(ErrorCode::NoBracket, os.str());
  }
  return {lo, hi};
}

Tangency tangency_point(const Region& r, const NullRay& ray) {
  const auto [lo, hi] = ray_window(ray, r.bbox().inflated(1.5));
  const TangentVec dir = ray.direction();
  auto h = [&](double s) { return r.value(ray.at(s)); };
  auto dh = [&](double s) { return directional_derivative(r, ray.at(s), dir); };

  constexpr int n = 200;
  int best = 0;
  double best_h = -INFINITY;
  for (int i = 0; i <= n; ++i) {
    const double v = h(lo + (hi - lo) * i / n);
    if (v > best_h) {
      best_h = v;
      best = i;
    }
  }
  const double a = lo + (hi - lo) * std::max(best - 1, 0) / n;
  const double b = lo + (hi - lo) * std::min(best + 1, n) / n;
  const double x_tol = 1e-13 * std::max(1.0, r.length_scale());
  double s;
  const double da = dh(a), db = dh(b);
  if (da > 0.0 && db < 0.0) {
    s = find_root(dh, a, b, Tolerance{x_tol, 1e-15, 500});
  } else {
    s = maximize(h, a, b, x_tol).x;
  }
  return {ray.at(s), h(s), s};
}

std::vector<Event> sample_boundary(const Region& r, int lines, int samples) {
  const Bbox box = r.bbox().inflated(1.1);
  std::vector<Event> out;
  const Tolerance tol{1e-14 * r.length_scale(), 1e-15, 500};
  const std::array<double, 3> lo{box.lo.t, box.lo.x, box.lo.y}, hi{box.hi.t, box.hi.x, box.hi.y};
  for (int axis = 0; axis < 3; ++axis) {
    const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
    for (int i = 0; i < lines; ++i)
      for (int j = 0; j < lines; ++j) {
        std::array<double, 3> base{};
        base[a1] = lo[a1] + (hi[a1] - lo[a1]) * (i + 0.5) / lines;
        base[a2] = lo[a2] + (hi[a2] - lo[a2]) * (j + 0.5) / lines;
        auto point = [&](double s) {
          std::array<double, 3> c = base;
          c[axis] = s;
          return Event{c[0], c[1], c[2]};
        };
        auto f = [&](double s) { return r.value(point(s)); };
        for (double s : find_all_roots(f, lo[axis], hi[axis], samples, tol)) out.push_back(point(s));
      }
  }
  return out;
}

namespace {

double hessian_along(const Mat3& h, const TangentVec& v) {
  const std::array<double, 3> x{v.vt, v.vx, v.vy};
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += x[i] * h[i][j] * x[j];
  return s;
}

// Scans H along the tangent null ray p + s v. Passes when H stays <= tol
// everywhere and < -tol away from the touching point.
bool unique_tangency(const Region& r, const Event& p, const TangentVec& v, int samples, double h_tol) {
  const NullRay ray = chart_of_geodesic(p, v);
  const auto [lo, hi] = ray_window(ray, r.bbox().inflated(1.5));
  const double s0 = p.t;  // affine parameter of p on the ray
  const double exclusion = 0.05 * (hi - lo);
  for (int i = 0; i <= samples; ++i) {
    const double s = lo + (hi - lo) * i / samples;
    const double h = r.value(ray.at(s));
    if (h > h_tol) return false;
    if (std::abs(s - s0) > exclusion && h >= -h_tol) return false;
  }
  return true;
}

bool failure_less(const ConvexityFailure& a, const ConvexityFailure& b) {
  return std::tie(a.kind, a.event.t, a.event.x, a.event.y, a.ray.q.x, a.ray.q.y, a.ray.theta) <
         std::tie(b.kind, b.event.t, b.event.x, b.event.y, b.ray.q.x, b.ray.q.y, b.ray.theta);
}

}  // namespace

ConvexityReport check_strong_null_convexity(const Region& r, const ConvexityGrid& grid,
                                            const BoundaryTolerances& tol) {
  if (!r.smooth())
    throw Error(ErrorCode::NotSupported, "convexity check needs a smooth boundary; the diamond is analytic-only");
  ConvexityReport report;
  report.hessian_min_abs = INFINITY;
  const double L = r.length_scale();

  std::vector<Event> points;
  if (const RevolutionData* rev = r.revolution()) {
    const auto& prof = rev->profile;
    for (int i = 0; i < grid.latitudes; ++i) {
      const double t = prof.t_min() + (prof.t_max() - prof.t_min()) * (i + 0.5) / grid.latitudes;
      const double rad = std::sqrt(std::max(0.0, prof.rho(t)));
      for (int j = 0; j < grid.azimuths; ++j) {
        const Vec2 s = rad * unit(kTwoPi * j / grid.azimuths);
        points.push_back({t, s.x, s.y});
      }
    }
  } else {
    points = sample_boundary(r, std::max(8, grid.latitudes / 2), std::max(16, grid.ray_samples / 4));
  }
  report.samples = static_cast<int>(points.size());

  bool tangency_ok = true;
  for (const Event& p : points) {
    const HValue h = r.eval(p);
    const double gnorm = std::sqrt(h.grad.vt * h.grad.vt + h.grad.vx * h.grad.vx + h.grad.vy * h.grad.vy);
    const double h_tol = tol.boundary * gnorm * L;
    std::vector<TangentVec> dirs;
    try {
      dirs = null_directions_from_gradient(h.grad, tol.lightlike);
    } catch (const Error&) {
      continue;
    }
    for (const TangentVec& v : dirs) {
      const double hv = std::abs(hessian_along(h.hess, v));
      if (hv < report.hessian_min_abs) {
        report.hessian_min_abs = hv;
        report.hessian_argmin = p;
      }
      if (!unique_tangency(r, p, v, grid.ray_samples, h_tol)) {
        tangency_ok = false;
        report.failures.push_back({"tangency", p, chart_of_geodesic(p, v), 0.0});
      }
    }
  }

  // For surfaces of revolution Hess H(v, v) = rho'' - 2 on every null
  // tangent with vt = 1, so the band can be searched exactly.
  if (const RevolutionData* rev = r.revolution()) {
    const auto& prof = rev->profile;
    auto excess = [&](double t) { return prof.d2(t) - 2.0; };
    const Tolerance rt{1e-14, 1e-15, 500};
    constexpr int n = 2000;
    for (int i = 0; i <= n; ++i) {
      const double t = rev->t_lower + (rev->t_upper - rev->t_lower) * i / n;
      if (std::abs(excess(t)) < report.hessian_min_abs) {
        report.hessian_min_abs = std::abs(excess(t));
        report.hessian_argmin = {t, std::sqrt(prof.rho(t)), 0.0};
      }
    }
    for (double t : find_all_roots(excess, rev->t_lower, rev->t_upper, n, rt)) {
      report.hessian_min_abs = 0.0;
      report.hessian_argmin = {t, std::sqrt(prof.rho(t)), 0.0};
    }
  }
  report.hessian_ok = report.hessian_min_abs > tol.hessian;
  if (!report.hessian_ok)
    report.failures.push_back({"hessian", report.hessian_argmin, NullRay{}, report.hessian_min_abs});
  report.unique_tangency_ok = tangency_ok;

  // Chord connectivity: every ray meeting K must do so in a single interval.
  bool chords_ok = true;
  const Bbox box = r.bbox();
  const Event c = box.centre();
  const double half = box.half_diagonal();
  const int m = grid.chord_offsets;
  for (int k = 0; k < grid.chord_directions; ++k) {
    const double theta = kTwoPi * k / grid.chord_directions;
    const Vec2 u = unit(theta), n = perp(u);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double a = m > 1 ? -half + 2.0 * half * i / (m - 1) : 0.0;
        const double b = m > 1 ? -half + 2.0 * half * j / (m - 1) : 0.0;
        const NullRay ray{c.spatial() - c.t * u + a * n + b * u, theta};
        std::pair<double, double> w;
        try {
          w = ray_window(ray, box.inflated(1.5));
        } catch (const Error&) {
          continue;
        }
        int changes = 0;
        bool meets = false;
        double prev = r.value(ray.at(w.first));
        for (int s = 1; s <= grid.ray_samples; ++s) {
          const double h = r.value(ray.at(w.first + (w.second - w.first) * s / grid.ray_samples));
          meets = meets || h > 0.0;
          if ((prev > 0.0) != (h > 0.0)) ++changes;
          prev = h;
        }
        if (meets && changes != 2) {
          chords_ok = false;
          report.failures.push_back({"chord", ray.at(0.0), ray, static_cast<double>(changes)});
        }
      }
  }
  report.chord_connected_ok = chords_ok;
  std::sort(report.failures.begin(), report.failures.end(), failure_less);
  return report;
}

}  // namespace nc
