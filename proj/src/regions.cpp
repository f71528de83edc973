#include "nullcontact/regions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <variant>

#include "nullcontact/error.hpp"

namespace nc {

// ---------------------------------------------------------------------------
// Profiles

RadiusSquaredProfile RadiusSquaredProfile::polynomial(std::vector<double> coeffs, double t_min, double t_max) {
  if (coeffs.empty()) throw Error(ErrorCode::BadProfile, "rho polynomial has no coefficients");
  for (double c : coeffs)
    if (!std::isfinite(c)) throw Error(ErrorCode::BadProfile, "rho polynomial has a non-finite coefficient");
  if (!std::isfinite(t_min) || !std::isfinite(t_max) || !(t_min < t_max))
    throw Error(ErrorCode::BadProfile, "profile span requires finite t_min < t_max");
  RadiusSquaredProfile p;
  p.coeffs_ = std::move(coeffs);
  p.t_min_ = t_min;
  p.t_max_ = t_max;
  return p;
}

RadiusSquaredProfile RadiusSquaredProfile::ellipsoid(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw Error(ErrorCode::BadProfile, "ellipsoid axes must be positive and finite");
  RadiusSquaredProfile p = polynomial({b * b, 0.0, -b * b / (a * a)}, -a, a);
  p.axes_ = std::make_pair(a, b);
  return p;
}

double RadiusSquaredProfile::rho(double t) const {
  double v = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * t + *it;
  return v;
}

double RadiusSquaredProfile::d1(double t) const {
  double v = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 1;) v = v * t + static_cast<double>(k) * coeffs_[k];
  return v;
}

double RadiusSquaredProfile::d2(double t) const {
  double v = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 2;) v = v * t + static_cast<double>(k * (k - 1)) * coeffs_[k];
  return v;
}

RadiusSquaredProfile RadiusSquaredProfile::dilated(double s) const {
  if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "dilation factor must be > 0");
  RadiusSquaredProfile p = *this;
  for (std::size_t k = 0; k < p.coeffs_.size(); ++k) p.coeffs_[k] *= std::pow(s, 2.0 - static_cast<double>(k));
  p.t_min_ *= s;
  p.t_max_ *= s;
  if (axes_) p.axes_ = std::make_pair(axes_->first * s, axes_->second * s);
  return p;
}

std::string RadiusSquaredProfile::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (axes_) {
    os << "ellipsoid(a=" << axes_->first << ", b=" << axes_->second << ")";
    return os.str();
  }
  os << "rho(t) = ";
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (k) os << " + ";
    os << coeffs_[k];
    if (k) os << " t^" << k;
  }
  os << " on [" << t_min_ << ", " << t_max_ << "]";
  return os.str();
}

std::pair<double, double> profile_latitudes(const RadiusSquaredProfile& profile) {
  const double lo = profile.t_min(), hi = profile.t_max();
  const double span = hi - lo;
  const Tolerance tol{1e-15 * std::max(1.0, span), 1e-15, 400};
  auto disc = [&](double t) { return profile.band_discriminant(t); };
  std::vector<double> roots = find_all_roots(disc, lo, hi, 4000, tol);
  // The caps are zeros of rho where the discriminant is rho'^2 > 0; drop any
  // root sitting on the span ends.
  std::erase_if(roots, [&](double t) { return t <= lo + 1e-12 * span || t >= hi - 1e-12 * span; });
  if (roots.size() != 2) {
    std::ostringstream os;
    os << "rho'^2 = 4 rho must have exactly two interior roots (lightlike latitudes), found " << roots.size();
    throw Error(ErrorCode::BadProfile, os.str());
  }
  const double mid = 0.5 * (roots[0] + roots[1]);
  if (!(disc(mid) < 0.0))
    throw Error(ErrorCode::BadProfile, "rho'^2 < 4 rho must hold between the lightlike latitudes");
  return {roots[0], roots[1]};
}

// ---------------------------------------------------------------------------
// Regions

namespace {

struct ImplicitData {
  ImplicitSpec spec;
  double fd_step = 1e-5;
};

struct DiamondData {};

struct TransformedData {
  Region base;
  ConformalMap map;
  Mat3 inv_linear_t;  // A^{-T}
  Mat3 inv_linear;    // A^{-1}
};

}  // namespace

struct Region::Impl {
  std::variant<RevolutionData, ImplicitData, DiamondData, TransformedData> data;
};

const char* to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::Revolution: return "revolution";
    case RegionKind::Implicit: return "implicit";
    case RegionKind::Diamond: return "diamond";
    case RegionKind::Transformed: return "transformed";
  }
  return "?";
}

double Bbox::half_diagonal() const {
  const double dt = hi.t - lo.t, dx = hi.x - lo.x, dy = hi.y - lo.y;
  return 0.5 * std::sqrt(dt * dt + dx * dx + dy * dy);
}

Bbox Bbox::inflated(double factor) const {
  const Event c = centre();
  const double ht = 0.5 * (hi.t - lo.t) * factor, hx = 0.5 * (hi.x - lo.x) * factor,
               hy = 0.5 * (hi.y - lo.y) * factor;
  return {{c.t - ht, c.x - hx, c.y - hy}, {c.t + ht, c.x + hx, c.y + hy}};
}

RegionKind Region::kind() const {
  switch (impl_->data.index()) {
    case 0: return RegionKind::Revolution;
    case 1: return RegionKind::Implicit;
    case 2: return RegionKind::Diamond;
    default: return RegionKind::Transformed;
  }
}

double Region::value(const Event& p) const {
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, RevolutionData>) {
          return d.profile.rho(p.t) - p.x * p.x - p.y * p.y;
        } else if constexpr (std::is_same_v<T, ImplicitData>) {
          return d.spec.h(p);
        } else if constexpr (std::is_same_v<T, DiamondData>) {
          return 1.0 - std::abs(p.t) - std::hypot(p.x, p.y);
        } else {
          return d.base.value(d.map.apply_inverse(p));
        }
      },
      impl_->data);
}

namespace {

HValue finite_difference(const ImplicitData& d, const Event& p) {
  const auto& h = d.spec.h;
  const double s = d.fd_step;
  HValue out;
  out.value = h(p);
  const std::array<TangentVec, 3> e{TangentVec{s, 0, 0}, TangentVec{0, s, 0}, TangentVec{0, 0, s}};
  std::array<double, 3> plus{}, minus{};
  for (int i = 0; i < 3; ++i) {
    plus[i] = h(p + e[i]);
    minus[i] = h(p + (-1.0) * e[i]);
  }
  if (d.spec.grad) {
    out.grad = d.spec.grad(p);
  } else {
    out.grad = {(plus[0] - minus[0]) / (2 * s), (plus[1] - minus[1]) / (2 * s), (plus[2] - minus[2]) / (2 * s)};
  }
  if (d.spec.hess) {
    out.hess = d.spec.hess(p);
  } else {
    for (int i = 0; i < 3; ++i) {
      out.hess[i][i] = (plus[i] - 2.0 * out.value + minus[i]) / (s * s);
      for (int j = i + 1; j < 3; ++j) {
        const double pp = h(p + e[i] + e[j]), pm = h(p + e[i] + (-1.0) * e[j]);
        const double mp = h(p + (-1.0) * e[i] + e[j]), mm = h(p + (-1.0) * e[i] + (-1.0) * e[j]);
        out.hess[i][j] = out.hess[j][i] = (pp - pm - mp + mm) / (4 * s * s);
      }
    }
  }
  return out;
}

}  // namespace

HValue Region::eval(const Event& p) const {
  return std::visit(
      [&](const auto& d) -> HValue {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, RevolutionData>) {
          HValue out;
          out.value = d.profile.rho(p.t) - p.x * p.x - p.y * p.y;
          out.grad = {d.profile.d1(p.t), -2.0 * p.x, -2.0 * p.y};
          out.hess = {{{d.profile.d2(p.t), 0, 0}, {0, -2.0, 0}, {0, 0, -2.0}}};
          return out;
        } else if constexpr (std::is_same_v<T, ImplicitData>) {
          if (!d.spec.bbox.contains(p)) {
            std::ostringstream os;
            os << "event (" << p.t << ", " << p.x << ", " << p.y << ") lies outside the bounding box";
            throw Error(ErrorCode::OutsideDomain, os.str());
          }
          return finite_difference(d, p);
        } else if constexpr (std::is_same_v<T, DiamondData>) {
          throw Error(ErrorCode::NotSupported, "the causal diamond has a non-smooth boundary (analytic-only region)");
        } else {
          const HValue b = d.base.eval(d.map.apply_inverse(p));
          HValue out;
          out.value = b.value;
          const auto g = mul(d.inv_linear_t, std::array<double, 3>{b.grad.vt, b.grad.vx, b.grad.vy});
          out.grad = {g[0], g[1], g[2]};
          out.hess = mul(mul(d.inv_linear_t, b.hess), d.inv_linear);
          return out;
        }
      },
      impl_->data);
}

bool Region::in_domain(const Event& p) const {
  if (const auto* d = std::get_if<ImplicitData>(&impl_->data)) return d->spec.bbox.contains(p);
  if (const auto* d = std::get_if<TransformedData>(&impl_->data)) return d->base.in_domain(d->map.apply_inverse(p));
  return true;
}

Bbox Region::bbox() const {
  return std::visit(
      [&](const auto& d) -> Bbox {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, RevolutionData>) {
          return {{d.profile.t_min(), -d.r_max, -d.r_max}, {d.profile.t_max(), d.r_max, d.r_max}};
        } else if constexpr (std::is_same_v<T, ImplicitData>) {
          return d.spec.bbox;
        } else if constexpr (std::is_same_v<T, DiamondData>) {
          return {{-1, -1, -1}, {1, 1, 1}};
        } else {
          const Bbox b = d.base.bbox();
          Bbox out{{INFINITY, INFINITY, INFINITY}, {-INFINITY, -INFINITY, -INFINITY}};
          for (int i = 0; i < 8; ++i) {
            const Event c{(i & 1) ? b.hi.t : b.lo.t, (i & 2) ? b.hi.x : b.lo.x, (i & 4) ? b.hi.y : b.lo.y};
            const Event m = d.map.apply(c);
            out.lo = {std::min(out.lo.t, m.t), std::min(out.lo.x, m.x), std::min(out.lo.y, m.y)};
            out.hi = {std::max(out.hi.t, m.t), std::max(out.hi.x, m.x), std::max(out.hi.y, m.y)};
          }
          return out;
        }
      },
      impl_->data);
}

Event Region::interior_point() const {
  return std::visit(
      [&](const auto& d) -> Event {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, RevolutionData>) {
          return {0.5 * (d.t_lower + d.t_upper), 0.0, 0.0};
        } else if constexpr (std::is_same_v<T, ImplicitData>) {
          if (d.spec.interior) return *d.spec.interior;
          const Bbox& b = d.spec.bbox;
          Event best = b.centre();
          double best_h = d.spec.h(best);
          constexpr int n = 20;
          for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j)
              for (int k = 0; k <= n; ++k) {
                const Event p{b.lo.t + (b.hi.t - b.lo.t) * i / n, b.lo.x + (b.hi.x - b.lo.x) * j / n,
                              b.lo.y + (b.hi.y - b.lo.y) * k / n};
                const double h = d.spec.h(p);
                if (h > best_h) {
                  best_h = h;
                  best = p;
                }
              }
          if (!(best_h > 0.0)) throw Error(ErrorCode::InvalidArgument, "implicit region has no interior sample");
          return best;
        } else if constexpr (std::is_same_v<T, DiamondData>) {
          return {0.0, 0.0, 0.0};
        } else {
          return d.map.apply(d.base.interior_point());
        }
      },
      impl_->data);
}

double Region::length_scale() const {
  if (const auto* t = std::get_if<TransformedData>(&impl_->data)) return t->base.length_scale() * t->map.scale();
  return bbox().half_diagonal();
}

const RevolutionData* Region::revolution() const { return std::get_if<RevolutionData>(&impl_->data); }

const Region* Region::base() const {
  const auto* t = std::get_if<TransformedData>(&impl_->data);
  return t ? &t->base : nullptr;
}

const ConformalMap* Region::map() const {
  const auto* t = std::get_if<TransformedData>(&impl_->data);
  return t ? &t->map : nullptr;
}

std::string Region::describe() const {
  return std::visit(
      [&](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, RevolutionData>) {
          return "revolution " + d.profile.describe();
        } else if constexpr (std::is_same_v<T, ImplicitData>) {
          return "implicit " + d.spec.name;
        } else if constexpr (std::is_same_v<T, DiamondData>) {
          return "causal diamond";
        } else {
          return "transformed(" + d.base.describe() + ")";
        }
      },
      impl_->data);
}

Region make_revolution(const RadiusSquaredProfile& profile) {
  const double lo = profile.t_min(), hi = profile.t_max();
  const double span = hi - lo;
  double rho_max = 0.0;
  constexpr int n = 4000;
  for (int i = 1; i < n; ++i) {
    const double t = lo + span * i / n;
    const double r = profile.rho(t);
    if (!(r > 0.0)) {
      std::ostringstream os;
      os << "rho must be positive on (t_min, t_max); rho(" << t << ") = " << r;
      throw Error(ErrorCode::BadProfile, os.str());
    }
    rho_max = std::max(rho_max, r);
  }
  const double cap_tol = 1e-9 * rho_max;
  if (std::abs(profile.rho(lo)) > cap_tol || std::abs(profile.rho(hi)) > cap_tol)
    throw Error(ErrorCode::BadProfile, "rho must vanish at t_min and t_max");
  if (!(profile.d1(lo) > 0.0) || !(profile.d1(hi) < 0.0))
    throw Error(ErrorCode::BadProfile, "caps must be smooth: rho'(t_min) > 0 and rho'(t_max) < 0");
  // The tangency scan window reaches a quarter span beyond each cap.
  for (int i = 1; i <= 200; ++i) {
    const double s = 0.25 * span * i / 200.0;
    if (!(profile.rho(lo - s) < 0.0) || !(profile.rho(hi + s) < 0.0))
      throw Error(ErrorCode::BadProfile, "rho must stay negative within a quarter span outside [t_min, t_max]");
  }
  const auto [t_lower, t_upper] = profile_latitudes(profile);
  RevolutionData data{profile, t_lower, t_upper, std::sqrt(rho_max)};
  return Region(std::make_shared<const Region::Impl>(Region::Impl{data}));
}

Region make_implicit(ImplicitSpec spec) {
  if (!spec.h) throw Error(ErrorCode::InvalidArgument, "implicit region needs an H callback");
  if (!(spec.bbox.lo.t < spec.bbox.hi.t && spec.bbox.lo.x < spec.bbox.hi.x && spec.bbox.lo.y < spec.bbox.hi.y))
    throw Error(ErrorCode::InvalidArgument, "implicit region needs a non-degenerate bounding box");
  ImplicitData data{std::move(spec), 0.0};
  data.fd_step = 1e-5 * data.spec.bbox.half_diagonal();
  return Region(std::make_shared<const Region::Impl>(Region::Impl{std::move(data)}));
}

Region make_diamond() { return Region(std::make_shared<const Region::Impl>(Region::Impl{DiamondData{}})); }

Region make_transformed(const Region& base, const ConformalMap& map) {
  const Mat3 inv = inverse(map.linear());
  TransformedData data{base, map, transpose(inv), inv};
  return Region(std::make_shared<const Region::Impl>(Region::Impl{std::move(data)}));
}

Region smoothed_ball_union(const Event& c1, const Event& c2, double radius, double smoothing) {
  auto ball = [radius](const Event& c, const Event& p) {
    const TangentVec d = p - c;
    return radius * radius - (d.vt * d.vt + d.vx * d.vx + d.vy * d.vy);
  };
  ImplicitSpec spec;
  spec.h = [=](const Event& p) {
    const double a = ball(c1, p), b = ball(c2, p);
    return 0.5 * (a + b + std::sqrt((a - b) * (a - b) + smoothing * smoothing));
  };
  const double m = 1.2 * radius;
  spec.bbox = {{std::min(c1.t, c2.t) - m, std::min(c1.x, c2.x) - m, std::min(c1.y, c2.y) - m},
               {std::max(c1.t, c2.t) + m, std::max(c1.x, c2.x) + m, std::max(c1.y, c2.y) + m}};
  spec.interior = c1;
  spec.name = "smoothed union of two balls";
  return make_implicit(std::move(spec));
}

std::vector<TangentVec> sphere_directions(int n) {
  std::vector<TangentVec> dirs;
  dirs.reserve(static_cast<std::size_t>(std::max(n, 0)));
  const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * i;
    dirs.push_back({z, r * std::cos(phi), r * std::sin(phi)});
  }
  return dirs;
}

StarShapedReport star_shaped_check(const Region& r, const Event& centre, int n_dirs) {
  StarShapedReport report;
  report.directions = n_dirs;
  if (!(r.value(centre) > 0.0)) {
    report.note = "centre is not an interior point (H(centre) <= 0)";
    report.failures = n_dirs;
    return report;
  }
  const Bbox box = r.bbox().inflated(1.5);
  constexpr int samples = 600;
  for (const TangentVec& d : sphere_directions(n_dirs)) {
    // Parameter at which the ray leaves the inflated box.
    double s_max = INFINITY;
    const std::array<double, 3> c{centre.t, centre.x, centre.y}, v{d.vt, d.vx, d.vy};
    const std::array<double, 3> lo{box.lo.t, box.lo.x, box.lo.y}, hi{box.hi.t, box.hi.x, box.hi.y};
    for (int k = 0; k < 3; ++k) {
      if (v[k] > 0.0) s_max = std::min(s_max, (hi[k] - c[k]) / v[k]);
      if (v[k] < 0.0) s_max = std::min(s_max, (lo[k] - c[k]) / v[k]);
    }
    if (!(s_max > 0.0)) s_max = box.half_diagonal();
    int crossings = 0;
    double prev = r.value(centre);
    for (int i = 1; i <= samples; ++i) {
      const double h = r.value(centre + (s_max * i / samples) * d);
      if ((prev > 0.0) != (h > 0.0)) ++crossings;
      prev = h;
    }
    if (crossings != 1) {
      ++report.failures;
      report.failing.emplace_back(d, crossings);
    }
  }
  report.passed = report.failures == 0;
  return report;
}

NullRay diamond_boundary_torus(double phi, double theta) { return NullRay{unit(phi), theta}; }

}  // namespace nc
