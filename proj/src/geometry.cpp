#include "nullcontact/geometry.hpp"

#include <sstream>

#include "nullcontact/error.hpp"

namespace nc {

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double wrap_difference(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  if (r > kPi) r -= kTwoPi;
  return r;
}

double eta(const TangentVec& v, const TangentVec& w) { return -v.vt * w.vt + v.vx * w.vx + v.vy * w.vy; }

CausalClass causal_character(const TangentVec& v, double null_tol) {
  const double e2 = v.vt * v.vt + v.vx * v.vx + v.vy * v.vy;
  if (e2 == 0.0) return {CausalType::Zero, std::nullopt};
  const double q = eta(v, v);
  CausalType type;
  if (std::abs(q) <= null_tol * e2)
    type = CausalType::Null;
  else
    type = q < 0.0 ? CausalType::Timelike : CausalType::Spacelike;
  if (type == CausalType::Spacelike) return {type, std::nullopt};
  return {type, v.vt > 0.0 ? TimeOrientation::Future : TimeOrientation::Past};
}

const char* to_string(CausalType type) {
  switch (type) {
    case CausalType::Timelike: return "Timelike";
    case CausalType::Null: return "Null";
    case CausalType::Spacelike: return "Spacelike";
    case CausalType::Zero: return "Zero";
  }
  return "?";
}

NullRay chart_of_geodesic(const Event& p, const TangentVec& v, double null_tol) {
  const double e2 = v.vt * v.vt + v.vx * v.vx + v.vy * v.vy;
  if (e2 == 0.0 || std::abs(eta(v, v)) > null_tol * e2) {
    std::ostringstream os;
    os << "direction (" << v.vt << ", " << v.vx << ", " << v.vy << ") is not null";
    throw Error(ErrorCode::NotNull, os.str());
  }
  if (!(v.vt > 0.0)) throw Error(ErrorCode::NotFuture, "direction is not future pointing");
  Vec2 u{v.vx / v.vt, v.vy / v.vt};
  const double len = u.norm();
  u = (1.0 / len) * u;
  return NullRay{p.spatial() - p.t * u, std::atan2(u.y, u.x)};
}

double contact_form_eval(const NullRay& r, const ChartVec& w) {
  return std::cos(r.theta) * w.dq.x + std::sin(r.theta) * w.dq.y;
}

NullRay sky(const Event& p, double theta) { return NullRay{p.spatial() - p.t * unit(theta), theta}; }

ChartVec sky_derivative(const Event& p, double theta) { return {-p.t * perp(unit(theta)), 1.0}; }

// ---------------------------------------------------------------------------

Mat3 identity3() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

Mat3 mul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

std::array<double, 3> mul(const Mat3& a, const std::array<double, 3>& v) {
  std::array<double, 3> r{};
  for (int i = 0; i < 3; ++i) r[i] = a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2];
  return r;
}

Mat3 transpose(const Mat3& a) {
  Mat3 t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = a[j][i];
  return t;
}

double det(const Mat3& a) {
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

Mat3 inverse(const Mat3& a) {
  const double d = det(a);
  if (d == 0.0) throw Error(ErrorCode::InvalidArgument, "singular matrix");
  Mat3 inv{};
  inv[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / d;
  inv[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / d;
  inv[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / d;
  inv[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / d;
  inv[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / d;
  inv[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / d;
  inv[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / d;
  inv[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / d;
  inv[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / d;
  return inv;
}

Lorentz boost(double rapidity, Vec2 axis) {
  const double n = axis.norm();
  if (!(n > 0.0)) throw Error(ErrorCode::InvalidArgument, "boost axis must be non-zero");
  const Vec2 u = (1.0 / n) * axis;
  const double ch = std::cosh(rapidity), sh = std::sinh(rapidity);
  Mat3 m{};
  m[0] = {ch, sh * u.x, sh * u.y};
  m[1] = {sh * u.x, 1.0 + (ch - 1.0) * u.x * u.x, (ch - 1.0) * u.x * u.y};
  m[2] = {sh * u.y, (ch - 1.0) * u.x * u.y, 1.0 + (ch - 1.0) * u.y * u.y};
  return {m};
}

Lorentz rotation(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {{{{1, 0, 0}, {0, c, -s}, {0, s, c}}}};
}

void validate_lorentz(const Mat3& m) {
  // M^T diag(-1,1,1) M = diag(-1,1,1)
  const std::array<double, 3> g{-1.0, 1.0, 1.0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += m[k][i] * g[k] * m[k][j];
      const double expect = (i == j) ? g[i] : 0.0;
      if (std::abs(s - expect) > 1e-10 * (1.0 + std::abs(m[0][0]) * std::abs(m[0][0])))
        throw Error(ErrorCode::InvalidArgument, "matrix does not preserve the Minkowski metric");
    }
  if (!(m[0][0] > 0.0)) throw Error(ErrorCode::InvalidArgument, "Lorentz factor must be orthochronous");
}

ConformalMap::ConformalMap(std::vector<Factor> factors) : factors_(std::move(factors)) {
  for (const Factor& f : factors_) {
    Mat3 a = identity3();
    std::array<double, 3> b{0.0, 0.0, 0.0};
    if (const auto* tr = std::get_if<Translation>(&f)) {
      b = {tr->shift.t, tr->shift.x, tr->shift.y};
    } else if (const auto* lz = std::get_if<Lorentz>(&f)) {
      validate_lorentz(lz->matrix);
      a = lz->matrix;
    } else {
      const double s = std::get<Dilation>(f).scale;
      if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorCode::InvalidArgument, "dilation scale must be > 0");
      a = {{{s, 0, 0}, {0, s, 0}, {0, 0, s}}};
      scale_ *= s;
    }
    // new(p) = a (A p + c) + b
    linear_ = mul(a, linear_);
    const auto ac = mul(a, offset_);
    offset_ = {ac[0] + b[0], ac[1] + b[1], ac[2] + b[2]};
  }
  inverse_linear_ = inverse(linear_);
}

Event ConformalMap::apply(const Event& p) const {
  const auto r = mul(linear_, std::array<double, 3>{p.t, p.x, p.y});
  return {r[0] + offset_[0], r[1] + offset_[1], r[2] + offset_[2]};
}

Event ConformalMap::apply_inverse(const Event& p) const {
  const auto r = mul(inverse_linear_, std::array<double, 3>{p.t - offset_[0], p.x - offset_[1], p.y - offset_[2]});
  return {r[0], r[1], r[2]};
}

TangentVec ConformalMap::push(const TangentVec& v) const {
  const auto r = mul(linear_, std::array<double, 3>{v.vt, v.vx, v.vy});
  return {r[0], r[1], r[2]};
}

TangentVec ConformalMap::pull(const TangentVec& v) const {
  const auto r = mul(inverse_linear_, std::array<double, 3>{v.vt, v.vx, v.vy});
  return {r[0], r[1], r[2]};
}

ConformalMap ConformalMap::then(const ConformalMap& next) const {
  std::vector<Factor> all = factors_;
  all.insert(all.end(), next.factors_.begin(), next.factors_.end());
  return ConformalMap(std::move(all));
}

Event apply_conformal(const ConformalMap& m, const Event& p) { return m.apply(p); }

NullRay apply_conformal_ray(const ConformalMap& m, const NullRay& r) {
  const Event p{0.0, r.q.x, r.q.y};
  return chart_of_geodesic(m.apply(p), m.push(r.direction()));
}

}  // namespace nc
