#pragma once

// Minkowski space R^{1,2} with metric -dt^2 + dx^2 + dy^2, the chart
// (q, theta) of its space of future null geodesics, the contact form
// cos(theta) dq1 + sin(theta) dq2 and the conformal group generated by
// translations, orthochronous Lorentz maps and dilations.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

namespace nc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Reduces an angle to [0, 2pi).
double wrap_angle(double a);
// Reduces an angle difference to (-pi, pi].
double wrap_difference(double a);

struct Vec2 {
  double x = 0.0, y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
  friend double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
  double norm() const { return std::hypot(x, y); }
};

inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }
inline Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

struct Event {
  double t = 0.0, x = 0.0, y = 0.0;
  Vec2 spatial() const { return {x, y}; }
};

struct TangentVec {
  double vt = 0.0, vx = 0.0, vy = 0.0;
  Vec2 spatial() const { return {vx, vy}; }

  friend TangentVec operator+(TangentVec a, TangentVec b) { return {a.vt + b.vt, a.vx + b.vx, a.vy + b.vy}; }
  friend TangentVec operator-(TangentVec a, TangentVec b) { return {a.vt - b.vt, a.vx - b.vx, a.vy - b.vy}; }
  friend TangentVec operator*(double s, TangentVec a) { return {s * a.vt, s * a.vx, s * a.vy}; }
};

inline Event operator+(Event p, TangentVec v) { return {p.t + v.vt, p.x + v.vx, p.y + v.vy}; }
inline TangentVec operator-(Event a, Event b) { return {a.t - b.t, a.x - b.x, a.y - b.y}; }

double eta(const TangentVec& v, const TangentVec& w);

enum class CausalType { Timelike, Null, Spacelike, Zero };
enum class TimeOrientation { Future, Past };

struct CausalClass {
  CausalType type = CausalType::Zero;
  std::optional<TimeOrientation> orientation;  // set only for Timelike and Null
};

// `null_tol` is relative to the Euclidean norm squared of v.
CausalClass causal_character(const TangentVec& v, double null_tol = 1e-12);

const char* to_string(CausalType type);

// A future-pointing null geodesic s -> (s, q + s*u(theta)).
struct NullRay {
  Vec2 q;
  double theta = 0.0;  // in [0, 2pi)

  NullRay() = default;
  NullRay(Vec2 q_, double theta_) : q(q_), theta(wrap_angle(theta_)) {}

  Event at(double s) const { return {s, q.x + s * std::cos(theta), q.y + s * std::sin(theta)}; }
  TangentVec direction() const { return {1.0, std::cos(theta), std::sin(theta)}; }
};

// Chart tangent vector (dq, dtheta).
struct ChartVec {
  Vec2 dq;
  double dtheta = 0.0;
};

// Throws NotNull / NotFuture on violated preconditions.
NullRay chart_of_geodesic(const Event& p, const TangentVec& v, double null_tol = 1e-9);

double contact_form_eval(const NullRay& r, const ChartVec& w);

// The sky of p: theta -> ray through p with direction theta, together with its
// theta-derivative.
NullRay sky(const Event& p, double theta);
ChartVec sky_derivative(const Event& p, double theta);

// ---------------------------------------------------------------------------
// Conformal maps

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 identity3();
Mat3 mul(const Mat3& a, const Mat3& b);
std::array<double, 3> mul(const Mat3& a, const std::array<double, 3>& v);
Mat3 transpose(const Mat3& a);
Mat3 inverse(const Mat3& a);
double det(const Mat3& a);

struct Translation {
  Event shift;
};
struct Lorentz {
  Mat3 matrix;  // acts on (t, x, y)
};
struct Dilation {
  double scale = 1.0;
};

Lorentz boost(double rapidity, Vec2 axis);
Lorentz rotation(double angle);

// Throws InvalidArgument unless the matrix preserves eta and the time
// orientation (to 1e-10).
void validate_lorentz(const Mat3& m);

// Factors are applied in list order: the first factor acts first.
class ConformalMap {
public:
  using Factor = std::variant<Translation, Lorentz, Dilation>;

  ConformalMap() = default;
  explicit ConformalMap(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }

  // Every composition is p -> A p + b with A = s*L.
  const Mat3& linear() const { return linear_; }
  const std::array<double, 3>& offset() const { return offset_; }
  double scale() const { return scale_; }

  Event apply(const Event& p) const;
  Event apply_inverse(const Event& p) const;
  TangentVec push(const TangentVec& v) const;
  TangentVec pull(const TangentVec& v) const;
  ConformalMap then(const ConformalMap& next) const;

private:
  std::vector<Factor> factors_;
  Mat3 linear_ = identity3();
  Mat3 inverse_linear_ = identity3();
  std::array<double, 3> offset_{0.0, 0.0, 0.0};
  double scale_ = 1.0;
};

Event apply_conformal(const ConformalMap& m, const Event& p);
NullRay apply_conformal_ray(const ConformalMap& m, const NullRay& r);

}  // namespace nc
