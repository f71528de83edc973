#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nullcontact/geometry.hpp"
#include "nullcontact/numerics.hpp"

namespace nc {

// Squared radius rho(t) of a surface of revolution about the t-axis, given as
// a polynomial in t on [t_min, t_max].
class RadiusSquaredProfile {
public:
  static RadiusSquaredProfile polynomial(std::vector<double> coeffs, double t_min, double t_max);
  // rho(t) = b^2 (1 - t^2/a^2) on [-a, a].
  static RadiusSquaredProfile ellipsoid(double a, double b);

  double rho(double t) const;
  double d1(double t) const;
  double d2(double t) const;
  // rho'^2 - 4 rho: negative on the timelike band, positive on the caps.
  double band_discriminant(double t) const { return d1(t) * d1(t) - 4.0 * rho(t); }

  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  std::optional<std::pair<double, double>> ellipsoid_axes() const { return axes_; }

  // Scaled copy rho_s(t) = s^2 rho(t/s), i.e. the dilation image.
  RadiusSquaredProfile dilated(double s) const;

  std::string describe() const;

private:
  std::vector<double> coeffs_;
  double t_min_ = 0.0, t_max_ = 0.0;
  std::optional<std::pair<double, double>> axes_;
};

struct Bbox {
  Event lo, hi;

  bool contains(const Event& p) const {
    return p.t >= lo.t && p.t <= hi.t && p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
  Event centre() const { return {0.5 * (lo.t + hi.t), 0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)}; }
  double half_diagonal() const;
  Bbox inflated(double factor) const;
};

// H with its exact or finite-difference first and second derivatives. The
// gradient holds covector components (dH/dt, dH/dx, dH/dy).
struct HValue {
  double value = 0.0;
  TangentVec grad;
  Mat3 hess{};
};

struct ImplicitSpec {
  std::function<double(const Event&)> h;
  std::function<TangentVec(const Event&)> grad;  // optional
  std::function<Mat3(const Event&)> hess;        // optional
  Bbox bbox;
  std::optional<Event> interior;  // a point with H > 0, if known
  std::string name = "implicit";
};

enum class RegionKind { Revolution, Implicit, Diamond, Transformed };
const char* to_string(RegionKind kind);

struct RevolutionData {
  RadiusSquaredProfile profile;
  double t_lower = 0.0;  // lightlike latitudes
  double t_upper = 0.0;
  double r_max = 0.0;
};

class Region {
public:
  RegionKind kind() const;

  // H > 0 inside, 0 on the boundary, < 0 outside.
  double value(const Event& p) const;
  // region_H. Throws OutsideDomain for implicit regions outside their box and
  // NotSupported for the (non-smooth) diamond.
  HValue eval(const Event& p) const;
  // False where eval() would throw OutsideDomain.
  bool in_domain(const Event& p) const;

  Bbox bbox() const;
  Event interior_point() const;
  // Typical length; used to scale tolerances.
  double length_scale() const;
  bool smooth() const { return kind() != RegionKind::Diamond; }

  const RevolutionData* revolution() const;
  // For Transformed regions; nullptr otherwise.
  const Region* base() const;
  const ConformalMap* map() const;

  std::string describe() const;

  struct Impl;
  explicit Region(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  const Impl& impl() const { return *impl_; }

private:
  std::shared_ptr<const Impl> impl_;
};

// Validates the profile (smooth caps, positivity, exactly two lightlike
// latitudes, negative just outside the span); throws BadProfile naming the
// violated condition.
Region make_revolution(const RadiusSquaredProfile& profile);
Region make_implicit(ImplicitSpec spec);
Region make_diamond();
Region make_transformed(const Region& base, const ConformalMap& map);

// Two Euclidean balls of radius `radius` in (t, x, y) joined by a smooth
// maximum; the standard non-convex witness.
Region smoothed_ball_union(const Event& c1, const Event& c2, double radius, double smoothing = 0.05);

// The interior lightlike latitudes of a profile via sign sweep + Brent.
// Throws BadProfile unless exactly two exist.
std::pair<double, double> profile_latitudes(const RadiusSquaredProfile& profile);

struct StarShapedReport {
  bool passed = false;
  int directions = 0;
  int failures = 0;
  std::vector<std::pair<TangentVec, int>> failing;  // direction, crossing count
  std::string note;
};

StarShapedReport star_shaped_check(const Region& r, const Event& centre, int n_dirs);

// Chart embedding of the diamond's boundary torus: (phi, theta) -> (u(phi), theta).
NullRay diamond_boundary_torus(double phi, double theta);

// Deterministic, nearly uniform unit vectors on S^2 (Fibonacci lattice).
std::vector<TangentVec> sphere_directions(int n);

}  // namespace nc
