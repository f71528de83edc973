#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nullcontact/regions.hpp"

namespace nc {

enum class BoundaryClass { TimelikePart, LightlikePart, SpacelikePart };
const char* to_string(BoundaryClass c);

struct BoundaryTolerances {
  double boundary = 1e-9;   // |H| relative to |grad H| * length scale
  double lightlike = 1e-8;  // |eta(grad, grad)| relative to |grad|^2
  double hessian = 1e-6;    // pass threshold for min |Hess H(v, v)|
};

struct BoundaryPoint {
  Event event;
  BoundaryClass causal_class = BoundaryClass::SpacelikePart;
  std::vector<TangentVec> null_dirs;  // Plus first when there are two
};

// Null tangent directions (vt = 1) of the level set through a point with the
// given H-gradient. Two (Plus, Minus), one or none. Plus is the family whose
// spatial part turns counterclockwise around the outward spatial normal.
std::vector<TangentVec> null_directions_from_gradient(const TangentVec& grad, double lightlike_tol);

// Normalised signed discriminant (|g|^2 - H_t^2) / (|g|^2 + H_t^2) with
// g the spatial gradient: > 0 timelike part, 0 lightlike, < 0 spacelike.
double band_indicator(const TangentVec& grad);

// The null tangent of the chosen family with the square root clamped at 0,
// for tracing curves up to the lightlike set.
TangentVec null_direction_clamped(const TangentVec& grad, bool plus);

BoundaryPoint classify_boundary_point(const Region& r, const Event& p, const BoundaryTolerances& tol = {});
std::vector<TangentVec> null_tangent_directions(const Region& r, const Event& p, const BoundaryTolerances& tol = {});

std::pair<double, double> lightlike_latitudes(const RadiusSquaredProfile& profile);

struct Tangency {
  Event event;
  double G = 0.0;  // sup of H along the ray
  double s = 0.0;  // affine parameter of the maximiser
};

// Parameter interval on which the ray lies in `box`; throws NoBracket when
// it misses the box.
std::pair<double, double> ray_window(const NullRay& ray, const Bbox& box);

Tangency tangency_point(const Region& r, const NullRay& ray);

struct ConvexityGrid {
  int latitudes = 64;     // boundary sample rows (lines per axis for non-revolution regions)
  int azimuths = 64;
  int ray_samples = 400;  // samples along each scanned ray
  int chord_directions = 8;
  int chord_offsets = 15;  // odd, so the central ray is included
};

struct ConvexityFailure {
  std::string kind;  // "hessian", "tangency", "chord"
  Event event;
  NullRay ray;
  double value = 0.0;
};

struct ConvexityReport {
  double hessian_min_abs = 0.0;
  Event hessian_argmin;
  bool hessian_ok = false;
  bool unique_tangency_ok = false;
  bool chord_connected_ok = false;
  int samples = 0;
  std::vector<ConvexityFailure> failures;
  bool passed() const { return hessian_ok && unique_tangency_ok && chord_connected_ok; }
};

ConvexityReport check_strong_null_convexity(const Region& r, const ConvexityGrid& grid = {},
                                            const BoundaryTolerances& tol = {});

// Boundary points of a smooth region on a grid of axis-parallel lines.
std::vector<Event> sample_boundary(const Region& r, int lines_per_axis, int samples_per_line);

// Directional derivative dH(v) at p; exact where the region provides it.
double directional_derivative(const Region& r, const Event& p, const TangentVec& v);

}  // namespace nc
