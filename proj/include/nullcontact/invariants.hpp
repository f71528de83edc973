#pragma once

// Rotation angle of the return map between the singular circles, rotation
// numbers of sampled circle maps, and comparison of regions by that angle.

#include <limits>
#include <string>
#include <vector>

#include "nullcontact/foliation.hpp"

namespace nc {

enum class RotationMethod { Quadrature, Traced };
enum class Orientation { CCW, CW };
const char* to_string(RotationMethod m);
const char* to_string(Orientation o);

struct RotationResult {
  double total_angle = 0.0;  // signed, one full return
  double reduced = 0.0;      // total_angle reduced to (-pi, pi]
  RotationMethod method = RotationMethod::Quadrature;
  Orientation orientation = Orientation::CCW;
  int n_base_points = 0;
  double spread = 0.0;  // max - min of per-point return angles
  // Traced non-revolution regions: the same rotation number with the lower
  // circle parametrised by arclength instead of azimuth.
  double arclength_rotation = std::numeric_limits<double>::quiet_NaN();
};

RotationResult rotation_from_total(double total, RotationMethod method);

// +- integral over the timelike band of sqrt(4 rho - rho'^2) / rho.
RotationResult rotation_angle_quadrature(const RadiusSquaredProfile& profile,
                                         const Tolerance& tol = {1e-13, 1e-13, 100000});

struct TraceOptions {
  Tolerance tol{1e-10, 1e-10, 200000};
  int n_base_points = 128;
  double spread_tol = 1e-6;  // revolution regions: per-point agreement
  long iterations = 20000;   // circle-map iterates
};

// Follows each family from the lower singular circle to the upper one and
// back along the other family. Revolution regions use the scalar leaf
// equation, the diamond (and its images) the chart foliation, other regions
// the ambient null direction field with a circle-map rotation number.
RotationResult rotation_angle_traced(const Region& r, const TraceOptions& options = {});

// A circle map through samples x_i -> F(x_i), F a lift. Inputs need not be
// sorted or reduced.
struct CircleMap {
  std::vector<double> input;
  std::vector<double> lift;
};

// Periodic cubic spline of the displacement F(x) - x.
class CircleMapInterpolant {
public:
  explicit CircleMapInterpolant(const CircleMap& m);
  double displacement(double x) const;
  double displacement_derivative(double x) const;
  double operator()(double x) const { return x + displacement(x); }

private:
  std::vector<double> x_, y_, m_;  // nodes in [x0, x0 + 2pi), values, second derivatives
  std::size_t locate(double& x) const;
};

// Mean displacement of the lift by a weighted Birkhoff average. Throws
// NotMonotone when the interpolated lift is not increasing and
// InvalidArgument when samples are gappier than pi/8.
double lifted_rotation_number(const CircleMap& m, long iterations);
// The same reduced to (-pi, pi].
double rotation_number_of_circle_map(const CircleMap& m, long iterations);

enum class Verdict { Distinguished, IndistinguishableByInvariant };
const char* to_string(Verdict v);

struct CompareVerdict {
  Verdict verdict = Verdict::IndistinguishableByInvariant;
  double angle_a = 0.0, angle_b = 0.0;  // reduced angles
  double distance = 0.0;
  RotationResult a, b;
};

// Quadrature for surfaces of revolution, tracing otherwise.
RotationResult best_rotation(const Region& r, const TraceOptions& options = {});

// Distinguished iff min(|a - b|, |a + b|) on the circle exceeds tol.
double rotation_distance(double a, double b);
CompareVerdict compare_regions(const Region& a, const Region& b, double tol = 1e-3, const TraceOptions& options = {});

}  // namespace nc
