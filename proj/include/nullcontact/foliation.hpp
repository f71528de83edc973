#pragma once

// The boundary torus of the space of null geodesics of a region, its
// characteristic foliation, singular circles and dividing set.

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nullcontact/boundary.hpp"

namespace nc {

enum class Branch { Plus, Minus, Merged };
const char* to_string(Branch b);

// A boundary null geodesic: the tangency event on the region boundary, the
// null direction used there and its chart image. `phi` is the azimuth of the
// event (continuous along a leaf, not reduced).
struct TorusPoint {
  double t = 0.0;
  double phi = 0.0;
  Branch branch = Branch::Plus;
  NullRay chart;
  double time_T = 0.0;
  Event event;
  TangentVec direction;
};

// Closed-form torus point of a surface of revolution. Merged is accepted only
// at the lightlike latitudes.
TorusPoint revolution_torus_point(const RevolutionData& rev, double t, double phi, Branch branch);

// Samples both branch sheets on an n_t x n_phi grid. Revolution regions use the
// closed form; transformed regions map their base torus; implicit regions
// classify sampled boundary points and confirm each ray with tangency_point.
std::vector<TorusPoint> boundary_torus(const Region& r, int n_t, int n_phi);

// Chart coordinates (q1, q2, theta) with theta lifted to a continuous value.
using ChartCoords = std::array<double, 3>;

struct ChartSample {
  ChartCoords value;
  ChartCoords su, sv;  // partial derivatives in the two torus coordinates
  NullRay ray;
  Event event;
  TangentVec direction;
  double t = 0.0;
  Branch branch = Branch::Plus;
};

// Smooth global parametrisation (u, v) of the boundary torus, both periodic
// with period 2pi. Revolution: u = phi, v = alpha, the angle of the spatial
// null direction relative to u(phi); Plus for alpha in (0, pi). Diamond:
// u = phi, v = theta. Transformed: the base parametrisation pushed through
// the conformal map.
class TorusChart {
public:
  static TorusChart of(const Region& r);

  ChartSample eval(double u, double v) const;
  const std::string& coordinates() const { return coords_; }
  // v-value of the lower singular circle over u; the upper one is at +pi.
  double lower_v(double u) const { return lower_v_(u); }

private:
  std::function<ChartSample(double, double)> eval_;
  std::function<double(double)> lower_v_;
  std::string coords_;
};

double contact_form_on(const NullRay& ray, const ChartCoords& w);

struct FoliationDirection {
  bool singular = false;
  ChartCoords direction{};  // unit vector in chart coordinates
  double a = 0.0, b = 0.0;  // direction = a S_u + b S_v
  double lambda_u = 0.0, lambda_v = 0.0;
};

struct FoliationTolerances {
  double singular = 1e-8;      // |lambda(S)| relative to |S|
  double conditioning = 1e-9;  // |S_u x S_v| relative to |S_u||S_v|
};

// Kernel of the contact form restricted to the torus at (u, v). Throws
// IllConditioned when the tangent basis degenerates.
FoliationDirection chart_foliation_direction(const TorusChart& chart, double u, double v,
                                             const FoliationTolerances& tol = {});

// Unsigned angle between two lines in chart coordinates.
double line_angle(const ChartCoords& a, const ChartCoords& b);

// ---------------------------------------------------------------------------
// Leaves

enum class LeafEnd { HitLowerSingular, HitUpperSingular, Budget };
const char* to_string(LeafEnd e);

enum class LeafDirection { Forward, Backward };

// Axis used to measure azimuths for non-revolution regions: the spatial
// centre c(t) moves linearly between two anchor events.
struct Axis {
  Event lower, upper;
  Vec2 centre(double t) const;
  double azimuth(const Event& p) const;
};

struct Leaf {
  std::vector<TorusPoint> points;
  LeafEnd end = LeafEnd::Budget;
  double delta_phi = 0.0;
};

struct LeafOptions {
  Tolerance tol{1e-10, 1e-10, 200000};
  LeafDirection direction = LeafDirection::Forward;
  const Axis* axis = nullptr;  // time_axis(r) if null
  bool ambient = false;        // trace revolution regions with the generic field too
};

// Follows the lightlike curve of the start point's family until it meets a
// singular circle. Revolution regions integrate the scalar azimuth equation in
// t; other smooth regions integrate the null direction field in t with a
// spatial Newton projection onto H = 0 after every step.
Leaf integrate_leaf(const Region& r, const TorusPoint& start, const LeafOptions& options = {});

// Two leaves per base point on the lower singular circle: the plus leaf up to
// the upper circle, then the minus leaf from its end back down. Base points
// are equally spaced in azimuth. Smooth regions only.
std::vector<Leaf> leaf_family(const Region& r, int n_base_points, const Tolerance& tol = {1e-10, 1e-10, 200000});

// Chart tangent of the leaf through `p` from differences of chart images
// along the lightlike curve (Richardson-extrapolated central differences).
ChartCoords leaf_chart_tangent(const Region& r, const TorusPoint& p);

// ---------------------------------------------------------------------------
// Lightlike circles for non-revolution regions

struct LightlikeSet {
  std::vector<double> psi;           // azimuths around the axis
  std::vector<Event> lower, upper;  // boundary events with a single null tangent
  Axis axis;
};

// Axis through the lowest and highest boundary points. Inside the region
// when it is convex.
Axis time_axis(const Region& r);

// Locates the two lightlike circles on the meridians at n_psi azimuths around
// time_axis(r).
LightlikeSet lightlike_set(const Region& r, int n_psi);

// ---------------------------------------------------------------------------

struct SingularCircle {
  std::vector<TorusPoint> points;
  std::vector<ChartCoords> detected;  // chart points where both lambda components vanish
};

struct SingularSet {
  SingularCircle lower, upper;
  double hausdorff = 0.0;  // between closed form and detections, chart coordinates
};

// Closed-form singular circles compared against detections from
// chart_foliation_direction on n_samples v-lines. Throws Mismatch above tol.
SingularSet singular_set(const Region& r, int n_samples = 256, double tol = 1e-6);

// ---------------------------------------------------------------------------

struct DividingComponent {
  std::vector<double> u, v;
  std::vector<TorusPoint> points;
  double latitude = 0.0;         // mean event time
  double latitude_spread = 0.0;  // max deviation from the mean
};

struct DividingSet {
  std::vector<DividingComponent> components;
  double y_min_det = 0.0;            // min normalised det[Y, S_u, S_v] over samples
  bool y_transverse = false;
  double min_foliation_angle = 0.0;  // min angle between a component and the foliation
  bool foliation_transverse = false;
  bool separates = false;            // each singular circle in its own annulus
  int samples = 0;
};

// Chart value of the contact form on the dilation field about `center`.
double lambda_dilation(const NullRay& ray, const Event& center);

// Zero set of lambda(Y) for the dilation field Y centred at `center`, traced
// along n_v-point v-lines at n_u values of u. Throws InvalidArgument unless
// the region is star-shaped about the centre, NotTransverse if Y is tangent
// to the torus at a sample.
DividingSet dividing_set(const Region& r, const Event& center, int n_u = 128, int n_v = 256);

}  // namespace nc
