#pragma once

// Shared numerical kernels: adaptive Gauss-Kronrod quadrature, an embedded
// Runge-Kutta 4(5) integrator with events and optional manifold projection,
// and a bracketed Brent root finder. Everything here is deterministic and
// free of shared state.

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace nc {

struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  long max_steps = 100000;

  // Throws InvalidArgument unless abs_tol > 0, rel_tol > 0, max_steps >= 1.
  void validate() const;
};

using ScalarFn = std::function<double(double)>;

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long intervals = 0;
  long evaluations = 0;
};

// Globally adaptive 7/15-point Gauss-Kronrod integration. The worst panel is
// bisected until the summed error estimate drops below
// max(abs_tol, rel_tol*|I|). Square-root type endpoint behaviour is handled by
// repeated bisection of the endpoint panels.
QuadratureResult integrate(const ScalarFn& f, double a, double b, const Tolerance& tol);

inline double adaptive_quadrature(const ScalarFn& f, double a, double b, const Tolerance& tol) {
  return integrate(f, a, b, tol).value;
}

// Brent's method on a sign-changing bracket. Returns x with bracket width
// <= abs_tol (or an exact zero).
double find_root(const ScalarFn& f, double lo, double hi, const Tolerance& tol);

// Sweeps [lo, hi] with `samples` uniform cells and polishes every sign change
// with find_root. Exact zeros on grid nodes are reported once.
std::vector<double> find_all_roots(const ScalarFn& f, double lo, double hi, int samples,
                                   const Tolerance& tol);

// Brent's parabolic/golden-section maximizer on [lo, hi].
struct Maximum {
  double x = 0.0;
  double value = 0.0;
};
Maximum maximize(const ScalarFn& f, double lo, double hi, double x_tol);

// ---------------------------------------------------------------------------
// ODE integration

using OdeState = std::vector<double>;
using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

enum class EventDirection { Rising, Falling, Any };

struct OdeEvent {
  std::function<double(double t, std::span<const double> y)> guard;
  EventDirection direction = EventDirection::Any;
  bool terminal = true;
};

struct EventRecord {
  std::size_t index = 0;  // position in the events list
  double t = 0.0;
  OdeState y;
};

struct OdeOptions {
  Tolerance tol{1e-10, 1e-10, 200000};
  double initial_step = 0.0;  // 0 selects a step automatically
  double max_step = std::numeric_limits<double>::infinity();
  // Applied to every accepted state, e.g. to pull it back onto a constraint
  // surface. The time argument is the step end time.
  std::function<void(double t, std::span<double> y)> project;
};

// Accepted steps with cubic Hermite dense output between them.
class Trajectory {
public:
  const std::vector<double>& times() const { return times_; }
  const std::vector<OdeState>& states() const { return states_; }
  const std::vector<OdeState>& derivatives() const { return derivs_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }

  double front_time() const { return times_.front(); }
  double back_time() const { return times_.back(); }
  const OdeState& back() const { return states_.back(); }

  // Dense output; t must lie within the integrated span.
  OdeState at(double t) const;

  void push(double t, OdeState y, OdeState dydt);
  void truncate_after(std::size_t last_index);

private:
  std::vector<double> times_;
  std::vector<OdeState> states_;
  std::vector<OdeState> derivs_;
};

struct OdeSolution {
  Trajectory trajectory;
  std::vector<EventRecord> events;
  bool stopped_by_event = false;
  long steps_accepted = 0;
  long steps_rejected = 0;
};

// Dormand-Prince 5(4) with PI step-size control. Integrates forward or
// backward (t1 < t0). Terminal events stop the integration at the located
// event time, which is then the last trajectory node.
OdeSolution ode_integrate(const OdeRhs& rhs, OdeState y0, double t0, double t1,
                          std::span<const OdeEvent> events, const OdeOptions& options);

}  // namespace nc
