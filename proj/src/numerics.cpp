#include "nullcontact/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>

#include "nullcontact/error.hpp"

namespace nc {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double checked(double v, double x) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "integrand/function returned " << v << " at x = " << x;
    throw Error(ErrorCode::NonFinite, os.str());
  }
  return v;
}

// Kronrod abscissae (descending, last is the centre) and weights; the Gauss
// nodes are the odd entries.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const ScalarFn& f, double a, double b, long& evals) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(f(centre), centre);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  double resabs = std::abs(resk);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double x1 = centre - dx, x2 = centre + dx;
    f1[j] = checked(f(x1), x1);
    f2[j] = checked(f(x2), x2);
    const double sum = f1[j] + f2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  evals += 15;
  const double mean = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double ah = std::abs(half);
  double err = std::abs((resk - resg) * half);
  resasc *= ah;
  resabs *= ah;
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
  return {a, b, resk * half, err};
}

}  // namespace

void Tolerance::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_steps < 1)
    throw Error(ErrorCode::InvalidArgument, "tolerance requires abs_tol > 0, rel_tol > 0, max_steps >= 1");
}

QuadratureResult integrate(const ScalarFn& f, double a, double b, const Tolerance& tol) {
  tol.validate();
  QuadratureResult out;
  if (a == b) return out;

  std::priority_queue<Panel> panels;
  panels.push(gk15(f, a, b, out.evaluations));
  double total = panels.top().value;
  double total_err = panels.top().error;
  long subdivisions = 0;

  // Sums are recomputed from scratch every few steps to keep drift out of the
  // stopping test.
  auto resum = [&] {
    std::priority_queue<Panel> copy = panels;
    double v = 0.0, e = 0.0;
    while (!copy.empty()) {
      v += copy.top().value;
      e += copy.top().error;
      copy.pop();
    }
    total = v;
    total_err = e;
  };

  while (total_err > std::max(tol.abs_tol, tol.rel_tol * std::abs(total))) {
    if (subdivisions >= tol.max_steps)
      throw Error(ErrorCode::Budget, "quadrature exceeded max_steps subdivisions");
    const Panel worst = panels.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) {
      // Panel cannot be split further in double precision; its estimate is
      // already at rounding level.
      break;
    }
    panels.pop();
    const Panel left = gk15(f, worst.a, mid, out.evaluations);
    const Panel right = gk15(f, mid, worst.b, out.evaluations);
    panels.push(left);
    panels.push(right);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    ++subdivisions;
    if (subdivisions % 64 == 0) resum();
  }
  resum();
  out.value = total;
  out.error_estimate = total_err;
  out.intervals = static_cast<long>(panels.size());
  return out;
}

double find_root(const ScalarFn& f, double lo, double hi, const Tolerance& tol) {
  tol.validate();
  double a = lo, b = hi;
  double fa = checked(f(a), a);
  double fb = checked(f(b), b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    std::ostringstream os;
    os << "f(" << lo << ") = " << fa << " and f(" << hi << ") = " << fb << " have the same sign";
    throw Error(ErrorCode::NoBracket, os.str());
  }
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (long iter = 0; iter < tol.max_steps; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * tol.abs_tol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0)
        q = -q;
      else
        p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (m > 0.0 ? tol1 : -tol1);
    fb = checked(f(b), b);
  }
  throw Error(ErrorCode::Budget, "root finder exceeded max_steps iterations");
}

std::vector<double> find_all_roots(const ScalarFn& f, double lo, double hi, int samples,
                                   const Tolerance& tol) {
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "find_all_roots needs samples >= 1");
  std::vector<double> roots;
  const double h = (hi - lo) / samples;
  double x0 = lo;
  double f0 = checked(f(x0), x0);
  if (f0 == 0.0) roots.push_back(x0);
  for (int i = 1; i <= samples; ++i) {
    const double x1 = (i == samples) ? hi : lo + i * h;
    const double f1 = checked(f(x1), x1);
    if (f1 == 0.0) {
      roots.push_back(x1);
    } else if (f0 != 0.0 && (f0 > 0.0) != (f1 > 0.0)) {
      roots.push_back(find_root(f, x0, x1, tol));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

Maximum maximize(const ScalarFn& f, double lo, double hi, double x_tol) {
  // Brent's localmin applied to -f.
  const double golden = 0.5 * (3.0 - std::sqrt(5.0));
  double a = lo, b = hi;
  double v = a + golden * (b - a);
  double w = v, x = v;
  double fx = -checked(f(x), x);
  double fv = fx, fw = fx;
  double d = 0.0, e = 0.0;
  for (int iter = 0; iter < 500; ++iter) {
    const double m = 0.5 * (a + b);
    const double tol1 = std::sqrt(kEps) * std::abs(x) + x_tol / 3.0;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;
    bool golden_step = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (m >= x) ? tol1 : -tol1;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x >= m) ? a - x : b - x;
      d = golden * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    const double fu = -checked(f(u), u);
    if (fu <= fx) {
      if (u >= x)
        a = x;
      else
        b = x;
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x)
        a = u;
      else
        b = u;
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  return {x, -fx};
}

// ---------------------------------------------------------------------------

OdeState Trajectory::at(double t) const {
  if (times_.empty()) throw Error(ErrorCode::InvalidArgument, "dense output on empty trajectory");
  if (times_.size() == 1) return states_.front();
  const bool forward = times_.back() >= times_.front();
  // Locate the step [times_[k], times_[k+1]] that contains t.
  std::size_t k;
  if (forward) {
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    k = (it == times_.begin()) ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  } else {
    auto it = std::upper_bound(times_.begin(), times_.end(), t, std::greater<double>());
    k = (it == times_.begin()) ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  }
  if (k >= times_.size() - 1) k = times_.size() - 2;
  const double t0 = times_[k], t1 = times_[k + 1];
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  const OdeState& y0 = states_[k];
  const OdeState& y1 = states_[k + 1];
  const OdeState& f0 = derivs_[k];
  const OdeState& f1 = derivs_[k + 1];
  OdeState y(y0.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
  return y;
}

void Trajectory::push(double t, OdeState y, OdeState dydt) {
  times_.push_back(t);
  states_.push_back(std::move(y));
  derivs_.push_back(std::move(dydt));
}

void Trajectory::truncate_after(std::size_t last_index) {
  times_.resize(last_index + 1);
  states_.resize(last_index + 1);
  derivs_.resize(last_index + 1);
}

namespace {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

void check_state(std::span<const double> v, double t) {
  for (double x : v)
    if (!std::isfinite(x)) {
      std::ostringstream os;
      os << "non-finite state or derivative at t = " << t;
      throw Error(ErrorCode::NonFinite, os.str());
    }
}

bool crosses(double g0, double g1, EventDirection dir) {
  const bool rising = g0 < 0.0 && g1 >= 0.0;
  const bool falling = g0 > 0.0 && g1 <= 0.0;
  switch (dir) {
    case EventDirection::Rising: return rising;
    case EventDirection::Falling: return falling;
    case EventDirection::Any: return rising || falling;
  }
  return false;
}

}  // namespace

OdeSolution ode_integrate(const OdeRhs& rhs, OdeState y0, double t0, double t1,
                          std::span<const OdeEvent> events, const OdeOptions& options) {
  const Tolerance& tol = options.tol;
  tol.validate();
  const std::size_t n = y0.size();
  OdeSolution sol;
  check_state(y0, t0);
  if (options.project) options.project(t0, y0);

  OdeState f0(n);
  rhs(t0, y0, f0);
  check_state(f0, t0);
  sol.trajectory.push(t0, y0, f0);
  if (t1 == t0) return sol;

  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);

  auto err_scale = [&](std::size_t, double ya, double yb) {
    return tol.abs_tol + tol.rel_tol * std::max(std::abs(ya), std::abs(yb));
  };

  double h = options.initial_step;
  if (h <= 0.0) {
    // Hairer's starting step heuristic.
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = err_scale(i, y0[i], y0[i]);
      d0 += (y0[i] / sc) * (y0[i] / sc);
      d1 += (f0[i] / sc) * (f0[i] / sc);
    }
    d0 = std::sqrt(d0 / std::max<std::size_t>(n, 1));
    d1 = std::sqrt(d1 / std::max<std::size_t>(n, 1));
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, span);
  }
  h = std::min({h, options.max_step, span});

  std::vector<double> g_prev(events.size());
  for (std::size_t k = 0; k < events.size(); ++k) g_prev[k] = events[k].guard(t0, y0);

  OdeState k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);
  OdeState y = y0, f = f0;
  double t = t0;
  double err_prev = 1e-4;
  bool last_rejected = false;
  constexpr double beta = 0.04, alpha = 0.2 - 0.75 * beta, safety = 0.9;

  while (dir * (t1 - t) > 0.0) {
    if (sol.steps_accepted + sol.steps_rejected >= tol.max_steps)
      throw Error(ErrorCode::Budget, "ODE integration exceeded max_steps");
    if (h < 16.0 * kEps * std::max(std::abs(t), 1.0)) {
      std::ostringstream os;
      os << "step size collapsed at t = " << t;
      throw Error(ErrorCode::Stiff, os.str());
    }
    bool final_step = false;
    if (h >= std::abs(t1 - t)) {
      h = std::abs(t1 - t);
      final_step = true;
    }
    const double hs = dir * h;

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * a21 * f[i];
    rhs(t + c2 * hs, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * (a31 * f[i] + a32 * k2[i]);
    rhs(t + c3 * hs, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * (a41 * f[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * hs, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (a51 * f[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * hs, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (a61 * f[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double tn = final_step ? t1 : t + hs;
    rhs(tn, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + hs * (a71 * f[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    rhs(tn, ynew, k7);
    check_state(ynew, tn);
    check_state(k7, tn);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ei = hs * (e1 * f[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = err_scale(i, y[i], ynew[i]);
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / std::max<std::size_t>(n, 1));

    if (err <= 1.0) {
      double fac = err == 0.0 ? 10.0 : safety * std::pow(err, -alpha) * std::pow(err_prev, beta);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 10.0);
      err_prev = std::max(err, 1e-4);
      last_rejected = false;
      ++sol.steps_accepted;

      if (options.project) {
        options.project(tn, ynew);
        rhs(tn, ynew, k7);
        check_state(k7, tn);
      }
      sol.trajectory.push(tn, ynew, k7);
      const double t_prev = t;
      t = tn;
      y = ynew;
      f = k7;

      // Event detection on the accepted step.
      double t_stop = std::numeric_limits<double>::quiet_NaN();
      std::size_t stop_index = 0;
      std::vector<EventRecord> found;
      for (std::size_t k = 0; k < events.size(); ++k) {
        const double g_new = events[k].guard(t, y);
        if (crosses(g_prev[k], g_new, events[k].direction)) {
          const Trajectory& tr = sol.trajectory;
          auto g_of = [&](double s) { return events[k].guard(s, tr.at(s)); };
          double te;
          if (g_of(t_prev) == 0.0)
            te = t_prev;
          else
            te = find_root(g_of, t_prev, t, Tolerance{tol.abs_tol, tol.rel_tol, 500});
          found.push_back({k, te, tr.at(te)});
          if (events[k].terminal && (std::isnan(t_stop) || dir * (te - t_stop) < 0.0)) {
            t_stop = te;
            stop_index = k;
          }
        }
        g_prev[k] = g_new;
      }
      std::sort(found.begin(), found.end(),
                [dir](const EventRecord& a, const EventRecord& b) { return dir * (a.t - b.t) < 0.0; });
      for (auto& ev : found) {
        if (!std::isnan(t_stop) && dir * (ev.t - t_stop) > 0.0) continue;
        sol.events.push_back(ev);
      }
      if (!std::isnan(t_stop)) {
        OdeState ye = sol.trajectory.at(t_stop);
        OdeState fe(n);
        rhs(t_stop, ye, fe);
        const std::size_t last = sol.trajectory.size() - 2;
        sol.trajectory.truncate_after(last);
        if (t_stop != sol.trajectory.back_time())
          sol.trajectory.push(t_stop, std::move(ye), std::move(fe));
        sol.stopped_by_event = true;
        (void)stop_index;
        return sol;
      }
      if (final_step) break;
      h = std::min(h * fac, options.max_step);
    } else {
      ++sol.steps_rejected;
      last_rejected = true;
      h *= std::max(0.2, safety * std::pow(err, -alpha));
    }
  }
  return sol;
}

}  // namespace nc
