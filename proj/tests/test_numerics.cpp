#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nullcontact/error.hpp"
#include "nullcontact/numerics.hpp"

using namespace nc;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("quadrature of smooth integrands") {
  const Tolerance tol{1e-13, 1e-13, 10000};
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, tol).value ==
        doctest::Approx(2.0).epsilon(1e-13));
  CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0, tol).value ==
        doctest::Approx(std::numbers::e - 1.0).epsilon(1e-13));
  // Reversed limits flip the sign.
  CHECK(integrate([](double x) { return x * x; }, 1.0, 0.0, tol).value == doctest::Approx(-1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("quadrature with square-root endpoint behaviour") {
  const Tolerance tol{1e-12, 1e-12, 10000};
  const double quarter_disc = integrate([](double x) { return std::sqrt(std::max(0.0, 1.0 - x * x)); }, 0.0, 1.0, tol).value;
  CHECK(std::abs(quarter_disc - std::numbers::pi / 4.0) < 1e-11);
  // Integrable 1/sqrt singularity: int_0^1 x^{-1/2} dx = 2.
  const double inv_sqrt = integrate([](double x) { return x > 0.0 ? 1.0 / std::sqrt(x) : 0.0; }, 0.0, 1.0,
                                    Tolerance{1e-9, 1e-9, 100000})
                              .value;
  CHECK(std::abs(inv_sqrt - 2.0) < 1e-7);
}

TEST_CASE("quadrature errors") {
  CHECK(code_of([] { integrate([](double) { return NAN; }, 0.0, 1.0, {}); }) == ErrorCode::NonFinite);
  CHECK(code_of([] { integrate([](double x) { return x; }, 0.0, 1.0, Tolerance{0.0, 1e-10, 10}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] {
          integrate([](double x) { return std::sin(1.0 / (x + 1e-9)); }, 0.0, 1.0, Tolerance{1e-15, 1e-15, 3});
        }) == ErrorCode::Budget);
}

TEST_CASE("Brent root finding") {
  const Tolerance tol{1e-15, 1e-15, 200};
  CHECK(std::abs(find_root([](double x) { return std::cos(x); }, 0.0, 2.0, tol) - std::numbers::pi / 2.0) < 1e-14);
  CHECK(std::abs(find_root([](double x) { return x * x * x - 2.0; }, 0.0, 2.0, tol) - std::cbrt(2.0)) < 1e-14);
  CHECK(find_root([](double x) { return x - 0.25; }, 0.25, 1.0, tol) == 0.25);
  CHECK(code_of([] { find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0, {}); }) == ErrorCode::NoBracket);
}

TEST_CASE("all roots on an interval") {
  const auto roots = find_all_roots([](double x) { return std::sin(x); }, 0.5, 10.0, 64, Tolerance{1e-14, 1e-14, 200});
  REQUIRE(roots.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(roots[k] - (k + 1) * std::numbers::pi) < 1e-12);
  // A zero on a grid node is reported once.
  const auto node = find_all_roots([](double x) { return x - 0.5; }, 0.0, 1.0, 4, {});
  REQUIRE(node.size() == 1);
  CHECK(node[0] == 0.5);
}

TEST_CASE("maximisation") {
  const Maximum m = maximize([](double x) { return -(x - 1.3) * (x - 1.3) + 2.0; }, -4.0, 5.0, 1e-12);
  CHECK(std::abs(m.x - 1.3) < 1e-8);
  CHECK(m.value == doctest::Approx(2.0).epsilon(1e-14));
  // Maximum at an end of the interval.
  const Maximum edge = maximize([](double x) { return x; }, 0.0, 1.0, 1e-12);
  CHECK(edge.x > 1.0 - 1e-6);
}

TEST_CASE("ODE integration: exponential growth forward and backward") {
  const OdeRhs rhs = [](double, std::span<const double> y, std::span<double> d) { d[0] = y[0]; };
  OdeOptions o;
  o.tol = {1e-12, 1e-12, 100000};
  const OdeSolution fwd = ode_integrate(rhs, {1.0}, 0.0, 1.0, {}, o);
  CHECK(std::abs(fwd.trajectory.back()[0] - std::numbers::e) < 1e-10);
  CHECK(fwd.trajectory.back_time() == 1.0);
  // Dense output in the interior.
  CHECK(std::abs(fwd.trajectory.at(0.5)[0] - std::exp(0.5)) < 1e-9);
  const OdeSolution bwd = ode_integrate(rhs, {1.0}, 0.0, -1.0, {}, o);
  CHECK(std::abs(bwd.trajectory.back()[0] - std::exp(-1.0)) < 1e-11);
}

TEST_CASE("ODE terminal event is located") {
  const OdeRhs rhs = [](double, std::span<const double> y, std::span<double> d) { d[0] = y[0]; };
  const OdeEvent hit{[](double, std::span<const double> y) { return y[0] - 2.0; }, EventDirection::Rising, true};
  OdeOptions o;
  o.tol = {1e-12, 1e-12, 100000};
  const OdeSolution s = ode_integrate(rhs, {1.0}, 0.0, 5.0, std::span(&hit, 1), o);
  REQUIRE(s.stopped_by_event);
  REQUIRE(s.events.size() == 1);
  CHECK(std::abs(s.events[0].t - std::log(2.0)) < 1e-10);
  CHECK(std::abs(s.trajectory.back_time() - std::log(2.0)) < 1e-10);
  // A falling-direction event never fires on an increasing guard.
  const OdeEvent falling{hit.guard, EventDirection::Falling, true};
  CHECK_FALSE(ode_integrate(rhs, {1.0}, 0.0, 1.0, std::span(&falling, 1), o).stopped_by_event);
}

TEST_CASE("ODE projection keeps the state on the constraint") {
  const OdeRhs rhs = [](double, std::span<const double> y, std::span<double> d) {
    d[0] = -y[1];
    d[1] = y[0];
  };
  OdeOptions o;
  o.tol = {1e-6, 1e-6, 100000};
  o.project = [](double, std::span<double> y) {
    const double n = std::hypot(y[0], y[1]);
    y[0] /= n;
    y[1] /= n;
  };
  const OdeSolution s = ode_integrate(rhs, {1.0, 0.0}, 0.0, 20.0, {}, o);
  for (const auto& y : s.trajectory.states()) CHECK(std::abs(std::hypot(y[0], y[1]) - 1.0) < 1e-14);
  CHECK(std::abs(s.trajectory.back()[0] - std::cos(20.0)) < 1e-4);
}

TEST_CASE("ODE failures are reported") {
  const OdeRhs blowup = [](double, std::span<const double> y, std::span<double> d) { d[0] = y[0] * y[0]; };
  OdeOptions o;
  o.tol = {1e-10, 1e-10, 500};
  const ErrorCode c = code_of([&] { ode_integrate(blowup, {1.0}, 0.0, 2.0, {}, o); });
  CHECK((c == ErrorCode::NonFinite || c == ErrorCode::Budget || c == ErrorCode::Stiff));
  const OdeRhs nan_rhs = [](double, std::span<const double>, std::span<double> d) { d[0] = NAN; };
  CHECK(code_of([&] { ode_integrate(nan_rhs, {1.0}, 0.0, 1.0, {}, o); }) == ErrorCode::NonFinite);
}
