#pragma once

// CSV tables and JSON reports. Numbers are printed with 17 significant
// digits; output depends only on the inputs.

#include <string>

#include "nullcontact/invariants.hpp"

namespace nc {

enum class Format { Csv, Json };

std::string format_number(double x);

// Columns: t, phi, class, n_null_dirs. Surfaces of revolution are sampled on
// an n_t x n_phi grid with the two lightlike latitudes added; other smooth
// regions on boundary points of axis-parallel lines.
std::string classify_table(const Region& r, int n_t, int n_phi, Format f);

std::string convexity_json(const ConvexityReport& report, const BoundaryTolerances& tol);

// Columns: leaf_id, t, phi, branch, q1, q2, theta, time_T. Two leaves per
// base point: plus up from the lower circle, then minus back down.
std::string leaves_table(const Region& r, int n_base_points, const Tolerance& tol, Format f);

// Columns: t, phi, branch, event_t, event_x, event_y, q1, q2, theta.
std::string torus_table(const Region& r, int n_t, int n_phi, Format f);

// Columns: component_id, u, v, t, phi, q1, q2, theta.
std::string dividing_table(const DividingSet& d, Format f);

std::string rotation_json(const RotationResult& r);
std::string rotation_both_json(const RotationResult& quadrature, const RotationResult& traced, double delta,
                               double tolerance);
std::string compare_json(const CompareVerdict& v, double tolerance);

}  // namespace nc
