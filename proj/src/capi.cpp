#include "nullcontact/nullcontact.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include "nullcontact/error.hpp"
#include "nullcontact/report.hpp"
#include "nullcontact/selftest.hpp"
#include "nullcontact/spec.hpp"

struct nc_region {
  nc::Region region;
};

namespace {

thread_local std::string last_error;

nc_status status_of(nc::ErrorCode code) {
  using nc::ErrorCode;
  switch (code) {
    case ErrorCode::NonFinite: return NC_ERR_NON_FINITE;
    case ErrorCode::Budget: return NC_ERR_BUDGET;
    case ErrorCode::Stiff: return NC_ERR_STIFF;
    case ErrorCode::NoBracket: return NC_ERR_NO_BRACKET;
    case ErrorCode::NotNull: return NC_ERR_NOT_NULL;
    case ErrorCode::NotFuture: return NC_ERR_NOT_FUTURE;
    case ErrorCode::BadProfile: return NC_ERR_BAD_PROFILE;
    case ErrorCode::OutsideDomain: return NC_ERR_OUTSIDE_DOMAIN;
    case ErrorCode::NotOnBoundary: return NC_ERR_NOT_ON_BOUNDARY;
    case ErrorCode::DegenerateGradient: return NC_ERR_DEGENERATE_GRADIENT;
    case ErrorCode::LostSurface: return NC_ERR_LOST_SURFACE;
    case ErrorCode::IllConditioned: return NC_ERR_ILL_CONDITIONED;
    case ErrorCode::Mismatch: return NC_ERR_MISMATCH;
    case ErrorCode::NotTransverse: return NC_ERR_NOT_TRANSVERSE;
    case ErrorCode::InconsistentHolonomy: return NC_ERR_INCONSISTENT_HOLONOMY;
    case ErrorCode::NotMonotone: return NC_ERR_NOT_MONOTONE;
    case ErrorCode::NotSupported: return NC_ERR_NOT_SUPPORTED;
    case ErrorCode::InvalidArgument: return NC_ERR_INVALID_ARGUMENT;
    case ErrorCode::Parse: return NC_ERR_PARSE;
  }
  return NC_ERR_INTERNAL;
}

template <class F>
nc_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return NC_OK;
  } catch (const nc::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    last_error = std::string("internal error: ") + e.what();
    return NC_ERR_INTERNAL;
  } catch (...) {
    last_error = "internal error";
    return NC_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw nc::Error(nc::ErrorCode::InvalidArgument, what);
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nc::Format format_of(nc_format f) { return f == NC_FORMAT_JSON ? nc::Format::Json : nc::Format::Csv; }

nc::TraceOptions trace_options(const nc_trace_options* o) {
  nc::TraceOptions t;
  if (!o) return t;
  require(o->n_base_points == 0 || o->n_base_points >= 8, "n_base_points must be 0 or at least 8");
  require(o->tolerance >= 0.0 && std::isfinite(o->tolerance), "tolerance must be finite and non-negative");
  if (o->n_base_points) t.n_base_points = o->n_base_points;
  if (o->tolerance > 0.0) t.tol.abs_tol = t.tol.rel_tol = o->tolerance;
  return t;
}

void fill(const nc::RotationResult& r, nc_rotation* out) {
  out->total_angle = r.total_angle;
  out->reduced = r.reduced;
  out->spread = r.spread;
  out->arclength_rotation = r.arclength_rotation;
  out->traced = r.method == nc::RotationMethod::Traced;
  out->clockwise = r.orientation == nc::Orientation::CW;
  out->n_base_points = r.n_base_points;
}

nc_status make(nc::Region r, nc_region** out) {
  *out = new nc_region{std::move(r)};
  return NC_OK;
}

const nc::Region& profile_region(const nc_region* region) {
  if (!region->region.revolution())
    throw nc::Error(nc::ErrorCode::NotSupported, "quadrature needs a surface of revolution; use the traced method");
  return region->region;
}

}  // namespace

extern "C" {

const char* nc_version(void) { return "0.1.0"; }

const char* nc_status_name(nc_status status) {
  switch (status) {
    case NC_OK: return "Ok";
    case NC_ERR_INTERNAL: return "Internal";
    default: return nc::to_string(static_cast<nc::ErrorCode>(status - 1));
  }
}

const char* nc_last_error(void) { return last_error.c_str(); }

void nc_string_free(char* s) { std::free(s); }

nc_status nc_region_from_json(const char* json, nc_region** out) {
  return guarded([&] {
    require(json && out, "null argument");
    make(nc::parse_region_spec(json), out);
  });
}

nc_status nc_region_from_file(const char* path, nc_region** out) {
  return guarded([&] {
    require(path && out, "null argument");
    make(nc::load_region_spec(path), out);
  });
}

nc_status nc_region_ellipsoid(double a, double b, nc_region** out) {
  return guarded([&] {
    require(out, "null argument");
    make(nc::make_revolution(nc::RadiusSquaredProfile::ellipsoid(a, b)), out);
  });
}

nc_status nc_region_diamond(nc_region** out) {
  return guarded([&] {
    require(out, "null argument");
    make(nc::make_diamond(), out);
  });
}

void nc_region_free(nc_region* region) { delete region; }

nc_status nc_region_describe(const nc_region* region, char** out) {
  return guarded([&] {
    require(region && out, "null argument");
    *out = copy_string(region->region.describe());
  });
}

nc_status nc_region_contains(const nc_region* region, double t, double x, double y, int* inside) {
  return guarded([&] {
    require(region && inside, "null argument");
    *inside = region->region.value({t, x, y}) > 0.0;
  });
}

nc_status nc_region_interior_point(const nc_region* region, double out_txy[3]) {
  return guarded([&] {
    require(region && out_txy, "null argument");
    const nc::Event p = region->region.interior_point();
    out_txy[0] = p.t;
    out_txy[1] = p.x;
    out_txy[2] = p.y;
  });
}

nc_status nc_rotation_quadrature(const nc_region* region, nc_rotation* out) {
  return guarded([&] {
    require(region && out, "null argument");
    fill(nc::rotation_angle_quadrature(profile_region(region).revolution()->profile), out);
  });
}

nc_status nc_rotation_traced(const nc_region* region, const nc_trace_options* options, nc_rotation* out) {
  return guarded([&] {
    require(region && out, "null argument");
    fill(nc::rotation_angle_traced(region->region, trace_options(options)), out);
  });
}

nc_status nc_compare(const nc_region* a, const nc_region* b, double tolerance, const nc_trace_options* options,
                     int* distinguished, double* distance) {
  return guarded([&] {
    require(a && b && distinguished, "null argument");
    require(tolerance > 0.0, "tolerance must be positive");
    const nc::CompareVerdict v = nc::compare_regions(a->region, b->region, tolerance, trace_options(options));
    *distinguished = v.verdict == nc::Verdict::Distinguished;
    if (distance) *distance = v.distance;
  });
}

nc_status nc_report_classify(const nc_region* region, int n_t, int n_phi, nc_format format, char** out) {
  return guarded([&] {
    require(region && out, "null argument");
    *out = copy_string(nc::classify_table(region->region, n_t, n_phi, format_of(format)));
  });
}

nc_status nc_report_convexity(const nc_region* region, int* passed, char** out) {
  return guarded([&] {
    require(region && out, "null argument");
    const nc::BoundaryTolerances tol;
    const nc::ConvexityReport report = nc::check_strong_null_convexity(region->region, {}, tol);
    if (passed) *passed = report.passed();
    *out = copy_string(nc::convexity_json(report, tol));
  });
}

nc_status nc_report_leaves(const nc_region* region, int n_base_points, double tolerance, nc_format format,
                           char** out) {
  return guarded([&] {
    require(region && out, "null argument");
    require(n_base_points >= 1, "n_base_points must be positive");
    require(tolerance > 0.0, "tolerance must be positive");
    *out = copy_string(nc::leaves_table(region->region, n_base_points, nc::Tolerance{tolerance, tolerance, 200000},
                                        format_of(format)));
  });
}

nc_status nc_report_torus(const nc_region* region, int n_t, int n_phi, nc_format format, char** out) {
  return guarded([&] {
    require(region && out, "null argument");
    require(n_t >= 8 && n_phi >= 8, "sample counts must be at least 8");
    *out = copy_string(nc::torus_table(region->region, n_t, n_phi, format_of(format)));
  });
}

nc_status nc_report_dividing(const nc_region* region, const double center_txy[3], int n_u, int n_v,
                             nc_format format, char** out) {
  return guarded([&] {
    require(region && out, "null argument");
    require(n_u >= 8 && n_v >= 8, "sample counts must be at least 8");
    const nc::Event c = center_txy ? nc::Event{center_txy[0], center_txy[1], center_txy[2]}
                                   : region->region.interior_point();
    *out = copy_string(nc::dividing_table(nc::dividing_set(region->region, c, n_u, n_v), format_of(format)));
  });
}

nc_status nc_report_rotation(const nc_region* region, nc_method method, const nc_trace_options* options,
                             double agreement_tolerance, int* agree, char** out) {
  return guarded([&] {
    require(region && out, "null argument");
    const nc::TraceOptions opts = trace_options(options);
    if (agree) *agree = 1;
    switch (method) {
      case NC_METHOD_QUADRATURE:
        *out = copy_string(nc::rotation_json(nc::rotation_angle_quadrature(profile_region(region).revolution()->profile)));
        return;
      case NC_METHOD_TRACE:
        *out = copy_string(nc::rotation_json(nc::rotation_angle_traced(region->region, opts)));
        return;
      case NC_METHOD_BOTH: {
        require(agreement_tolerance > 0.0, "agreement tolerance must be positive");
        const nc::RotationResult q = nc::rotation_angle_quadrature(profile_region(region).revolution()->profile);
        const nc::RotationResult t = nc::rotation_angle_traced(region->region, opts);
        const double delta = std::abs(q.total_angle - t.total_angle);
        if (agree) *agree = delta <= agreement_tolerance;
        *out = copy_string(nc::rotation_both_json(q, t, delta, agreement_tolerance));
        return;
      }
    }
    throw nc::Error(nc::ErrorCode::InvalidArgument, "unknown method");
  });
}

nc_status nc_report_compare(const nc_region* a, const nc_region* b, double tolerance, const nc_trace_options* options,
                            int* distinguished, char** out) {
  return guarded([&] {
    require(a && b && out, "null argument");
    require(tolerance > 0.0, "tolerance must be positive");
    const nc::CompareVerdict v = nc::compare_regions(a->region, b->region, tolerance, trace_options(options));
    if (distinguished) *distinguished = v.verdict == nc::Verdict::Distinguished;
    *out = copy_string(nc::compare_json(v, tolerance));
  });
}

nc_status nc_selftest(int quick, double traced_rel_tol, int* passed, char** table) {
  return guarded([&] {
    require(passed && table, "null argument");
    nc::SelftestOptions o;
    o.quick = quick != 0;
    if (traced_rel_tol > 0.0) o.traced_rel_tol = traced_rel_tol;
    const auto results = nc::run_selftest(o);
    *passed = nc::all_passed(results);
    *table = copy_string(nc::selftest_table(results));
  });
}

}  // extern "C"
