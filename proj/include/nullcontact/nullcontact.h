#ifndef NULLCONTACT_H
#define NULLCONTACT_H

/*
 * C interface to the nullcontact library.
 *
 * Every fallible call returns an nc_status; on failure the message of the
 * calling thread's last error is available from nc_last_error(). Strings
 * returned through char** parameters are owned by the caller and released
 * with nc_string_free().
 */

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define NC_API __declspec(dllexport)
#else
#define NC_API __attribute__((visibility("default")))
#endif

typedef struct nc_region nc_region;

typedef enum nc_status {
  NC_OK = 0,
  NC_ERR_NON_FINITE,
  NC_ERR_BUDGET,
  NC_ERR_STIFF,
  NC_ERR_NO_BRACKET,
  NC_ERR_NOT_NULL,
  NC_ERR_NOT_FUTURE,
  NC_ERR_BAD_PROFILE,
  NC_ERR_OUTSIDE_DOMAIN,
  NC_ERR_NOT_ON_BOUNDARY,
  NC_ERR_DEGENERATE_GRADIENT,
  NC_ERR_LOST_SURFACE,
  NC_ERR_ILL_CONDITIONED,
  NC_ERR_MISMATCH,
  NC_ERR_NOT_TRANSVERSE,
  NC_ERR_INCONSISTENT_HOLONOMY,
  NC_ERR_NOT_MONOTONE,
  NC_ERR_NOT_SUPPORTED,
  NC_ERR_INVALID_ARGUMENT,
  NC_ERR_PARSE,
  NC_ERR_INTERNAL
} nc_status;

typedef enum nc_format { NC_FORMAT_CSV = 0, NC_FORMAT_JSON = 1 } nc_format;

typedef enum nc_method { NC_METHOD_QUADRATURE = 0, NC_METHOD_TRACE = 1, NC_METHOD_BOTH = 2 } nc_method;

typedef struct nc_rotation {
  double total_angle;
  double reduced; /* in (-pi, pi] */
  double spread;
  double arclength_rotation; /* NaN unless traced on a non-revolution region */
  int traced;                /* 0 quadrature, 1 traced */
  int clockwise;             /* 0 counterclockwise, 1 clockwise */
  int n_base_points;
} nc_rotation;

typedef struct nc_trace_options {
  int n_base_points; /* 0 selects the default */
  double tolerance;  /* ODE tolerance; 0 selects the default */
} nc_trace_options;

NC_API const char* nc_version(void);
NC_API const char* nc_status_name(nc_status status);
NC_API const char* nc_last_error(void);
NC_API void nc_string_free(char* s);

/* Regions */
NC_API nc_status nc_region_from_json(const char* json, nc_region** out);
NC_API nc_status nc_region_from_file(const char* path, nc_region** out);
NC_API nc_status nc_region_ellipsoid(double a, double b, nc_region** out);
NC_API nc_status nc_region_diamond(nc_region** out);
NC_API void nc_region_free(nc_region* region);
NC_API nc_status nc_region_describe(const nc_region* region, char** out);
/* 1 inside, 0 on the boundary or outside. */
NC_API nc_status nc_region_contains(const nc_region* region, double t, double x, double y, int* inside);
NC_API nc_status nc_region_interior_point(const nc_region* region, double out_txy[3]);

/* Invariants */
NC_API nc_status nc_rotation_quadrature(const nc_region* region, nc_rotation* out);
NC_API nc_status nc_rotation_traced(const nc_region* region, const nc_trace_options* options, nc_rotation* out);
NC_API nc_status nc_compare(const nc_region* a, const nc_region* b, double tolerance,
                            const nc_trace_options* options, int* distinguished, double* distance);

/* Reports (CSV or JSON text) */
NC_API nc_status nc_report_classify(const nc_region* region, int n_t, int n_phi, nc_format format, char** out);
NC_API nc_status nc_report_convexity(const nc_region* region, int* passed, char** out);
NC_API nc_status nc_report_leaves(const nc_region* region, int n_base_points, double tolerance, nc_format format,
                                  char** out);
NC_API nc_status nc_report_torus(const nc_region* region, int n_t, int n_phi, nc_format format, char** out);
NC_API nc_status nc_report_dividing(const nc_region* region, const double center_txy[3], int n_u, int n_v,
                                    nc_format format, char** out);
/* With NC_METHOD_BOTH, *agree is 0 when the two methods differ by more than
 * agreement_tolerance; the report is produced either way. */
NC_API nc_status nc_report_rotation(const nc_region* region, nc_method method, const nc_trace_options* options,
                                    double agreement_tolerance, int* agree, char** out);
NC_API nc_status nc_report_compare(const nc_region* a, const nc_region* b, double tolerance,
                                   const nc_trace_options* options, int* distinguished, char** out);

/* Self-test: pass/fail table in *table, *passed is 1 when every check passed.
 * traced_rel_tol <= 0 selects the default. */
NC_API nc_status nc_selftest(int quick, double traced_rel_tol, int* passed, char** table);

#ifdef __cplusplus
}
#endif

#endif /* NULLCONTACT_H */
