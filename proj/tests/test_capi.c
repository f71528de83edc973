/* The C interface used from C. */

#include <math.h>
#include <stdio.h>
#include <string.h>

#include "nullcontact/nullcontact.h"

static int failures = 0;

#define EXPECT(cond)                                             \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                \
    }                                                            \
  } while (0)

static const double ball_angle = 2.602580569137146;

static void test_regions(void) {
  nc_region* r = NULL;
  EXPECT(nc_region_ellipsoid(1.0, 1.0, &r) == NC_OK);
  EXPECT(r != NULL);
  int inside = -1;
  EXPECT(nc_region_contains(r, 0.0, 0.1, 0.1, &inside) == NC_OK && inside == 1);
  EXPECT(nc_region_contains(r, 0.0, 2.0, 0.0, &inside) == NC_OK && inside == 0);
  double p[3];
  EXPECT(nc_region_interior_point(r, p) == NC_OK);
  char* text = NULL;
  EXPECT(nc_region_describe(r, &text) == NC_OK && text && strlen(text) > 0);
  nc_string_free(text);
  nc_region_free(r);

  nc_region* bad = NULL;
  EXPECT(nc_region_ellipsoid(-1.0, 1.0, &bad) == NC_ERR_BAD_PROFILE);
  EXPECT(bad == NULL);
  EXPECT(strstr(nc_last_error(), "BadProfile") != NULL);
  EXPECT(strcmp(nc_status_name(NC_ERR_BAD_PROFILE), "BadProfile") == 0);
  EXPECT(strcmp(nc_status_name(NC_ERR_NOT_MONOTONE), "NotMonotone") == 0);
  EXPECT(strcmp(nc_status_name(NC_OK), "Ok") == 0);

  EXPECT(nc_region_from_json("{\"kind\": \"ellipsoid\", \"a\": 1", &bad) == NC_ERR_PARSE);
  EXPECT(nc_region_from_json("{\"kind\": \"diamond\"}", &bad) == NC_OK);
  nc_region_free(bad);
  EXPECT(nc_region_from_file(NC_TEST_DATA "/boosted_ball.json", &bad) == NC_OK);
  nc_region_free(bad);
  EXPECT(nc_region_from_file(NC_TEST_DATA "/missing.json", &bad) == NC_ERR_PARSE);
  EXPECT(nc_region_ellipsoid(1.0, 1.0, NULL) == NC_ERR_INVALID_ARGUMENT);
  /* Success clears the last error. */
  EXPECT(nc_region_ellipsoid(1.0, 1.0, &r) == NC_OK);
  EXPECT(strlen(nc_last_error()) == 0);
  nc_region_free(r);
  nc_region_free(NULL);
}

static void test_rotation(void) {
  nc_region *ball = NULL, *diamond = NULL, *boosted = NULL;
  EXPECT(nc_region_ellipsoid(1.0, 1.0, &ball) == NC_OK);
  EXPECT(nc_region_diamond(&diamond) == NC_OK);
  EXPECT(nc_region_from_file(NC_TEST_DATA "/boosted_ball.json", &boosted) == NC_OK);

  nc_rotation q, t;
  EXPECT(nc_rotation_quadrature(ball, &q) == NC_OK);
  EXPECT(fabs(q.reduced - ball_angle) < 1e-12);
  EXPECT(q.traced == 0 && q.clockwise == 0);
  EXPECT(nc_rotation_traced(ball, NULL, &t) == NC_OK);
  EXPECT(fabs(t.total_angle - ball_angle) < 1e-6);
  EXPECT(t.traced == 1 && t.n_base_points == 128);
  nc_trace_options o = {32, 1e-9};
  EXPECT(nc_rotation_traced(boosted, &o, &t) == NC_OK);
  EXPECT(fabs(t.reduced - ball_angle) < 1e-3);
  EXPECT(t.n_base_points == 32);
  o.n_base_points = 3;
  EXPECT(nc_rotation_traced(boosted, &o, &t) == NC_ERR_INVALID_ARGUMENT);
  EXPECT(nc_rotation_quadrature(diamond, &q) == NC_ERR_NOT_SUPPORTED);

  int distinguished = -1;
  double distance = 0.0;
  EXPECT(nc_compare(ball, diamond, 1e-3, NULL, &distinguished, &distance) == NC_OK);
  EXPECT(distinguished == 1 && fabs(distance - ball_angle) < 1e-6);
  EXPECT(nc_compare(ball, boosted, 1e-3, NULL, &distinguished, &distance) == NC_OK);
  EXPECT(distinguished == 0);
  EXPECT(nc_compare(ball, boosted, -1.0, NULL, &distinguished, &distance) == NC_ERR_INVALID_ARGUMENT);

  char* out = NULL;
  int agree = 0;
  EXPECT(nc_report_rotation(ball, NC_METHOD_BOTH, NULL, 1e-4, &agree, &out) == NC_OK);
  EXPECT(agree == 1 && strstr(out, "\"delta\"") != NULL);
  nc_string_free(out);
  EXPECT(nc_report_rotation(ball, NC_METHOD_BOTH, NULL, 1e-15, &agree, &out) == NC_OK);
  EXPECT(agree == 0);
  nc_string_free(out);
  EXPECT(nc_report_compare(ball, diamond, 1e-3, NULL, &distinguished, &out) == NC_OK);
  EXPECT(strstr(out, "\"Distinguished\"") != NULL);
  nc_string_free(out);

  nc_region_free(ball);
  nc_region_free(diamond);
  nc_region_free(boosted);
}

static void test_reports(void) {
  nc_region* ball = NULL;
  EXPECT(nc_region_ellipsoid(1.0, 1.0, &ball) == NC_OK);
  char* out = NULL;
  EXPECT(nc_report_classify(ball, 8, 8, NC_FORMAT_CSV, &out) == NC_OK);
  EXPECT(strncmp(out, "t,phi,class,n_null_dirs\n", 24) == 0);
  nc_string_free(out);
  int passed = 0;
  EXPECT(nc_report_convexity(ball, &passed, &out) == NC_OK && passed == 1);
  nc_string_free(out);
  EXPECT(nc_report_leaves(ball, 4, 1e-10, NC_FORMAT_CSV, &out) == NC_OK);
  nc_string_free(out);
  EXPECT(nc_report_torus(ball, 8, 8, NC_FORMAT_JSON, &out) == NC_OK && out[0] == '[');
  nc_string_free(out);
  const double c[3] = {0.0, 0.0, 0.0};
  EXPECT(nc_report_dividing(ball, c, 16, 32, NC_FORMAT_JSON, &out) == NC_OK);
  EXPECT(strstr(out, "\"component_count\": 2") != NULL);
  nc_string_free(out);
  EXPECT(nc_report_dividing(ball, c, 4, 32, NC_FORMAT_JSON, &out) == NC_ERR_INVALID_ARGUMENT);
  nc_region_free(ball);
}

static void test_selftest(void) {
  int passed = 0;
  char* table = NULL;
  EXPECT(nc_selftest(1, 0.0, &passed, &table) == NC_OK);
  EXPECT(passed == 1);
  nc_string_free(table);
  EXPECT(nc_selftest(1, 1e-15, &passed, &table) == NC_OK);
  EXPECT(passed == 0 && strstr(table, "FAIL") != NULL);
  nc_string_free(table);
}

int main(void) {
  test_regions();
  test_rotation();
  test_reports();
  test_selftest();
  if (failures) {
    fprintf(stderr, "%d failures\n", failures);
    return 1;
  }
  printf("all C API checks passed\n");
  return 0;
}
