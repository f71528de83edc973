// nullcontact command-line front end. Links only the C API.
//
// Exit codes: 0 success (compare: Distinguished), 1 compare:
// IndistinguishableByInvariant, 2 parse error (spec file or command line),
// 3 region or argument validation error, 4 quadrature and tracing disagree,
// 5 self-test failure, 6 numerical failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nullcontact/nullcontact.h"

namespace {

enum Exit { kOk = 0, kIndistinguishable = 1, kParse = 2, kValidation = 3, kDisagree = 4, kSelftest = 5, kNumerical = 6 };

struct Failure {
  int exit_code;
};

int exit_code_of(nc_status s) {
  switch (s) {
    case NC_OK: return kOk;
    case NC_ERR_PARSE: return kParse;
    case NC_ERR_BAD_PROFILE:
    case NC_ERR_NOT_SUPPORTED:
    case NC_ERR_INVALID_ARGUMENT:
    case NC_ERR_OUTSIDE_DOMAIN:
    case NC_ERR_NOT_ON_BOUNDARY:
    case NC_ERR_DEGENERATE_GRADIENT:
    case NC_ERR_NOT_NULL:
    case NC_ERR_NOT_FUTURE:
    case NC_ERR_NOT_TRANSVERSE: return kValidation;
    default: return kNumerical;
  }
}

void check(nc_status s) {
  if (s == NC_OK) return;
  std::cerr << "nullcontact: " << nc_last_error() << "\n";
  throw Failure{exit_code_of(s)};
}

void invalid(const std::string& msg) {
  std::cerr << "nullcontact: InvalidArgument: " << msg << "\n";
  throw Failure{kValidation};
}

struct RegionDeleter {
  void operator()(nc_region* r) const { nc_region_free(r); }
};
using RegionPtr = std::unique_ptr<nc_region, RegionDeleter>;

RegionPtr load(const std::string& path) {
  nc_region* r = nullptr;
  check(nc_region_from_file(path.c_str(), &r));
  return RegionPtr(r);
}

// Takes ownership of a C string from the library.
std::string take(char* s) {
  std::string out(s ? s : "");
  nc_string_free(s);
  return out;
}

struct Config {
  std::vector<std::string> regions;
  std::string out;
  std::string format = "csv";
  std::string method = "trace";
  std::optional<int> samples;
  double tol_ode = 1e-10;
  double tol_agree = 1e-4;
  double tol_compare = 1e-3;
  double tol_traced = 1e-4;
  std::vector<double> center;
  bool torus = false;
  bool quick = false;
};

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) invalid("cannot open output file " + c.out);
  f << text;
}

int samples_or(const Config& c, int fallback) {
  const int n = c.samples.value_or(fallback);
  if (n < 8) invalid("--samples must be at least 8");
  return n;
}

void positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) invalid(std::string(name) + " must be positive");
}

nc_format format_of(const Config& c) { return c.format == "json" ? NC_FORMAT_JSON : NC_FORMAT_CSV; }

nc_trace_options trace_of(const Config& c) {
  positive(c.tol_ode, "--tol-ode");
  return nc_trace_options{c.samples ? samples_or(c, 0) : 0, c.tol_ode};
}

const std::string& single_region(const Config& c) {
  if (c.regions.size() != 1) invalid("expected exactly one --region");
  return c.regions.front();
}

int cmd_classify(const Config& c) {
  const int n = samples_or(c, 32);
  RegionPtr r = load(single_region(c));
  char* out = nullptr;
  check(nc_report_classify(r.get(), n, n, format_of(c), &out));
  emit(c, take(out));
  return kOk;
}

int cmd_convexity(const Config& c) {
  RegionPtr r = load(single_region(c));
  char* out = nullptr;
  int passed = 0;
  check(nc_report_convexity(r.get(), &passed, &out));
  emit(c, take(out));
  return kOk;
}

int cmd_foliation(const Config& c) {
  positive(c.tol_ode, "--tol-ode");
  RegionPtr r = load(single_region(c));
  char* out = nullptr;
  if (c.torus) {
    const int n = samples_or(c, 32);
    check(nc_report_torus(r.get(), n, n, format_of(c), &out));
  } else {
    check(nc_report_leaves(r.get(), samples_or(c, 16), c.tol_ode, format_of(c), &out));
  }
  emit(c, take(out));
  return kOk;
}

int cmd_dividing(const Config& c) {
  const int n = samples_or(c, 128);
  RegionPtr r = load(single_region(c));
  if (!c.center.empty() && c.center.size() != 3) invalid("--center takes t,x,y");
  char* out = nullptr;
  check(nc_report_dividing(r.get(), c.center.empty() ? nullptr : c.center.data(), n, 2 * n, format_of(c), &out));
  emit(c, take(out));
  return kOk;
}

int cmd_rotation(const Config& c) {
  positive(c.tol_agree, "--tol-agree");
  const nc_trace_options opts = trace_of(c);
  RegionPtr r = load(single_region(c));
  const nc_method m =
      c.method == "quadrature" ? NC_METHOD_QUADRATURE : c.method == "both" ? NC_METHOD_BOTH : NC_METHOD_TRACE;
  char* out = nullptr;
  int agree = 1;
  check(nc_report_rotation(r.get(), m, &opts, c.tol_agree, &agree, &out));
  emit(c, take(out));
  if (!agree) {
    std::cerr << "nullcontact: quadrature and traced angles disagree beyond --tol-agree\n";
    return kDisagree;
  }
  return kOk;
}

int cmd_compare(const Config& c) {
  positive(c.tol_compare, "--tol-compare");
  if (c.regions.size() != 2) invalid("compare needs --region twice");
  const nc_trace_options opts = trace_of(c);
  RegionPtr a = load(c.regions[0]);
  RegionPtr b = load(c.regions[1]);
  char* out = nullptr;
  int distinguished = 0;
  check(nc_report_compare(a.get(), b.get(), c.tol_compare, &opts, &distinguished, &out));
  emit(c, take(out));
  return distinguished ? kOk : kIndistinguishable;
}

int cmd_selftest(const Config& c) {
  positive(c.tol_traced, "--tol-traced");
  char* table = nullptr;
  int passed = 0;
  check(nc_selftest(c.quick, c.tol_traced, &passed, &table));
  emit(c, take(table));
  return passed ? kOk : kSelftest;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Null-geodesic contact invariants of causally convex regions in 2+1 Minkowski space"};
  app.require_subcommand(1);
  Config c;

  auto region_opt = [&](CLI::App* sub, bool twice) {
    auto* o = sub->add_option("--region", c.regions, twice ? "Region spec file (give twice)" : "Region spec file")
                  ->required();
    if (twice) o->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    else o->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::Throw);
  };
  auto common = [&](CLI::App* sub, bool with_format) {
    sub->add_option("--out", c.out, "Output file (default: stdout)");
    if (with_format) sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* classify = app.add_subcommand("classify", "Causal type of boundary points");
  region_opt(classify, false);
  common(classify, true);
  classify->add_option("--samples", c.samples, "Grid size per direction (default 32)");

  auto* convexity = app.add_subcommand("check-convexity", "Strong null convexity report (JSON)");
  region_opt(convexity, false);
  common(convexity, false);

  auto* foliation = app.add_subcommand("foliation", "Leaves of the characteristic foliation, or torus samples");
  region_opt(foliation, false);
  common(foliation, true);
  foliation->add_option("--samples", c.samples, "Base points (default 16), or torus grid size with --torus");
  foliation->add_option("--tol-ode", c.tol_ode, "Integrator tolerance");
  foliation->add_flag("--torus", c.torus, "Emit boundary torus samples instead of leaves");

  auto* dividing = app.add_subcommand("dividing", "Dividing set of the dilation field");
  region_opt(dividing, false);
  common(dividing, true);
  dividing->add_option("--samples", c.samples, "Number of u-lines (default 128); v-lines get twice as many samples");
  dividing->add_option("--center", c.center, "Dilation centre t,x,y (default: the region's interior point)")
      ->delimiter(',');

  auto* rotation = app.add_subcommand("rotation", "Rotation angle of the return map (JSON)");
  region_opt(rotation, false);
  common(rotation, false);
  rotation->add_option("--method", c.method, "quadrature | trace | both")
      ->check(CLI::IsMember({"quadrature", "trace", "both"}));
  rotation->add_option("--samples", c.samples, "Traced base points (default 128)");
  rotation->add_option("--tol-ode", c.tol_ode, "Integrator tolerance");
  rotation->add_option("--tol-agree", c.tol_agree, "Allowed quadrature/trace difference with --method both");

  auto* compare = app.add_subcommand("compare", "Compare two regions by their rotation angle (JSON)");
  region_opt(compare, true);
  common(compare, false);
  compare->add_option("--samples", c.samples, "Traced base points (default 128)");
  compare->add_option("--tol-ode", c.tol_ode, "Integrator tolerance");
  compare->add_option("--tol-compare", c.tol_compare, "Circle distance above which regions are distinguished");

  auto* selftest = app.add_subcommand("selftest", "Run the analytic oracle suite");
  common(selftest, false);
  selftest->add_flag("--quick", c.quick, "Fast subset");
  selftest->add_option("--tol-traced", c.tol_traced, "Relative tolerance for traced rotation angles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*classify) return cmd_classify(c);
    if (*convexity) return cmd_convexity(c);
    if (*foliation) return cmd_foliation(c);
    if (*dividing) return cmd_dividing(c);
    if (*rotation) return cmd_rotation(c);
    if (*compare) return cmd_compare(c);
    if (*selftest) return cmd_selftest(c);
  } catch (const Failure& f) {
    return f.exit_code;
  }
  return kParse;
}
