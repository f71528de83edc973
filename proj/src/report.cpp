#include "nullcontact/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nullcontact/error.hpp"

namespace nc {

namespace {

using Json = nlohmann::ordered_json;

void dump(const Json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(k).dump() + ": ";
        dump(v, out, indent, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short numeric arrays (coordinates) stay on one line.
      bool flat = j.size() <= 4;
      for (const auto& v : j) flat = flat && v.is_primitive();
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        dump(v, out, indent, depth + 1);
      }
      out += flat ? "]" : "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_number(x) : "null";
      return;
    }
    default: out += j.dump(); return;
  }
}

std::string to_text(const Json& j) {
  std::string out;
  dump(j, out, 2, 0);
  out += "\n";
  return out;
}

Json event_json(const Event& e) { return Json::array({e.t, e.x, e.y}); }
Json ray_json(const NullRay& r) { return Json::array({r.q.x, r.q.y, r.theta}); }

// Rows of mixed string/number cells, rendered as CSV or as a JSON array of
// objects.
class Table {
public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  struct Cell {
    bool text;
    std::string s;
    double x;
  };
  static Cell num(double x) { return {false, {}, x}; }
  static Cell str(std::string s) { return {true, std::move(s), 0.0}; }

  void add(std::vector<Cell> row) { rows_.push_back(std::move(row)); }

  std::string render(Format f) const {
    if (f == Format::Json) {
      Json arr = Json::array();
      for (const auto& row : rows_) {
        Json o = Json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
          if (row[i].text) o[columns_[i]] = row[i].s;
          else o[columns_[i]] = row[i].x;
        }
        arr.push_back(o);
      }
      return to_text(arr);
    }
    std::string out;
    for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + columns_[i];
    out += "\n";
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ",";
        out += row[i].text ? row[i].s : format_number(row[i].x);
      }
      out += "\n";
    }
    return out;
  }

private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

Json rotation_object(const RotationResult& r) {
  Json j = Json::object();
  j["method"] = to_string(r.method);
  j["total_angle"] = r.total_angle;
  j["reduced"] = r.reduced;
  j["orientation"] = to_string(r.orientation);
  j["n_base_points"] = r.n_base_points;
  j["spread"] = r.spread;
  if (std::isfinite(r.arclength_rotation)) j["arclength_rotation"] = r.arclength_rotation;
  return j;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string classify_table(const Region& r, int n_t, int n_phi, Format f) {
  if (!r.smooth() || (r.base() && r.base()->kind() == RegionKind::Diamond))
    throw Error(ErrorCode::NotSupported,
                "classify needs a smooth boundary; the causal diamond is an analytic-only region");
  if (n_t < 8 || n_phi < 8) throw Error(ErrorCode::InvalidArgument, "sample counts must be at least 8");
  Table table({"t", "phi", "class", "n_null_dirs"});
  auto row = [&](const Event& e, double phi) {
    const BoundaryPoint bp = classify_boundary_point(r, e);
    table.add({Table::num(e.t), Table::num(phi), Table::str(to_string(bp.causal_class)),
               Table::num(static_cast<double>(bp.null_dirs.size()))});
  };
  if (const RevolutionData* rev = r.revolution()) {
    const auto& p = rev->profile;
    std::vector<double> ts;
    for (int i = 0; i < n_t; ++i) ts.push_back(p.t_min() + (p.t_max() - p.t_min()) * (i + 0.5) / n_t);
    ts.push_back(rev->t_lower);
    ts.push_back(rev->t_upper);
    std::sort(ts.begin(), ts.end());
    for (double t : ts) {
      const double rad = std::sqrt(std::max(0.0, p.rho(t)));
      for (int j = 0; j < n_phi; ++j) {
        const double phi = kTwoPi * j / n_phi;
        const Vec2 s = rad * unit(phi);
        row({t, s.x, s.y}, phi);
      }
    }
  } else {
    const Axis axis = time_axis(r);
    for (const Event& e : sample_boundary(r, n_t, 4 * n_phi)) row(e, wrap_angle(axis.azimuth(e)));
  }
  return table.render(f);
}

std::string convexity_json(const ConvexityReport& report, const BoundaryTolerances& tol) {
  Json j = Json::object();
  j["passed"] = report.passed();
  j["hessian_min_abs"] = report.hessian_min_abs;
  j["hessian_argmin"] = event_json(report.hessian_argmin);
  j["hessian_threshold"] = tol.hessian;
  j["hessian_ok"] = report.hessian_ok;
  j["unique_tangency_ok"] = report.unique_tangency_ok;
  j["chord_connected_ok"] = report.chord_connected_ok;
  j["samples"] = report.samples;
  Json fails = Json::array();
  for (const auto& fl : report.failures) {
    Json o = Json::object();
    o["kind"] = fl.kind;
    o["event"] = event_json(fl.event);
    o["ray"] = ray_json(fl.ray);
    o["value"] = fl.value;
    fails.push_back(o);
  }
  j["failures"] = fails;
  j["note"] = "chord connectivity is a necessary condition for the boundary embedding, not a proof of it";
  return to_text(j);
}

std::string leaves_table(const Region& r, int n_base_points, const Tolerance& tol, Format f) {
  Table table({"leaf_id", "t", "phi", "branch", "q1", "q2", "theta", "time_T"});
  auto emit = [&](int id, const TorusPoint& p) {
    table.add({Table::num(id), Table::num(p.t), Table::num(p.phi), Table::str(to_string(p.branch)),
               Table::num(p.chart.q.x), Table::num(p.chart.q.y), Table::num(p.chart.theta), Table::num(p.time_T)});
  };
  if (!r.smooth() || (r.base() && r.base()->kind() == RegionKind::Diamond)) {
    if (r.kind() != RegionKind::Diamond)
      throw Error(ErrorCode::NotSupported, "leaves of transformed diamonds are not tabulated");
    // Leaves are the theta-fibres between the two singular points.
    constexpr int m = 32;
    for (int k = 0; k < n_base_points; ++k) {
      const double phi = kTwoPi * k / n_base_points;
      for (int half = 0; half < 2; ++half)
        for (int i = 0; i <= m; ++i) {
          const double theta = phi + kPi * (half + static_cast<double>(i) / m);
          const Vec2 u = unit(phi);
          TorusPoint p;
          p.phi = phi;
          p.branch = (i == 0 || i == m) ? Branch::Merged : (half == 0 ? Branch::Plus : Branch::Minus);
          p.chart = NullRay{u, theta};
          emit(2 * k + half, p);
        }
    }
    return table.render(f);
  }
  const std::vector<Leaf> leaves = leaf_family(r, n_base_points, tol);
  for (std::size_t k = 0; k < leaves.size(); ++k)
    for (const auto& p : leaves[k].points) emit(static_cast<int>(k), p);
  return table.render(f);
}

std::string torus_table(const Region& r, int n_t, int n_phi, Format f) {
  Table table({"t", "phi", "branch", "event_t", "event_x", "event_y", "q1", "q2", "theta"});
  for (const TorusPoint& p : boundary_torus(r, n_t, n_phi))
    table.add({Table::num(p.t), Table::num(p.phi), Table::str(to_string(p.branch)), Table::num(p.event.t),
               Table::num(p.event.x), Table::num(p.event.y), Table::num(p.chart.q.x), Table::num(p.chart.q.y),
               Table::num(p.chart.theta)});
  return table.render(f);
}

std::string dividing_table(const DividingSet& d, Format f) {
  if (f == Format::Json) {
    Json j = Json::object();
    j["component_count"] = d.components.size();
    Json lats = Json::array();
    for (const auto& c : d.components) lats.push_back(c.latitude);
    j["latitudes"] = lats;
    j["y_transverse"] = d.y_transverse;
    j["y_min_det"] = d.y_min_det;
    j["foliation_transverse"] = d.foliation_transverse;
    j["min_foliation_angle"] = d.min_foliation_angle;
    j["separates_singular_circles"] = d.separates;
    j["samples"] = d.samples;
    Json comps = Json::array();
    for (const auto& c : d.components) {
      Json o = Json::object();
      o["latitude"] = c.latitude;
      o["latitude_spread"] = c.latitude_spread;
      Json pts = Json::array();
      for (const auto& p : c.points) pts.push_back(ray_json(p.chart));
      o["chart_samples"] = pts;
      comps.push_back(o);
    }
    j["components"] = comps;
    return to_text(j);
  }
  Table table({"component_id", "u", "v", "t", "phi", "q1", "q2", "theta"});
  for (std::size_t c = 0; c < d.components.size(); ++c) {
    const auto& comp = d.components[c];
    for (std::size_t i = 0; i < comp.points.size(); ++i) {
      const TorusPoint& p = comp.points[i];
      table.add({Table::num(static_cast<double>(c)), Table::num(comp.u[i]), Table::num(comp.v[i]), Table::num(p.t),
                 Table::num(p.phi), Table::num(p.chart.q.x), Table::num(p.chart.q.y), Table::num(p.chart.theta)});
    }
  }
  return table.render(Format::Csv);
}

std::string rotation_json(const RotationResult& r) { return to_text(rotation_object(r)); }

std::string rotation_both_json(const RotationResult& quadrature, const RotationResult& traced, double delta,
                               double tolerance) {
  Json j = Json::object();
  j["method"] = "both";
  j["total_angle"] = quadrature.total_angle;
  j["reduced"] = quadrature.reduced;
  j["orientation"] = to_string(quadrature.orientation);
  j["n_base_points"] = traced.n_base_points;
  j["spread"] = traced.spread;
  j["delta"] = delta;
  j["tolerance"] = tolerance;
  j["agree"] = delta <= tolerance;
  j["quadrature"] = rotation_object(quadrature);
  j["traced"] = rotation_object(traced);
  return to_text(j);
}

std::string compare_json(const CompareVerdict& v, double tolerance) {
  Json j = Json::object();
  j["verdict"] = to_string(v.verdict);
  j["angle_a"] = v.angle_a;
  j["angle_b"] = v.angle_b;
  j["distance"] = v.distance;
  j["tolerance"] = tolerance;
  j["method_a"] = to_string(v.a.method);
  j["method_b"] = to_string(v.b.method);
  j["note"] = v.verdict == Verdict::Distinguished
                  ? "rotation angles differ: the regions are not conformally equivalent"
                  : "rotation angles agree: this does not prove conformal equivalence";
  return to_text(j);
}

}  // namespace nc
