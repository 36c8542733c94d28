#include "flatmink/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "flatmink/error.hpp"

namespace flatmink {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::BadParam, what); }

double number(const Json& j, const char* key) {
  if (!j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  const Json& v = j.at(key);
  if (!v.is_number()) bad(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

// NaN and infinities are not JSON numbers.
Json real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json half_name(int half) { return half < 0 ? "neg" : "pos"; }

const std::vector<std::string> kSpecKeys{"kind", "scale", "dilate", "inverted"};

}  // namespace

Json to_json(const ExtendedReal& v) {
  if (v.is_infinite()) return "inf";
  return v.value();
}

ExtendedReal extended_from_json(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "∞") return kInf;
    bad("coordinate string must be \"inf\", got \"" + s + "\"");
  }
  if (!j.is_number()) bad("coordinate must be a number or \"inf\"");
  return ExtendedReal(j.get<double>());
}

Json to_json(const TorusPoint& p) { return Json{{"x", to_json(p.x)}, {"y", to_json(p.y)}}; }

TorusPoint point_from_json(const Json& j) {
  if (j.is_array() && j.size() == 2) return {extended_from_json(j[0]), extended_from_json(j[1])};
  if (!j.is_object() || !j.contains("x") || !j.contains("y")) bad("point must be {\"x\":..,\"y\":..}");
  return {extended_from_json(j.at("x")), extended_from_json(j.at("y"))};
}

std::vector<TorusPoint> points_from_json(const Json& j) {
  if (!j.is_array()) bad("expected an array of points");
  std::vector<TorusPoint> out;
  for (const auto& e : j) out.push_back(point_from_json(e));
  return out;
}

Json to_json(const FunctionSpec& f) {
  Json j{{"kind", f.kind}};
  for (const auto& [k, v] : f.params) j[k] = v;
  if (f.scale != 1.0) j["scale"] = f.scale;
  if (f.dilate != 1.0) j["dilate"] = f.dilate;
  if (f.inverted) j["inverted"] = true;
  return j;
}

FunctionSpec function_spec_from_json(const Json& j) {
  FunctionSpec f;
  if (j.is_string()) {
    f.kind = j.get<std::string>();
    return f;
  }
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    bad("function spec must be a name or {\"kind\": name, ...}");
  }
  f.kind = j.at("kind").get<std::string>();
  if (j.contains("scale")) f.scale = number(j, "scale");
  if (j.contains("dilate")) f.dilate = number(j, "dilate");
  if (j.contains("inverted")) {
    if (!j.at("inverted").is_boolean()) bad("\"inverted\" must be a boolean");
    f.inverted = j.at("inverted").get<bool>();
  }
  for (const auto& [k, v] : j.items()) {
    if (std::find(kSpecKeys.begin(), kSpecKeys.end(), k) != kSpecKeys.end()) continue;
    if (!v.is_number()) bad("parameter \"" + k + "\" must be a number");
    f.params[k] = v.get<double>();
  }
  if (!(f.scale > 0) || !(f.dilate > 0)) bad("scale and dilate must be positive");
  return f;
}

Json to_json(const PlaneSpec& plane) {
  return Json{{"f1", to_json(plane.f1().spec())},
              {"f2", to_json(plane.f2().spec())},
              {"f3", to_json(plane.f3().spec())},
              {"f4", to_json(plane.f4().spec())}};
}

Json to_json(const CheckerConfig& cfg) {
  return Json{{"grid_min", cfg.grid_min},
              {"grid_max", cfg.grid_max},
              {"grid_points", cfg.grid_points},
              {"limit_b_values", cfg.limit_b_values},
              {"tolerance", cfg.tolerance}};
}

PlaneFile plane_file_from_json(const Json& j) {
  if (!j.is_object()) bad("plane must be an object with f1..f4");
  std::array<ShFunction, 4> fs{PlaneSpec::classical().f1(), PlaneSpec::classical().f1(),
                               PlaneSpec::classical().f1(), PlaneSpec::classical().f1()};
  const char* keys[] = {"f1", "f2", "f3", "f4"};
  for (int i = 0; i < 4; ++i) {
    if (!j.contains(keys[i])) bad(std::string("plane is missing \"") + keys[i] + "\"");
    fs[i] = make_function(function_spec_from_json(j.at(keys[i])));
  }
  PlaneFile out{PlaneSpec(fs[0], fs[1], fs[2], fs[3]), {}, false};
  if (j.contains("normalise")) {
    if (!j.at("normalise").is_boolean()) bad("\"normalise\" must be a boolean");
    out.normalise = j.at("normalise").get<bool>();
  }
  if (j.contains("checker")) {
    const Json& c = j.at("checker");
    if (!c.is_object()) bad("\"checker\" must be an object");
    if (c.contains("grid_min")) out.checker.grid_min = number(c, "grid_min");
    if (c.contains("grid_max")) out.checker.grid_max = number(c, "grid_max");
    if (c.contains("grid_points")) out.checker.grid_points = static_cast<int>(number(c, "grid_points"));
    if (c.contains("tolerance")) out.checker.tolerance = number(c, "tolerance");
    if (c.contains("limit_b_values")) {
      out.checker.limit_b_values.clear();
      for (const auto& v : c.at("limit_b_values")) {
        if (!v.is_number()) bad("limit_b_values must be numbers");
        out.checker.limit_b_values.push_back(v.get<double>());
      }
    }
    out.checker.validate();
  }
  if (out.normalise) out.plane = flatmink::normalise(out.plane);
  return out;
}

Json to_json(const Circle& c) {
  return std::visit(
      [&](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NegLine> || std::is_same_v<T, PosLine>) {
          return Json{{"half", half_name(half_of(c))}, {"kind", "line"}, {"s", v.s}, {"t", v.t}};
        } else {
          return Json{{"half", half_name(half_of(c))}, {"kind", "curve"}, {"a", v.a}, {"b", v.b}, {"c", v.c}};
        }
      },
      c);
}

Circle circle_from_json(const Json& j, const PlaneSpec& plane) {
  if (!j.is_object()) bad("circle must be an object");
  const std::string half = j.value("half", "");
  const std::string kind = j.value("kind", "curve");
  if (half != "neg" && half != "pos") bad("circle \"half\" must be \"neg\" or \"pos\"");
  Circle c;
  if (kind == "line") {
    const double s = number(j, "s"), t = number(j, "t");
    c = half == "neg" ? Circle{NegLine{s, t}} : Circle{PosLine{s, t}};
  } else if (kind == "curve") {
    const double a = number(j, "a"), b = number(j, "b"), cc = number(j, "c");
    c = half == "neg" ? Circle{plane.neg_curve(a, b, cc)} : Circle{plane.pos_curve(a, b, cc)};
  } else {
    bad("circle \"kind\" must be \"curve\" or \"line\"");
  }
  try {
    validate(c);
  } catch (const Error& e) {
    bad(e.what());
  }
  return c;
}

std::vector<Circle> circles_from_json(const Json& j, const PlaneSpec& plane) {
  if (j.is_object()) return {circle_from_json(j, plane)};
  if (!j.is_array()) bad("expected a circle or an array of circles");
  std::vector<Circle> out;
  for (const auto& e : j) out.push_back(circle_from_json(e, plane));
  return out;
}

Json to_json(const CheckReport& r) {
  Json conds = Json::array();
  for (const auto& c : r.conditions) {
    Json e{{"index", c.index}, {"name", c.name}, {"passed", c.passed}, {"worst_residual", real(c.worst_residual)},
           {"witness", real(c.witness)}};
    if (!c.note.empty()) e["note"] = c.note;
    conds.push_back(e);
  }
  return Json{{"function", r.function}, {"overall", r.overall}, {"grid_max", real(r.grid_max)}, {"conditions", conds}};
}

Json to_json(const LimitLemmaReport& r) {
  Json parts = Json::array();
  for (const auto& p : r.parts) {
    parts.push_back({{"index", p.index}, {"value", real(p.value)}, {"target", real(p.target)},
                     {"residual", real(p.residual)}, {"passed", p.passed}});
  }
  return Json{{"horizon", r.horizon}, {"overall", r.overall}, {"parts", parts}};
}

Json to_json(const RootReport& r) {
  Json roots = Json::array();
  for (const auto& x : r.roots) {
    roots.push_back({{"x", x.location}, {"offset", x.offset}, {"sign_change", x.sign_change},
                     {"derivative_zero", x.derivative_zero}, {"below_resolution", x.below_resolution}});
  }
  Json j{{"count", r.count()}, {"tangent_count", r.tangent_count()}, {"case_label", r.case_label}, {"roots", roots}};
  j["critical"] = r.critical ? Json(real(*r.critical)) : Json(nullptr);
  if (r.unresolved) j["unresolved"] = true;
  return j;
}

Json to_json(const CaseTableReport& r) {
  Json viol = Json::array();
  for (const auto& v : r.violations) {
    viol.push_back({{"trial", v.trial}, {"params", v.params}, {"message", v.message}});
  }
  Json check(r.check_labels), hat(r.hat_labels);
  return Json{{"trials", r.trials},   {"seed", r.seed},         {"violations", viol},
              {"check_labels", check}, {"hat_labels", hat}};
}

Json to_json(const CaseTrace& t) {
  Json j{{"half", half_name(t.half)}, {"case", t.case_index}};
  j["type"] = static_cast<int>(t.type);
  if (!t.note.empty()) j["note"] = t.note;
  return j;
}

Json to_json(const JoinSolution& s) {
  Json res = Json::array();
  for (double r : s.residuals) res.push_back(real(r));
  Json j{{"circle", to_json(s.circle)}, {"residuals", res}, {"trace", to_json(s.trace)}};
  if (!s.warnings.empty()) j["warnings"] = s.warnings;
  return j;
}

Json to_json(const IntersectionSet& s) {
  Json pts = Json::array();
  for (const auto& p : s.points) pts.push_back(to_json(p));
  Json j{{"count", s.size()}, {"points", pts}, {"tangential", s.tangential}};
  if (s.unresolved) j["unresolved"] = true;
  return j;
}

Json to_json(const TouchSolution& s) { return Json{{"circle", to_json(s.circle)}, {"trace", to_json(s.trace)}}; }

Json to_json(const FuzzReport& r) {
  Json viol = Json::array();
  for (const auto& v : r.violations) viol.push_back({{"trial", v.trial}, {"axiom", v.axiom}, {"message", v.message}});
  return Json{{"trials", r.trials}, {"seed", r.seed}, {"checks", r.checks}, {"violations", viol}};
}

Json to_json(const ClassificationReport& r) {
  Json j{{"group_dimension", r.group_dimension}, {"klein_kroll", to_string(r.klein_kroll)}};
  j["detected_exponents"] = r.detected_exponents ? Json(*r.detected_exponents) : Json(nullptr);
  Json ev = Json::array();
  for (double e : r.evidence) ev.push_back(real(e));
  j["evidence"] = ev;
  return j;
}

Json to_json(const std::optional<IsoWitness>& w) {
  if (!w) return Json{{"isomorphic", false}};
  return Json{{"isomorphic", true}, {"transform", to_string(w->transform)}, {"r", w->r}, {"residual", w->residual}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    bad(path + ": " + e.what());
  }
}

Json json_argument(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    try {
      return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      bad(std::string("malformed JSON argument: ") + e.what());
    }
  }
  return read_json_file(text);
}

}  // namespace flatmink
