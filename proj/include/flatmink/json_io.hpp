#pragma once

// JSON forms of points, functions, planes and circles, and of every report.
//
//   point     {"x": 1.5, "y": "inf"}
//   function  {"kind": "reciprocal_power", "i": 2}   (or just "reciprocal_power_sum" when
//             there are no parameters; optional "scale", "dilate", "inverted")
//   plane     {"f1": fn, "f2": fn, "f3": fn, "f4": fn, "normalise": bool,
//              "checker": {"grid_min", "grid_max", "grid_points", "limit_b_values", "tolerance"}}
//   circle    {"half": "neg"|"pos", "kind": "curve", "a", "b", "c"} or
//             {"half": "neg"|"pos", "kind": "line", "s", "t"}
//
// Parsers throw Error(BadParam) on malformed input.

#include <optional>
#include <vector>

#include <json.hpp>

#include "flatmink/circles.hpp"
#include "flatmink/classify.hpp"
#include "flatmink/functions.hpp"
#include "flatmink/incidence.hpp"
#include "flatmink/rootcraft.hpp"
#include "flatmink/torus.hpp"

namespace flatmink {

using Json = nlohmann::ordered_json;

Json to_json(const ExtendedReal& v);
ExtendedReal extended_from_json(const Json& j);

Json to_json(const TorusPoint& p);
TorusPoint point_from_json(const Json& j);
std::vector<TorusPoint> points_from_json(const Json& j);

Json to_json(const FunctionSpec& f);
FunctionSpec function_spec_from_json(const Json& j);

struct PlaneFile {
  PlaneSpec plane;
  CheckerConfig checker;
  bool normalise = false;
};

/// Applies "normalise" when set.
PlaneFile plane_file_from_json(const Json& j);
Json to_json(const PlaneSpec& plane);
Json to_json(const CheckerConfig& cfg);

Json to_json(const Circle& c);
/// Curves take their generators from the matching half of `plane`.
Circle circle_from_json(const Json& j, const PlaneSpec& plane);
std::vector<Circle> circles_from_json(const Json& j, const PlaneSpec& plane);

Json to_json(const CheckReport& r);
Json to_json(const LimitLemmaReport& r);
Json to_json(const RootReport& r);
Json to_json(const CaseTableReport& r);
Json to_json(const CaseTrace& t);
Json to_json(const JoinSolution& s);
Json to_json(const IntersectionSet& s);
Json to_json(const TouchSolution& s);
Json to_json(const FuzzReport& r);
Json to_json(const ClassificationReport& r);
Json to_json(const std::optional<IsoWitness>& w);

/// Reads and parses a file; throws Error(BadParam) when unreadable or malformed.
Json read_json_file(const std::string& path);
/// A JSON literal when `text` starts with '{' or '[', else the contents of the file it names.
Json json_argument(const std::string& text);

}  // namespace flatmink
