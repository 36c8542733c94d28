// flatmink: command line front end. Reports go to stdout as JSON (SVG for
// render); exit status 2 on usage errors, 1 on numeric failures.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flatmink/classify.hpp"
#include "flatmink/error.hpp"
#include "flatmink/json_io.hpp"
#include "flatmink/render.hpp"
#include "flatmink/rootcraft.hpp"
#include "suite.hpp"

using namespace flatmink;

namespace {

constexpr int kUsage = 2;
constexpr int kNumeric = 1;

// Thrown by commands that ran to completion but found violations.
struct Failed {
  Json report;
};

std::uint64_t effective_seed(std::uint64_t seed) {
  const char* env = std::getenv("MINK_SEED");
  if (env == nullptr) return seed;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(env, &used);
    if (used == std::string(env).size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::BadParam, "MINK_SEED is not an unsigned integer");
}

PlaneFile load_plane(const std::string& arg) { return plane_file_from_json(json_argument(arg)); }

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

bool is_usage(ErrorKind k) { return k == ErrorKind::BadParam || k == ErrorKind::UnknownName; }

Json diagnostic(std::string_view kind, const std::string& message) {
  return Json{{"error", std::string(kind)}, {"message", message}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flat Minkowski planes: joins, touches, roots and classification"};
  app.require_subcommand(1);
  std::function<void()> action;

  // check-fn
  std::string fn_spec;
  CheckerConfig checker;
  auto* check_fn = app.add_subcommand("check-fn", "check a function against the strong hyperbolicity conditions");
  check_fn->add_option("--spec", fn_spec, "function spec (JSON file or literal)")->required();
  check_fn->add_option("--grid-min", checker.grid_min, "smallest grid point");
  check_fn->add_option("--grid-max", checker.grid_max, "largest grid point");
  check_fn->add_option("--points", checker.grid_points, "grid points");
  check_fn->add_option("--tol", checker.tolerance, "relative tolerance");
  check_fn->callback([&] {
    action = [&] {
      checker.validate();
      const ShFunction f = make_function(function_spec_from_json(json_argument(fn_spec)));
      print(to_json(check_strongly_hyperbolic(f, checker)));
    };
  });

  std::string plane_arg;

  // join
  std::string points_arg;
  auto* join_cmd = app.add_subcommand("join", "the circle through three points");
  join_cmd->add_option("--plane", plane_arg, "plane (JSON file or literal)")->required();
  join_cmd->add_option("--points", points_arg, "three points (JSON array)")->required();
  join_cmd->callback([&] {
    action = [&] {
      const PlaneSpec plane = load_plane(plane_arg).plane;
      const auto pts = points_from_json(json_argument(points_arg));
      if (pts.size() != 3) throw Error(ErrorKind::BadParam, "join needs exactly three points");
      print(to_json(join(plane, pts[0], pts[1], pts[2])));
    };
  });

  // touch
  std::string circle_arg, p_arg, q_arg;
  auto* touch_cmd = app.add_subcommand("touch", "the circle through p and q touching a circle at p");
  touch_cmd->add_option("--plane", plane_arg, "plane (JSON file or literal)")->required();
  touch_cmd->add_option("--circle", circle_arg, "circle (JSON)")->required();
  touch_cmd->add_option("--p", p_arg, "point of contact (JSON)")->required();
  touch_cmd->add_option("--q", q_arg, "second point (JSON)")->required();
  touch_cmd->callback([&] {
    action = [&] {
      const PlaneSpec plane = load_plane(plane_arg).plane;
      const Circle c = circle_from_json(json_argument(circle_arg), plane);
      print(to_json(touch_solution(plane, c, point_from_json(json_argument(p_arg)),
                                   point_from_json(json_argument(q_arg)))));
    };
  });

  // intersect
  std::string c1_arg, c2_arg;
  auto* intersect_cmd = app.add_subcommand("intersect", "common points of two circles");
  intersect_cmd->add_option("--plane", plane_arg, "plane (JSON file or literal)")->required();
  intersect_cmd->add_option("--c1", c1_arg, "first circle (JSON)")->required();
  intersect_cmd->add_option("--c2", c2_arg, "second circle (JSON)")->required();
  intersect_cmd->callback([&] {
    action = [&] {
      const PlaneSpec plane = load_plane(plane_arg).plane;
      const IntersectionSet s = intersect(circle_from_json(json_argument(c1_arg), plane),
                                          circle_from_json(json_argument(c2_arg), plane));
      if (s.unresolved) throw Failed{to_json(s)};
      print(to_json(s));
    };
  });

  // roots
  std::vector<double> params;
  auto* roots_cmd = app.add_subcommand("roots", "roots of the Check and Hat differences of two curves");
  roots_cmd->add_option("--plane", plane_arg, "plane (JSON file or literal)")->required();
  roots_cmd->add_option("--params", params, "a1,b1,c1,a2,b2,c2")->required()->delimiter(',')->expected(6);
  roots_cmd->callback([&] {
    action = [&] {
      const PlaneSpec plane = load_plane(plane_arg).plane;
      Json out;
      bool unresolved = false;
      for (DiffKind kind : {DiffKind::Check, DiffKind::Hat}) {
        const DiffFunction d(kind, params[0], params[1], params[2], params[3], params[4], params[5],
                             plane.negative());
        const RootReport r = analyze_roots(d);
        unresolved = unresolved || r.unresolved;
        out[kind == DiffKind::Check ? "check" : "hat"] = to_json(r);
      }
      if (unresolved) throw Failed{out};
      print(out);
    };
  });

  // verify-case-table
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  bool serial = false;
  auto* vct_cmd = app.add_subcommand("verify-case-table", "random check of the root-count clauses");
  vct_cmd->add_option("--plane", plane_arg, "plane whose f1, f2 generate the curves (default all 1/x)");
  vct_cmd->add_option("--trials", trials, "number of parameter draws");
  vct_cmd->add_option("--seed", seed, "seed (MINK_SEED overrides)");
  vct_cmd->add_flag("--serial", serial, "use the serial reference path");
  vct_cmd->callback([&] {
    action = [&] {
      const PlaneSpec plane = plane_arg.empty() ? PlaneSpec::classical() : load_plane(plane_arg).plane;
      const auto report = verify_case_table(plane.f1(), plane.f2(), trials, effective_seed(seed),
                                            serial ? Exec::Serial : Exec::Parallel);
      if (!report.violations.empty()) throw Failed{to_json(report)};
      print(to_json(report));
    };
  });

  // fuzz
  auto* fuzz_cmd = app.add_subcommand("fuzz", "randomised check of the joining and touching axioms");
  fuzz_cmd->add_option("--plane", plane_arg, "plane (JSON file or literal)")->required();
  std::size_t fuzz_trials = 1000;
  fuzz_cmd->add_option("--trials", fuzz_trials, "number of trials");
  fuzz_cmd->add_option("--seed", seed, "seed (MINK_SEED overrides)");
  fuzz_cmd->add_flag("--serial", serial, "use the serial reference path");
  fuzz_cmd->callback([&] {
    action = [&] {
      const PlaneSpec plane = load_plane(plane_arg).plane;
      FuzzOptions opts;
      opts.exec = serial ? Exec::Serial : Exec::Parallel;
      const auto report = fuzz_axioms(plane, fuzz_trials, effective_seed(seed), opts);
      if (!report.violations.empty()) throw Failed{to_json(report)};
      print(to_json(report));
    };
  });

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "automorphism group dimension and Klein-Kroll type");
  classify_cmd->add_option("--plane", plane_arg, "plane (JSON file or literal)")->required();
  classify_cmd->callback([&] { action = [&] { print(to_json(classify_plane(load_plane(plane_arg).plane))); }; });

  // isomorphic
  std::string plane_g_arg;
  auto* iso_cmd = app.add_subcommand("isomorphic", "search for an isomorphism between two normalised planes");
  iso_cmd->add_option("--plane-f", plane_arg, "first plane")->required();
  iso_cmd->add_option("--plane-g", plane_g_arg, "second plane")->required();
  iso_cmd->callback([&] {
    action = [&] { print(to_json(isomorphic(load_plane(plane_arg).plane, load_plane(plane_g_arg).plane))); };
  });

  // render
  std::string circles_arg, out_path;
  RenderOptions render_opts;
  auto* render_cmd = app.add_subcommand("render", "SVG of circles in the torus chart");
  render_cmd->add_option("--plane", plane_arg, "plane (JSON file or literal)")->required();
  render_cmd->add_option("--circles", circles_arg, "circles (JSON array)")->required();
  render_cmd->add_option("--out", out_path, "output file (default stdout)");
  render_cmd->add_option("--size", render_opts.size, "side of the square in pixels");
  render_cmd->callback([&] {
    action = [&] {
      const PlaneSpec plane = load_plane(plane_arg).plane;
      const std::string svg = render_svg(circles_from_json(json_argument(circles_arg), plane), render_opts);
      if (out_path.empty()) {
        std::cout << svg;
        return;
      }
      std::ofstream out(out_path);
      if (!(out << svg)) throw Error(ErrorKind::BadParam, "cannot write " + out_path);
    };
  });

  // accept
  std::vector<int> only;
  std::uint64_t accept_seed = acceptance::kDefaultSeed;
  auto* accept_cmd = app.add_subcommand("accept", "run the acceptance criteria");
  accept_cmd->add_option("--seed", accept_seed, "seed (MINK_SEED overrides)");
  accept_cmd->add_option("--only", only, "criteria to run, 1..9")->check(CLI::Range(1, acceptance::kCriteria));
  accept_cmd->add_flag("--serial", serial, "use the serial reference path");
  accept_cmd->callback([&] {
    action = [&] {
      acceptance::Options opts;
      opts.seed = effective_seed(accept_seed);
      opts.exec = serial ? Exec::Serial : Exec::Parallel;
      if (only.empty()) {
        for (int id = 1; id <= acceptance::kCriteria; ++id) only.push_back(id);
      }
      std::printf("seed %llu\n", static_cast<unsigned long long>(opts.seed));
      int failed = 0;
      for (int id : only) {
        const auto r = acceptance::run_criterion(id, opts);
        std::printf("%s\n", acceptance::format_line(r).c_str());
        std::fflush(stdout);
        failed += r.passed ? 0 : 1;
      }
      std::printf("%d/%zu criteria passed\n", static_cast<int>(only.size()) - failed, only.size());
      if (failed > 0) std::exit(kNumeric);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    action();
  } catch (const Failed& f) {
    print(f.report);
    return kNumeric;
  } catch (const Error& e) {
    print(diagnostic(to_string(e.kind()), e.what()));
    return is_usage(e.kind()) ? kUsage : kNumeric;
  } catch (const Json::exception& e) {
    print(diagnostic("BadParam", e.what()));
    return kUsage;
  } catch (const std::exception& e) {
    print(diagnostic("Internal", e.what()));
    return kNumeric;
  }
  return 0;
}
