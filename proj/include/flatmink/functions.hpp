#pragma once

// Strongly hyperbolic functions: the catalog, derived functions, a numerical
// checker for the five defining conditions and for the asymptotic limit lemma.

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flatmink {

/// Serializable description of a function x -> scale * base(x / dilate), where
/// base is a catalog member or, when `inverted`, its inverse.
struct FunctionSpec {
  std::string kind;
  std::map<std::string, double> params;
  double scale = 1.0;
  double dilate = 1.0;
  bool inverted = false;

  friend bool operator==(const FunctionSpec&, const FunctionSpec&) = default;
};

/// A positive decreasing map of R+ with value, derivative and optional inverse.
/// Cheap to copy; evaluators are pure and safe to call concurrently.
class ShFunction {
 public:
  using Map = std::function<double(double)>;

  ShFunction(FunctionSpec spec, Map eval, Map deriv, std::optional<Map> inverse,
             bool analytic_derivative = true);

  /// A user function without derivative: the derivative becomes a symmetric
  /// difference with step h = 1e-6 x.
  static ShFunction black_box(std::string name, Map eval);

  double operator()(double x) const { return (*eval_)(x); }
  double derivative(double x) const { return (*deriv_)(x); }

  bool has_inverse() const noexcept { return inverse_ != nullptr; }
  /// Analytic inverse. Precondition: has_inverse().
  double inverse(double y) const { return (*inverse_)(y); }

  bool analytic_derivative() const noexcept { return analytic_derivative_; }
  const FunctionSpec& spec() const noexcept { return spec_; }
  const std::string& name() const noexcept { return spec_.kind; }

  /// x -> k f(x).
  ShFunction scaled(double k) const;
  /// x -> f(x / r).
  ShFunction dilated(double r) const;

 private:
  FunctionSpec spec_;
  std::shared_ptr<const Map> eval_;
  std::shared_ptr<const Map> deriv_;
  std::shared_ptr<const Map> inverse_;
  bool analytic_derivative_ = true;
};

/// Names accepted by catalog().
const std::vector<std::string>& catalog_names();

/// Builds a catalog function. Parameters: reciprocal_power {i}, reciprocal_power_sum {n},
/// hartmann_power {r}; the others take none. Throws UnknownName or BadParam.
ShFunction catalog(std::string_view name, const std::map<std::string, double>& params = {});

/// Rebuilds a function from its serializable description.
ShFunction make_function(const FunctionSpec& spec);

/// x > 0 with f(x) = y. Uses the analytic inverse when present, bisection otherwise.
double invert(const ShFunction& f, double y);

/// The inverse map f^{-1} as a function in its own right.
ShFunction inverse_function(const ShFunction& f);

struct CheckerConfig {
  double grid_min = 1e-4;
  double grid_max = 1e8;
  int grid_points = 512;
  std::vector<double> limit_b_values{0.5, 1.0, 3.0};
  double tolerance = 1e-3;

  void validate() const;  // throws BadParam
  std::vector<double> grid() const;
};

struct ConditionVerdict {
  int index = 0;
  std::string name;
  bool passed = false;
  double worst_residual = 0.0;
  double witness = 0.0;
  std::string note;
};

struct CheckReport {
  std::string function;
  std::array<ConditionVerdict, 5> conditions;
  bool overall = false;
  /// Grid end actually used: below the configured one when f underflows
  /// (falls under 1e-250) before it.
  double grid_max = 0.0;
};

CheckReport check_strongly_hyperbolic(const ShFunction& f, const CheckerConfig& cfg = {});

struct LimitLemmaOptions {
  double s = 2.0;
  double t = 1.0;
};

struct LimitPart {
  int index = 0;
  double value = 0.0;
  double target = 0.0;
  double residual = 0.0;
  bool passed = false;
};

struct LimitLemmaReport {
  double horizon = 0.0;
  std::array<LimitPart, 5> parts;
  bool overall = false;
};

/// Evaluates the asymptotic consequences of the definition at X = cfg.grid_max,
/// lowered like the checker's grid when f underflows first.
LimitLemmaReport check_limit_lemma(const ShFunction& f, const CheckerConfig& cfg = {},
                                   const LimitLemmaOptions& opts = {});

}  // namespace flatmink
