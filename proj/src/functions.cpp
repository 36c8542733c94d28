#include "flatmink/functions.hpp"

#include <cmath>
#include <limits>

#include "flatmink/error.hpp"
#include "flatmink/numeric.hpp"

namespace flatmink {

namespace {

struct Base {
  ShFunction::Map eval;
  ShFunction::Map deriv;
  std::optional<ShFunction::Map> inverse;
};

double required_param(const std::map<std::string, double>& params, const std::string& key,
                      std::string_view fn) {
  const auto it = params.find(key);
  if (it == params.end()) {
    throw Error(ErrorKind::BadParam, std::string(fn) + " requires parameter '" + key + "'");
  }
  return it->second;
}

int positive_integer(double v, const std::string& key, std::string_view fn) {
  if (!(v >= 1) || v != std::floor(v) || v > 64) {
    throw Error(ErrorKind::BadParam,
                std::string(fn) + ": parameter '" + key + "' must be a positive integer");
  }
  return static_cast<int>(v);
}

void reject_extra(const std::map<std::string, double>& params,
                  std::initializer_list<std::string_view> allowed, std::string_view fn) {
  for (const auto& [key, _] : params) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw Error(ErrorKind::BadParam, std::string(fn) + ": unexpected parameter '" + key + "'");
  }
}

Base power_base(double r) {
  return Base{
      [r](double x) { return std::pow(x, -r); },
      [r](double x) { return -r * std::pow(x, -r - 1.0); },
      [r](double y) { return std::pow(y, -1.0 / r); },
  };
}

Base make_base(std::string_view name, const std::map<std::string, double>& params) {
  if (name == "reciprocal_power") {
    reject_extra(params, {"i"}, name);
    const int i = positive_integer(required_param(params, "i", name), "i", name);
    return power_base(i);
  }
  if (name == "hartmann_power") {
    reject_extra(params, {"r"}, name);
    const double r = required_param(params, "r", name);
    if (!(r > 0) || !std::isfinite(r)) throw Error(ErrorKind::BadParam, "hartmann_power: r must be > 0");
    return power_base(r);
  }
  if (name == "reciprocal_power_sum") {
    reject_extra(params, {"n"}, name);
    const int n = positive_integer(required_param(params, "n", name), "n", name);
    return Base{
        [n](double x) {
          const double t = 1.0 / x;
          double acc = 0.0;
          for (int k = n; k >= 1; --k) acc = t * (1.0 + acc);
          return acc;
        },
        [n](double x) {
          const double t = 1.0 / x;
          double acc = 0.0;  // sum_{k=1..n} k t^{k-1}
          for (int k = n; k >= 1; --k) acc = k + t * acc;
          return -t * t * acc;
        },
        std::nullopt,
    };
  }
  if (name == "reciprocal_x_plus_arctan") {
    reject_extra(params, {}, name);
    return Base{
        [](double x) { return 1.0 / (x + std::atan(x)); },
        [](double x) {
          const double d = x + std::atan(x);
          return -(1.0 + 1.0 / (1.0 + x * x)) / (d * d);
        },
        std::nullopt,
    };
  }
  if (name == "arcsinh_reciprocal") {
    reject_extra(params, {}, name);
    return Base{
        [](double x) { return std::asinh(1.0 / x); },
        [](double x) { return -1.0 / (x * std::hypot(x, 1.0)); },
        [](double y) { return 1.0 / std::sinh(y); },
    };
  }
  if (name == "reciprocal_sinh") {
    reject_extra(params, {}, name);
    return Base{
        [](double x) { return 1.0 / std::sinh(x); },
        [](double x) { return -1.0 / (std::sinh(x) * std::tanh(x)); },
        [](double y) { return std::asinh(1.0 / y); },
    };
  }
  throw Error(ErrorKind::UnknownName, "unknown function kind '" + std::string(name) + "'");
}

double symmetric_difference(const ShFunction::Map& f, double x, double rel_step) {
  const double h = x * rel_step;
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Inverse of a decreasing bijection of R+ by bisection in log scale.
double bisect_inverse(const ShFunction::Map& f, double y) {
  if (!(y > 0) || !std::isfinite(y)) {
    throw Error(ErrorKind::DomainError, "inverse requires y > 0, got " + std::to_string(y));
  }
  auto residual = [&](double x) { return f(x) - y; };
  double lo = 1.0;
  double hi = 1.0;
  // f decreasing: residual > 0 left of the root, < 0 right of it.
  if (residual(1.0) > 0) {
    while (residual(hi) > 0) {
      lo = hi;
      hi *= numeric::kExpansionFactor;
      if (!std::isfinite(hi)) throw Error(ErrorKind::NoConvergence, "inverse: no upper bracket");
    }
  } else {
    while (residual(lo) < 0) {
      hi = lo;
      lo /= numeric::kExpansionFactor;
      if (lo == 0) throw Error(ErrorKind::NoConvergence, "inverse: no lower bracket");
    }
  }
  if (residual(lo) == 0) return lo;
  if (residual(hi) == 0) return hi;
  return numeric::bisect(residual, lo, hi, +1);
}

}  // namespace

ShFunction::ShFunction(FunctionSpec spec, Map eval, Map deriv, std::optional<Map> inverse,
                       bool analytic_derivative)
    : spec_(std::move(spec)),
      eval_(std::make_shared<const Map>(std::move(eval))),
      deriv_(std::make_shared<const Map>(std::move(deriv))),
      inverse_(inverse ? std::make_shared<const Map>(std::move(*inverse)) : nullptr),
      analytic_derivative_(analytic_derivative) {}

ShFunction ShFunction::black_box(std::string name, Map eval) {
  auto shared = std::make_shared<const Map>(std::move(eval));
  Map e = [shared](double x) { return (*shared)(x); };
  Map d = [shared](double x) { return symmetric_difference(*shared, x, 1e-6); };
  return ShFunction(FunctionSpec{std::move(name), {}, 1.0, 1.0, false}, std::move(e), std::move(d),
                    std::nullopt, false);
}

ShFunction ShFunction::scaled(double k) const {
  if (!(k > 0) || !std::isfinite(k)) throw Error(ErrorKind::BadParam, "scale factor must be > 0");
  FunctionSpec spec = spec_;
  spec.scale *= k;
  auto e = eval_;
  auto d = deriv_;
  std::optional<Map> inv;
  if (inverse_) {
    auto i = inverse_;
    inv = [i, k](double y) { return (*i)(y / k); };
  }
  return ShFunction(std::move(spec), [e, k](double x) { return k * (*e)(x); },
                    [d, k](double x) { return k * (*d)(x); }, std::move(inv), analytic_derivative_);
}

ShFunction ShFunction::dilated(double r) const {
  if (!(r > 0) || !std::isfinite(r)) throw Error(ErrorKind::BadParam, "dilation must be > 0");
  FunctionSpec spec = spec_;
  spec.dilate *= r;
  auto e = eval_;
  auto d = deriv_;
  std::optional<Map> inv;
  if (inverse_) {
    auto i = inverse_;
    inv = [i, r](double y) { return r * (*i)(y); };
  }
  return ShFunction(std::move(spec), [e, r](double x) { return (*e)(x / r); },
                    [d, r](double x) { return (*d)(x / r) / r; }, std::move(inv),
                    analytic_derivative_);
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{
      "reciprocal_power",   "reciprocal_power_sum", "reciprocal_x_plus_arctan",
      "arcsinh_reciprocal", "reciprocal_sinh",      "hartmann_power",
  };
  return names;
}

ShFunction catalog(std::string_view name, const std::map<std::string, double>& params) {
  Base base = make_base(name, params);
  return ShFunction(FunctionSpec{std::string(name), params, 1.0, 1.0, false}, std::move(base.eval),
                    std::move(base.deriv), std::move(base.inverse));
}

ShFunction make_function(const FunctionSpec& spec) {
  ShFunction f = catalog(spec.kind, spec.params);
  if (spec.inverted) f = inverse_function(f);
  if (spec.dilate != 1.0) f = f.dilated(spec.dilate);
  if (spec.scale != 1.0) f = f.scaled(spec.scale);
  return f;
}

double invert(const ShFunction& f, double y) {
  if (!(y > 0) || !std::isfinite(y)) {
    throw Error(ErrorKind::DomainError, "invert requires y > 0, got " + std::to_string(y));
  }
  if (f.has_inverse()) return f.inverse(y);
  return bisect_inverse([&f](double x) { return f(x); }, y);
}

ShFunction inverse_function(const ShFunction& f) {
  FunctionSpec spec = f.spec();
  // (k g(x/r))^{-1}(y) = r g^{-1}(y/k)
  spec.inverted = !spec.inverted;
  std::swap(spec.scale, spec.dilate);
  ShFunction::Map eval = [f](double y) { return invert(f, y); };
  ShFunction::Map deriv = [f](double y) { return 1.0 / f.derivative(invert(f, y)); };
  ShFunction::Map inverse = [f](double x) { return f(x); };
  return ShFunction(std::move(spec), std::move(eval), std::move(deriv), std::move(inverse),
                    f.analytic_derivative());
}

}  // namespace flatmink
