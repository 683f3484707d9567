#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "wasslab/calculus.hpp"

namespace wasslab::catalogue {
namespace {

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }
double logistic(double z) {
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

OuterFunction scalar_outer(std::string name, std::function<double(double)> f,
                           std::function<double(double)> df, double bound) {
  OuterFunction g;
  g.name = std::move(name);
  g.arity = 1;
  g.value = [f](std::span<const double> r) { return f(r[0]); };
  g.gradient = [df](std::span<const double> r, std::span<double> out) { out[0] = df(r[0]); };
  g.partial_bounds = {bound};
  return g;
}

InnerFunction first_coordinate(std::string name, std::function<double(double)> f,
                               std::function<double(double)> df, double bound) {
  InnerFunction psi;
  psi.name = std::move(name);
  psi.value = [f](std::span<const double> x) { return f(x[0]); };
  psi.gradient = [df](std::span<const double> x, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    out[0] = df(x[0]);
  };
  psi.gradient_bound = bound;
  return psi;
}

const double kGaussSlope = std::sqrt(2.0 / std::numbers::e);  // sup |2r e^{-r^2}|

}  // namespace

double smooth_clamp(double r, double delta) {
  return delta * (softplus(r / delta) - softplus((r - 1.0) / delta));
}

double smooth_clamp_derivative(double r, double delta) {
  return logistic(r / delta) - logistic((r - 1.0) / delta);
}

std::vector<std::string> outer_names() {
  return {"id", "square", "tanh", "sin", "cos", "atan", "exp_neg_square",
          "chi1", "smooth_clamp", "sum", "prod", "constant"};
}

std::vector<std::string> inner_names() {
  return {"x", "x2", "x3", "sin_pi", "cos_pi", "tanh", "gauss", "atan"};
}

OuterFunction outer(const std::string& name, std::size_t arity) {
  if (name == "sum" || name == "prod") {
    if (arity == 0) throw std::invalid_argument(name + " needs at least one argument");
    OuterFunction g;
    g.name = name;
    g.arity = arity;
    if (name == "sum") {
      g.value = [](std::span<const double> r) {
        double s = 0.0;
        for (double v : r) s += v;
        return s;
      };
      g.gradient = [](std::span<const double>, std::span<double> out) {
        std::fill(out.begin(), out.end(), 1.0);
      };
      g.partial_bounds.assign(arity, 1.0);
    } else {
      g.value = [](std::span<const double> r) {
        double s = 1.0;
        for (double v : r) s *= v;
        return s;
      };
      g.gradient = [](std::span<const double> r, std::span<double> out) {
        for (std::size_t k = 0; k < r.size(); ++k) {
          double s = 1.0;
          for (std::size_t j = 0; j < r.size(); ++j) {
            if (j != k) s *= r[j];
          }
          out[k] = s;
        }
      };
      g.partial_bounds.assign(arity, kUnbounded);
    }
    return g;
  }
  if (name == "constant") {
    if (arity != 0) throw std::invalid_argument("constant takes no arguments");
    OuterFunction g;
    g.name = name;
    g.arity = 0;
    g.value = [](std::span<const double>) { return 1.0; };
    g.gradient = [](std::span<const double>, std::span<double>) {};
    return g;
  }
  if (arity != 1) throw std::invalid_argument("outer function '" + name + "' takes one argument");
  if (name == "id") return scalar_outer(name, [](double r) { return r; }, [](double) { return 1.0; }, 1.0);
  if (name == "square") {
    return scalar_outer(name, [](double r) { return r * r; }, [](double r) { return 2.0 * r; },
                        kUnbounded);
  }
  if (name == "tanh") {
    return scalar_outer(name, [](double r) { return std::tanh(r); },
                        [](double r) {
                          const double t = std::tanh(r);
                          return 1.0 - t * t;
                        },
                        1.0);
  }
  if (name == "sin") {
    return scalar_outer(name, [](double r) { return std::sin(r); },
                        [](double r) { return std::cos(r); }, 1.0);
  }
  if (name == "cos") {
    return scalar_outer(name, [](double r) { return std::cos(r); },
                        [](double r) { return -std::sin(r); }, 1.0);
  }
  if (name == "atan") {
    return scalar_outer(name, [](double r) { return std::atan(r); },
                        [](double r) { return 1.0 / (1.0 + r * r); }, 1.0);
  }
  if (name == "exp_neg_square") {
    return scalar_outer(name, [](double r) { return std::exp(-r * r); },
                        [](double r) { return -2.0 * r * std::exp(-r * r); }, kGaussSlope);
  }
  if (name == "chi1") {
    return scalar_outer(name, [](double r) { return chi(1, r); },
                        [](double r) { return chi_derivative(1, r); }, 1.0);
  }
  if (name == "smooth_clamp") {
    return scalar_outer(name, [](double r) { return smooth_clamp(r); },
                        [](double r) { return smooth_clamp_derivative(r); }, 1.0);
  }
  throw std::invalid_argument("unknown outer function '" + name + "'");
}

InnerFunction inner(const std::string& name) {
  if (name == "x") {
    return first_coordinate(name, [](double x) { return x; }, [](double) { return 1.0; }, 1.0);
  }
  if (name == "x3") {
    return first_coordinate(name, [](double x) { return x * x * x; },
                            [](double x) { return 3.0 * x * x; }, kUnbounded);
  }
  if (name == "sin_pi") {
    return first_coordinate(name, [](double x) { return std::sin(std::numbers::pi * x); },
                            [](double x) { return std::numbers::pi * std::cos(std::numbers::pi * x); },
                            std::numbers::pi);
  }
  if (name == "cos_pi") {
    return first_coordinate(name, [](double x) { return std::cos(std::numbers::pi * x); },
                            [](double x) { return -std::numbers::pi * std::sin(std::numbers::pi * x); },
                            std::numbers::pi);
  }
  if (name == "tanh") {
    return first_coordinate(name, [](double x) { return std::tanh(x); },
                            [](double x) {
                              const double t = std::tanh(x);
                              return 1.0 - t * t;
                            },
                            1.0);
  }
  if (name == "atan") {
    return first_coordinate(name, [](double x) { return std::atan(x); },
                            [](double x) { return 1.0 / (1.0 + x * x); }, 1.0);
  }
  if (name == "x2" || name == "gauss") {
    InnerFunction psi;
    psi.name = name;
    const bool gauss = name == "gauss";
    psi.value = [gauss](std::span<const double> x) {
      double r2 = 0.0;
      for (double c : x) r2 += c * c;
      return gauss ? std::exp(-r2) : r2;
    };
    psi.gradient = [gauss](std::span<const double> x, std::span<double> out) {
      double r2 = 0.0;
      for (double c : x) r2 += c * c;
      const double scale = gauss ? -2.0 * std::exp(-r2) : 2.0;
      for (std::size_t c = 0; c < x.size(); ++c) out[c] = scale * x[c];
    };
    psi.gradient_bound = gauss ? kGaussSlope : kUnbounded;
    return psi;
  }
  throw std::invalid_argument("unknown inner function '" + name + "'");
}

CylindricalFunction function(const std::string& expr) {
  static const std::map<std::string, std::string> named = {
      {"mean", "id(x)"},
      {"second_moment", "id(x2)"},
      {"tanh_mean", "tanh(x)"},
      {"sin_second_moment", "sin(x2)"},
      {"constant", "constant()"},
  };
  std::string body = expr;
  if (auto it = named.find(expr); it != named.end()) body = it->second;

  const auto open = body.find('(');
  if (open == std::string::npos || body.back() != ')') {
    throw std::invalid_argument("unknown catalogue function '" + expr + "'");
  }
  const std::string g_name = body.substr(0, open);
  const std::string args = body.substr(open + 1, body.size() - open - 2);
  std::vector<InnerFunction> psi;
  std::size_t start = 0;
  while (start < args.size()) {
    const auto comma = args.find(',', start);
    const auto end = comma == std::string::npos ? args.size() : comma;
    psi.push_back(inner(args.substr(start, end - start)));
    start = end + 1;
  }
  OuterFunction g = outer(g_name, psi.size());
  return CylindricalFunction(expr, std::move(g), std::move(psi));
}

}  // namespace wasslab::catalogue
