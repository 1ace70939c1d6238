#include <cmath>
#include <limits>

#include "ermc/errors.hpp"
#include "ermc/oracles.hpp"

namespace ermc {

// E1 by power series below x=1 and modified Lentz continued fraction above.
double expint_e1(double x) {
  if (x < 0.0) throw Error("expint_e1: negative argument");
  if (x == 0.0) return std::numeric_limits<double>::infinity();
  constexpr double euler = 0.5772156649015328606;
  if (x <= 1.0) {
    double sum = 0.0, term = 1.0;
    for (int n = 1; n <= 60; ++n) {
      term *= -x / n;
      double add = -term / n;
      sum += add;
      if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return -euler - std::log(x) + sum;
  }
  double b = x + 1.0;
  double c = 1e308, d = 1.0 / b, h = d;
  for (int i = 1; i <= 200; ++i) {
    double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x);
}

double expint_e2(double x) {
  if (x < 0.0) throw Error("expint_e2: negative argument");
  if (x == 0.0) return 1.0;
  return std::exp(-x) - x * expint_e1(x);
}

double expint_e3(double x) {
  if (x < 0.0) throw Error("expint_e3: negative argument");
  if (x == 0.0) return 0.5;
  return 0.5 * (std::exp(-x) - x * expint_e2(x));
}

}  // namespace ermc
