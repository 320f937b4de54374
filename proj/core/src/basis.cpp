#include "voxcell/basis.hpp"

#include <cmath>
#include <numbers>

#include "voxcell/error.hpp"

namespace voxcell {
namespace {

// L_n and L_n' by the three-term recurrence.
void legendre_pair(int n, double x, double& value, double& derivative) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    value = 1.0;
    derivative = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  value = p1;
  derivative = std::abs(1.0 - x * x) > 1e-14
                   ? n * (p0 - x * p1) / (1.0 - x * x)
                   : 0.5 * n * (n + 1) * (x > 0 ? 1.0 : (n % 2 ? 1.0 : -1.0));
}

}  // namespace

double legendre(int n, double x) noexcept {
  double v, d;
  legendre_pair(n, x, v, d);
  return v;
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss rule needs at least one point");
  GaussRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double v = 0.0, d = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre_pair(n, x, v, d);
      const double dx = v / d;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre_pair(n, x, v, d);
    const double w = 2.0 / ((1.0 - x * x) * d * d);
    rule.points[i] = -x;
    rule.points[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.points[n / 2] = 0.0;
  return rule;
}

ShapeBasis::ShapeBasis(int degree) : degree_(degree) {
  if (degree < 1 || degree > 30) throw DomainError("basis degree must lie in [1, 30]");
}

void ShapeBasis::eval(double xi, std::span<double> values, std::span<double> derivatives) const {
  if (!(std::abs(xi) <= 1.0 + 1e-12)) {
    throw DomainError("basis evaluated outside [-1, 1]");
  }
  values[0] = 0.5 * (1.0 - xi);
  values[1] = 0.5 * (1.0 + xi);
  derivatives[0] = -0.5;
  derivatives[1] = 0.5;
  if (degree_ < 2) return;
  // Legendre values L_0..L_p by recurrence.
  double lm2 = 1.0, lm1 = xi;
  double lvals[64];
  lvals[0] = 1.0;
  lvals[1] = xi;
  for (int k = 2; k <= degree_; ++k) {
    const double l = ((2 * k - 1) * xi * lm1 - (k - 1) * lm2) / k;
    lvals[k] = l;
    lm2 = lm1;
    lm1 = l;
  }
  for (int j = 2; j <= degree_; ++j) {
    values[j] = (lvals[j] - lvals[j - 2]) / std::sqrt(4.0 * j - 2.0);
    derivatives[j] = std::sqrt(0.5 * (2.0 * j - 1.0)) * lvals[j - 1];
  }
}

ShapeBasis::Values ShapeBasis::eval(double xi) const {
  Values v{std::vector<double>(size()), std::vector<double>(size())};
  eval(xi, v.values, v.derivatives);
  return v;
}

}  // namespace voxcell
