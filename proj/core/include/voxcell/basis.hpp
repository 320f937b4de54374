#pragma once

#include <span>
#include <vector>

namespace voxcell {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> points;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

/// Legendre polynomial L_n(x) and its derivative.
double legendre(int n, double x) noexcept;

/// Hierarchic 1D basis of degree p on [-1, 1]: the two linear modes
/// N0 = (1 - xi)/2 and N1 = (1 + xi)/2, followed by the integrated Legendre
/// modes phi_j = (L_j - L_{j-2}) / sqrt(4j - 2), j = 2..p, which vanish at
/// both ends.
class ShapeBasis {
 public:
  explicit ShapeBasis(int degree);

  int degree() const noexcept { return degree_; }
  int size() const noexcept { return degree_ + 1; }

  /// Fills p+1 values and derivatives. Throws DomainError when |xi| > 1.
  void eval(double xi, std::span<double> values, std::span<double> derivatives) const;

  struct Values {
    std::vector<double> values;
    std::vector<double> derivatives;
  };
  Values eval(double xi) const;

 private:
  int degree_;
};

}  // namespace voxcell
