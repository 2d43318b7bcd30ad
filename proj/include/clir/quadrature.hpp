#pragma once

#include <array>
#include <cmath>

namespace clir {

// Symmetric 7-point rule on the reference triangle, exact for polynomials of
// total degree <= 5. Points are barycentric, weights sum to one.
struct TrianglePoint {
  std::array<double, 3> bary;
  double weight;
};

inline const std::array<TrianglePoint, 7>& triangle_rule_deg5() {
  static const std::array<TrianglePoint, 7> rule = [] {
    const double s15 = std::sqrt(15.0);
    const double a = (6.0 - s15) / 21.0;
    const double b = (6.0 + s15) / 21.0;
    const double wa = (155.0 - s15) / 1200.0;
    const double wb = (155.0 + s15) / 1200.0;
    return std::array<TrianglePoint, 7>{{
        {{1.0 / 3, 1.0 / 3, 1.0 / 3}, 9.0 / 40.0},
        {{a, a, 1 - 2 * a}, wa},
        {{a, 1 - 2 * a, a}, wa},
        {{1 - 2 * a, a, a}, wa},
        {{b, b, 1 - 2 * b}, wb},
        {{b, 1 - 2 * b, b}, wb},
        {{1 - 2 * b, b, b}, wb},
    }};
  }();
  return rule;
}

}  // namespace clir
