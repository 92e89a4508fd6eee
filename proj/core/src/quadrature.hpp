#pragma once

#include <array>

namespace wavecontrol::detail {

struct LinePoint {
  double s;  // on [0, 1]
  double w;  // weights sum to 1
};

// 5-point Gauss-Legendre, exact to degree 9.
inline constexpr std::array<LinePoint, 5> kGauss5 = {{
    {0.5 - 0.5 * 0.9061798459386640, 0.5 * 0.2369268850561891},
    {0.5 - 0.5 * 0.5384693101056831, 0.5 * 0.4786286704993665},
    {0.5, 0.5 * 0.5688888888888889},
    {0.5 + 0.5 * 0.5384693101056831, 0.5 * 0.4786286704993665},
    {0.5 + 0.5 * 0.9061798459386640, 0.5 * 0.2369268850561891},
}};

struct TrianglePoint {
  std::array<double, 3> l;  // barycentric
  double w;                 // weights sum to 1
};

// 6-point symmetric rule exact to degree 4.
inline constexpr std::array<TrianglePoint, 6> kTriangle6 = {{
    {{0.108103018168070, 0.445948490915965, 0.445948490915965}, 0.223381589678011},
    {{0.445948490915965, 0.108103018168070, 0.445948490915965}, 0.223381589678011},
    {{0.445948490915965, 0.445948490915965, 0.108103018168070}, 0.223381589678011},
    {{0.816847572980459, 0.091576213509771, 0.091576213509771}, 0.109951743655322},
    {{0.091576213509771, 0.816847572980459, 0.091576213509771}, 0.109951743655322},
    {{0.091576213509771, 0.091576213509771, 0.816847572980459}, 0.109951743655322},
}};

// Quadratic Lagrange shape functions on [0, 1] with nodes 0, 1/2, 1 (start, mid, end).
inline std::array<double, 3> quadratic_values(double s) {
  return {(1.0 - s) * (1.0 - 2.0 * s), 4.0 * s * (1.0 - s), s * (2.0 * s - 1.0)};
}

}  // namespace wavecontrol::detail
