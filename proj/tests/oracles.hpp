#pragma once

// Reference computations used by the tests. None of them goes through the
// library's evaluation paths.

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <vector>

namespace isocx::oracle {

using Vec3 = Eigen::Vector3d;

/// Composite Simpson rule with n (even) panels on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) {
    s += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  }
  return s * h / 3.0;
}

/// Tensor Simpson on [0,1]^2.
inline double simpson2(const std::function<double(double, double)>& f, int n = 200) {
  return simpson([&](double x) { return simpson([&](double y) { return f(x, y); }, 0.0, 1.0, n); }, 0.0, 1.0, n);
}

/// Central difference of a vector function along one parametric axis.
template <class F>
Vec3 central_difference(const F& f, const Vec3& u, int axis, double eps = 1e-5) {
  Vec3 up = u;
  Vec3 um = u;
  up[axis] += eps;
  um[axis] -= eps;
  return (f(up) - f(um)) / (2.0 * eps);
}

/// Plain Cox-de Boor on all basis functions, 0/0 = 0, half-open spans with
/// the last non-empty span closed at the right.
template <class T>
std::vector<T> cox_de_boor(int p, const std::vector<T>& knots, const T& x) {
  const std::size_t m = knots.size();
  std::vector<T> b(m - 1, T(0));
  std::size_t last = 0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (knots[i] < knots[i + 1]) {
      last = i;
    }
  }
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const bool inside = knots[i] <= x && (x < knots[i + 1] || (i == last && x == knots[i + 1]));
    b[i] = inside ? T(1) : T(0);
  }
  for (int q = 1; q <= p; ++q) {
    std::vector<T> next(m - 1 - static_cast<std::size_t>(q), T(0));
    for (std::size_t i = 0; i < next.size(); ++i) {
      T v(0);
      const T d1 = knots[i + static_cast<std::size_t>(q)] - knots[i];
      if (d1 != T(0)) {
        v += (x - knots[i]) / d1 * b[i];
      }
      const T d2 = knots[i + static_cast<std::size_t>(q) + 1] - knots[i + 1];
      if (d2 != T(0)) {
        v += (knots[i + static_cast<std::size_t>(q) + 1] - x) / d2 * b[i + 1];
      }
      next[i] = v;
    }
    b = std::move(next);
  }
  return b;
}

} // namespace isocx::oracle
