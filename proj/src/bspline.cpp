#include "isocx/bspline.hpp"

#include <algorithm>
#include <stdexcept>

namespace isocx {

namespace {

// Triangular Cox-de Boor scheme: values of b^q_{s-q} .. b^q_s at x on the
// knot array `xi`, where [xi_s, xi_{s+1}) is the non-empty span holding x.
std::vector<double> active_values(const std::vector<double>& xi, std::size_t s, int q, double x) {
  std::vector<double> n(static_cast<std::size_t>(q) + 1, 0.0);
  std::vector<double> left(static_cast<std::size_t>(q) + 1, 0.0);
  std::vector<double> right(static_cast<std::size_t>(q) + 1, 0.0);
  n[0] = 1.0;
  for (int j = 1; j <= q; ++j) {
    left[j] = x - xi[s + 1 - j];
    right[j] = xi[s + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = n[r] / (right[r + 1] + left[j - r]);
      n[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    n[j] = saved;
  }
  return n;
}

} // namespace

BasisValues SplineSpace1D::eval_basis(double x) const {
  const std::size_t s = knots_.find_span(x);
  const int p = degree();
  return BasisValues{s - static_cast<std::size_t>(p), active_values(knots_.knots(), s, p, x)};
}

BasisDerivatives SplineSpace1D::eval_basis_derivatives(double x) const {
  const std::size_t s = knots_.find_span(x);
  const int p = degree();
  const auto& xi = knots_.knots();
  BasisDerivatives out;
  out.first = s - static_cast<std::size_t>(p);
  out.values = active_values(xi, s, p, x);
  out.derivatives.assign(static_cast<std::size_t>(p) + 1, 0.0);
  if (p == 0) {
    return out;
  }
  // lower[j] = b^{p-1}_{s-p+1+j}, j = 0..p-1
  const auto lower = active_values(xi, s, p - 1, x);
  for (int j = 0; j <= p; ++j) {
    const std::size_t i = out.first + static_cast<std::size_t>(j);
    double d = 0.0;
    if (j >= 1) {
      const double den = xi[i + p] - xi[i];
      if (den > 0.0) {
        d += lower[j - 1] / den;
      }
    }
    if (j <= p - 1) {
      const double den = xi[i + p + 1] - xi[i + 1];
      if (den > 0.0) {
        d -= lower[j] / den;
      }
    }
    out.derivatives[j] = p * d;
  }
  return out;
}

double SplineSpace1D::basis_function(std::size_t i, double x) const {
  const auto b = eval_basis(x);
  if (i < b.first || i > b.first + static_cast<std::size_t>(degree())) {
    return 0.0;
  }
  return b.values[i - b.first];
}

std::vector<double> SplineSpace1D::derivative_scales() const {
  const int p = degree();
  if (p == 0) {
    throw std::invalid_argument("derivative: degree 0 splines have no spline derivative");
  }
  const auto& xi = knots_.knots();
  const std::size_t k = dimension();
  std::vector<double> s(k - 1);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const double den = xi[i + p + 1] - xi[i + 1];
    if (!(den > 0.0)) {
      throw std::invalid_argument("derivative: knot multiplicity p+1 at an interior knot");
    }
    s[i] = p / den;
  }
  return s;
}

Eigen::MatrixXd SplineSpace1D::derivative_matrix() const {
  const auto s = derivative_scales();
  const auto k = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(k - 1, k);
  for (Eigen::Index i = 0; i + 1 < k; ++i) {
    d(i, i) = -s[i];
    d(i, i + 1) = s[i];
  }
  return d;
}

Spline1D::Spline1D(SplineSpace1D s, Eigen::VectorXd c) : space(std::move(s)), coefficients(std::move(c)) {
  if (static_cast<std::size_t>(coefficients.size()) != space.dimension()) {
    throw std::invalid_argument("Spline1D: coefficient count does not match the space dimension");
  }
}

double Spline1D::operator()(double x) const {
  const auto b = space.eval_basis(x);
  double v = 0.0;
  for (std::size_t j = 0; j < b.values.size(); ++j) {
    v += coefficients[static_cast<Eigen::Index>(b.first + j)] * b.values[j];
  }
  return v;
}

double eval_spline(const Spline1D& f, double x) { return f(x); }

Spline1D derivative(const Spline1D& f) {
  const auto s = f.space.derivative_scales();
  Eigen::VectorXd c(static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    c[ii] = s[i] * (f.coefficients[ii + 1] - f.coefficients[ii]);
  }
  return Spline1D(f.space.derivative_space(), std::move(c));
}

Spline1D antiderivative(const Spline1D& g, const SplineSpace1D& target) {
  if (target.degree() == 0 || !g.space.knots().matches(truncate(target.knots()), 0.0)) {
    throw std::invalid_argument("antiderivative: argument does not live on the truncated target space");
  }
  const auto s = target.derivative_scales();
  Eigen::VectorXd c(static_cast<Eigen::Index>(target.dimension()));
  c[0] = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    c[ii + 1] = c[ii] + g.coefficients[ii] / s[i];
  }
  return Spline1D(target, std::move(c));
}

double cumulative_integral(const std::function<double(double)>& f, double x, const QuadratureRule& rule,
                           std::span<const double> breakpoints) {
  if (breakpoints.size() < 2) {
    throw std::invalid_argument("cumulative_integral: need at least two breakpoints");
  }
  double sum = 0.0;
  for (std::size_t c = 0; c + 1 < breakpoints.size(); ++c) {
    const double a = breakpoints[c];
    if (x <= a) {
      break;
    }
    const double b = std::min(breakpoints[c + 1], x);
    const auto& t = rule.nodes();
    const auto& w = rule.weights();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      sum += (b - a) * w[q] * f(a + (b - a) * t[q]);
    }
  }
  return sum;
}

double cumulative_integral(const std::function<double(double)>& f, double x, const QuadratureRule& rule) {
  const double unit[] = {0.0, 1.0};
  return cumulative_integral(f, x, rule, unit);
}

} // namespace isocx
