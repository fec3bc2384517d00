#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace isocx {

/// Absolute tolerance for comparing knots of different knot vectors, e.g.
/// across a patch interface.
inline constexpr double kKnotTolerance = 1e-14;

/// A non-empty knot span [left, right] of a knot vector.
struct Element {
  std::size_t index = 0; ///< ordinal among the non-empty spans
  std::size_t span = 0;  ///< knot index i with knots[i] = left < knots[i+1] = right
  double left = 0.0;
  double right = 0.0;

  double length() const { return right - left; }
  bool operator==(const Element&) const = default;
};

struct Interval {
  double left = 0.0;
  double right = 0.0;

  double length() const { return right - left; }
  bool contains(const Interval& other) const {
    return left <= other.left && other.right <= right;
  }
  bool operator==(const Interval&) const = default;
};

/// p-open knot vector on [0,1].
///
/// The first and last p+1 knots are 0 and 1; interior knots are
/// non-decreasing in (0,1). Interior multiplicities up to p+1 are accepted so
/// that truncated vectors (the derivative spaces of the complex) stay
/// representable; multiplicity p+1 makes the spline discontinuous there.
/// Use `is_regular()` to test the stricter "multiplicity <= p" condition.
///
/// Immutable after construction.
class KnotVector {
public:
  KnotVector(int degree, std::vector<double> knots);

  /// Open knot vector of `degree` with `n_elements` equal elements.
  static KnotVector uniform(int degree, std::size_t n_elements);

  int degree() const { return degree_; }
  const std::vector<double>& knots() const { return knots_; }
  double operator[](std::size_t i) const { return knots_[i]; }
  std::size_t size() const { return knots_.size(); }

  /// Dimension of the spline space, knots - p - 1.
  std::size_t dimension() const { return knots_.size() - static_cast<std::size_t>(degree_) - 1; }

  /// Non-empty elements, left to right; zero-length spans are skipped.
  const std::vector<Element>& elements() const { return elements_; }
  std::size_t num_elements() const { return elements_.size(); }

  /// Distinct knot values (element boundaries), ascending.
  std::vector<double> breakpoints() const;

  /// Multiplicity of each interior breakpoint, aligned with breakpoints()[1..n-1).
  std::vector<int> interior_multiplicities() const;

  /// True when every interior knot has multiplicity <= p.
  bool is_regular() const;

  /// Maximal element length h.
  double mesh_size() const;
  /// Maximal support-extension length.
  double max_support_extension() const;

  /// Union of the supports of all basis functions that do not vanish on the
  /// element with the given ordinal. Throws std::out_of_range.
  Interval support_extension(std::size_t element_index) const;
  Interval support_extension(const Element& element) const { return support_extension(element.index); }

  /// Support [xi_i, xi_{i+p+1}] of basis function i.
  Interval support(std::size_t basis_index) const;

  /// Knot span index s with knots[s] <= x < knots[s+1], p <= s < dimension().
  /// x = 1 maps to the last non-empty span. Throws std::out_of_range for
  /// x outside [0,1].
  std::size_t find_span(double x) const;

  /// Ordinal of the element containing x (same conventions as find_span).
  std::size_t find_element(double x) const;

  bool operator==(const KnotVector& other) const = default;

  /// Knot-by-knot comparison with tolerance kKnotTolerance.
  bool matches(const KnotVector& other, double tol = kKnotTolerance) const;
  /// The knot vector of the reversed parametrisation t -> 1 - t.
  KnotVector reversed() const;

private:
  void build_elements();

  int degree_ = 0;
  std::vector<double> knots_;
  std::vector<Element> elements_;
};

/// True iff neighbouring non-empty elements satisfy theta^-1 <= h_a/h_b <= theta.
/// Throws std::invalid_argument for theta < 1.
bool is_locally_quasi_uniform(const KnotVector& knots, double theta);

/// Default quasi-uniformity constant used by `warn_if_not_quasi_uniform`.
inline constexpr double kDefaultQuasiUniformity = 4.0;

/// Emits a warning (not an error) when the knot vector violates local
/// quasi-uniformity for `theta`. Returns the check result.
bool warn_if_not_quasi_uniform(const KnotVector& knots, double theta = kDefaultQuasiUniformity);

/// The knot vector without its first and last knot, of degree p-1.
/// Throws std::invalid_argument for p = 0.
KnotVector truncate(const KnotVector& knots);

/// Inserts the midpoint of every non-empty element once.
KnotVector refine_dyadic(const KnotVector& knots);

} // namespace isocx
