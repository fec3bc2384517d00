#include "isocx/knots.hpp"

#include "isocx/log.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace isocx {

KnotVector::KnotVector(int degree, std::vector<double> knots)
    : degree_(degree), knots_(std::move(knots)) {
  if (degree_ < 0) {
    throw std::invalid_argument("KnotVector: negative degree");
  }
  const std::size_t p1 = static_cast<std::size_t>(degree_) + 1;
  if (knots_.size() < 2 * p1) {
    throw std::invalid_argument("KnotVector: need at least 2(p+1) knots");
  }
  for (std::size_t i = 0; i < p1; ++i) {
    if (knots_[i] != 0.0 || knots_[knots_.size() - 1 - i] != 1.0) {
      throw std::invalid_argument("KnotVector: knot vector is not p-open on [0,1]");
    }
  }
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i] >= knots_[i - 1])) {
      throw std::invalid_argument("KnotVector: knots must be non-decreasing");
    }
  }
  if (knots_[p1] == 0.0 || knots_[knots_.size() - 1 - p1] == 1.0) {
    throw std::invalid_argument("KnotVector: end knots repeated more than p+1 times");
  }
  for (int m : interior_multiplicities()) {
    if (m > degree_ + 1) {
      throw std::invalid_argument("KnotVector: interior multiplicity exceeds p+1");
    }
  }
  build_elements();
}

KnotVector KnotVector::uniform(int degree, std::size_t n_elements) {
  if (n_elements == 0) {
    throw std::invalid_argument("KnotVector::uniform: need at least one element");
  }
  std::vector<double> knots(static_cast<std::size_t>(degree) + 1, 0.0);
  for (std::size_t e = 1; e < n_elements; ++e) {
    knots.push_back(static_cast<double>(e) / static_cast<double>(n_elements));
  }
  knots.insert(knots.end(), static_cast<std::size_t>(degree) + 1, 1.0);
  return KnotVector(degree, std::move(knots));
}

void KnotVector::build_elements() {
  elements_.clear();
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    if (knots_[i] < knots_[i + 1]) {
      elements_.push_back(Element{elements_.size(), i, knots_[i], knots_[i + 1]});
    }
  }
}

std::vector<double> KnotVector::breakpoints() const {
  std::vector<double> out;
  out.reserve(elements_.size() + 1);
  for (const auto& e : elements_) {
    out.push_back(e.left);
  }
  out.push_back(1.0);
  return out;
}

std::vector<int> KnotVector::interior_multiplicities() const {
  std::vector<int> out;
  const std::size_t p1 = static_cast<std::size_t>(degree_) + 1;
  std::size_t i = p1;
  const std::size_t end = knots_.size() - p1;
  while (i < end) {
    std::size_t j = i;
    while (j < end && knots_[j] == knots_[i]) {
      ++j;
    }
    out.push_back(static_cast<int>(j - i));
    i = j;
  }
  return out;
}

bool KnotVector::is_regular() const {
  const auto mult = interior_multiplicities();
  return std::all_of(mult.begin(), mult.end(), [this](int m) { return m <= degree_; });
}

double KnotVector::mesh_size() const {
  double h = 0.0;
  for (const auto& e : elements_) {
    h = std::max(h, e.length());
  }
  return h;
}

double KnotVector::max_support_extension() const {
  double h = 0.0;
  for (const auto& e : elements_) {
    h = std::max(h, support_extension(e.index).length());
  }
  return h;
}

Interval KnotVector::support_extension(std::size_t element_index) const {
  if (element_index >= elements_.size()) {
    throw std::out_of_range("support_extension: element index out of range");
  }
  const std::size_t s = elements_[element_index].span;
  const std::size_t p = static_cast<std::size_t>(degree_);
  // basis functions s-p .. s are the ones active on [xi_s, xi_{s+1}]
  return Interval{knots_[s - p], knots_[s + p + 1]};
}

Interval KnotVector::support(std::size_t basis_index) const {
  if (basis_index >= dimension()) {
    throw std::out_of_range("support: basis index out of range");
  }
  return Interval{knots_[basis_index], knots_[basis_index + static_cast<std::size_t>(degree_) + 1]};
}

std::size_t KnotVector::find_span(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream os;
    os << "find_span: x = " << x << " outside [0,1]";
    throw std::out_of_range(os.str());
  }
  const std::size_t k = dimension();
  if (x >= 1.0) {
    return k - 1;
  }
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  std::size_t s = static_cast<std::size_t>(it - knots_.begin()) - 1;
  return std::clamp(s, static_cast<std::size_t>(degree_), k - 1);
}

std::size_t KnotVector::find_element(double x) const {
  const std::size_t s = find_span(x);
  const auto it = std::lower_bound(elements_.begin(), elements_.end(), s,
                                   [](const Element& e, std::size_t span) { return e.span < span; });
  return static_cast<std::size_t>(it - elements_.begin());
}

bool KnotVector::matches(const KnotVector& other, double tol) const {
  if (degree_ != other.degree_ || knots_.size() != other.knots_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (std::abs(knots_[i] - other.knots_[i]) > tol) {
      return false;
    }
  }
  return true;
}

KnotVector KnotVector::reversed() const {
  std::vector<double> out(knots_.size());
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    out[i] = 1.0 - knots_[knots_.size() - 1 - i];
  }
  return KnotVector(degree_, std::move(out));
}

bool is_locally_quasi_uniform(const KnotVector& knots, double theta) {
  if (!(theta >= 1.0)) {
    throw std::invalid_argument("is_locally_quasi_uniform: theta must be >= 1");
  }
  const auto& el = knots.elements();
  for (std::size_t i = 1; i < el.size(); ++i) {
    const double ratio = el[i].length() / el[i - 1].length();
    if (ratio > theta || ratio < 1.0 / theta) {
      return false;
    }
  }
  return true;
}

bool warn_if_not_quasi_uniform(const KnotVector& knots, double theta) {
  const bool ok = is_locally_quasi_uniform(knots, theta);
  if (!ok) {
    std::ostringstream os;
    os << "knot vector of degree " << knots.degree() << " with " << knots.num_elements()
       << " elements is not locally quasi-uniform for theta = " << theta;
    log::warn(os.str());
  }
  return ok;
}

KnotVector truncate(const KnotVector& knots) {
  if (knots.degree() == 0) {
    throw std::invalid_argument("truncate: degree 0 knot vector cannot be truncated");
  }
  const auto& k = knots.knots();
  return KnotVector(knots.degree() - 1, std::vector<double>(k.begin() + 1, k.end() - 1));
}

KnotVector refine_dyadic(const KnotVector& knots) {
  std::vector<double> out;
  const auto& k = knots.knots();
  out.reserve(k.size() + knots.num_elements());
  for (std::size_t i = 0; i < k.size(); ++i) {
    out.push_back(k[i]);
    if (i + 1 < k.size() && k[i] < k[i + 1]) {
      out.push_back(0.5 * (k[i] + k[i + 1]));
    }
  }
  return KnotVector(knots.degree(), std::move(out));
}

} // namespace isocx
