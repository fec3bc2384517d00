#include "isocx/complex.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace isocx {

int component_count(int dim, int role) {
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("component_count: dimension must be 2 or 3");
  }
  if (role < 0 || role > dim) {
    throw std::invalid_argument("component_count: role out of range");
  }
  return (role == 0 || role == dim) ? 1 : dim;
}

namespace {

bool truncation_pattern(int dim, int role, Conformity conformity, int c, int a) {
  if (role == 0) {
    return false;
  }
  if (role == dim) {
    return true;
  }
  if (dim == 2) {
    return conformity == Conformity::divergence ? a != c : a == c;
  }
  return role == 1 ? a == c : a != c;
}

} // namespace

ComplexSpace::ComplexSpace(int dim, int role, std::vector<KnotVector> base, Conformity conformity)
    : dim_(dim), role_(role), conformity_(conformity), base_(std::move(base)) {
  const int nc = component_count(dim, role);
  if (static_cast<int>(base_.size()) != dim) {
    throw std::invalid_argument("ComplexSpace: need one knot vector per axis");
  }
  if (conformity_ == Conformity::curl && !(dim == 2 && role == 1)) {
    throw std::invalid_argument("ComplexSpace: the curl layout exists only for 2D role 1");
  }
  factors_.resize(static_cast<std::size_t>(nc));
  for (int c = 0; c < nc; ++c) {
    for (int a = 0; a < dim; ++a) {
      const auto& kv = base_[static_cast<std::size_t>(a)];
      if (truncation_pattern(dim, role, conformity_, c, a)) {
        factors_[static_cast<std::size_t>(c)].emplace_back(truncate(kv));
      } else {
        factors_[static_cast<std::size_t>(c)].emplace_back(kv);
      }
    }
  }
}

bool ComplexSpace::truncated(int component, int axis) const {
  return truncation_pattern(dim_, role_, conformity_, component, axis);
}

const std::vector<SplineSpace1D>& ComplexSpace::factors(int component) const {
  if (component < 0 || component >= num_components()) {
    throw std::out_of_range("ComplexSpace: component out of range");
  }
  return factors_[static_cast<std::size_t>(component)];
}

std::vector<std::size_t> ComplexSpace::shape(int component) const {
  std::vector<std::size_t> s;
  for (const auto& f : factors(component)) {
    s.push_back(f.dimension());
  }
  return s;
}

std::size_t ComplexSpace::component_dimension(int component) const {
  const auto s = shape(component);
  return std::accumulate(s.begin(), s.end(), std::size_t{1}, std::multiplies<>());
}

std::size_t ComplexSpace::dimension() const {
  std::size_t n = 0;
  for (int c = 0; c < num_components(); ++c) {
    n += component_dimension(c);
  }
  return n;
}

bool ComplexSpace::operator==(const ComplexSpace& other) const {
  return dim_ == other.dim_ && role_ == other.role_ && conformity_ == other.conformity_ && base_ == other.base_;
}

CoefficientField::CoefficientField(ComplexSpace s, std::vector<Eigen::VectorXd> c)
    : space(std::move(s)), components(std::move(c)) {
  if (static_cast<int>(components.size()) != space.num_components()) {
    throw std::invalid_argument("CoefficientField: wrong number of components");
  }
  for (int i = 0; i < space.num_components(); ++i) {
    if (static_cast<std::size_t>(components[static_cast<std::size_t>(i)].size()) != space.component_dimension(i)) {
      throw std::invalid_argument("CoefficientField: component " + std::to_string(i) + " has the wrong length");
    }
  }
}

CoefficientField CoefficientField::zero(const ComplexSpace& s) {
  std::vector<Eigen::VectorXd> c;
  for (int i = 0; i < s.num_components(); ++i) {
    c.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.component_dimension(i))));
  }
  return CoefficientField(s, std::move(c));
}

double CoefficientField::component(int c, const Vec3& x) const {
  const auto& factors = space.factors(c);
  const auto& coef = components.at(static_cast<std::size_t>(c));
  const auto shape = space.shape(c);
  const int d = space.dim();
  BasisValues b[3];
  for (int a = 0; a < d; ++a) {
    b[a] = factors[static_cast<std::size_t>(a)].eval_basis(x[a]);
  }
  double v = 0.0;
  if (d == 2) {
    for (std::size_t i = 0; i < b[0].values.size(); ++i) {
      const std::size_t row = (b[0].first + i) * shape[1];
      for (std::size_t j = 0; j < b[1].values.size(); ++j) {
        v += coef[static_cast<Eigen::Index>(row + b[1].first + j)] * b[0].values[i] * b[1].values[j];
      }
    }
    return v;
  }
  for (std::size_t i = 0; i < b[0].values.size(); ++i) {
    for (std::size_t j = 0; j < b[1].values.size(); ++j) {
      const std::size_t row = ((b[0].first + i) * shape[1] + b[1].first + j) * shape[2];
      const double w = b[0].values[i] * b[1].values[j];
      for (std::size_t l = 0; l < b[2].values.size(); ++l) {
        v += coef[static_cast<Eigen::Index>(row + b[2].first + l)] * w * b[2].values[l];
      }
    }
  }
  return v;
}

Vec3 CoefficientField::operator()(const Vec3& x) const {
  Vec3 v = Vec3::Zero();
  for (int c = 0; c < space.num_components(); ++c) {
    v[c] = component(c, x);
  }
  return v;
}

std::size_t CoefficientField::size() const { return space.dimension(); }

Eigen::VectorXd CoefficientField::flat() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(size()));
  Eigen::Index pos = 0;
  for (const auto& c : components) {
    out.segment(pos, c.size()) = c;
    pos += c.size();
  }
  return out;
}

CoefficientField CoefficientField::from_flat(const ComplexSpace& s, const Eigen::VectorXd& values) {
  if (static_cast<std::size_t>(values.size()) != s.dimension()) {
    throw std::invalid_argument("CoefficientField::from_flat: wrong length");
  }
  std::vector<Eigen::VectorXd> c;
  Eigen::Index pos = 0;
  for (int i = 0; i < s.num_components(); ++i) {
    const auto n = static_cast<Eigen::Index>(s.component_dimension(i));
    c.push_back(values.segment(pos, n));
    pos += n;
  }
  return CoefficientField(s, std::move(c));
}

const ComplexSpace& SplineComplex::role(int k) const {
  if (k < 0 || k >= static_cast<int>(spaces.size())) {
    throw std::out_of_range("SplineComplex: role out of range");
  }
  return spaces[static_cast<std::size_t>(k)];
}

SplineComplex build_complex(int dim, std::vector<KnotVector> knots) {
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("build_complex: dimension must be 2 or 3");
  }
  if (static_cast<int>(knots.size()) != dim) {
    throw std::invalid_argument("build_complex: need one knot vector per axis");
  }
  for (const auto& kv : knots) {
    if (kv.degree() < 1) {
      throw std::invalid_argument("build_complex: all degrees must be at least 1");
    }
  }
  SplineComplex out;
  out.dim = dim;
  out.knots = knots;
  for (int k = 0; k <= dim; ++k) {
    out.spaces.emplace_back(dim, k, knots);
  }
  return out;
}

SplineComplex build_complex(int dim, const std::vector<int>& degrees, const std::vector<std::vector<double>>& knots) {
  if (degrees.size() != knots.size()) {
    throw std::invalid_argument("build_complex: degree and knot lists differ in length");
  }
  std::vector<KnotVector> kv;
  for (std::size_t a = 0; a < degrees.size(); ++a) {
    kv.emplace_back(degrees[a], knots[a]);
  }
  return build_complex(dim, std::move(kv));
}

Eigen::VectorXd axis_derivative(const Eigen::VectorXd& coefficients, std::span<const std::size_t> shape, int axis,
                                std::span<const double> scales) {
  const auto a = static_cast<std::size_t>(axis);
  if (a >= shape.size()) {
    throw std::out_of_range("axis_derivative: axis out of range");
  }
  const std::size_t n = shape[a];
  if (scales.size() + 1 != n) {
    throw std::invalid_argument("axis_derivative: scale count does not match the axis length");
  }
  std::size_t outer = 1;
  for (std::size_t i = 0; i < a; ++i) {
    outer *= shape[i];
  }
  std::size_t inner = 1;
  for (std::size_t i = a + 1; i < shape.size(); ++i) {
    inner *= shape[i];
  }
  if (static_cast<std::size_t>(coefficients.size()) != outer * n * inner) {
    throw std::invalid_argument("axis_derivative: coefficient count does not match the shape");
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(outer * (n - 1) * inner));
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const std::size_t src = (o * n + i) * inner;
      const std::size_t dst = (o * (n - 1) + i) * inner;
      for (std::size_t r = 0; r < inner; ++r) {
        const auto s0 = static_cast<Eigen::Index>(src + r);
        out[static_cast<Eigen::Index>(dst + r)] = scales[i] * (coefficients[s0 + static_cast<Eigen::Index>(inner)] - coefficients[s0]);
      }
    }
  }
  return out;
}

namespace {

void require(const CoefficientField& f, int dim, int role, const char* op) {
  if (f.space.dim() != dim || f.space.role() != role) {
    throw std::invalid_argument(std::string(op) + ": field has dimension " + std::to_string(f.space.dim()) +
                                " and role " + std::to_string(f.space.role()));
  }
}

Eigen::VectorXd partial(const CoefficientField& f, int component, int axis) {
  const auto shape = f.space.shape(component);
  const auto scales = f.space.factors(component)[static_cast<std::size_t>(axis)].derivative_scales();
  return axis_derivative(f.components[static_cast<std::size_t>(component)], shape, axis, scales);
}

} // namespace

CoefficientField curl_2d(const CoefficientField& f) {
  require(f, 2, 0, "curl_2d");
  if (f.space.conformity() != Conformity::divergence) {
    throw std::invalid_argument("curl_2d: unexpected layout");
  }
  return CoefficientField(ComplexSpace(2, 1, f.space.base_knots()), {partial(f, 0, 1), -partial(f, 0, 0)});
}

CoefficientField div_2d(const CoefficientField& f) {
  require(f, 2, 1, "div_2d");
  if (f.space.conformity() != Conformity::divergence) {
    throw std::invalid_argument("div_2d: field is in the curl layout");
  }
  return CoefficientField(ComplexSpace(2, 2, f.space.base_knots()), {partial(f, 0, 0) + partial(f, 1, 1)});
}

CoefficientField grad_2d(const CoefficientField& f) {
  require(f, 2, 0, "grad_2d");
  return CoefficientField(ComplexSpace(2, 1, f.space.base_knots(), Conformity::curl),
                          {partial(f, 0, 0), partial(f, 0, 1)});
}

CoefficientField rotate_2d(const CoefficientField& f) {
  require(f, 2, 1, "rotate_2d");
  if (f.space.conformity() != Conformity::divergence) {
    throw std::invalid_argument("rotate_2d: field is already in the curl layout");
  }
  return CoefficientField(ComplexSpace(2, 1, f.space.base_knots(), Conformity::curl),
                          {-f.components[1], f.components[0]});
}

CoefficientField rotate_2d_inverse(const CoefficientField& f) {
  require(f, 2, 1, "rotate_2d_inverse");
  if (f.space.conformity() != Conformity::curl) {
    throw std::invalid_argument("rotate_2d_inverse: field is not in the curl layout");
  }
  return CoefficientField(ComplexSpace(2, 1, f.space.base_knots()), {f.components[1], -f.components[0]});
}

CoefficientField grad_3d(const CoefficientField& f) {
  require(f, 3, 0, "grad_3d");
  return CoefficientField(ComplexSpace(3, 1, f.space.base_knots()),
                          {partial(f, 0, 0), partial(f, 0, 1), partial(f, 0, 2)});
}

CoefficientField curl_3d(const CoefficientField& f) {
  require(f, 3, 1, "curl_3d");
  return CoefficientField(ComplexSpace(3, 2, f.space.base_knots()),
                          {partial(f, 2, 1) - partial(f, 1, 2), partial(f, 0, 2) - partial(f, 2, 0),
                           partial(f, 1, 0) - partial(f, 0, 1)});
}

CoefficientField div_3d(const CoefficientField& f) {
  require(f, 3, 2, "div_3d");
  return CoefficientField(ComplexSpace(3, 3, f.space.base_knots()),
                          {partial(f, 0, 0) + partial(f, 1, 1) + partial(f, 2, 2)});
}

CoefficientField exterior_derivative(const CoefficientField& f) {
  const int d = f.space.dim();
  const int k = f.space.role();
  if (d == 2) {
    if (k == 0) {
      return curl_2d(f);
    }
    if (k == 1) {
      return div_2d(f);
    }
  } else {
    if (k == 0) {
      return grad_3d(f);
    }
    if (k == 1) {
      return curl_3d(f);
    }
    if (k == 2) {
      return div_3d(f);
    }
  }
  throw std::invalid_argument("exterior_derivative: top role has no derivative");
}

Eigen::VectorXd apply_tensor(std::span<const SampledOperator* const> ops, const std::function<double(const Vec3&)>& f) {
  const std::size_t d = ops.size();
  if (d != 2 && d != 3) {
    throw std::invalid_argument("apply_tensor: need 2 or 3 axes");
  }
  const auto& m0 = ops[0]->matrix;
  const auto& m1 = ops[1]->matrix;
  const auto& x0 = ops[0]->points;
  const auto& x1 = ops[1]->points;
  if (d == 2) {
    Eigen::MatrixXd samples(static_cast<Eigen::Index>(x0.size()), static_cast<Eigen::Index>(x1.size()));
    for (std::size_t i = 0; i < x0.size(); ++i) {
      for (std::size_t j = 0; j < x1.size(); ++j) {
        samples(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = f(Vec3(x0[i], x1[j], 0.0));
      }
    }
    // row-major flattening puts the last axis fastest
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> c = m0 * samples * m1.transpose();
    return Eigen::Map<const Eigen::VectorXd>(c.data(), c.size());
  }
  const auto& m2 = ops[2]->matrix;
  const auto& x2 = ops[2]->points;
  // stream over slices of the first axis
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m0.rows(), m1.rows() * m2.rows());
  Eigen::MatrixXd slice(static_cast<Eigen::Index>(x1.size()), static_cast<Eigen::Index>(x2.size()));
  for (std::size_t i = 0; i < x0.size(); ++i) {
    const auto col = m0.col(static_cast<Eigen::Index>(i));
    if (col.isZero(0.0)) {
      continue;
    }
    for (std::size_t j = 0; j < x1.size(); ++j) {
      for (std::size_t l = 0; l < x2.size(); ++l) {
        slice(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = f(Vec3(x0[i], x1[j], x2[l]));
      }
    }
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> t = m1 * slice * m2.transpose();
    acc.noalias() += col * Eigen::Map<const Eigen::RowVectorXd>(t.data(), t.size());
  }
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> c = acc;
  return Eigen::Map<const Eigen::VectorXd>(c.data(), c.size());
}

ComplexInterpolator::ComplexInterpolator(SplineComplex complex, DualFunctionalOptions options)
    : complex_(std::move(complex)) {
  for (const auto& kv : complex_.knots) {
    duals_.emplace_back(SplineSpace1D(kv), options);
  }
}

std::vector<const SampledOperator*> ComplexInterpolator::operators(int role, int component, ProjectorKind kind) const {
  const auto& space = complex_.role(role);
  std::vector<const SampledOperator*> ops;
  for (int a = 0; a < complex_.dim; ++a) {
    const auto& duals = duals_[static_cast<std::size_t>(a)];
    ops.push_back(space.truncated(component, a) ? &duals.derivative_operator(kind) : &duals.value_operator(kind));
  }
  return ops;
}

CoefficientField ComplexInterpolator::interpolate(int role, const RefFunction& f, ProjectorKind kind) const {
  const auto& space = complex_.role(role);
  std::vector<Eigen::VectorXd> comps;
  for (int c = 0; c < space.num_components(); ++c) {
    const auto ops = operators(role, c, kind);
    comps.push_back(apply_tensor(ops, [&](const Vec3& x) { return f(x)[c]; }));
  }
  return CoefficientField(space, std::move(comps));
}

CoefficientField interpolate(const SplineComplex& complex, int role, const RefFunction& f, ProjectorKind kind) {
  return ComplexInterpolator(complex).interpolate(role, f, kind);
}

} // namespace isocx
