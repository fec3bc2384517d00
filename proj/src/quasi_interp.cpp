#include "isocx/quasi_interp.hpp"

#include <Eigen/Cholesky>

#include <stdexcept>

namespace isocx {

Eigen::VectorXd SampledOperator::apply(const std::function<double(double)>& f) const {
  Eigen::VectorXd samples(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    samples[static_cast<Eigen::Index>(i)] = f(points[i]);
  }
  return matrix * samples;
}

namespace {

// Lagrange basis polynomial j through `nodes`, evaluated at t.
double lagrange(const std::vector<double>& nodes, std::size_t j, double t) {
  double v = 1.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i != j) {
      v *= (t - nodes[i]) / (nodes[j] - nodes[i]);
    }
  }
  return v;
}

SplineSpace1D derivative_space_or_self(const SplineSpace1D& s) {
  return s.degree() > 0 ? s.derivative_space() : s;
}

} // namespace

DualFunctionalSet::DualFunctionalSet(SplineSpace1D space, DualFunctionalOptions options)
    : space_(std::move(space)), derivative_space_(derivative_space_or_self(space_)) {
  const int p = space_.degree();
  nq_ = options.quadrature_points > 0 ? options.quadrature_points : p + 2;
  nint_ = options.integration_points;
  if (nq_ > 32 || nint_ < 1 || nint_ > 32) {
    throw std::invalid_argument("DualFunctionalSet: quadrature sizes must lie in [1, 32]");
  }
  const auto& kv = space_.knots();
  const auto& elements = kv.elements();
  const auto nel = elements.size();
  if (options.min_total_integration_points > 0) {
    const auto wanted = (static_cast<std::size_t>(options.min_total_integration_points) + nel - 1) / nel;
    nint_ = std::max(nint_, static_cast<int>(std::min<std::size_t>(wanted, 32)));
  }
  const auto k = static_cast<Eigen::Index>(space_.dimension());

  // value points: nq Gauss nodes per element, then the endpoints 0 and 1
  const QuadratureRule rule = gauss_rule(nq_);
  std::vector<double> points;
  std::vector<double> weights;
  points.reserve(nel * static_cast<std::size_t>(nq_) + 2);
  for (const auto& e : elements) {
    const auto x = rule.nodes_on(e.left, e.right);
    const auto w = rule.weights_on(e.left, e.right);
    points.insert(points.end(), x.begin(), x.end());
    weights.insert(weights.end(), w.begin(), w.end());
  }
  const auto n_inner = static_cast<Eigen::Index>(points.size());
  points.push_back(0.0);
  points.push_back(1.0);
  const auto n_val = static_cast<Eigen::Index>(points.size());

  // basis values at every inner node: bvals(j, node)
  Eigen::MatrixXd bvals = Eigen::MatrixXd::Zero(k, n_inner);
  for (Eigen::Index q = 0; q < n_inner; ++q) {
    const auto b = space_.eval_basis(points[static_cast<std::size_t>(q)]);
    for (std::size_t j = 0; j < b.values.size(); ++j) {
      bvals(static_cast<Eigen::Index>(b.first + j), q) = b.values[j];
    }
  }

  lambda_rows_ = Eigen::MatrixXd::Zero(k, n_val);
  for (Eigen::Index i = 0; i < k; ++i) {
    // elements inside supp(b_i) have spans i .. i+p
    std::vector<std::size_t> local_elements;
    for (const auto& e : elements) {
      if (e.span >= static_cast<std::size_t>(i) && e.span <= static_cast<std::size_t>(i + p)) {
        local_elements.push_back(e.index);
      }
    }
    const std::size_t first_span = elements[local_elements.front()].span;
    const std::size_t last_span = elements[local_elements.back()].span;
    const auto j0 = static_cast<Eigen::Index>(first_span - static_cast<std::size_t>(p));
    const auto j1 = static_cast<Eigen::Index>(last_span);
    const Eigen::Index m = j1 - j0 + 1;

    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t e : local_elements) {
      for (int q = 0; q < nq_; ++q) {
        const auto node = static_cast<Eigen::Index>(e * static_cast<std::size_t>(nq_) + static_cast<std::size_t>(q));
        const auto col = bvals.col(node).segment(j0, m);
        gram.noalias() += weights[static_cast<std::size_t>(node)] * col * col.transpose();
      }
    }
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(m);
    unit[i - j0] = 1.0;
    const Eigen::VectorXd y = gram.ldlt().solve(unit);
    for (std::size_t e : local_elements) {
      for (int q = 0; q < nq_; ++q) {
        const auto node = static_cast<Eigen::Index>(e * static_cast<std::size_t>(nq_) + static_cast<std::size_t>(q));
        lambda_rows_(i, node) = weights[static_cast<std::size_t>(node)] * y.dot(bvals.col(node).segment(j0, m));
      }
    }
  }

  plain_.points = points;
  plain_.matrix = lambda_rows_;
  tilde_.points = points;
  tilde_.matrix = lambda_rows_;
  if (p > 0) {
    tilde_.matrix.row(0).setZero();
    tilde_.matrix(0, n_val - 2) = 1.0;
    tilde_.matrix.row(k - 1).setZero();
    tilde_.matrix(k - 1, n_val - 1) = 1.0;
  }

  if (p == 0) {
    return;
  }

  // running integral G(x) = int_0^x f at the value points, from samples of f
  // at nint Gauss nodes per element
  const QuadratureRule irule = gauss_rule(nint_);
  std::vector<double> ipoints;
  ipoints.reserve(nel * static_cast<std::size_t>(nint_));
  std::vector<std::vector<double>> element_nodes(nel);
  std::vector<std::vector<double>> element_weights(nel);
  for (const auto& e : elements) {
    element_nodes[e.index] = irule.nodes_on(e.left, e.right);
    element_weights[e.index] = irule.weights_on(e.left, e.right);
    ipoints.insert(ipoints.end(), element_nodes[e.index].begin(), element_nodes[e.index].end());
  }
  const auto n_int = static_cast<Eigen::Index>(ipoints.size());
  integral_ = Eigen::MatrixXd::Zero(n_val, n_int);
  for (Eigen::Index r = 0; r < n_val; ++r) {
    const double x = points[static_cast<std::size_t>(r)];
    if (r == n_val - 2) {
      continue; // G(0) = 0
    }
    const std::size_t ex = (r == n_val - 1) ? nel : kv.find_element(x);
    for (std::size_t e = 0; e < std::min(ex, nel); ++e) {
      for (int j = 0; j < nint_; ++j) {
        integral_(r, static_cast<Eigen::Index>(e * static_cast<std::size_t>(nint_) + static_cast<std::size_t>(j))) =
            element_weights[e][static_cast<std::size_t>(j)];
      }
    }
    if (ex < nel) {
      // partial element: integrate the interpolant through its nodes over [left, x]
      const double a = elements[ex].left;
      const auto sub_x = irule.nodes_on(a, x);
      const auto sub_w = irule.weights_on(a, x);
      const auto& nodes = element_nodes[ex];
      for (int j = 0; j < nint_; ++j) {
        double wj = 0.0;
        for (std::size_t q = 0; q < sub_x.size(); ++q) {
          wj += sub_w[q] * lagrange(nodes, static_cast<std::size_t>(j), sub_x[q]);
        }
        integral_(r, static_cast<Eigen::Index>(ex * static_cast<std::size_t>(nint_) + static_cast<std::size_t>(j))) = wj;
      }
    }
  }

  const Eigen::MatrixXd d = space_.derivative_matrix();
  plain_partial_.points = ipoints;
  plain_partial_.matrix = d * (plain_.matrix * integral_);
  tilde_partial_.points = ipoints;
  tilde_partial_.matrix = d * (tilde_.matrix * integral_);
  has_partial_ = true;
}

double DualFunctionalSet::lambda(std::size_t i, const std::function<double(double)>& f) const {
  if (i >= space_.dimension()) {
    throw std::out_of_range("lambda: index out of range");
  }
  const auto row = lambda_rows_.row(static_cast<Eigen::Index>(i));
  double v = 0.0;
  for (Eigen::Index q = 0; q < row.size(); ++q) {
    if (row[q] != 0.0) {
      v += row[q] * f(plain_.points[static_cast<std::size_t>(q)]);
    }
  }
  return v;
}

const SampledOperator& DualFunctionalSet::value_operator(ProjectorKind kind) const {
  if (kind == ProjectorKind::tilde && space_.degree() == 0) {
    throw std::invalid_argument("value_operator: the endpoint-interpolating projector needs p >= 1");
  }
  return kind == ProjectorKind::plain ? plain_ : tilde_;
}

const SampledOperator& DualFunctionalSet::derivative_operator(ProjectorKind kind) const {
  if (!has_partial_) {
    throw std::invalid_argument("derivative_operator: degree 0 space has no derivative projector");
  }
  return kind == ProjectorKind::plain ? plain_partial_ : tilde_partial_;
}

Spline1D DualFunctionalSet::pi(const std::function<double(double)>& f) const {
  return Spline1D(space_, value_operator(ProjectorKind::plain).apply(f));
}

Spline1D DualFunctionalSet::pi_tilde(const std::function<double(double)>& f) const {
  return Spline1D(space_, value_operator(ProjectorKind::tilde).apply(f));
}

Spline1D DualFunctionalSet::pi_partial(const std::function<double(double)>& f) const {
  return Spline1D(derivative_space_, derivative_operator(ProjectorKind::plain).apply(f));
}

Spline1D DualFunctionalSet::pi_tilde_partial(const std::function<double(double)>& f) const {
  return Spline1D(derivative_space_, derivative_operator(ProjectorKind::tilde).apply(f));
}

} // namespace isocx
