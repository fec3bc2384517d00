#include "isocx/analysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace isocx {

std::string to_string(Norm n) {
  switch (n) {
  case Norm::L2:
    return "L2";
  case Norm::H1semi:
    return "H1semi";
  case Norm::H1:
    return "H1";
  case Norm::Hdiv:
    return "Hdiv";
  case Norm::Hcurl:
    return "Hcurl";
  }
  return "?";
}

Norm norm_from_string(const std::string& name) {
  for (Norm n : {Norm::L2, Norm::H1semi, Norm::H1, Norm::Hdiv, Norm::Hcurl}) {
    if (name == to_string(n)) {
      return n;
    }
  }
  throw std::invalid_argument("unknown norm '" + name + "'");
}

bool norm_applies(Norm n, int dim, int role) {
  switch (n) {
  case Norm::L2:
    return true;
  case Norm::H1semi:
  case Norm::H1:
    return role == 0;
  case Norm::Hdiv:
    return role == dim - 1 && role > 0;
  case Norm::Hcurl:
    return dim == 3 && role == 1;
  }
  return false;
}

double ErrorReport::at(Norm n) const {
  const auto it = values.find(n);
  if (it == values.end()) {
    throw std::out_of_range("ErrorReport: norm " + to_string(n) + " not recorded");
  }
  return it->second;
}

namespace {

// Geometric quantities at one parametric point.
struct Frame {
  int dim = 2;
  Jacobian J;
  double meas = 1.0;
  Eigen::Matrix<double, 3, Eigen::Dynamic, 0, 3, 3> grad_map; // reference gradient -> physical
  Eigen::Matrix3d jinv_t;                                      // volumes only

  Frame(const PatchMap& F, const Vec3& u) : dim(F.dim()), J(F.jacobian(u)) {
    if (dim == 2) {
      const Eigen::Matrix2d G = J.transpose() * J;
      meas = std::sqrt(G.determinant());
      if (!(meas > kMeasureTolerance)) {
        throw GeometryError("degenerate surface measure in quadrature");
      }
      grad_map = J * G.inverse();
    } else {
      const Eigen::Matrix3d m = J;
      meas = m.determinant();
      if (!(meas > kMeasureTolerance)) {
        throw GeometryError("non-positive Jacobian determinant in quadrature");
      }
      jinv_t = m.inverse().transpose();
      grad_map = jinv_t;
    }
  }

  Vec3 push(int role, const Vec3& r) const {
    if (role == 0) {
      return Vec3(r[0], 0.0, 0.0);
    }
    if (role == dim) {
      return Vec3(r[0] / meas, 0.0, 0.0);
    }
    if (dim == 2) {
      return J * r.head<2>() / meas;
    }
    if (role == 1) {
      return jinv_t * r;
    }
    return J * r / meas;
  }

  // physical derivative quantity from the reference one
  Vec3 push_derivative(int role, const Vec3& r) const {
    if (role == 0) {
      return grad_map * r.head(dim);
    }
    if (dim == 3 && role == 1) {
      return J * r / meas;
    }
    return Vec3(r[0] / meas, 0.0, 0.0);
  }

  // tangential part of an ambient gradient on surfaces
  Vec3 tangential(const Vec3& g) const {
    if (dim == 2) {
      return grad_map * (J.transpose() * g);
    }
    return g;
  }
};

// Discrete derivative of a patch field in reference form, plus a reader
// returning the reference derivative quantity at a point.
struct DerivativeField {
  std::optional<CoefficientField> field;
  int dim = 2;
  int role = 0;

  explicit DerivativeField(const CoefficientField& f) : dim(f.space.dim()), role(f.space.role()) {
    if (role < dim) {
      field = exterior_derivative(f);
    }
  }

  Vec3 reference(const Vec3& u) const {
    const Vec3 v = (*field)(u);
    if (role == 0 && dim == 2) {
      // curl = (d_v f, -d_u f)
      return Vec3(-v[1], v[0], 0.0);
    }
    return v;
  }
};

bool needs_derivative(Norm n) { return n != Norm::L2; }

std::vector<double> axis_nodes(const KnotVector& kv, const QuadratureRule& rule, std::vector<double>& weights) {
  std::vector<double> nodes;
  weights.clear();
  for (const auto& e : kv.elements()) {
    const auto x = rule.nodes_on(e.left, e.right);
    const auto w = rule.weights_on(e.left, e.right);
    nodes.insert(nodes.end(), x.begin(), x.end());
    weights.insert(weights.end(), w.begin(), w.end());
  }
  return nodes;
}

// Calls body(u, weight) at every tensor quadrature point of a patch.
template <class Body>
void for_each_point(const SplineComplex& complex, Body&& body) {
  const QuadratureRule rule = gauss_rule(quadrature_points_for(complex));
  std::vector<double> x[3];
  std::vector<double> w[3];
  for (int a = 0; a < 3; ++a) {
    if (a < complex.dim) {
      x[a] = axis_nodes(complex.knots[static_cast<std::size_t>(a)], rule, w[a]);
    } else {
      x[a] = {0.0};
      w[a] = {1.0};
    }
  }
  for (std::size_t i = 0; i < x[0].size(); ++i) {
    for (std::size_t j = 0; j < x[1].size(); ++j) {
      for (std::size_t l = 0; l < x[2].size(); ++l) {
        body(Vec3(x[0][i], x[1][j], x[2][l]), w[0][i] * w[1][j] * w[2][l]);
      }
    }
  }
}

SplineComplex complex_of(const CoefficientField& f) { return build_complex(f.space.dim(), f.space.base_knots()); }

} // namespace

int quadrature_points_for(const SplineComplex& complex) {
  int p = 0;
  for (const auto& kv : complex.knots) {
    p = std::max(p, kv.degree());
  }
  return p + 2;
}

ExactField discrete_as_exact(const MultipatchGeometry& geom, const std::vector<CoefficientField>& fields) {
  if (fields.size() != geom.size()) {
    throw std::invalid_argument("discrete_as_exact: expected one field per patch");
  }
  auto shared = std::make_shared<std::vector<CoefficientField>>(fields);
  auto derivs = std::make_shared<std::vector<DerivativeField>>();
  for (const auto& f : fields) {
    derivs->emplace_back(f);
  }
  const int role = fields.front().space.role();
  auto patches = geom.patches;
  ExactField out;
  out.role = role;
  out.value = [shared, patches, role](std::size_t j, const Vec3& u) {
    return Frame(*patches.at(j), u).push(role, (*shared)[j](u));
  };
  if (role < geom.dim) {
    out.derivative = [derivs, patches, role](std::size_t j, const Vec3& u) {
      return Frame(*patches.at(j), u).push_derivative(role, (*derivs)[j].reference(u));
    };
  }
  return out;
}

ErrorReport error_report(const MultipatchGeometry& geom, const std::vector<CoefficientField>& fields,
                         const ExactField& exact, const std::vector<Norm>& norms) {
  if (fields.size() != geom.size()) {
    throw std::invalid_argument("error_report: expected one field per patch");
  }
  const int role = fields.front().space.role();
  if (exact.role != role) {
    throw std::invalid_argument("error_report: exact field has role " + std::to_string(exact.role) +
                                ", discrete field role " + std::to_string(role));
  }
  bool want_derivative = false;
  for (Norm n : norms) {
    if (!norm_applies(n, geom.dim, role)) {
      throw std::invalid_argument("error_report: norm " + to_string(n) + " does not apply to role " +
                                  std::to_string(role));
    }
    want_derivative = want_derivative || needs_derivative(n);
  }
  if (want_derivative && !exact.derivative) {
    throw std::invalid_argument("error_report: exact field lacks the derivative needed by the requested norms");
  }
  double l2sq = 0.0;
  double dsq = 0.0;
  for (std::size_t j = 0; j < fields.size(); ++j) {
    const auto& F = geom.patch(j);
    const auto& field = fields[j];
    std::optional<DerivativeField> deriv;
    if (want_derivative) {
      deriv.emplace(field);
    }
    for_each_point(complex_of(field), [&](const Vec3& u, double w) {
      const Frame fr(F, u);
      const double wm = w * fr.meas;
      const Vec3 e = fr.push(role, field(u)) - exact.value(j, u);
      l2sq += wm * e.squaredNorm();
      if (want_derivative) {
        Vec3 ex = exact.derivative(j, u);
        if (role == 0) {
          ex = fr.tangential(ex);
        }
        const Vec3 de = fr.push_derivative(role, deriv->reference(u)) - ex;
        dsq += wm * de.squaredNorm();
      }
    });
  }
  ErrorReport out;
  for (Norm n : norms) {
    switch (n) {
    case Norm::L2:
      out.values[n] = std::sqrt(l2sq);
      break;
    case Norm::H1semi:
      out.values[n] = std::sqrt(dsq);
      break;
    default:
      out.values[n] = std::sqrt(l2sq + dsq);
    }
  }
  return out;
}

double error_norm(const MultipatchGeometry& geom, const std::vector<CoefficientField>& fields,
                  const ExactField& exact, Norm norm) {
  return error_report(geom, fields, exact, {norm}).at(norm);
}

double error_norm(const GlobalField& field, const ExactField& exact, Norm norm) {
  return error_norm(field.space->geometry(), field.locals(), exact, norm);
}

namespace {

struct ActiveBasis {
  std::size_t local = 0;
  Vec3 value;      // physical value
  Vec3 derivative; // physical derivative quantity
};

// Active basis functions of a patch space at u, pushed forward.
void active_basis(const ComplexSpace& space, const Frame& fr, const Vec3& u, std::vector<ActiveBasis>& out) {
  out.clear();
  const int d = space.dim();
  const int role = space.role();
  std::size_t offset = 0;
  for (int c = 0; c < space.num_components(); ++c) {
    const auto& factors = space.factors(c);
    const auto shape = space.shape(c);
    BasisDerivatives b[3];
    for (int a = 0; a < 3; ++a) {
      if (a < d) {
        b[a] = factors[static_cast<std::size_t>(a)].eval_basis_derivatives(u[a]);
      } else {
        b[a].first = 0;
        b[a].values = {1.0};
        b[a].derivatives = {0.0};
      }
    }
    const std::size_t s2 = d == 3 ? shape[2] : 1;
    for (std::size_t i = 0; i < b[0].values.size(); ++i) {
      for (std::size_t j = 0; j < b[1].values.size(); ++j) {
        for (std::size_t l = 0; l < b[2].values.size(); ++l) {
          const double v = b[0].values[i] * b[1].values[j] * b[2].values[l];
          const Vec3 grad(b[0].derivatives[i] * b[1].values[j] * b[2].values[l],
                          b[0].values[i] * b[1].derivatives[j] * b[2].values[l],
                          b[0].values[i] * b[1].values[j] * b[2].derivatives[l]);
          ActiveBasis ab;
          ab.local = offset + ((b[0].first + i) * shape[1] + b[1].first + j) * s2 + b[2].first + l;
          Vec3 r = Vec3::Zero();
          r[c] = v;
          ab.value = fr.push(role, r);
          if (role == 0) {
            ab.derivative = fr.push_derivative(0, grad);
          } else if (role == d) {
            ab.derivative = Vec3::Zero();
          } else if (d == 3 && role == 1) {
            ab.derivative = fr.push_derivative(1, grad.cross(Vec3::Unit(c)));
          } else {
            ab.derivative = fr.push_derivative(role, Vec3(grad[c], 0.0, 0.0));
          }
          out.push_back(ab);
        }
      }
    }
    offset += space.component_dimension(c);
  }
}

void require_projection_norm(const GlobalSpace& space, Norm norm) {
  if (norm == Norm::H1semi || !norm_applies(norm, space.dim(), space.role())) {
    throw std::invalid_argument("orthogonal projection: norm " + to_string(norm) + " is not an inner-product norm for role " +
                                std::to_string(space.role()));
  }
}

} // namespace

Eigen::MatrixXd assemble_gram(const GlobalSpace& space, Norm norm) {
  require_projection_norm(space, norm);
  const bool deriv = needs_derivative(norm);
  const auto n = static_cast<Eigen::Index>(space.dimension());
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  std::vector<ActiveBasis> active;
  for (std::size_t j = 0; j < space.num_patches(); ++j) {
    const auto& F = space.geometry().patch(j);
    const auto& S = space.patch_space(j);
    const auto& map = space.dof_map(j);
    for_each_point(space.patch_complex(j), [&](const Vec3& u, double w) {
      const Frame fr(F, u);
      active_basis(S, fr, u, active);
      const double wm = w * fr.meas;
      for (const auto& a : active) {
        const auto& da = map[a.local];
        for (const auto& b : active) {
          const auto& db = map[b.local];
          double v = a.value.dot(b.value);
          if (deriv) {
            v += a.derivative.dot(b.derivative);
          }
          gram(static_cast<Eigen::Index>(da.global), static_cast<Eigen::Index>(db.global)) += wm * da.sign * db.sign * v;
        }
      }
    });
  }
  return gram;
}

Eigen::VectorXd assemble_rhs(const GlobalSpace& space, const ExactField& f, Norm norm) {
  require_projection_norm(space, norm);
  const bool deriv = needs_derivative(norm);
  if (deriv && !f.derivative) {
    throw std::invalid_argument("assemble_rhs: the norm needs the derivative of the data");
  }
  if (f.role != space.role()) {
    throw std::invalid_argument("assemble_rhs: data role does not match the space");
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.dimension()));
  std::vector<ActiveBasis> active;
  for (std::size_t j = 0; j < space.num_patches(); ++j) {
    const auto& F = space.geometry().patch(j);
    const auto& S = space.patch_space(j);
    const auto& map = space.dof_map(j);
    for_each_point(space.patch_complex(j), [&](const Vec3& u, double w) {
      const Frame fr(F, u);
      active_basis(S, fr, u, active);
      const double wm = w * fr.meas;
      const Vec3 fv = f.value(j, u);
      Vec3 fd = Vec3::Zero();
      if (deriv) {
        fd = f.derivative(j, u);
        if (space.role() == 0) {
          fd = fr.tangential(fd);
        }
      }
      for (const auto& a : active) {
        const auto& da = map[a.local];
        double v = a.value.dot(fv);
        if (deriv) {
          v += a.derivative.dot(fd);
        }
        rhs[static_cast<Eigen::Index>(da.global)] += wm * da.sign * v;
      }
    });
  }
  return rhs;
}

ProjectionResult orthogonal_project(std::shared_ptr<const GlobalSpace> space, const ExactField& f, Norm norm) {
  const Eigen::MatrixXd gram = assemble_gram(*space, norm);
  const Eigen::VectorXd rhs = assemble_rhs(*space, f, norm);
  const Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("orthogonal_project: Gram matrix is not positive definite");
  }
  Eigen::VectorXd x = llt.solve(rhs);
  const double residual = (gram * x - rhs).cwiseAbs().maxCoeff();
  return ProjectionResult{GlobalField{std::move(space), std::move(x)}, residual};
}

GlobalField l2_project(std::shared_ptr<const GlobalSpace> space, const ExactField& f) {
  return orthogonal_project(std::move(space), f, Norm::L2).field;
}

} // namespace isocx
