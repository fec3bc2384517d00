#include "isocx/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace isocx {

AnalyticPatch::AnalyticPatch(int dim, std::function<Vec3(const Vec3&)> value,
                             std::function<Jacobian(const Vec3&)> jacobian, std::string name)
    : dim_(dim), value_(std::move(value)), jacobian_(std::move(jacobian)), name_(std::move(name)) {
  if (dim_ != 2 && dim_ != 3) {
    throw std::invalid_argument("AnalyticPatch: dimension must be 2 or 3");
  }
}

AffinePatch::AffinePatch(Vec3 origin, Jacobian matrix) : origin_(std::move(origin)), matrix_(std::move(matrix)) {
  if (matrix_.cols() != 2 && matrix_.cols() != 3) {
    throw std::invalid_argument("AffinePatch: matrix must have 2 or 3 columns");
  }
}

Vec3 AffinePatch::value(const Vec3& u) const { return origin_ + matrix_ * u.head(matrix_.cols()); }

NurbsPatch::NurbsPatch(std::vector<KnotVector> knots, std::vector<Vec3> control_points, std::vector<double> weights)
    : knots_(std::move(knots)), points_(std::move(control_points)), weights_(std::move(weights)) {
  if (knots_.size() != 2 && knots_.size() != 3) {
    throw std::invalid_argument("NurbsPatch: need 2 or 3 knot vectors");
  }
  std::size_t n = 1;
  for (const auto& kv : knots_) {
    for (int m : kv.interior_multiplicities()) {
      if (m > 1) {
        throw std::invalid_argument("NurbsPatch: repeated interior knots are not supported in geometry maps");
      }
    }
    spaces_.emplace_back(kv);
    n *= kv.dimension();
  }
  if (points_.size() != n || weights_.size() != n) {
    throw std::invalid_argument("NurbsPatch: expected " + std::to_string(n) + " control points and weights");
  }
  for (double w : weights_) {
    if (!(w > 0.0)) {
      throw std::invalid_argument("NurbsPatch: weights must be positive");
    }
  }
}

void NurbsPatch::evaluate(const Vec3& u, Vec3& x, Jacobian* jac) const {
  const int d = dim();
  BasisDerivatives b[3];
  std::size_t shape[3] = {1, 1, 1};
  for (int a = 0; a < d; ++a) {
    b[a] = spaces_[static_cast<std::size_t>(a)].eval_basis_derivatives(u[a]);
    shape[a] = spaces_[static_cast<std::size_t>(a)].dimension();
  }
  if (d == 2) {
    b[2].first = 0;
    b[2].values = {1.0};
    b[2].derivatives = {0.0};
  }
  // homogeneous sums: A = sum w N c, W = sum w N, and their derivatives
  Vec3 A = Vec3::Zero();
  double W = 0.0;
  Eigen::Matrix3d dA = Eigen::Matrix3d::Zero();
  Vec3 dW = Vec3::Zero();
  for (std::size_t i = 0; i < b[0].values.size(); ++i) {
    for (std::size_t j = 0; j < b[1].values.size(); ++j) {
      for (std::size_t l = 0; l < b[2].values.size(); ++l) {
        const std::size_t idx = ((b[0].first + i) * shape[1] + b[1].first + j) * shape[2] + b[2].first + l;
        const double w = weights_[idx];
        const Vec3& c = points_[idx];
        const double n = b[0].values[i] * b[1].values[j] * b[2].values[l];
        const Vec3 dn(b[0].derivatives[i] * b[1].values[j] * b[2].values[l],
                      b[0].values[i] * b[1].derivatives[j] * b[2].values[l],
                      b[0].values[i] * b[1].values[j] * b[2].derivatives[l]);
        A += w * n * c;
        W += w * n;
        dA += w * c * dn.transpose();
        dW += w * dn;
      }
    }
  }
  x = A / W;
  if (jac != nullptr) {
    jac->resize(3, d);
    for (int a = 0; a < d; ++a) {
      jac->col(a) = (dA.col(a) - x * dW[a]) / W;
    }
  }
}

Vec3 NurbsPatch::value(const Vec3& u) const {
  Vec3 x;
  evaluate(u, x, nullptr);
  return x;
}

Jacobian NurbsPatch::jacobian(const Vec3& u) const {
  Vec3 x;
  Jacobian j;
  evaluate(u, x, &j);
  return j;
}

namespace {

[[noreturn]] void singular(const char* what, const Vec3& u, double value) {
  std::ostringstream os;
  os << what << " " << value << " at parametric point (" << u[0] << ", " << u[1] << ", " << u[2] << ")";
  throw GeometryError(os.str());
}

Eigen::Matrix3d square_jacobian(const PatchMap& F, const Vec3& u, double& det) {
  const Jacobian j = F.jacobian(u);
  Eigen::Matrix3d m = j;
  det = m.determinant();
  if (!(det > kMeasureTolerance)) {
    singular("non-positive Jacobian determinant", u, det);
  }
  return m;
}

} // namespace

double surface_measure(const PatchMap& F, const Vec3& u) {
  if (F.dim() != 2) {
    throw std::invalid_argument("surface_measure: patch is not a surface");
  }
  const Jacobian j = F.jacobian(u);
  const double kappa = Vec3(j.col(0)).cross(Vec3(j.col(1))).norm();
  if (!(kappa > kMeasureTolerance)) {
    singular("degenerate surface measure", u, kappa);
  }
  return kappa;
}

Vec3 surface_normal(const PatchMap& F, const Vec3& u) {
  const Jacobian j = F.jacobian(u);
  const Vec3 n = Vec3(j.col(0)).cross(Vec3(j.col(1)));
  const double kappa = n.norm();
  if (!(kappa > kMeasureTolerance)) {
    singular("degenerate surface measure", u, kappa);
  }
  return n / kappa;
}

double jacobian_determinant(const PatchMap& F, const Vec3& u) {
  if (F.dim() != 3) {
    throw std::invalid_argument("jacobian_determinant: patch is not volumetric");
  }
  double det = 0.0;
  square_jacobian(F, u, det);
  return det;
}

double measure(const PatchMap& F, const Vec3& u) {
  return F.dim() == 2 ? surface_measure(F, u) : jacobian_determinant(F, u);
}

Vec3 pullback_value(int role, const PatchMap& F, const Vec3& u, const Vec3& v) {
  if (F.dim() == 2) {
    const Jacobian j = F.jacobian(u);
    switch (role) {
    case 0:
      return v;
    case 1: {
      const Eigen::Matrix2d g = j.transpose() * j;
      const double kappa = std::sqrt(g.determinant());
      if (!(kappa > kMeasureTolerance)) {
        singular("degenerate surface measure", u, kappa);
      }
      const Eigen::Vector2d r = kappa * g.inverse() * (j.transpose() * v);
      return Vec3(r[0], r[1], 0.0);
    }
    case 2:
      return Vec3(surface_measure(F, u) * v[0], 0.0, 0.0);
    default:
      throw std::invalid_argument("pullback_value: surface roles are 0, 1, 2");
    }
  }
  double det = 0.0;
  switch (role) {
  case 0:
    return v;
  case 1:
    return F.jacobian(u).transpose() * v;
  case 2: {
    const Eigen::Matrix3d m = square_jacobian(F, u, det);
    return det * m.inverse() * v;
  }
  case 3:
    return Vec3(jacobian_determinant(F, u) * v[0], 0.0, 0.0);
  default:
    throw std::invalid_argument("pullback_value: volume roles are 0..3");
  }
}

Vec3 pushforward_value(int role, const PatchMap& F, const Vec3& u, const Vec3& r) {
  if (F.dim() == 2) {
    switch (role) {
    case 0:
      return Vec3(r[0], 0.0, 0.0);
    case 1: {
      const Jacobian j = F.jacobian(u);
      return j * r.head<2>() / surface_measure(F, u);
    }
    case 2:
      return Vec3(r[0] / surface_measure(F, u), 0.0, 0.0);
    default:
      throw std::invalid_argument("pushforward_value: surface roles are 0, 1, 2");
    }
  }
  double det = 0.0;
  switch (role) {
  case 0:
    return Vec3(r[0], 0.0, 0.0);
  case 1: {
    const Eigen::Matrix3d m = square_jacobian(F, u, det);
    return m.transpose().inverse() * r;
  }
  case 2: {
    const Eigen::Matrix3d m = square_jacobian(F, u, det);
    return m * r / det;
  }
  case 3:
    return Vec3(r[0] / jacobian_determinant(F, u), 0.0, 0.0);
  default:
    throw std::invalid_argument("pushforward_value: volume roles are 0..3");
  }
}

namespace {

void require_dim(const PatchPtr& F, int dim, const char* op) {
  if (!F || F->dim() != dim) {
    throw std::invalid_argument(std::string(op) + ": patch has the wrong dimension");
  }
}

} // namespace

RefFunction pullback_surface(int role, PatchPtr F, PatchFunction f) {
  require_dim(F, 2, "pullback_surface");
  return [role, F = std::move(F), f = std::move(f)](const Vec3& u) { return pullback_value(role, *F, u, f(u)); };
}

PatchFunction pushforward_surface(int role, PatchPtr F, RefFunction f) {
  require_dim(F, 2, "pushforward_surface");
  return [role, F = std::move(F), f = std::move(f)](const Vec3& u) { return pushforward_value(role, *F, u, f(u)); };
}

RefFunction pullback_volume(int role, PatchPtr F, PatchFunction f) {
  require_dim(F, 3, "pullback_volume");
  return [role, F = std::move(F), f = std::move(f)](const Vec3& u) { return pullback_value(role, *F, u, f(u)); };
}

PatchFunction pushforward_volume(int role, PatchPtr F, RefFunction f) {
  require_dim(F, 3, "pushforward_volume");
  return [role, F = std::move(F), f = std::move(f)](const Vec3& u) { return pushforward_value(role, *F, u, f(u)); };
}

PatchFunction restrict_to_patch(PatchPtr F, AmbientFunction f) {
  return [F = std::move(F), f = std::move(f)](const Vec3& u) { return f(F->value(u)); };
}

void validate_patch(const PatchMap& F, int n) {
  if (n < 2) {
    throw std::invalid_argument("validate_patch: need at least 2 samples per axis");
  }
  const int d = F.dim();
  // uniform samples, plus the element corners of spline maps
  std::vector<std::vector<double>> axes(3, std::vector<double>{0.0});
  for (int a = 0; a < d; ++a) {
    auto& t = axes[static_cast<std::size_t>(a)];
    t.clear();
    for (int i = 0; i < n; ++i) {
      t.push_back(i / double(n - 1));
    }
    if (const auto* nurbs = dynamic_cast<const NurbsPatch*>(&F)) {
      const auto bp = nurbs->knots()[static_cast<std::size_t>(a)].breakpoints();
      t.insert(t.end(), bp.begin(), bp.end());
    }
  }
  for (double x : axes[0]) {
    for (double y : axes[1]) {
      for (double z : axes[2]) {
        measure(F, Vec3(x, y, z));
      }
    }
  }
}

} // namespace isocx
