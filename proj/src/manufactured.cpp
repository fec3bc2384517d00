#include "isocx/manufactured.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace isocx {

namespace {

using std::numbers::pi;

constexpr double kShift = 0.37;
constexpr double kRoughExponent = 1.5;

// Ambient scalar with gradient.
struct Scalar {
  std::function<double(const Vec3&)> f;
  std::function<Vec3(const Vec3&)> grad;
};

// |x - 1/2|^a and its derivative
double rough(double x) { return std::pow(std::abs(x - 0.5), kRoughExponent); }
double rough_d(double x) {
  const double t = x - 0.5;
  return kRoughExponent * std::pow(std::abs(t), kRoughExponent - 1.0) * (t < 0 ? -1.0 : 1.0);
}

Scalar multiply_rough(Scalar s) {
  return Scalar{[s](const Vec3& x) { return rough(x[0]) * s.f(x); },
                [s](const Vec3& x) {
                  Vec3 g = rough(x[0]) * s.grad(x);
                  g[0] += rough_d(x[0]) * s.f(x);
                  return g;
                }};
}

Scalar potential(int dim, double s) {
  if (dim == 2) {
    return Scalar{[s](const Vec3& x) { return std::sin(pi * (x[0] + s)) * std::sin(pi * (x[1] + s)) * std::exp(x[2]); },
                  [s](const Vec3& x) {
                    const double a = pi * (x[0] + s);
                    const double b = pi * (x[1] + s);
                    const double e = std::exp(x[2]);
                    return Vec3(pi * std::cos(a) * std::sin(b) * e, pi * std::sin(a) * std::cos(b) * e,
                                std::sin(a) * std::sin(b) * e);
                  }};
  }
  return Scalar{[s](const Vec3& x) { return std::sin(pi * (x[0] + s)) * std::cos(pi * (x[1] + s)) * std::exp(x[2]); },
                [s](const Vec3& x) {
                  const double a = pi * (x[0] + s);
                  const double b = pi * (x[1] + s);
                  const double e = std::exp(x[2]);
                  return Vec3(pi * std::cos(a) * std::cos(b) * e, -pi * std::sin(a) * std::sin(b) * e,
                              std::sin(a) * std::cos(b) * e);
                }};
}

Scalar density(int dim, double s) {
  if (dim == 2) {
    return Scalar{[s](const Vec3& x) { return std::cos(pi * (x[0] + s)) * std::cos(pi * (x[1] + s)) * std::exp(x[2]) + x[0]; },
                  nullptr};
  }
  return Scalar{[s](const Vec3& x) {
                  return std::cos(pi * (x[0] + s)) * std::cos(pi * (x[1] + s)) * std::cos(pi * (x[2] + s)) + x[0];
                },
                nullptr};
}

std::function<Vec3(const Vec3&)> ambient_value(const Scalar& s) {
  return [f = s.f](const Vec3& x) { return Vec3(f(x), 0.0, 0.0); };
}

ExactField from_ambient(const MultipatchGeometry& geom, int role, std::function<Vec3(const Vec3&)> value,
                        std::function<Vec3(const Vec3&)> derivative) {
  auto patches = geom.patches;
  ExactField out;
  out.role = role;
  out.value = [patches, value](std::size_t j, const Vec3& u) { return value(patches.at(j)->value(u)); };
  if (derivative) {
    out.derivative = [patches, derivative](std::size_t j, const Vec3& u) {
      return derivative(patches.at(j)->value(u));
    };
  }
  return out;
}

bool is_planar(const MultipatchGeometry& geom) {
  const Vec3 n0 = surface_normal(geom.patch(0), Vec3(0.5, 0.5, 0.0));
  for (const auto& patch : geom.patches) {
    for (double u : {0.1, 0.5, 0.9}) {
      for (double v : {0.1, 0.5, 0.9}) {
        if (std::abs(std::abs(surface_normal(*patch, Vec3(u, v, 0.0)).dot(n0)) - 1.0) > 1e-12) {
          return false;
        }
      }
    }
  }
  return true;
}

// Physical flux on surfaces made of several patches: a rotated gradient,
// which has a continuous normal trace across any edge, plus a tangential
// field with nonzero divergence when the surface is flat.
ExactField glued_surface_flux(const MultipatchGeometry& geom, const std::string& id) {
  const double s = id == "shifted" ? kShift : 0.0;
  Scalar phi = potential(2, s);
  if (id == "rough") {
    phi = multiply_rough(phi);
  }
  const bool planar = is_planar(geom);
  const Vec3 n0 = surface_normal(geom.patch(0), Vec3(0.5, 0.5, 0.0));
  auto in_plane = [planar, n0, s](const Vec3& x) -> Vec3 {
    if (!planar) {
      return Vec3::Zero();
    }
    const Vec3 w(std::sin(pi * (x[0] + s)) * std::cos(pi * x[1]), x[0] * x[1], std::cos(pi * x[2]));
    return w - w.dot(n0) * n0;
  };
  // trace(P Dw P) with the fixed tangent projector P
  auto in_plane_div = [planar, n0, s](const Vec3& x) {
    if (!planar) {
      return 0.0;
    }
    Eigen::Matrix3d Dw;
    Dw << pi * std::cos(pi * (x[0] + s)) * std::cos(pi * x[1]), -pi * std::sin(pi * (x[0] + s)) * std::sin(pi * x[1]),
        0.0, x[1], x[0], 0.0, 0.0, 0.0, -pi * std::sin(pi * x[2]);
    const Eigen::Matrix3d P = Eigen::Matrix3d::Identity() - n0 * n0.transpose();
    return (P * Dw * P).trace();
  };
  auto patches = geom.patches;
  ExactField out;
  out.role = 1;
  out.value = [patches, phi, in_plane](std::size_t j, const Vec3& u) -> Vec3 {
    const Vec3 x = patches.at(j)->value(u);
    return phi.grad(x).cross(surface_normal(*patches.at(j), u)) + in_plane(x);
  };
  out.derivative = [patches, in_plane_div](std::size_t j, const Vec3& u) {
    return Vec3(in_plane_div(patches.at(j)->value(u)), 0.0, 0.0);
  };
  return out;
}

// Surface role 1 defined through its reference field.
ExactField surface_flux(const MultipatchGeometry& geom, const std::string& id) {
  if (geom.size() > 1) {
    return glued_surface_flux(geom, id);
  }
  const double s = id == "shifted" ? kShift : 0.0;
  const bool is_rough = id == "rough";
  auto patches = geom.patches;
  auto ref = [s, is_rough](const Vec3& u) {
    if (is_rough) {
      return Vec3(rough(u[0]) * std::cos(pi * u[1]), rough(u[0]) * u[0], 0.0);
    }
    const double a = pi * (u[0] + s);
    const double b = pi * (u[1] + s);
    return Vec3(std::sin(a) * std::cos(b) + u[0] * u[1], std::cos(a) * std::sin(b) - u[0] * u[0], 0.0);
  };
  auto ref_div = [s, is_rough](const Vec3& u) {
    if (is_rough) {
      return rough_d(u[0]) * std::cos(pi * u[1]);
    }
    const double a = pi * (u[0] + s);
    const double b = pi * (u[1] + s);
    return 2.0 * pi * std::cos(a) * std::cos(b) + u[1];
  };
  ExactField out;
  out.role = 1;
  out.value = [patches, ref](std::size_t j, const Vec3& u) { return pushforward_value(1, *patches.at(j), u, ref(u)); };
  out.derivative = [patches, ref_div](std::size_t j, const Vec3& u) {
    return Vec3(ref_div(u) / surface_measure(*patches.at(j), u), 0.0, 0.0);
  };
  return out;
}

ExactField volume_vector(const MultipatchGeometry& geom, int role, double s) {
  if (role == 1) {
    return from_ambient(
        geom, 1,
        [s](const Vec3& x) -> Vec3 {
          const double X = pi * (x[0] + s);
          const double Y = pi * (x[1] + s);
          const double Z = pi * (x[2] + s);
          // curl-free part so every component depends on its own coordinate
          const Vec3 g(std::cos(X) * std::sin(Y) * std::sin(Z), std::sin(X) * std::cos(Y) * std::sin(Z),
                       std::sin(X) * std::sin(Y) * std::cos(Z));
          return Vec3(std::sin(Y) * std::cos(Z), std::sin(Z) * std::cos(X), std::sin(X) * std::cos(Y)) + g;
        },
        [s](const Vec3& x) {
          const double X = pi * (x[0] + s);
          const double Y = pi * (x[1] + s);
          const double Z = pi * (x[2] + s);
          return Vec3(-pi * (std::sin(X) * std::sin(Y) + std::cos(Z) * std::cos(X)),
                      -pi * (std::sin(Y) * std::sin(Z) + std::cos(X) * std::cos(Y)),
                      -pi * (std::sin(Z) * std::sin(X) + std::cos(Y) * std::cos(Z)));
        });
  }
  return from_ambient(
      geom, 2,
      [s](const Vec3& x) {
        const double X = pi * (x[0] + s);
        const double Y = pi * (x[1] + s);
        const double Z = pi * (x[2] + s);
        return Vec3(std::sin(X) * std::cos(Y), std::sin(Y) * std::cos(Z), std::sin(Z) * std::cos(X));
      },
      [s](const Vec3& x) {
        const double X = pi * (x[0] + s);
        const double Y = pi * (x[1] + s);
        const double Z = pi * (x[2] + s);
        return Vec3(pi * (std::cos(X) * std::cos(Y) + std::cos(Y) * std::cos(Z) + std::cos(Z) * std::cos(X)), 0.0,
                    0.0);
      });
}

} // namespace

std::vector<std::string> manufactured_ids() { return {"trig", "shifted", "rough"}; }

ExactField manufactured_solution(const std::string& id, int role, const MultipatchGeometry& geom) {
  if (id != "trig" && id != "shifted" && id != "rough") {
    throw std::invalid_argument("unknown manufactured solution '" + id + "'");
  }
  const int d = geom.dim;
  if (role < 0 || role > d) {
    throw std::invalid_argument("manufactured_solution: role out of range");
  }
  const double s = id == "shifted" ? kShift : 0.0;
  const bool is_rough = id == "rough";
  if (role == 0) {
    Scalar p = potential(d, s);
    if (is_rough) {
      p = multiply_rough(p);
    }
    return from_ambient(geom, 0, ambient_value(p), p.grad);
  }
  if (role == d) {
    Scalar r = density(d, s);
    if (is_rough) {
      auto f = r.f;
      r.f = [f](const Vec3& x) { return rough(x[0]) * f(x); };
    }
    return from_ambient(geom, d, ambient_value(r), nullptr);
  }
  if (d == 2) {
    return surface_flux(geom, id);
  }
  if (is_rough) {
    throw std::invalid_argument("manufactured_solution: 'rough' is not provided for volumetric vector roles");
  }
  return volume_vector(geom, role, s);
}

DerivativePair derivative_pair(const ExactField& f, const MultipatchGeometry& geom) {
  if (f.role >= geom.dim) {
    throw std::invalid_argument("derivative_pair: top role has no derivative");
  }
  if (!f.derivative) {
    throw std::invalid_argument("derivative_pair: field has no derivative");
  }
  if (geom.dim == 2 && f.role == 0) {
    auto patches = geom.patches;
    auto grad = f.derivative;
    return DerivativePair{f.value, [patches, grad](std::size_t j, const Vec3& u) {
                            return Vec3(grad(j, u).cross(surface_normal(*patches.at(j), u)));
                          }};
  }
  return DerivativePair{f.value, f.derivative};
}

} // namespace isocx
