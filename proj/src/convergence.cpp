#include "isocx/convergence.hpp"

#include "isocx/catalog.hpp"
#include "isocx/log.hpp"
#include "isocx/manufactured.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace isocx {

std::string to_string(Projector p) {
  switch (p) {
  case Projector::tilde:
    return "tilde";
  case Projector::plain:
    return "plain";
  case Projector::l2:
    return "l2";
  }
  return "?";
}

Projector projector_from_string(const std::string& name) {
  if (name == "tilde") {
    return Projector::tilde;
  }
  if (name == "plain") {
    return Projector::plain;
  }
  if (name == "l2") {
    return Projector::l2;
  }
  throw std::invalid_argument("unknown projector '" + name + "' (expected tilde, plain or l2)");
}

void StudyConfig::validate() const {
  if (levels < 3) {
    throw std::invalid_argument("StudyConfig: need at least 3 levels to estimate rates, got " + std::to_string(levels));
  }
  if (role < 0 || role > 3) {
    throw std::invalid_argument("StudyConfig: role out of range");
  }
  if (initial_knots.empty()) {
    if (degrees.size() != 2 && degrees.size() != 3) {
      throw std::invalid_argument("StudyConfig: need 2 or 3 degrees");
    }
    if (std::any_of(degrees.begin(), degrees.end(), [](int p) { return p < 1; })) {
      throw std::invalid_argument("StudyConfig: degrees must be at least 1");
    }
    if (initial_elements < 1) {
      throw std::invalid_argument("StudyConfig: need at least one initial element");
    }
  }
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("StudyConfig: tolerance must be positive");
  }
  const auto ids = manufactured_ids();
  if (solution != "discrete" && std::find(ids.begin(), ids.end(), solution) == ids.end()) {
    throw std::invalid_argument("StudyConfig: unknown solution '" + solution + "'");
  }
}

double theoretical_order(int dim, int role, Norm norm, int p) {
  if (!norm_applies(norm, dim, role)) {
    throw std::invalid_argument("theoretical_order: norm " + to_string(norm) + " does not apply to role " +
                                std::to_string(role));
  }
  if (role == 0 && norm == Norm::L2) {
    return p + 1;
  }
  return p;
}

std::vector<Norm> default_norms(int dim, int role) {
  std::vector<Norm> out;
  for (Norm n : {Norm::L2, Norm::H1semi, Norm::H1, Norm::Hdiv, Norm::Hcurl}) {
    if (norm_applies(n, dim, role)) {
      out.push_back(n);
    }
  }
  return out;
}

std::vector<double> estimate_rates(const std::vector<double>& h, const std::vector<double>& e) {
  if (h.size() != e.size() || h.size() < 2) {
    throw std::invalid_argument("estimate_rates: need at least two matching (h, error) entries");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    if (e[i] <= kExactThreshold || e[i + 1] <= kExactThreshold) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      out.push_back(std::log(e[i] / e[i + 1]) / std::log(h[i] / h[i + 1]));
    }
  }
  return out;
}

std::map<Norm, std::vector<double>> estimate_rates(const std::vector<ConvergenceRecord>& records) {
  std::map<Norm, std::vector<double>> out;
  if (records.empty()) {
    return out;
  }
  for (const auto& [norm, _] : records.front().errors) {
    std::vector<double> h;
    std::vector<double> e;
    for (const auto& r : records) {
      h.push_back(r.h);
      e.push_back(r.errors.at(norm));
    }
    out[norm] = estimate_rates(h, e);
  }
  return out;
}

MultipatchGeometry study_geometry(const StudyConfig& config) {
  if (config.geometry_data) {
    return *config.geometry_data;
  }
  return geometry_catalog(config.geometry);
}

std::vector<std::vector<KnotVector>> study_initial_knots(const StudyConfig& config, const MultipatchGeometry& geom) {
  if (!config.initial_knots.empty()) {
    if (config.initial_knots.size() != geom.size()) {
      throw std::invalid_argument("StudyConfig: initial_knots must list one set of knot vectors per patch");
    }
    return config.initial_knots;
  }
  if (static_cast<int>(config.degrees.size()) != geom.dim) {
    throw std::invalid_argument("StudyConfig: geometry has dimension " + std::to_string(geom.dim) + " but " +
                                std::to_string(config.degrees.size()) + " degrees were given");
  }
  std::vector<KnotVector> kv;
  for (int p : config.degrees) {
    kv.push_back(KnotVector::uniform(p, config.initial_elements));
  }
  return std::vector<std::vector<KnotVector>>(geom.size(), kv);
}

namespace {

double mesh_size(const std::vector<std::vector<KnotVector>>& knots) {
  double h = 0.0;
  for (const auto& patch : knots) {
    for (const auto& kv : patch) {
      h = std::max(h, kv.mesh_size());
    }
  }
  return h;
}

int min_degree(const std::vector<std::vector<KnotVector>>& knots) {
  int p = std::numeric_limits<int>::max();
  for (const auto& patch : knots) {
    for (const auto& kv : patch) {
      p = std::min(p, kv.degree());
    }
  }
  return p;
}

// The orthogonal projection compared against a norm.
Norm projection_norm(Norm n) {
  switch (n) {
  case Norm::L2:
    return Norm::L2;
  case Norm::H1semi:
  case Norm::H1:
    return Norm::H1;
  default:
    return n;
  }
}

ExactField random_discrete(const GlobalSpace& space, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd c(static_cast<Eigen::Index>(space.dimension()));
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    c[i] = dist(rng);
  }
  return discrete_as_exact(space.geometry(), space.scatter(c));
}

} // namespace

StudyResult run_study(const StudyConfig& config) {
  config.validate();
  const MultipatchGeometry geom = study_geometry(config);
  if (config.role > geom.dim) {
    throw std::invalid_argument("StudyConfig: role " + std::to_string(config.role) + " does not exist in dimension " +
                                std::to_string(geom.dim));
  }
  auto knots = study_initial_knots(config, geom);
  const std::vector<Norm> norms = config.norms.empty() ? default_norms(geom.dim, config.role) : config.norms;
  for (Norm n : norms) {
    if (!norm_applies(n, geom.dim, config.role)) {
      throw std::invalid_argument("StudyConfig: norm " + to_string(n) + " does not apply to role " +
                                  std::to_string(config.role));
    }
  }
  StudyResult result;
  result.config = config;
  result.geometry_name = geom.name;

  std::optional<ExactField> exact;
  if (config.solution != "discrete") {
    exact = manufactured_solution(config.solution, config.role, geom);
  }
  const int p = min_degree(knots);
  for (int level = 0; level < config.levels; ++level) {
    auto space = std::make_shared<const GlobalSpace>(build_global_space(geom, config.role, knots));
    if (!exact) {
      exact = random_discrete(*space, config.seed);
    }
    ConvergenceRecord rec;
    rec.level = level;
    rec.h = mesh_size(knots);
    rec.dofs = space->dimension();
    if (config.projector == Projector::l2) {
      std::map<Norm, GlobalField> projections;
      for (Norm n : norms) {
        const Norm pn = projection_norm(n);
        if (projections.count(pn) == 0) {
          projections.emplace(pn, orthogonal_project(space, *exact, pn).field);
        }
        rec.errors[n] = error_norm(projections.at(pn), *exact, n);
      }
    } else {
      const auto kind = config.projector == Projector::tilde ? ProjectorKind::tilde : ProjectorKind::plain;
      const GlobalField field = global_interpolant(space, exact->value, kind);
      const auto report = error_report(geom, field.locals(), *exact, norms);
      rec.errors = report.values;
      if (config.commuting_check && config.role < geom.dim && exact->derivative) {
        std::vector<SplineComplex> complexes;
        for (std::size_t j = 0; j < space->num_patches(); ++j) {
          complexes.push_back(space->patch_complex(j));
        }
        const auto res =
            global_commuting_residual(geom, complexes, {derivative_pair(*exact, geom)}, kind, config.role);
        rec.commuting_residual = res.front();
        result.max_commuting_residual = std::max(result.max_commuting_residual, res.front());
      }
    }
    {
      std::ostringstream os;
      os << "level " << level << ": h = " << rec.h << ", dofs = " << rec.dofs;
      for (const auto& [n, e] : rec.errors) {
        os << ", " << to_string(n) << " = " << e;
      }
      log::info(os.str());
    }
    result.records.push_back(std::move(rec));
    for (auto& patch : knots) {
      for (auto& kv : patch) {
        kv = refine_dyadic(kv);
      }
    }
  }
  result.rates = estimate_rates(result.records);
  const bool asserted = config.solution != "rough";
  bool pass = true;
  for (Norm n : norms) {
    NormVerdict v;
    v.norm = n;
    const auto it = config.expected_orders.find(n);
    v.expected = it != config.expected_orders.end() ? it->second : theoretical_order(geom.dim, config.role, n, p);
    v.observed = result.rates.at(n).back();
    v.exact = result.records.back().errors.at(n) <= kExactThreshold;
    v.pass = v.exact || std::abs(v.observed - v.expected) <= config.tolerance;
    v.asserted = asserted;
    if (asserted) {
      pass = pass && v.pass;
    }
    result.verdicts.push_back(v);
  }
  // quadrature of the rough field limits its residual
  if (asserted && result.max_commuting_residual >= kCommutingTolerance) {
    pass = false;
  }
  result.passed = pass;
  return result;
}

} // namespace isocx
