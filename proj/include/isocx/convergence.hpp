#pragma once

#include "isocx/analysis.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace isocx {

enum class Projector { tilde, plain, l2 };

std::string to_string(Projector p);
Projector projector_from_string(const std::string& name);

struct StudyConfig {
  std::string geometry = "flat-square";
  /// Overrides `geometry` when set (geometry files).
  std::shared_ptr<const MultipatchGeometry> geometry_data;
  int role = 0;
  /// One degree per parametric axis; used with `initial_elements`.
  std::vector<int> degrees{2, 2};
  std::size_t initial_elements = 2;
  /// Optional starting knot vectors, one list per patch. Replaces
  /// degrees/initial_elements when non-empty.
  std::vector<std::vector<KnotVector>> initial_knots;
  /// Number of meshes, the first one included.
  int levels = 4;
  /// "trig", "shifted", "rough" or "discrete" (random field of the
  /// coarsest space).
  std::string solution = "trig";
  /// Defaults to every norm that applies to the role.
  std::vector<Norm> norms;
  Projector projector = Projector::tilde;
  /// Defaults to the theoretical orders.
  std::map<Norm, double> expected_orders;
  double tolerance = 0.15;
  std::uint64_t seed = 0;
  /// Record the commuting residual of the role transition at every level.
  bool commuting_check = true;

  /// Throws std::invalid_argument.
  void validate() const;
};

struct ConvergenceRecord {
  int level = 0;
  double h = 0.0;
  std::size_t dofs = 0;
  std::map<Norm, double> errors;
  std::optional<double> commuting_residual;
};

struct NormVerdict {
  Norm norm = Norm::L2;
  double expected = 0.0;
  /// Final estimated order; NaN when the errors are at rounding level.
  double observed = 0.0;
  bool exact = false;
  bool pass = false;
  /// False for the rough solution, whose orders are only observed.
  bool asserted = true;
};

struct StudyResult {
  StudyConfig config;
  std::string geometry_name;
  std::vector<ConvergenceRecord> records;
  std::map<Norm, std::vector<double>> rates;
  std::vector<NormVerdict> verdicts;
  double max_commuting_residual = 0.0;
  bool passed = false;
};

/// Errors below this count as exact reproduction.
inline constexpr double kExactThreshold = 1e-10;
/// Bound for the recorded commuting residuals.
inline constexpr double kCommutingTolerance = 1e-10;

/// Theoretical orders: role 0 L2 p+1, H1 p; every other role p in L2 and
/// in its graph norm. p is the smallest degree.
double theoretical_order(int dim, int role, Norm norm, int p);
std::vector<Norm> default_norms(int dim, int role);

/// rate_i = log(e_i / e_{i+1}) / log(h_i / h_{i+1}); NaN if either error
/// is at or below kExactThreshold. Throws with fewer than two entries.
std::vector<double> estimate_rates(const std::vector<double>& h, const std::vector<double>& errors);
std::map<Norm, std::vector<double>> estimate_rates(const std::vector<ConvergenceRecord>& records);

/// Deterministic given the config.
StudyResult run_study(const StudyConfig& config);

/// Resolves the geometry of a config.
MultipatchGeometry study_geometry(const StudyConfig& config);
/// Knot vectors of the coarsest level, one list per patch.
std::vector<std::vector<KnotVector>> study_initial_knots(const StudyConfig& config, const MultipatchGeometry& geom);

} // namespace isocx
