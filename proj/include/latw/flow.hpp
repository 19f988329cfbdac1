#pragma once

// Fixed-step RK4 integration of Hamiltonian flows on invariant coordinates.

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "latw/brackets.hpp"
#include "latw/functional.hpp"
#include "latw/invariants.hpp"

namespace latw {

/// Which Hamiltonian or monitored functional a config names.
struct HamiltonianSpec {
  enum class Kind { hierarchy, boussinesq, polynomial };
  Kind kind = Kind::hierarchy;
  int s = 1;
  std::vector<Monomial> terms;

  /// {"kind": "F_s", "s": 2} | {"kind": "boussinesq"} |
  /// {"kind": "polynomial", "terms": [{"coefficient": c, "factors": [[r, k], ...]}]}
  static HamiltonianSpec from_json(const nlohmann::json& j);
  Functional make(int depth_margin = kDefaultDepthMargin) const;
};

struct FlowConfig {
  InvariantState initial;
  HamiltonianSpec hamiltonian;
  BracketId bracket = BracketId::quadratic();
  double dt = 1e-3;
  int steps = 1000;
  std::vector<HamiltonianSpec> monitors;
  int depth_margin = kDefaultDepthMargin;

  /// Schema: {"m", "N", "normalization", "initial": {"a": {...}} | {"random": {"seed", "low", "high"}},
  ///          "hamiltonian", "bracket": "1" | "2" | "pencil:<lambda>", "dt", "steps", "monitor": [...],
  ///          "depth_margin"}.
  static FlowConfig from_json(const nlohmann::json& j);
};

struct Trajectory {
  std::vector<double> times;
  std::vector<InvariantState> states;
};

/// One classical RK4 step of da/dt = hamiltonian_field(h, a, b).
InvariantState rk4_step(const Functional& h, const InvariantState& a, const BracketId& b, double dt);

Trajectory integrate_flow(const Functional& h, const InvariantState& initial, const BracketId& b, double dt,
                          int steps);
Trajectory integrate_flow(const FlowConfig& cfg);

struct Drift {
  std::string name;
  double initial = 0.0;
  double max_drift = 0.0;
  double final_drift = 0.0;
};

std::vector<Drift> conservation_report(const Trajectory& traj, const std::vector<Functional>& monitors);

/// One row per step: t, then a^r_n in (r, n) lexicographic order.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

}  // namespace latw
