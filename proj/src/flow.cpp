#include "latw/flow.hpp"

#include <cmath>
#include <iomanip>
#include <random>

#include "latw/io.hpp"

namespace latw {

HamiltonianSpec HamiltonianSpec::from_json(const nlohmann::json& j) {
  HamiltonianSpec spec;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "F_s") {
    spec.kind = Kind::hierarchy;
    spec.s = j.at("s").get<int>();
    if (spec.s < 1) throw DomainError("hierarchy index s must be positive");
  } else if (kind == "boussinesq") {
    spec.kind = Kind::boussinesq;
  } else if (kind == "polynomial") {
    spec.kind = Kind::polynomial;
    for (const auto& t : j.at("terms")) {
      Monomial mono;
      mono.coefficient = t.value("coefficient", 1.0);
      for (const auto& f : t.at("factors")) mono.factors.push_back({f.at(0).get<int>(), f.at(1).get<int>()});
      spec.terms.push_back(std::move(mono));
    }
  } else {
    throw DomainError("unknown hamiltonian kind '" + kind + "'");
  }
  return spec;
}

Functional HamiltonianSpec::make(int depth_margin) const {
  switch (kind) {
    case Kind::hierarchy: return hierarchy_hamiltonian(s, depth_margin);
    case Kind::boussinesq: return boussinesq_hamiltonian();
    case Kind::polynomial: return polynomial_functional("polynomial", terms);
  }
  throw DomainError("unknown hamiltonian kind");
}

FlowConfig FlowConfig::from_json(const nlohmann::json& j) {
  FlowConfig cfg;
  const int m = j.at("m").get<int>();
  const auto n = j.at("N").get<std::size_t>();
  const Normalization norm = parse_normalization(j.value("normalization", std::string("SL")));
  const auto& init = j.at("initial");
  if (init.contains("a")) {
    nlohmann::json state = {{"m", m}, {"N", n}, {"normalization", to_string(norm)}, {"a", init.at("a")}};
    cfg.initial = state_from_json(state);
  } else if (init.contains("random")) {
    const auto& r = init.at("random");
    std::mt19937_64 rng(r.value("seed", 0ULL));
    cfg.initial = InvariantState::random(m, n, norm, rng, r.value("low", -1.0), r.value("high", 1.0));
  } else {
    throw DomainError("initial state needs either \"a\" or \"random\"");
  }
  cfg.hamiltonian = HamiltonianSpec::from_json(j.at("hamiltonian"));
  cfg.bracket = BracketId::parse(j.value("bracket", std::string("1")));
  cfg.dt = j.value("dt", 1e-3);
  cfg.steps = j.value("steps", 1000);
  if (!std::isfinite(cfg.dt) || cfg.steps < 0) throw DomainError("dt must be finite and steps nonnegative");
  if (j.contains("monitor"))
    for (const auto& mon : j.at("monitor")) cfg.monitors.push_back(HamiltonianSpec::from_json(mon));
  cfg.depth_margin = j.value("depth_margin", kDefaultDepthMargin);
  if (cfg.depth_margin < 0) throw DomainError("depth margin must be nonnegative");
  return cfg;
}

InvariantState rk4_step(const Functional& h, const InvariantState& a, const BracketId& b, double dt) {
  const CoordTable k1 = hamiltonian_field(h, a, b);
  const CoordTable k2 = hamiltonian_field(h, a.moved(k1, 0.5 * dt), b);
  const CoordTable k3 = hamiltonian_field(h, a.moved(k2, 0.5 * dt), b);
  const CoordTable k4 = hamiltonian_field(h, a.moved(k3, dt), b);
  return a.moved(k1 + 2.0 * k2 + 2.0 * k3 + k4, dt / 6.0);
}

Trajectory integrate_flow(const Functional& h, const InvariantState& initial, const BracketId& b, double dt,
                          int steps) {
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(initial);
  for (int i = 1; i <= steps; ++i) {
    traj.states.push_back(rk4_step(h, traj.states.back(), b, dt));
    traj.times.push_back(i * dt);
  }
  return traj;
}

Trajectory integrate_flow(const FlowConfig& cfg) {
  return integrate_flow(cfg.hamiltonian.make(cfg.depth_margin), cfg.initial, cfg.bracket, cfg.dt, cfg.steps);
}

std::vector<Drift> conservation_report(const Trajectory& traj, const std::vector<Functional>& monitors) {
  std::vector<Drift> out;
  for (const auto& f : monitors) {
    Drift d;
    d.name = f.name;
    if (traj.states.empty()) {
      out.push_back(d);
      continue;
    }
    d.initial = f(traj.states.front());
    for (const auto& s : traj.states) {
      const double drift = std::abs(f(s) - d.initial);
      d.max_drift = std::max(d.max_drift, drift);
      d.final_drift = drift;
    }
    out.push_back(d);
  }
  return out;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  if (traj.states.empty()) return;
  out << "t";
  for (const auto& [r, seq] : traj.states.front().free())
    for (std::size_t n = 0; n < seq.period(); ++n) out << ",a" << r << "_" << n;
  out << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    out << traj.times[i];
    for (const auto& [r, seq] : traj.states[i].free())
      for (double v : seq.values()) out << ',' << v;
    out << '\n';
  }
}

}  // namespace latw
