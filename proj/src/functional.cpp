#include "latw/functional.hpp"

#include <cmath>

namespace latw {

CoordTable finite_difference_grad(const std::function<double(const InvariantState&)>& f, const InvariantState& a,
                                  double h) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  CoordTable g = zero_table(a);
  for (auto& [r, seq] : g) {
    for (std::size_t n = 0; n < a.period(); ++n) {
      InvariantState plus = a;
      InvariantState minus = a;
      plus.free(r)[static_cast<long>(n)] += h;
      minus.free(r)[static_cast<long>(n)] -= h;
      seq[static_cast<long>(n)] = (f(plus) - f(minus)) / (2.0 * h);
    }
  }
  return g;
}

CoordTable finite_difference_grad(const Functional& f, const InvariantState& a, double h) {
  return finite_difference_grad(f.eval, a, h);
}

Functional numeric_functional(std::string name, std::function<double(const InvariantState&)> eval, double h) {
  Functional f;
  f.name = std::move(name);
  f.eval = eval;
  f.grad = [eval, h](const InvariantState& a) { return finite_difference_grad(eval, a, h); };
  f.kind = GradKind::finite_difference;
  return f;
}

namespace {

Seq shifted_coordinate(const InvariantState& a, const Factor& f) { return shift(a.free(f.order), f.offset); }

}  // namespace

Functional polynomial_functional(std::string name, std::vector<Monomial> terms) {
  Functional f;
  f.name = std::move(name);
  f.eval = [terms](const InvariantState& a) {
    double total = 0.0;
    for (const auto& t : terms) {
      Seq prod(a.period(), t.coefficient);
      for (const auto& fac : t.factors) prod *= shifted_coordinate(a, fac);
      total += period_sum(prod);
    }
    return total;
  };
  f.grad = [terms](const InvariantState& a) {
    CoordTable g = zero_table(a);
    for (const auto& t : terms) {
      for (std::size_t i = 0; i < t.factors.size(); ++i) {
        Seq prod(a.period(), t.coefficient);
        for (std::size_t l = 0; l < t.factors.size(); ++l)
          if (l != i) prod *= shifted_coordinate(a, t.factors[l]);
        g.at(t.factors[i].order) += shift(prod, -t.factors[i].offset);
      }
    }
    return g;
  };
  return f;
}

Functional linear_functional(std::string name, const CoordTable& weights) {
  Functional f;
  f.name = std::move(name);
  f.eval = [weights](const InvariantState& a) { return pair(weights, a.free()); };
  f.grad = [weights](const InvariantState& a) {
    CoordTable g = zero_table(a);
    for (const auto& [r, w] : weights) g.at(r) += w;
    return g;
  };
  return f;
}

Functional constant_functional(double c) {
  Functional f;
  f.name = "constant";
  f.eval = [c](const InvariantState&) { return c; };
  f.grad = [](const InvariantState& a) { return zero_table(a); };
  return f;
}

Functional random_polynomial(const InvariantState& shape, std::mt19937_64& rng, int n_terms, int max_degree) {
  const auto orders = shape.free_orders();
  if (orders.empty()) return constant_functional(0.0);
  std::uniform_int_distribution<std::size_t> pick_order(0, orders.size() - 1);
  std::uniform_int_distribution<int> pick_offset(0, static_cast<int>(shape.period()) - 1);
  std::uniform_int_distribution<int> pick_degree(1, max_degree);
  std::uniform_real_distribution<double> pick_coef(-1.0, 1.0);
  std::vector<Monomial> terms;
  for (int t = 0; t < n_terms; ++t) {
    Monomial mono;
    mono.coefficient = pick_coef(rng);
    const int degree = pick_degree(rng);
    for (int d = 0; d < degree; ++d) mono.factors.push_back({orders[pick_order(rng)], pick_offset(rng)});
    terms.push_back(std::move(mono));
  }
  return polynomial_functional("random polynomial", std::move(terms));
}

Functional product(const Functional& f, const Functional& g) {
  Functional out;
  out.name = "(" + f.name + ")*(" + g.name + ")";
  out.eval = [f, g](const InvariantState& a) { return f(a) * g(a); };
  out.grad = [f, g](const InvariantState& a) { return f(a) * g.gradient(a) + g(a) * f.gradient(a); };
  out.kind = f.kind == GradKind::analytic && g.kind == GradKind::analytic ? GradKind::analytic
                                                                          : GradKind::finite_difference;
  return out;
}

Functional sum(const Functional& f, const Functional& g) {
  Functional out;
  out.name = "(" + f.name + ")+(" + g.name + ")";
  out.eval = [f, g](const InvariantState& a) { return f(a) + g(a); };
  out.grad = [f, g](const InvariantState& a) { return f.gradient(a) + g.gradient(a); };
  out.kind = f.kind == GradKind::analytic && g.kind == GradKind::analytic ? GradKind::analytic
                                                                          : GradKind::finite_difference;
  return out;
}

Functional scaled(const Functional& f, double c) {
  Functional out;
  out.name = std::to_string(c) + "*(" + f.name + ")";
  out.eval = [f, c](const InvariantState& a) { return c * f(a); };
  out.grad = [f, c](const InvariantState& a) { return c * f.gradient(a); };
  out.kind = f.kind;
  return out;
}

Op naive_variational_derivative(const CoordTable& grad) {
  if (grad.empty()) throw DomainError("empty gradient table");
  Op v(grad.begin()->second.period());
  for (const auto& [r, g] : grad) v.add_to_coeff(-r, shift(g, -r));
  return v;
}

Op variational_derivative(const CoordTable& grad, const InvariantState& a) {
  const int m = a.m();
  const std::size_t n = a.period();
  for (const auto& [r, g] : grad)
    if (!a.is_free(r) || g.period() != n) throw DomainError("gradient table does not match the state");

  Seq rhs(n);
  for (const auto& [r, g] : grad) {
    if (r == 0) continue;
    const Seq ga = g * a.coefficient(r);
    rhs += ga - shift(ga, -r);
  }
  // 1 - T^{-m} always has the constants in its kernel; the consistent
  // right-hand side has zero period sum and the minimum-norm solution is taken.
  const Seq x = solve_shift_polynomial<double>({{1.0, 0}, {-1.0, -m}}, rhs);

  Op v(n);
  for (const auto& [r, g] : grad) v.add_to_coeff(-r, shift(g, -r));
  v.add_to_coeff(-m, shift(x, -m));
  if (a.normalization() == Normalization::SL) {
    Seq s(n);
    for (const auto& [r, g] : grad) s += a.coefficient(r) * g;
    const double c = m % 2 == 1 ? 1.0 : -1.0;
    v.add_to_coeff(0, (x - s) * (1.0 / c));
  }
  return v;
}

Op variational_derivative(const Functional& f, const InvariantState& a) {
  return variational_derivative(f.gradient(a), a);
}

Op Z_s(const Op& d, int s, int m, Normalization norm, int floor) {
  if (s < 1) throw DomainError("hierarchy index s must be positive");
  const double w = static_cast<double>(s) / m;
  Op z = s == m ? Op::identity(d.period()).truncated(floor) : frac_power(d, s - m, m, floor);
  z *= w;
  if (norm == Normalization::SL) {
    const Seq tr = trace(frac_power(d, s, m, 0));
    z += Op::monomial(tr * (m % 2 == 0 ? w : -w), 0);
  }
  return z;
}

CoordTable hierarchy_gradient(const InvariantState& a, int s, int depth_margin) {
  const int m = a.m();
  const Op z = Z_s(from_invariants(a), s, m, a.normalization(), -m - depth_margin);
  CoordTable g;
  for (int r : a.free_orders()) g.emplace(r, shift(z.coeff(-r), r));
  return g;
}

Functional hierarchy_hamiltonian(int s, int depth_margin) {
  if (s < 1) throw DomainError("hierarchy index s must be positive");
  Functional f;
  f.name = "F_" + std::to_string(s);
  f.eval = [s, depth_margin](const InvariantState& a) {
    return period_sum(trace(frac_power(from_invariants(a), s, a.m(), -depth_margin)));
  };
  f.grad = [s, depth_margin](const InvariantState& a) { return hierarchy_gradient(a, s, depth_margin); };
  return f;
}

Functional boussinesq_hamiltonian() {
  auto check = [](const InvariantState& a) {
    if (!a.is_free(1)) throw DomainError("the Boussinesq Hamiltonian needs a free a^1 (m >= 2)");
    for (double v : a.free(1).values())
      if (!(v > 0.0)) throw DomainError("the Boussinesq Hamiltonian needs a^1_n > 0 for every n");
  };
  Functional f;
  f.name = "H";
  f.eval = [check](const InvariantState& a) {
    check(a);
    double h = 0.0;
    for (double v : a.free(1).values()) h += std::log(v);
    return h;
  };
  f.grad = [check](const InvariantState& a) {
    check(a);
    CoordTable g = zero_table(a);
    g.at(1) = Seq(a.period(), 1.0) / a.free(1);
    return g;
  };
  return f;
}

}  // namespace latw
