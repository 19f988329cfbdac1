#pragma once

// Scalar functionals of the invariant coordinates and their operator-valued
// variational derivatives.

#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "latw/invariants.hpp"
#include "latw/laurent.hpp"

namespace latw {

enum class GradKind { analytic, finite_difference };

inline constexpr double kDefaultFdStep = 1e-5;

/// A functional f(a) with gradient table grad[r][n] = d f / d a^r_n.
///
/// Pairing invariant: pair(grad(a), v) is the directional derivative of eval
/// along v over the free coordinates.
struct Functional {
  std::string name;
  std::function<double(const InvariantState&)> eval;
  std::function<CoordTable(const InvariantState&)> grad;
  GradKind kind = GradKind::analytic;

  double operator()(const InvariantState& a) const { return eval(a); }
  CoordTable gradient(const InvariantState& a) const { return grad(a); }
};

/// Centered differences over every free coordinate.
CoordTable finite_difference_grad(const Functional& f, const InvariantState& a, double h = kDefaultFdStep);
CoordTable finite_difference_grad(const std::function<double(const InvariantState&)>& f, const InvariantState& a,
                                  double h = kDefaultFdStep);

/// Wraps a bare evaluation with a finite-difference gradient.
Functional numeric_functional(std::string name, std::function<double(const InvariantState&)> eval,
                              double h = kDefaultFdStep);

/// One factor a^r_{n+k} of a monomial density.
struct Factor {
  int order;
  int offset;
};

/// coefficient * sum_n prod_i a^{r_i}_{n + k_i}.
struct Monomial {
  double coefficient = 1.0;
  std::vector<Factor> factors;
};

Functional polynomial_functional(std::string name, std::vector<Monomial> terms);
/// sum_r sum_n w^r_n a^r_n.
Functional linear_functional(std::string name, const CoordTable& weights);
Functional constant_functional(double c);
/// Random polynomial of degree <= max_degree in the free coordinates of `shape`.
Functional random_polynomial(const InvariantState& shape, std::mt19937_64& rng, int n_terms = 3, int max_degree = 3);

Functional product(const Functional& f, const Functional& g);
Functional sum(const Functional& f, const Functional& g);
Functional scaled(const Functional& f, double c);

/// sum_r T^{-r} g_r with no gauge terms.
Op naive_variational_derivative(const CoordTable& grad);

/// Gauge-reduced variational derivative of a functional with gradient `grad`.
///
/// V = sum_r T^{-r} g_r + T^{-m} x with (1 - T^{-m}) x = sum_{r>=1} (g_r a^r - T^{-r}(g_r a^r)),
/// so that Tr[V, D] = 0. Under SL the order-0 term is fixed by Tr(DV) = 0.
/// Pairing invariant: <V, dD> = pair(grad, da) for every admissible direction.
Op variational_derivative(const CoordTable& grad, const InvariantState& a);
Op variational_derivative(const Functional& f, const InvariantState& a);

/// Extra root depth used by the hierarchy functionals beyond the minimum.
inline constexpr int kDefaultDepthMargin = 2;

/// F_s(D) = sum_n Tr D^{s/m} with analytic gradient read off Z^s.
Functional hierarchy_hamiltonian(int s, int depth_margin = kDefaultDepthMargin);

/// Z^s = (s/m) D^{(s-m)/m}, plus (-1)^m (s/m) Tr D^{s/m} under SL, certified down to `floor`.
Op Z_s(const Op& d, int s, int m, Normalization norm, int floor);

/// Gradient of F_s over the free coordinates of `a`.
CoordTable hierarchy_gradient(const InvariantState& a, int s, int depth_margin = kDefaultDepthMargin);

/// H = sum_n ln a^1_n. Raises DomainError if some a^1_n <= 0.
Functional boussinesq_hamiltonian();

}  // namespace latw
