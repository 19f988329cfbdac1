#pragma once

// The quadratic bracket, its linear companion, the pencil they span and the
// Hamiltonian vector fields they generate on invariant coordinates.

#include <string>

#include "latw/functional.hpp"
#include "latw/invariants.hpp"
#include "latw/laurent.hpp"

namespace latw {

struct BracketId {
  enum class Kind { quadratic, linear, pencil };
  Kind kind = Kind::quadratic;
  double lambda = 1.0;

  static BracketId quadratic() { return {Kind::quadratic, 1.0}; }
  static BracketId linear() { return {Kind::linear, 1.0}; }
  static BracketId pencil(double lambda) { return {Kind::pencil, lambda}; }
  /// "1", "2" or "pencil:<lambda>".
  static BracketId parse(const std::string& s);
  std::string to_string() const;
};

enum class RMatrix { r, r_plus };
enum class LinearForm { general, special_linear };
enum class PencilMethod { pushforward, linear_combination };

/// D_t = r(DV) D - D r(VD), or the same with r^+ in place of r.
Op quadratic_rate(const Op& d, const Op& v, RMatrix which = RMatrix::r);
/// E(V) = (D_+ V_-)_+ D_0 - D_0 (V_- D_+)_+.
Op linear_rate(const Op& d, const Op& v);

double bracket1(const Op& d, const Op& v, const Op& w, RMatrix which = RMatrix::r);
double bracket2(const Op& d, const Op& v, const Op& w, LinearForm form = LinearForm::general);

double bracket1(const Functional& f, const Functional& g, const InvariantState& a, RMatrix which = RMatrix::r);
/// The special_linear form evaluates (-1)^{m-1} <[D_+, V_-]_+, W>; it agrees
/// with the general form at states whose a^0 equals (-1)^{m-1}.
double bracket2(const Functional& f, const Functional& g, const InvariantState& a,
                LinearForm form = LinearForm::general);

/// {F,G}_lambda. Requires a GL state; pushforward also requires lambda != 0.
double bracket_pencil(const Functional& f, const Functional& g, const InvariantState& a, double lambda,
                      PencilMethod method = PencilMethod::linear_combination);

double bracket(const Functional& f, const Functional& g, const InvariantState& a, const BracketId& b);

/// da/dt over the free coordinates, oriented so that pair(grad G, da/dt) = {F, G}_b.
CoordTable hamiltonian_field(const Functional& f, const InvariantState& a, const BracketId& b);

/// {{F,G},H} + {{G,H},F} + {{H,F},G}, with the outer gradients of the inner
/// bracket values taken by centered differences of step h.
double jacobi_residual(const Functional& f, const Functional& g, const Functional& h, const InvariantState& a,
                       const BracketId& b, double step = kDefaultFdStep);

/// The functional a -> {F,G}_b(a) with a finite-difference gradient.
Functional bracket_functional(const Functional& f, const Functional& g, const BracketId& b,
                              double step = kDefaultFdStep);

}  // namespace latw
