#pragma once

// Twisted polygons gamma_{n+N} = M gamma_n in R^m, their frames and the
// pre-symplectic forms that lift both brackets to polygonal vector fields.

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "latw/functional.hpp"
#include "latw/invariants.hpp"
#include "latw/laurent.hpp"

namespace latw {

/// N vectors in R^m extended to all of Z by values[n + N] = M values[n].
class TwistedSequence {
 public:
  TwistedSequence() = default;
  TwistedSequence(std::vector<Eigen::VectorXd> values, Eigen::MatrixXd monodromy);

  int dim() const { return static_cast<int>(monodromy_.rows()); }
  std::size_t period() const { return values_.size(); }
  const std::vector<Eigen::VectorXd>& values() const { return values_; }
  std::vector<Eigen::VectorXd>& values() { return values_; }
  const Eigen::MatrixXd& monodromy() const { return monodromy_; }

  /// Value at any integer index, applying the twist for indices outside [0, N).
  Eigen::VectorXd at(long n) const;

  double max_abs() const;

 private:
  std::vector<Eigen::VectorXd> values_;
  Eigen::MatrixXd monodromy_;
};

/// A vector field along a polygon; shares the polygon's twist.
using PolygonField = TwistedSequence;

class TwistedPolygon : public TwistedSequence {
 public:
  using TwistedSequence::TwistedSequence;

  int m() const { return dim(); }
  /// rho_n = (gamma_n, ..., gamma_{n+m-1}).
  Eigen::MatrixXd frame(long n) const;
  double frame_det(long n) const { return frame(n).determinant(); }
  /// gamma + t X, keeping the monodromy.
  TwistedPolygon displaced(const PolygonField& x, double t) const;
};

using FieldMap = std::function<PolygonField(const TwistedPolygon&)>;

/// Runs gamma_{n+m} = sum_{k<m} a^k_n gamma_{n+k} from the seed frame
/// (identity when absent) and derives M from rho_N = M rho_0.
TwistedPolygon reconstruct(const InvariantState& a, const std::optional<Eigen::MatrixXd>& seed = std::nullopt);

/// Coefficients of gamma_{n+m} in the frame rho_n, restricted to the free
/// orders of `norm`.
InvariantState invariants_from_polygon(const TwistedPolygon& g, Normalization norm);

double frame_det(const TwistedPolygon& g, long n);
/// theta_n(X) = det(X_n, gamma_{n+1}, ..., gamma_{n+m-1}).
double theta(const TwistedPolygon& g, long n, const PolygonField& x);
/// Q with rho_n Q = (X_n, ..., X_{n+m-1}).
Eigen::MatrixXd q_matrix(const TwistedPolygon& g, const PolygonField& x, long n);

/// Applies a finitely supported operator vertexwise with twisted wraparound.
PolygonField apply(const Op& l, const TwistedSequence& g);

/// Y^F = r(V D)(gamma) with V the reduced variational derivative at the
/// polygon's invariants.
PolygonField lift_hamiltonian_field(const Functional& f, const TwistedPolygon& g, Normalization norm);
FieldMap lifted_field_map(const Functional& f, Normalization norm);

/// X^{F_s} = (s/m)(P_+ + P_0)(gamma) with P = D^{s/m}, D built from all
/// coefficients of the polygon's recursion.
PolygonField hierarchy_field(const TwistedPolygon& g, int s);
FieldMap hierarchy_field_map(int s);

/// Rate of the free invariants when gamma moves along X (centered differences).
CoordTable induced_invariant_rate(const TwistedPolygon& g, const PolygonField& x, Normalization norm,
                                  double h = kDefaultFdStep);

/// omega_2(X^f, X^g) expressed in the invariant coordinates:
/// sum_n sum_{1<=r<s<=m} [a^0_n a^s_{n-r} f^r_{n-r} g^{s-r}_n - a^s_n a^0_{n+s-r} f^r_{n+s-r} g^{s-r}_n]
/// with a^m = -1. Only gradient orders 1..m-1 enter.
double omega2_closed_form(const CoordTable& grad_f, const CoordTable& grad_g, const InvariantState& a);
double omega2_closed_form(const Functional& f, const Functional& g, const InvariantState& a);

enum class OmegaForm { omega1, omega2 };

/// Evaluates omega_1(X, Y) or omega_2(X, Y) at gamma from their expressions in
/// theta_n and d_n. Directional derivatives and the commutator [Y, X] use
/// centered differences of step h on the vertex coordinates.
double omega_geometric(OmegaForm which, const FieldMap& x, const FieldMap& y, const TwistedPolygon& g,
                       double h = kDefaultFdStep);

}  // namespace latw
