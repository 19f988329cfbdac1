#pragma once

// Invariant coordinates a^r_n of monic difference operators
//   D = -T^m + a^{m-1} T^{m-1} + ... + a^1 T + a^0.

#include <map>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "latw/laurent.hpp"
#include "latw/periodic.hpp"

namespace latw {

/// GL: a^0 free. SL: a^0 fixed to (-1)^{m-1}.
enum class Normalization { GL, SL };

std::string to_string(Normalization n);
Normalization parse_normalization(const std::string& s);

/// Sequences keyed by coordinate order r; used for states, gradients and tangents.
using CoordTable = std::map<int, Seq>;

class InvariantState {
 public:
  InvariantState() = default;
  /// `a` must hold exactly the free orders of the normalization.
  InvariantState(int m, std::size_t period, Normalization norm, CoordTable a);

  static InvariantState zeros(int m, std::size_t period, Normalization norm);
  /// Free coordinates i.i.d. uniform in [low, high].
  static InvariantState random(int m, std::size_t period, Normalization norm, std::mt19937_64& rng, double low = -1.0,
                               double high = 1.0);

  int m() const { return m_; }
  std::size_t period() const { return period_; }
  Normalization normalization() const { return norm_; }
  bool coprime() const;

  /// Orders r of the free coordinates, ascending.
  std::vector<int> free_orders() const;
  bool is_free(int r) const;
  const CoordTable& free() const { return a_; }
  const Seq& free(int r) const;
  Seq& free(int r);

  /// Full coefficient of T^r, including the fixed ones (a^m = -1, SL a^0).
  Seq coefficient(int r) const;

  std::size_t dimension() const { return a_.size() * period_; }
  /// Free coordinates in (r, n) lexicographic order.
  Eigen::VectorXd flatten() const;
  InvariantState with_flat(const Eigen::VectorXd& x) const;
  /// a + t * v over the free coordinates.
  InvariantState moved(const CoordTable& v, double t) const;

 private:
  int m_ = 1;
  std::size_t period_ = 1;
  Normalization norm_ = Normalization::GL;
  CoordTable a_;
};

/// Table of zero sequences on the free orders of `a`.
CoordTable zero_table(const InvariantState& a);
/// sum_r sum_n x[r][n] y[r][n] over the keys of x.
double pair(const CoordTable& x, const CoordTable& y);
double max_abs(const CoordTable& x);
CoordTable operator-(const CoordTable& x, const CoordTable& y);
CoordTable operator+(const CoordTable& x, const CoordTable& y);
CoordTable operator*(double c, const CoordTable& x);

/// D = -T^m + sum_r a^r T^r honoring the normalization.
Op from_invariants(const InvariantState& a);

}  // namespace latw
