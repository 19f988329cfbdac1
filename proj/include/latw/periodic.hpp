#pragma once

// N-periodic scalar sequences and the circulant solver behind root extraction.

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "latw/errors.hpp"

namespace latw {

template <class S>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

/// Floor modulus: result in [0, n).
inline std::size_t wrap_index(long i, std::size_t n) {
  const long len = static_cast<long>(n);
  long r = i % len;
  if (r < 0) r += len;
  return static_cast<std::size_t>(r);
}

/// A sequence u : Z -> S with u[n + N] = u[n], stored as one period.
template <class S>
class PeriodicSeq {
 public:
  using scalar_type = S;

  PeriodicSeq() = default;
  explicit PeriodicSeq(std::size_t period, S fill = S{}) : values_(period, fill) {
    if (period == 0) throw DomainError("period must be positive");
  }
  explicit PeriodicSeq(std::vector<S> values) : values_(std::move(values)) {
    if (values_.empty()) throw DomainError("period must be positive");
  }
  PeriodicSeq(std::initializer_list<S> values) : PeriodicSeq(std::vector<S>(values)) {}

  static PeriodicSeq constant(std::size_t period, S c) { return PeriodicSeq(period, c); }

  std::size_t period() const { return values_.size(); }

  /// Value at any integer index, reduced mod N.
  const S& operator[](long n) const { return values_[wrap_index(n, values_.size())]; }
  S& operator[](long n) { return values_[wrap_index(n, values_.size())]; }

  std::span<const S> values() const { return values_; }
  std::span<S> values() { return values_; }

  bool is_zero() const {
    for (const S& v : values_)
      if (v != S{}) return false;
    return true;
  }

  PeriodicSeq& operator+=(const PeriodicSeq& o) {
    check_period(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  PeriodicSeq& operator-=(const PeriodicSeq& o) {
    check_period(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  PeriodicSeq& operator*=(const PeriodicSeq& o) {
    check_period(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= o.values_[i];
    return *this;
  }
  PeriodicSeq& operator/=(const PeriodicSeq& o) {
    check_period(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] /= o.values_[i];
    return *this;
  }
  PeriodicSeq& operator*=(S c) {
    for (S& v : values_) v *= c;
    return *this;
  }
  PeriodicSeq& operator+=(S c) {
    for (S& v : values_) v += c;
    return *this;
  }

  friend PeriodicSeq operator+(PeriodicSeq a, const PeriodicSeq& b) { return a += b; }
  friend PeriodicSeq operator-(PeriodicSeq a, const PeriodicSeq& b) { return a -= b; }
  friend PeriodicSeq operator*(PeriodicSeq a, const PeriodicSeq& b) { return a *= b; }
  friend PeriodicSeq operator/(PeriodicSeq a, const PeriodicSeq& b) { return a /= b; }
  friend PeriodicSeq operator*(PeriodicSeq a, S c) { return a *= c; }
  friend PeriodicSeq operator*(S c, PeriodicSeq a) { return a *= c; }
  friend PeriodicSeq operator-(PeriodicSeq a) { return a *= S(-1); }

  friend bool operator==(const PeriodicSeq&, const PeriodicSeq&) = default;

  /// Largest |u[n]| over a period.
  double max_abs() const {
    double m = 0.0;
    for (const S& v : values_) m = std::max(m, static_cast<double>(std::abs(v)));
    return m;
  }

  void check_period(const PeriodicSeq& o) const {
    if (o.period() != period()) throw PeriodMismatch("periodic sequences with different periods");
  }

 private:
  std::vector<S> values_;
};

/// (shift(s, k))[n] = s[n + k]; the action of T^k.
template <class S>
PeriodicSeq<S> shift(const PeriodicSeq<S>& s, long k) {
  const std::size_t n = s.period();
  std::vector<S> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = s[static_cast<long>(i) + k];
  return PeriodicSeq<S>(std::move(out));
}

template <class S>
S period_sum(const PeriodicSeq<S>& s) {
  return std::accumulate(s.values().begin(), s.values().end(), S{});
}

/// One term c * T^e of a shift polynomial.
template <class S>
struct ShiftTerm {
  S coefficient;
  long exponent;
};

/// Dense N x N matrix of sum_j c_j T^{e_j} acting on period-N sequences.
template <class S>
Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> circulant_matrix(std::span<const ShiftTerm<S>> terms,
                                                                  std::size_t period) {
  const auto n = static_cast<Eigen::Index>(period);
  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> a = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (const auto& t : terms)
    for (Eigen::Index row = 0; row < n; ++row)
      a(row, static_cast<Eigen::Index>(wrap_index(row + t.exponent, period))) += t.coefficient;
  return a;
}

/// Factors sum_j c_j T^{e_j} once and solves it for many right-hand sides.
///
/// Singular but consistent systems return the minimum-norm solution; an
/// inconsistent right-hand side raises SingularSystem.
template <class S>
class ShiftPolynomialSolver {
 public:
  using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1>;

  ShiftPolynomialSolver(std::vector<ShiftTerm<S>> terms, std::size_t period)
      : terms_(std::move(terms)), period_(period), matrix_(circulant_matrix<S>(terms_, period)) {
    lu_.compute(matrix_);
    singular_ = !lu_.isInvertible();
    if (singular_) cod_.compute(matrix_);
  }

  bool singular() const { return singular_; }
  std::size_t period() const { return period_; }

  PeriodicSeq<S> solve(const PeriodicSeq<S>& rhs) const {
    if (rhs.period() != period_) throw PeriodMismatch("rhs period differs from the operator period");
    const auto n = static_cast<Eigen::Index>(period_);
    Vector b(n);
    for (Eigen::Index i = 0; i < n; ++i) b(i) = rhs[i];
    Vector x;
    if (!singular_) {
      x = lu_.solve(b);
    } else {
      x = cod_.solve(b);
      const double scale = std::max(1.0, static_cast<double>(b.norm()));
      if (static_cast<double>((matrix_ * x - b).norm()) > 1e-9 * scale)
        throw SingularSystem("shift polynomial is singular and the right-hand side is outside its range");
    }
    std::vector<S> out(period_);
    for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = x(i);
    return PeriodicSeq<S>(std::move(out));
  }

 private:
  std::vector<ShiftTerm<S>> terms_;
  std::size_t period_;
  Matrix matrix_;
  Eigen::FullPivLU<Matrix> lu_;
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod_;
  bool singular_ = false;
};

/// Returns x with sum_j c_j shift(x, e_j) = rhs.
template <class S>
PeriodicSeq<S> solve_shift_polynomial(std::vector<ShiftTerm<S>> terms, const PeriodicSeq<S>& rhs) {
  return ShiftPolynomialSolver<S>(std::move(terms), rhs.period()).solve(rhs);
}

template <class S>
bool shift_polynomial_singular(std::vector<ShiftTerm<S>> terms, std::size_t period) {
  return ShiftPolynomialSolver<S>(std::move(terms), period).singular();
}

/// Terms of 1 + T + ... + T^{m-1}.
template <class S>
std::vector<ShiftTerm<S>> geometric_shift_sum(int m) {
  std::vector<ShiftTerm<S>> t;
  for (int p = 0; p < m; ++p) t.push_back({S(1), p});
  return t;
}

using Seq = PeriodicSeq<double>;
using ComplexSeq = PeriodicSeq<std::complex<double>>;

}  // namespace latw
