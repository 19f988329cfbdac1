#pragma once

// Laurent operators sum_i b^i T^i with N-periodic coefficients.
//
// Every operator carries a "valid floor": coefficients at orders >= floor are
// exact, anything below is unknown (discarded by truncation). Products,
// inverses and roots propagate the floor, and reading a coefficient below it
// throws InsufficientDepth, so no truncated value is ever returned silently.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "latw/errors.hpp"
#include "latw/periodic.hpp"

namespace latw {

enum class Part { plus, minus, zero, nonnegative };

template <class S>
class LaurentOp {
 public:
  using scalar_type = S;
  using seq_type = PeriodicSeq<S>;

  /// Sentinel floor of a finitely supported operator with no truncation.
  static constexpr int kExact = std::numeric_limits<int>::min() / 4;

  LaurentOp() = default;
  explicit LaurentOp(std::size_t period, int valid_floor = kExact) : period_(period), valid_floor_(valid_floor) {
    if (period == 0) throw DomainError("period must be positive");
  }

  static LaurentOp monomial(const seq_type& c, int order) {
    LaurentOp op(c.period());
    op.set_coeff(order, c);
    return op;
  }
  static LaurentOp identity(std::size_t period) { return monomial(seq_type::constant(period, S(1)), 0); }
  /// T^k with unit coefficient.
  static LaurentOp shift_power(std::size_t period, int k) { return monomial(seq_type::constant(period, S(1)), k); }

  std::size_t period() const { return period_; }
  bool is_zero() const { return coeffs_.empty(); }
  bool exact() const { return valid_floor_ == kExact; }
  int valid_floor() const { return valid_floor_; }

  /// Highest stored order. For the zero operator this is valid_floor() - 1.
  int max_order() const { return is_zero() ? valid_floor_ - 1 : lo_ + static_cast<int>(coeffs_.size()) - 1; }
  /// Lowest stored (nonzero) order. For the zero operator this is max_order() + 1.
  int min_order() const { return is_zero() ? valid_floor_ : lo_; }

  /// Coefficient of T^k; zero outside the stored range.
  seq_type coeff(int k) const {
    if (k < valid_floor_)
      throw InsufficientDepth("coefficient of order " + std::to_string(k) + " lies below the certified floor " +
                              std::to_string(valid_floor_));
    if (is_zero() || k < lo_ || k > max_order()) return seq_type(period_);
    return coeffs_[static_cast<std::size_t>(k - lo_)];
  }

  void set_coeff(int k, seq_type c) {
    c.check_period(seq_type(period_));
    if (k < valid_floor_) throw InsufficientDepth("cannot set a coefficient below the certified floor");
    if (is_zero()) {
      if (c.is_zero()) return;
      lo_ = k;
      coeffs_.assign(1, std::move(c));
      return;
    }
    grow_to(k);
    coeffs_[static_cast<std::size_t>(k - lo_)] = std::move(c);
    trim();
  }

  void add_to_coeff(int k, const seq_type& c) {
    if (k < valid_floor_) return;
    if (is_zero()) {
      set_coeff(k, c);
      return;
    }
    grow_to(k);
    coeffs_[static_cast<std::size_t>(k - lo_)] += c;
    trim();
  }

  /// Drops orders below `floor` and records that they are unknown.
  LaurentOp truncated(int floor) const {
    LaurentOp out(period_, std::max(floor, valid_floor_));
    for_each([&](int k, const seq_type& c) {
      if (k >= out.valid_floor_) out.set_coeff(k, c);
    });
    return out;
  }

  /// Marks the operator as certified only down to `floor` (no data change above it).
  LaurentOp with_floor(int floor) const { return truncated(floor); }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) f(lo_ + static_cast<int>(i), coeffs_[i]);
  }

  LaurentOp& operator+=(const LaurentOp& o) {
    check_period(o);
    const int vf = std::max(valid_floor_, o.valid_floor_);
    LaurentOp out = truncated(vf);
    o.for_each([&](int k, const seq_type& c) { out.add_to_coeff(k, c); });
    return *this = std::move(out);
  }
  LaurentOp& operator-=(const LaurentOp& o) { return *this += -o; }
  LaurentOp& operator*=(S c) {
    if (c == S{}) return *this = LaurentOp(period_, valid_floor_);
    for (auto& s : coeffs_) s *= c;
    return *this;
  }

  friend LaurentOp operator+(LaurentOp a, const LaurentOp& b) { return a += b; }
  friend LaurentOp operator-(LaurentOp a, const LaurentOp& b) { return a -= b; }
  friend LaurentOp operator-(LaurentOp a) { return a *= S(-1); }
  friend LaurentOp operator*(LaurentOp a, S c) { return a *= c; }
  friend LaurentOp operator*(S c, LaurentOp a) { return a *= c; }
  friend LaurentOp operator*(const LaurentOp& a, const LaurentOp& b) { return multiply(a, b, kExact); }

  void check_period(const LaurentOp& o) const {
    if (o.period_ != period_) throw PeriodMismatch("operators with different periods");
  }

  /// (aT^i)(bT^j) = a shift(b, i) T^{i+j}, keeping only orders >= floor that
  /// the operands determine exactly.
  friend LaurentOp multiply(const LaurentOp& a, const LaurentOp& b, int floor) {
    a.check_period(b);
    const long top_a = a.max_order();
    const long top_b = b.max_order();
    long vf = floor;
    if (!a.exact()) vf = std::max<long>(vf, static_cast<long>(a.valid_floor_) + top_b);
    if (!b.exact()) vf = std::max<long>(vf, static_cast<long>(b.valid_floor_) + top_a);
    if (vf <= kExact) vf = kExact;
    LaurentOp out(a.period_, static_cast<int>(vf));
    if (a.is_zero() || b.is_zero()) return out;
    const long lo = std::max<long>(vf, static_cast<long>(a.lo_) + b.lo_);
    const long hi = top_a + top_b;
    if (hi < lo) return out;
    std::vector<seq_type> acc(static_cast<std::size_t>(hi - lo + 1), seq_type(a.period_));
    const std::size_t n = a.period_;
    for (std::size_t ia = 0; ia < a.coeffs_.size(); ++ia) {
      const int i = a.lo_ + static_cast<int>(ia);
      const auto& ca = a.coeffs_[ia];
      for (std::size_t ib = 0; ib < b.coeffs_.size(); ++ib) {
        const long k = static_cast<long>(i) + b.lo_ + static_cast<long>(ib);
        if (k < lo) continue;
        const auto& cb = b.coeffs_[ib];
        auto dst = acc[static_cast<std::size_t>(k - lo)].values();
        for (std::size_t t = 0; t < n; ++t) dst[t] += ca.values()[t] * cb[static_cast<long>(t) + i];
      }
    }
    for (std::size_t t = 0; t < acc.size(); ++t) out.add_to_coeff(static_cast<int>(lo + static_cast<long>(t)), acc[t]);
    return out;
  }

 private:
  void grow_to(int k) {
    if (k < lo_) {
      coeffs_.insert(coeffs_.begin(), static_cast<std::size_t>(lo_ - k), seq_type(period_));
      lo_ = k;
    } else if (k > max_order()) {
      coeffs_.resize(static_cast<std::size_t>(k - lo_ + 1), seq_type(period_));
    }
  }

  void trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    std::size_t drop = 0;
    while (drop < coeffs_.size() && coeffs_[drop].is_zero()) ++drop;
    if (drop > 0) {
      coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(drop));
      lo_ += static_cast<int>(drop);
    }
  }

  std::size_t period_ = 1;
  int lo_ = 0;
  std::vector<seq_type> coeffs_;
  int valid_floor_ = kExact;
};

using Op = LaurentOp<double>;
using ComplexOp = LaurentOp<std::complex<double>>;

template <class S>
LaurentOp<S> project(const LaurentOp<S>& l, Part part) {
  auto keep = [part](int k) {
    switch (part) {
      case Part::plus: return k >= 1;
      case Part::minus: return k <= -1;
      case Part::zero: return k == 0;
      case Part::nonnegative: return k >= 0;
    }
    return false;
  };
  // Parts lying entirely above the floor are known exactly.
  int vf = l.valid_floor();
  if ((part == Part::plus && vf <= 1) || ((part == Part::zero || part == Part::nonnegative) && vf <= 0))
    vf = LaurentOp<S>::kExact;
  LaurentOp<S> out(l.period(), vf);
  l.for_each([&](int k, const PeriodicSeq<S>& c) {
    if (keep(k)) out.set_coeff(k, c);
  });
  return out;
}

/// r(L) = (L_+ - L_-) / 2.
template <class S>
LaurentOp<S> r_map(const LaurentOp<S>& l) {
  return (project(l, Part::plus) - project(l, Part::minus)) * S(0.5);
}

/// r^+(L) = L_+ + L_0 / 2.
template <class S>
LaurentOp<S> r_plus(const LaurentOp<S>& l) {
  return project(l, Part::plus) + project(l, Part::zero) * S(0.5);
}

/// Order-zero coefficient.
template <class S>
PeriodicSeq<S> trace(const LaurentOp<S>& l) {
  return l.coeff(0);
}

/// <A, B> = sum over one period of Tr(AB).
template <class S>
S inner_product(const LaurentOp<S>& a, const LaurentOp<S>& b) {
  return period_sum(trace(multiply(a, b, 0)));
}

/// Largest coefficient difference over the orders both operands certify.
template <class S>
double max_abs_diff(const LaurentOp<S>& a, const LaurentOp<S>& b) {
  a.check_period(b);
  const int lo = std::max({a.valid_floor(), b.valid_floor(), std::min(a.min_order(), b.min_order())});
  const int hi = std::max(a.max_order(), b.max_order());
  double d = 0.0;
  for (int k = lo; k <= hi; ++k) d = std::max(d, (a.coeff(k) - b.coeff(k)).max_abs());
  return d;
}

/// Inverse series down to order `floor`; requires the top coefficient to be
/// nowhere zero.
template <class S>
LaurentOp<S> invert(const LaurentOp<S>& l, int floor) {
  if (l.is_zero()) throw NonInvertible("zero operator");
  const int k = l.max_order();
  const auto& top = l.coeff(k);
  for (const S& v : top.values())
    if (v == S{}) throw NonInvertible("leading coefficient vanishes somewhere");
  const std::size_t n = l.period();
  const long certified = l.exact() ? LaurentOp<S>::kExact : -2L * k + l.valid_floor();
  const int vf = static_cast<int>(std::max<long>(floor, certified));
  LaurentOp<S> out(n, vf);
  const auto inv_top = PeriodicSeq<S>::constant(n, S(1)) / top;
  // Result coefficients r_p at order -k - p.
  std::vector<PeriodicSeq<S>> r;
  r.push_back(shift(inv_top, -k));
  for (int p = 1; -k - p >= vf; ++p) {
    PeriodicSeq<S> acc(n);
    for (int q = 0; q < p; ++q) {
      const int i = k - p + q;
      if (i < l.min_order()) continue;
      acc += l.coeff(i) * shift(r[static_cast<std::size_t>(q)], i);
    }
    r.push_back(shift(-(acc * inv_top), -k));
  }
  for (std::size_t p = 0; p < r.size(); ++p) {
    const int order = -k - static_cast<int>(p);
    if (order >= vf) out.set_coeff(order, r[p]);
  }
  return out;
}

/// p-th power (p >= 1) certified down to `floor`.
template <class S>
LaurentOp<S> power(const LaurentOp<S>& l, int p, int floor) {
  if (p < 1) throw DomainError("power exponent must be positive");
  // Each remaining factor lifts the certified floor by its top order.
  const int lift = std::max(l.max_order(), 0);
  LaurentOp<S> out = l;
  for (int i = 1; i < p; ++i) out = multiply(out, l, floor - (p - 1 - i) * lift);
  return out.truncated(std::max(floor, out.valid_floor()));
}

inline int gcd_int(int a, int b) { return std::gcd(std::abs(a), std::abs(b)); }

/// Leading coefficient c of the m-th root, c^m = -1.
template <class S>
S root_leading_coefficient(int m) {
  if (m % 2 == 1) return S(-1);
  if constexpr (is_complex<S>::value) {
    using R = typename S::value_type;
    return std::polar(R(1), std::numbers::pi_v<R> / static_cast<R>(m));
  } else {
    throw BranchUnavailable("no real solution of c^m = -1 for even m; use the complex scalar field");
  }
}

/// Floor to which mth_root must be carried so that R^s is certified down to
/// `floor` (s may be negative).
inline int root_floor_for_power(int s, int floor) {
  if (s > 0) return floor - (s - 1);
  const int p = -s;
  return floor - (p - 1) + 2;
}

/// R with R^m = D: R = c T + r_0 + r_{-1} T^{-1} + ..., certified down to
/// `floor`, so that R^m reproduces D down to floor + m - 1.
template <class S>
LaurentOp<S> mth_root(const LaurentOp<S>& d, int m, int floor) {
  if (m < 1) throw DomainError("root order must be positive");
  if (d.max_order() != m) throw DomainError("operator order differs from the root order");
  const PeriodicSeq<S> lead = d.coeff(m);
  for (const S& v : lead.values())
    if (std::abs(v + S(1)) > 1e-12) throw DomainError("leading coefficient must be the constant -1");
  const std::size_t n = d.period();
  if (gcd_int(static_cast<int>(n), m) != 1)
    throw SingularSystem("gcd(N, m) != 1: 1 + T + ... + T^{m-1} is singular");
  const S c = root_leading_coefficient<S>(m);
  if (floor > 1) floor = 1;
  // D known down to valid_floor bounds the deepest order we can peel.
  const int deepest = d.exact() ? floor : std::max(floor, d.valid_floor() - m + 1);

  LaurentOp<S> root = LaurentOp<S>::monomial(PeriodicSeq<S>::constant(n, c), 1);
  if (m == 1) return root.truncated(deepest) + d.truncated(deepest) - LaurentOp<S>::monomial(d.coeff(1), 1);

  const ShiftPolynomialSolver<S> solver(geometric_shift_sum<S>(m), n);
  S c_pow = S(1);
  for (int i = 0; i < m - 1; ++i) c_pow *= c;
  const S scale = S(1) / c_pow;

  for (int q = 0; -q >= deepest; ++q) {
    const int target = m - 1 - q;
    LaurentOp<S> pw = root;
    for (int i = 1; i < m; ++i) pw = multiply(pw, root, target - (m - 1 - i));
    const PeriodicSeq<S> residual = d.coeff(target) - pw.coeff(target);
    root.set_coeff(-q, solver.solve(residual * scale));
  }
  return root.with_floor(deepest);
}

/// D^{s/m} certified down to `floor`; negative s goes through invert.
template <class S>
LaurentOp<S> frac_power(const LaurentOp<S>& d, int s, int m, int floor) {
  if (s == 0) throw DomainError("fractional exponent numerator must be nonzero");
  const LaurentOp<S> root = mth_root(d, m, root_floor_for_power(s, floor));
  LaurentOp<S> out;
  if (s > 0) {
    out = power(root, s, floor);
  } else {
    const int p = -s;
    out = power(invert(root, floor - (p - 1)), p, floor);
  }
  if (out.valid_floor() > floor)
    throw InsufficientDepth("fractional power not certified to the requested floor");
  return out.truncated(floor);
}

/// Quasi-periodic scalar sequence: u_{n+N} = multiplier * u_n.
template <class S>
struct QuasiPeriodicSeq {
  std::vector<S> values;
  S multiplier{1};

  S at(long n) const {
    const long len = static_cast<long>(values.size());
    long q = n / len;
    long r = n % len;
    if (r < 0) {
      r += len;
      --q;
    }
    S f{1};
    if (q >= 0)
      for (long i = 0; i < q; ++i) f *= multiplier;
    else
      for (long i = 0; i < -q; ++i) f /= multiplier;
    return f * values[static_cast<std::size_t>(r)];
  }
};

/// Applies a finitely supported operator to a quasi-periodic sequence.
template <class S>
QuasiPeriodicSeq<S> apply(const LaurentOp<S>& l, const QuasiPeriodicSeq<S>& u) {
  if (!l.exact()) throw InsufficientDepth("only finitely supported operators can be applied");
  if (u.values.size() != l.period()) throw PeriodMismatch("sequence period differs from operator period");
  QuasiPeriodicSeq<S> out{std::vector<S>(u.values.size(), S{}), u.multiplier};
  l.for_each([&](int k, const PeriodicSeq<S>& c) {
    for (std::size_t n = 0; n < u.values.size(); ++n)
      out.values[n] += c[static_cast<long>(n)] * u.at(static_cast<long>(n) + k);
  });
  return out;
}

}  // namespace latw
