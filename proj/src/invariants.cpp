#include "latw/invariants.hpp"

#include <numeric>

namespace latw {

std::string to_string(Normalization n) { return n == Normalization::GL ? "GL" : "SL"; }

Normalization parse_normalization(const std::string& s) {
  if (s == "GL") return Normalization::GL;
  if (s == "SL") return Normalization::SL;
  throw DomainError("unknown normalization '" + s + "' (expected GL or SL)");
}

InvariantState::InvariantState(int m, std::size_t period, Normalization norm, CoordTable a)
    : m_(m), period_(period), norm_(norm), a_(std::move(a)) {
  if (m < 1) throw DomainError("operator order m must be positive");
  if (period == 0) throw DomainError("period must be positive");
  const auto orders = free_orders();
  if (a_.size() != orders.size()) throw DomainError("state does not hold exactly the free coordinates");
  for (int r : orders) {
    auto it = a_.find(r);
    if (it == a_.end()) throw DomainError("missing free coordinate a^" + std::to_string(r));
    if (it->second.period() != period) throw PeriodMismatch("coordinate a^" + std::to_string(r) + " has wrong period");
  }
}

InvariantState InvariantState::zeros(int m, std::size_t period, Normalization norm) {
  CoordTable a;
  for (int r = norm == Normalization::GL ? 0 : 1; r < m; ++r) a.emplace(r, Seq(period));
  return InvariantState(m, period, norm, std::move(a));
}

InvariantState InvariantState::random(int m, std::size_t period, Normalization norm, std::mt19937_64& rng,
                                      double low, double high) {
  InvariantState s = zeros(m, period, norm);
  std::uniform_real_distribution<double> dist(low, high);
  for (auto& [r, seq] : s.a_)
    for (double& v : seq.values()) v = dist(rng);
  return s;
}

bool InvariantState::coprime() const { return std::gcd(static_cast<long>(period_), static_cast<long>(m_)) == 1; }

std::vector<int> InvariantState::free_orders() const {
  std::vector<int> out;
  for (int r = norm_ == Normalization::GL ? 0 : 1; r < m_; ++r) out.push_back(r);
  return out;
}

bool InvariantState::is_free(int r) const { return r < m_ && r >= (norm_ == Normalization::GL ? 0 : 1); }

const Seq& InvariantState::free(int r) const {
  auto it = a_.find(r);
  if (it == a_.end()) throw DomainError("a^" + std::to_string(r) + " is not a free coordinate");
  return it->second;
}

Seq& InvariantState::free(int r) {
  auto it = a_.find(r);
  if (it == a_.end()) throw DomainError("a^" + std::to_string(r) + " is not a free coordinate");
  return it->second;
}

Seq InvariantState::coefficient(int r) const {
  if (r == m_) return Seq(period_, -1.0);
  if (r == 0 && norm_ == Normalization::SL) return Seq(period_, m_ % 2 == 1 ? 1.0 : -1.0);
  if (r < 0 || r > m_) return Seq(period_);
  return free(r);
}

Eigen::VectorXd InvariantState::flatten() const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(dimension()));
  Eigen::Index i = 0;
  for (const auto& [r, seq] : a_)
    for (double v : seq.values()) x(i++) = v;
  return x;
}

InvariantState InvariantState::with_flat(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != dimension()) throw DomainError("flat vector has wrong dimension");
  InvariantState out = *this;
  Eigen::Index i = 0;
  for (auto& [r, seq] : out.a_)
    for (double& v : seq.values()) v = x(i++);
  return out;
}

InvariantState InvariantState::moved(const CoordTable& v, double t) const {
  InvariantState out = *this;
  for (auto& [r, seq] : out.a_) {
    auto it = v.find(r);
    if (it != v.end()) seq += it->second * t;
  }
  return out;
}

CoordTable zero_table(const InvariantState& a) {
  CoordTable t;
  for (int r : a.free_orders()) t.emplace(r, Seq(a.period()));
  return t;
}

double pair(const CoordTable& x, const CoordTable& y) {
  double s = 0.0;
  for (const auto& [r, seq] : x) {
    auto it = y.find(r);
    if (it != y.end()) s += period_sum(seq * it->second);
  }
  return s;
}

double max_abs(const CoordTable& x) {
  double m = 0.0;
  for (const auto& [r, seq] : x) m = std::max(m, seq.max_abs());
  return m;
}

CoordTable operator-(const CoordTable& x, const CoordTable& y) {
  CoordTable out = x;
  for (const auto& [r, seq] : y) {
    auto it = out.find(r);
    if (it == out.end())
      out.emplace(r, -seq);
    else
      it->second -= seq;
  }
  return out;
}

CoordTable operator+(const CoordTable& x, const CoordTable& y) {
  CoordTable out = x;
  for (const auto& [r, seq] : y) {
    auto it = out.find(r);
    if (it == out.end())
      out.emplace(r, seq);
    else
      it->second += seq;
  }
  return out;
}

CoordTable operator*(double c, const CoordTable& x) {
  CoordTable out = x;
  for (auto& [r, seq] : out) seq *= c;
  return out;
}

Op from_invariants(const InvariantState& a) {
  Op d(a.period());
  for (int r = 0; r <= a.m(); ++r) d.set_coeff(r, a.coefficient(r));
  return d;
}

}  // namespace latw
