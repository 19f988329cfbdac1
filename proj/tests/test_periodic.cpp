#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "latw/errors.hpp"
#include "latw/periodic.hpp"
#include "oracle.hpp"

using latw::Seq;

TEST_CASE("shift rotates indices and fixes constants") {
  const Seq s{1.0, 2.0, 5.0};
  const Seq r = latw::shift(s, 1);
  CHECK(r[0] == 2.0);
  CHECK(r[1] == 5.0);
  CHECK(r[2] == 1.0);
  const Seq c = Seq::constant(5, 3.5);
  for (long k : {-7L, -1L, 0L, 2L, 11L}) CHECK((latw::shift(c, k) - c).max_abs() == 0.0);
}

TEST_CASE("shift by the period is the identity, index by index") {
  std::mt19937_64 rng(1);
  for (std::size_t n : {1u, 2u, 5u, 8u}) {
    const Seq s = oracle::random_seq(n, rng);
    const Seq t = latw::shift(s, static_cast<long>(n));
    for (long i = 0; i < static_cast<long>(n); ++i) CHECK(t[i] == s[i]);
    const Seq u = latw::shift(s, -3);
    for (long i = 0; i < static_cast<long>(n); ++i) CHECK(u[i] == s[oracle::wrap(i - 3, static_cast<long>(n))]);
  }
}

TEST_CASE("period_sum") {
  CHECK(latw::period_sum(Seq::constant(4, 2.5)) == doctest::Approx(10.0));
  CHECK(latw::period_sum(Seq{1.0, -1.0, 1.0, -1.0}) == 0.0);
}

TEST_CASE("sequences of different periods do not mix") {
  CHECK_THROWS_AS(Seq(3) + Seq(4), latw::PeriodMismatch);
  CHECK_THROWS_AS(Seq(0), latw::DomainError);
}

TEST_CASE("identity shift polynomial returns the right-hand side") {
  std::mt19937_64 rng(2);
  const Seq rhs = oracle::random_seq(6, rng);
  const Seq x = latw::solve_shift_polynomial(std::vector<latw::ShiftTerm<double>>{{1.0, 0}}, rhs);
  CHECK((x - rhs).max_abs() < 1e-15);
}

TEST_CASE("1 + T + T^2 on N = 3: constants solvable, other right-hand sides singular") {
  const auto terms = latw::geometric_shift_sum<double>(3);
  const Seq x = latw::solve_shift_polynomial(terms, Seq::constant(3, 3.0));
  CHECK((x - Seq::constant(3, 1.0)).max_abs() < 1e-12);
  CHECK_THROWS_AS(latw::solve_shift_polynomial(terms, Seq{1.0, -2.0, 1.0}), latw::SingularSystem);
}

TEST_CASE("1 + T + T^2 on N = 4 agrees with a dense solve") {
  std::mt19937_64 rng(3);
  const auto terms = latw::geometric_shift_sum<double>(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Seq rhs = oracle::random_seq(4, rng);
    const Seq x = latw::solve_shift_polynomial(terms, rhs);
    const Seq ref = oracle::shift_polynomial_solve({{1.0, 0}, {1.0, 1}, {1.0, 2}}, rhs);
    CHECK((x - ref).max_abs() < 1e-12);
  }
}

TEST_CASE("general shift polynomial with negative exponents agrees with a dense solve") {
  std::mt19937_64 rng(4);
  const std::vector<latw::ShiftTerm<double>> terms{{2.0, 0}, {-0.5, -2}, {0.25, 3}};
  const Seq rhs = oracle::random_seq(7, rng);
  const Seq x = latw::solve_shift_polynomial(terms, rhs);
  const Seq ref = oracle::shift_polynomial_solve({{2.0, 0}, {-0.5, -2}, {0.25, 3}}, rhs);
  CHECK((x - ref).max_abs() < 1e-12);
}

TEST_CASE("geometric circulant is singular exactly when gcd(N, m) > 1") {
  const auto terms = latw::geometric_shift_sum<double>(3);
  CHECK_FALSE(latw::shift_polynomial_singular(terms, 4));
  CHECK(latw::shift_polynomial_singular(terms, 3));
  CHECK_FALSE(latw::shift_polynomial_singular(terms, 5));
  CHECK(latw::shift_polynomial_singular(terms, 6));
}

TEST_CASE("complex sequences solve the same systems") {
  using C = std::complex<double>;
  const latw::ComplexSeq rhs{C(1.0, 2.0), C(-1.0, 0.5), C(0.0, -1.0), C(2.0, 0.0)};
  const auto terms = latw::geometric_shift_sum<C>(3);
  const latw::ComplexSeq x = latw::solve_shift_polynomial(terms, rhs);
  latw::ComplexSeq back(4);
  for (const auto& t : terms) back += latw::shift(x, t.exponent) * t.coefficient;
  CHECK((back - rhs).max_abs() < 1e-12);
}
