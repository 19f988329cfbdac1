#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "latw/errors.hpp"
#include "latw/invariants.hpp"
#include "latw/laurent.hpp"
#include "oracle.hpp"

using latw::Op;
using latw::Part;
using latw::Seq;

namespace {

double dense_gap(const Op& op, const Eigen::MatrixXd& m, int lo, int hi) {
  double d = 0.0;
  for (int k = lo; k <= hi; ++k) d = std::max(d, (op.coeff(k) - oracle::diagonal(m, k, op.period())).max_abs());
  return d;
}

/// r^times with no truncation beyond what the operands' own floors impose.
Op repeated_product(const Op& r, int times) {
  Op out = r;
  for (int i = 1; i < times; ++i) out = multiply(out, r, Op::kExact);
  return out;
}

}  // namespace

TEST_CASE("T times T^{-1} is the identity") {
  const Op t = Op::shift_power(5, 1);
  const Op ti = Op::shift_power(5, -1);
  CHECK(latw::max_abs_diff(t * ti, Op::identity(5)) == 0.0);
}

TEST_CASE("composition rule (aT)(bT^2) = a shift(b,1) T^3") {
  const Op a = Op::monomial(Seq{1.0, 2.0}, 1);
  const Op b = Op::monomial(Seq{3.0, 4.0}, 2);
  const Op p = a * b;
  CHECK(p.max_order() == 3);
  CHECK(p.min_order() == 3);
  CHECK(p.coeff(3)[0] == 4.0);
  CHECK(p.coeff(3)[1] == 6.0);
}

TEST_CASE("products agree with the dense matrix model") {
  std::mt19937_64 rng(10);
  for (std::size_t n : {1u, 3u, 4u}) {
    const long p = static_cast<long>(n) * static_cast<long>((24 + n - 1) / n);
    for (int trial = 0; trial < 10; ++trial) {
      const Op a = oracle::random_op(n, -3, 2, rng);
      const Op b = oracle::random_op(n, -2, 3, rng);
      const Eigen::MatrixXd ref = oracle::dense(a, p) * oracle::dense(b, p);
      CHECK(dense_gap(a * b, ref, -5, 5) < 1e-13);
    }
  }
}

TEST_CASE("trace pairing agrees with the dense model and is ad-invariant") {
  std::mt19937_64 rng(11);
  const std::size_t n = 4;
  const long p = 40;
  for (int trial = 0; trial < 20; ++trial) {
    const Op a = oracle::random_op(n, -3, 3, rng);
    const Op b = oracle::random_op(n, -3, 3, rng);
    const Op c = oracle::random_op(n, -3, 3, rng);
    const auto da = oracle::dense(a, p), db = oracle::dense(b, p), dc = oracle::dense(c, p);
    CHECK(latw::inner_product(a, b) == doctest::Approx(oracle::pairing(da, db, n)).epsilon(1e-12));
    CHECK(std::abs(latw::inner_product(a, b) - latw::inner_product(b, a)) < 1e-12);
    CHECK(std::abs(latw::inner_product(a * b, c) - latw::inner_product(a, b * c)) < 1e-12);
  }
}

TEST_CASE("trace of a pure shift is zero") {
  for (int k : {-3, -1, 1, 2}) CHECK(latw::trace(Op::monomial(Seq{1.0, 2.0, 3.0}, k)).is_zero());
  CHECK(latw::trace(Op::monomial(Seq{1.0, 2.0, 3.0}, 0)) == Seq{1.0, 2.0, 3.0});
}

TEST_CASE("projections") {
  const Seq one = Seq::constant(3, 1.0);
  const Op l = Op::monomial(one * 3.0, 0) + Op::monomial(one * 2.0, 1) + Op::monomial(one * 5.0, -1);
  CHECK(latw::max_abs_diff(latw::project(l, Part::plus), Op::monomial(one * 2.0, 1)) == 0.0);
  CHECK(latw::max_abs_diff(latw::project(l, Part::zero), Op::monomial(one * 3.0, 0)) == 0.0);
  CHECK(latw::max_abs_diff(latw::project(l, Part::minus), Op::monomial(one * 5.0, -1)) == 0.0);
  CHECK(latw::project(latw::project(l, Part::plus), Part::minus).is_zero());
  CHECK(latw::max_abs_diff(latw::project(l, Part::nonnegative),
                           latw::project(l, Part::plus) + latw::project(l, Part::zero)) == 0.0);
}

TEST_CASE("r-matrix") {
  const Seq one = Seq::constant(4, 1.0);
  const Op l = Op::monomial(one, 1) + Op::monomial(one, -1);
  const Op expected = Op::monomial(one * 0.5, 1) - Op::monomial(one * 0.5, -1);
  CHECK(latw::max_abs_diff(latw::r_map(l), expected) == 0.0);
  CHECK(latw::r_map(Op::monomial(Seq{1.0, 2.0, 3.0, 4.0}, 0)).is_zero());

  std::mt19937_64 rng(12);
  const Op x = oracle::random_op(4, -3, 3, rng);
  const auto ref = oracle::r_map(oracle::dense(x, 32));
  CHECK(dense_gap(latw::r_map(x), ref, -3, 3) < 1e-15);
}

TEST_CASE("inverse of cT and of the identity") {
  const Seq c{2.0, -4.0, 0.5};
  const Op inv = latw::invert(Op::monomial(c, 1), -6);
  const Seq expected = latw::shift(Seq::constant(3, 1.0) / c, -1);
  CHECK(inv.max_order() == -1);
  CHECK((inv.coeff(-1) - expected).max_abs() < 1e-15);
  for (int k = -6; k < -1; ++k) CHECK(inv.coeff(k).is_zero());
  CHECK(latw::max_abs_diff(latw::invert(Op::identity(3), -5), Op::identity(3)) < 1e-15);
}

TEST_CASE("inverse of a difference operator to its certified floor") {
  std::mt19937_64 rng(13);
  const auto a = latw::InvariantState::random(3, 4, latw::Normalization::GL, rng);
  const Op d = latw::from_invariants(a);
  const Op inv = latw::invert(d, -10);
  const Op one = multiply(d, inv, -7);
  for (int k = one.valid_floor(); k <= 3; ++k) {
    const Seq expected = k == 0 ? Seq::constant(4, 1.0) : Seq(4);
    CHECK((one.coeff(k) - expected).max_abs() < 1e-11);
  }
}

TEST_CASE("reading below the certified floor raises InsufficientDepth") {
  const Op t(3, -2);
  CHECK_NOTHROW(t.coeff(-2));
  CHECK_THROWS_AS(t.coeff(-3), latw::InsufficientDepth);
}

TEST_CASE("root of -T^3 is -T exactly") {
  const Op d = -Op::shift_power(4, 3);
  const Op r = latw::mth_root(d, 3, -8);
  CHECK(latw::max_abs_diff(r, -Op::shift_power(4, 1)) == 0.0);
  const Op sq = latw::frac_power(d, 2, 3, -8);
  CHECK(latw::max_abs_diff(sq, Op::shift_power(4, 2)) < 1e-15);
}

TEST_CASE("root extraction requires co-prime N and m") {
  const Op d = -Op::shift_power(3, 3) + Op::monomial(Seq{0.3, -0.2, 0.1}, 1);
  CHECK_THROWS_AS(latw::mth_root(d, 3, -6), latw::SingularSystem);
  const Op d6 = -Op::shift_power(6, 3);
  CHECK_THROWS_AS(latw::mth_root(d6, 3, -6), latw::SingularSystem);
}

TEST_CASE("root of a random operator reproduces it under repeated products") {
  std::mt19937_64 rng(14);
  for (std::size_t n : {4u, 5u, 7u}) {
    const auto a = latw::InvariantState::random(3, n, latw::Normalization::GL, rng);
    const Op d = latw::from_invariants(a);
    const int floor = -9;
    const Op r = latw::mth_root(d, 3, floor);
    CHECK(r.max_order() == 1);
    CHECK((r.coeff(1) - Seq::constant(n, -1.0)).max_abs() == 0.0);
    const Op cube = repeated_product(r, 3);
    CHECK(cube.valid_floor() <= floor + 2);
    for (int k = floor + 2; k <= 3; ++k) CHECK((cube.coeff(k) - d.coeff(k)).max_abs() < 1e-11);
  }
}

TEST_CASE("fractional powers compose") {
  std::mt19937_64 rng(15);
  const auto a = latw::InvariantState::random(3, 5, latw::Normalization::SL, rng);
  const Op d = latw::from_invariants(a);
  const Op one = multiply(latw::frac_power(d, -1, 3, -9), latw::frac_power(d, 1, 3, -8), -8);
  for (int k = -8; k <= 1; ++k) CHECK((one.coeff(k) - (k == 0 ? Seq::constant(5, 1.0) : Seq(5))).max_abs() < 1e-11);
  const Op two = latw::frac_power(d, 2, 3, -6);
  const Op one_sq = multiply(latw::frac_power(d, 1, 3, -8), latw::frac_power(d, 1, 3, -8), -6);
  for (int k = -6; k <= 2; ++k) CHECK((two.coeff(k) - one_sq.coeff(k)).max_abs() < 1e-11);
}

TEST_CASE("even order needs the complex field") {
  std::mt19937_64 rng(16);
  const auto a = latw::InvariantState::random(2, 3, latw::Normalization::GL, rng);
  const Op d = latw::from_invariants(a);
  CHECK_THROWS_AS(latw::mth_root(d, 2, -6), latw::BranchUnavailable);

  latw::ComplexOp dc(3);
  d.for_each([&](int k, const Seq& c) {
    latw::ComplexSeq z(3);
    for (long i = 0; i < 3; ++i) z[i] = c[i];
    dc.set_coeff(k, z);
  });
  const latw::ComplexOp r = latw::mth_root(dc, 2, -6);
  const std::complex<double> lead = r.coeff(1)[0];
  CHECK(std::abs(lead - std::polar(1.0, M_PI / 2.0)) < 1e-15);
  const latw::ComplexOp sq = multiply(r, r, -5);
  for (int k = -5; k <= 2; ++k) {
    latw::ComplexSeq diff = sq.coeff(k) - dc.coeff(k);
    CHECK(diff.max_abs() < 1e-11);
  }
}

TEST_CASE("odd-order real and complex roots coincide") {
  std::mt19937_64 rng(17);
  const auto a = latw::InvariantState::random(3, 4, latw::Normalization::GL, rng);
  const Op d = latw::from_invariants(a);
  latw::ComplexOp dc(4);
  d.for_each([&](int k, const Seq& c) {
    latw::ComplexSeq z(4);
    for (long i = 0; i < 4; ++i) z[i] = c[i];
    dc.set_coeff(k, z);
  });
  const Op r = latw::mth_root(d, 3, -7);
  const latw::ComplexOp rc = latw::mth_root(dc, 3, -7);
  for (int k = -7; k <= 1; ++k)
    for (long i = 0; i < 4; ++i) CHECK(std::abs(rc.coeff(k)[i] - r.coeff(k)[i]) < 1e-12);
}

TEST_CASE("operators of different periods do not mix") {
  CHECK_THROWS_AS(Op::identity(3) + Op::identity(4), latw::PeriodMismatch);
  CHECK_THROWS_AS(Op::identity(3) * Op::identity(4), latw::PeriodMismatch);
}
