#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "latw/brackets.hpp"
#include "latw/errors.hpp"
#include "oracle.hpp"

using latw::BracketId;
using latw::Functional;
using latw::InvariantState;
using latw::Normalization;
using latw::Op;

namespace {

constexpr int kBig = 1 << 20;
constexpr long kDenseSize = 40;

double dense_gap(const Op& op, const Eigen::MatrixXd& m, int lo, int hi) {
  double d = 0.0;
  for (int k = lo; k <= hi; ++k) d = std::max(d, (op.coeff(k) - oracle::diagonal(m, k, op.period())).max_abs());
  return d;
}

double scale_of(double x) { return std::max(1.0, std::abs(x)); }

}  // namespace

TEST_CASE("bracket identifiers round trip through text") {
  CHECK(BracketId::parse("1").kind == BracketId::Kind::quadratic);
  CHECK(BracketId::parse("2").kind == BracketId::Kind::linear);
  const BracketId p = BracketId::parse("pencil:2.5");
  CHECK(p.kind == BracketId::Kind::pencil);
  CHECK(p.lambda == 2.5);
  CHECK(BracketId::parse(p.to_string()).lambda == 2.5);
  CHECK_THROWS_AS(BracketId::parse("3"), latw::DomainError);
  CHECK_THROWS_AS(BracketId::parse("pencil:x"), latw::DomainError);
}

TEST_CASE("quadratic rate agrees with the dense r-matrix model") {
  std::mt19937_64 rng(30);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = InvariantState::random(3, 4, Normalization::GL, rng);
    const Op d = latw::from_invariants(a);
    const Op v = oracle::random_op(4, -4, 0, rng);
    const Op w = oracle::random_op(4, -4, 0, rng);
    const auto dd = oracle::dense(d, kDenseSize), dv = oracle::dense(v, kDenseSize);
    const Eigen::MatrixXd rate = oracle::r_map(dd * dv) * dd - dd * oracle::r_map(dv * dd);
    const Op got = latw::quadratic_rate(d, v);
    CHECK(dense_gap(got, rate, -4, 6) < 1e-13);
    const double ref = oracle::pairing(rate, oracle::dense(w, kDenseSize), 4);
    CHECK(latw::bracket1(d, v, w) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("linear rate agrees with the dense projection model") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = InvariantState::random(3, 5, Normalization::GL, rng);
    const Op d = latw::from_invariants(a);
    const Op v = oracle::random_op(5, -4, 0, rng);
    const auto dd = oracle::dense(d, kDenseSize), dv = oracle::dense(v, kDenseSize);
    const Eigen::MatrixXd dp = oracle::band(dd, 1, kBig), d0 = oracle::band(dd, 0, 0);
    const Eigen::MatrixXd vm = oracle::band(dv, -kBig, -1);
    const Eigen::MatrixXd rate = oracle::band(dp * vm, 1, kBig) * d0 - d0 * oracle::band(vm * dp, 1, kBig);
    CHECK(dense_gap(latw::linear_rate(d, v), rate, -4, 6) < 1e-13);
  }
}

TEST_CASE("r and r^+ define the same bracket on functionals") {
  std::mt19937_64 rng(32);
  for (auto norm : {Normalization::GL, Normalization::SL}) {
    const auto a = InvariantState::random(3, 4, norm, rng);
    const Functional f = latw::random_polynomial(a, rng), g = latw::random_polynomial(a, rng);
    const double b = latw::bracket1(f, g, a);
    CHECK(latw::bracket1(f, g, a, latw::RMatrix::r_plus) == doctest::Approx(b).epsilon(1e-10));
  }
}

TEST_CASE("brackets are antisymmetric and Leibniz") {
  std::mt19937_64 rng(33);
  for (const BracketId& id : {BracketId::quadratic(), BracketId::linear(), BracketId::pencil(-0.7)}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto a = InvariantState::random(3, 5, Normalization::GL, rng);
      const Functional f = latw::random_polynomial(a, rng), g = latw::random_polynomial(a, rng),
                       h = latw::random_polynomial(a, rng);
      const double fg = latw::bracket(f, g, a, id);
      CHECK(std::abs(fg + latw::bracket(g, f, a, id)) < 1e-13 * scale_of(fg));
      const double lhs = latw::bracket(f, latw::product(g, h), a, id);
      const double rhs = g(a) * latw::bracket(f, h, a, id) + h(a) * fg;
      CHECK(std::abs(lhs - rhs) < 1e-10 * scale_of(lhs));
    }
  }
}

TEST_CASE("the special linear form agrees with the general one on SL states") {
  std::mt19937_64 rng(34);
  for (int m : {3, 5}) {
    const auto a = InvariantState::random(m, 4, Normalization::SL, rng);
    const Functional f = latw::random_polynomial(a, rng), g = latw::random_polynomial(a, rng);
    const double b = latw::bracket2(f, g, a);
    CHECK(latw::bracket2(f, g, a, latw::LinearForm::special_linear) == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("Hamiltonian fields pair with gradients to give the bracket") {
  std::mt19937_64 rng(35);
  for (const BracketId& id : {BracketId::quadratic(), BracketId::linear(), BracketId::pencil(2.0)}) {
    const auto a = InvariantState::random(3, 4, Normalization::GL, rng);
    const Functional f = latw::random_polynomial(a, rng), g = latw::random_polynomial(a, rng);
    const double b = latw::bracket(f, g, a, id);
    CHECK(latw::pair(g.gradient(a), latw::hamiltonian_field(f, a, id)) == doctest::Approx(b).epsilon(1e-10));
  }
}

TEST_CASE("pencil is affine in lambda and both evaluation routes agree") {
  std::mt19937_64 rng(36);
  const auto a = InvariantState::random(3, 4, Normalization::GL, rng);
  const Functional f = latw::hierarchy_hamiltonian(1), g = latw::random_polynomial(a, rng);
  const double b1 = latw::bracket1(f, g, a), b2 = latw::bracket2(f, g, a);
  for (double lambda : {0.5, 2.0, 3.0}) {
    const double lin = latw::bracket_pencil(f, g, a, lambda);
    CHECK(lin == doctest::Approx(b1 + (lambda - 1.0) * b2).epsilon(1e-12));
    const double push = latw::bracket_pencil(f, g, a, lambda, latw::PencilMethod::pushforward);
    CHECK(std::abs(push - lin) < 1e-6 * scale_of(lin));
  }
  CHECK_THROWS_AS(latw::bracket_pencil(f, g, a, 0.0, latw::PencilMethod::pushforward), latw::ZeroLambda);
}

TEST_CASE("Jacobi identity holds to finite-difference accuracy") {
  std::mt19937_64 rng(37);
  for (const BracketId& id : {BracketId::quadratic(), BracketId::linear()}) {
    const auto a = InvariantState::random(3, 4, Normalization::GL, rng);
    const Functional f = latw::random_polynomial(a, rng), g = latw::random_polynomial(a, rng),
                     h = latw::random_polynomial(a, rng);
    CHECK(std::abs(latw::jacobi_residual(f, g, h, a, id)) < 1e-5);
  }
}

TEST_CASE("hierarchy Hamiltonians are in involution for both brackets") {
  std::mt19937_64 rng(38);
  const auto a = InvariantState::random(3, 5, Normalization::SL, rng);
  for (int s : {1, 2})
    for (int t : {2, 4, 5}) {
      if (s == t) continue;
      const Functional f = latw::hierarchy_hamiltonian(s), g = latw::hierarchy_hamiltonian(t);
      CHECK(std::abs(latw::bracket1(f, g, a)) < 1e-10);
      CHECK(std::abs(latw::bracket2(f, g, a)) < 1e-10);
    }
}
