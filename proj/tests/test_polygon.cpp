#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "latw/brackets.hpp"
#include "latw/errors.hpp"
#include "latw/polygon.hpp"
#include "oracle.hpp"

using latw::Functional;
using latw::InvariantState;
using latw::Normalization;
using latw::PolygonField;
using latw::TwistedPolygon;

namespace {

double sign_m1(int m) { return m % 2 == 1 ? 1.0 : -1.0; }

PolygonField random_field(const TwistedPolygon& g, std::mt19937_64& rng) {
  std::vector<Eigen::VectorXd> v;
  for (std::size_t k = 0; k < g.period(); ++k) {
    const latw::Seq s = oracle::random_seq(static_cast<std::size_t>(g.m()), rng);
    Eigen::VectorXd x(g.m());
    for (int i = 0; i < g.m(); ++i) x(i) = s[i];
    v.push_back(x);
  }
  return PolygonField(std::move(v), g.monodromy());
}

}  // namespace

TEST_CASE("m = 2 reconstruction by hand") {
  auto a = InvariantState::zeros(2, 3, Normalization::SL);
  a.free(1) = latw::Seq{0.5, 2.0, -1.0};
  const TwistedPolygon g = reconstruct(a);
  CHECK(g.at(0).isApprox(Eigen::Vector2d(1.0, 0.0)));
  CHECK(g.at(1).isApprox(Eigen::Vector2d(0.0, 1.0)));
  CHECK(g.at(2).isApprox(Eigen::Vector2d(-1.0, 0.5)));
  CHECK(g.at(3).isApprox(Eigen::Vector2d(-2.0, 0.0)));
}

TEST_CASE("reconstructed polygons satisfy their recursion and twist everywhere") {
  std::mt19937_64 rng(40);
  for (int m : {2, 3, 4})
    for (auto norm : {Normalization::GL, Normalization::SL}) {
      const auto a = InvariantState::random(m, 5, norm, rng);
      const TwistedPolygon g = reconstruct(a);
      for (long n = -7; n < 12; ++n) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
        for (int k = 0; k < m; ++k) rhs += a.coefficient(k)[n] * g.at(n + k);
        CHECK((g.at(n + m) - rhs).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, rhs.cwiseAbs().maxCoeff()));
        CHECK((g.at(n + 5) - g.monodromy() * g.at(n)).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
}

TEST_CASE("frame determinants track a^0") {
  std::mt19937_64 rng(41);
  for (int m : {2, 3, 4}) {
    const auto a = InvariantState::random(m, 4, Normalization::GL, rng);
    const TwistedPolygon g = reconstruct(a);
    for (long n = 0; n < 4; ++n) {
      Eigen::MatrixXd f(m, m);
      for (int k = 0; k < m; ++k) f.col(k) = g.at(n + k);
      CHECK(latw::frame_det(g, n) == doctest::Approx(f.determinant()));
      CHECK(a.coefficient(0)[n] == doctest::Approx(sign_m1(m) * g.frame_det(n + 1) / g.frame_det(n)));
    }
    const TwistedPolygon s = reconstruct(InvariantState::random(m, 4, Normalization::SL, rng));
    for (long n = -2; n < 6; ++n) CHECK(s.frame_det(n) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("invariants are recovered and are projectively invariant") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (auto norm : {Normalization::GL, Normalization::SL}) {
    const auto a = InvariantState::random(3, 5, norm, rng);
    const TwistedPolygon g = reconstruct(a);
    CHECK(latw::max_abs(latw::invariants_from_polygon(g, norm).free() - a.free()) < 1e-10);
    CHECK(latw::apply(latw::from_invariants(a), g).max_abs() < 1e-10);
    Eigen::Matrix3d x = Eigen::Matrix3d::Identity();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) x(r, c) += u(rng);
    std::vector<Eigen::VectorXd> moved;
    for (const auto& v : g.values()) moved.push_back(x * v);
    const TwistedPolygon gx(std::move(moved), x * g.monodromy() * x.inverse());
    CHECK(latw::max_abs(latw::invariants_from_polygon(gx, norm).free() - a.free()) < 1e-10);
  }
}

TEST_CASE("a degenerate seed is rejected") {
  const auto a = InvariantState::zeros(3, 4, Normalization::GL);
  CHECK_THROWS_AS(reconstruct(a, Eigen::MatrixXd::Zero(3, 3)), latw::DegenerateSeed);
}

TEST_CASE("theta and Q from their defining determinants") {
  std::mt19937_64 rng(43);
  const auto a = InvariantState::random(3, 4, Normalization::GL, rng);
  const TwistedPolygon g = reconstruct(a);
  const PolygonField x = random_field(g, rng);
  for (long n = 0; n < 4; ++n) {
    Eigen::Matrix3d f;
    f << x.at(n), g.at(n + 1), g.at(n + 2);
    CHECK(latw::theta(g, n, x) == doctest::Approx(f.determinant()));
    Eigen::Matrix3d xs;
    xs << x.at(n), x.at(n + 1), x.at(n + 2);
    CHECK((g.frame(n) * latw::q_matrix(g, x, n) - xs).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("applying an operator to a polygon matches the vertexwise sum") {
  std::mt19937_64 rng(44);
  const auto a = InvariantState::random(3, 4, Normalization::GL, rng);
  const TwistedPolygon g = reconstruct(a);
  const latw::Op l = oracle::random_op(4, -2, 3, rng);
  const PolygonField y = latw::apply(l, g);
  for (long n = 0; n < 4; ++n) {
    Eigen::VectorXd ref = Eigen::VectorXd::Zero(3);
    for (int k = -2; k <= 3; ++k) ref += l.coeff(k)[n] * g.at(n + k);
    CHECK((y.at(n) - ref).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("lifted fields induce the bracket-1 Hamiltonian field on SL states") {
  std::mt19937_64 rng(45);
  const auto a = InvariantState::random(3, 5, Normalization::SL, rng);
  const Functional f = latw::random_polynomial(a, rng);
  const TwistedPolygon g = reconstruct(a);
  const auto rate = latw::induced_invariant_rate(g, latw::lift_hamiltonian_field(f, g, Normalization::SL),
                                                 Normalization::SL);
  CHECK(latw::max_abs(rate - latw::hamiltonian_field(f, a, latw::BracketId::quadratic())) < 1e-6);
}

TEST_CASE("hierarchy fields induce the F_s flows") {
  std::mt19937_64 rng(46);
  const auto a = InvariantState::random(3, 4, Normalization::SL, rng);
  const TwistedPolygon g = reconstruct(a);
  for (int s : {1, 2}) {
    const auto rate = latw::induced_invariant_rate(g, latw::hierarchy_field(g, s), Normalization::SL);
    CHECK(latw::max_abs(rate - latw::hamiltonian_field(latw::hierarchy_hamiltonian(s), a,
                                                       latw::BracketId::quadratic())) < 1e-6);
  }
}

TEST_CASE("omega_2 closed form reproduces bracket 2 with swapped arguments") {
  std::mt19937_64 rng(47);
  for (auto norm : {Normalization::GL, Normalization::SL}) {
    const auto a = InvariantState::random(3, 5, norm, rng);
    const Functional f = latw::random_polynomial(a, rng), g = latw::random_polynomial(a, rng);
    CHECK(latw::omega2_closed_form(f, g, a) == doctest::Approx(latw::bracket2(g, f, a)).epsilon(1e-10));
    const TwistedPolygon p = reconstruct(a);
    const double geo = latw::omega_geometric(latw::OmegaForm::omega2, latw::lifted_field_map(g, norm),
                                             latw::lifted_field_map(f, norm), p);
    CHECK(std::abs(geo - latw::bracket2(f, g, a)) < 1e-4);
  }
}

TEST_CASE("omega_1 reproduces bracket 1 on SL polygons") {
  std::mt19937_64 rng(48);
  for (std::size_t n : {4u, 5u}) {
    const auto a = InvariantState::random(3, n, Normalization::SL, rng);
    const Functional f = latw::random_polynomial(a, rng), g = latw::random_polynomial(a, rng);
    const TwistedPolygon p = reconstruct(a);
    const double geo = latw::omega_geometric(latw::OmegaForm::omega1, latw::lifted_field_map(f, Normalization::SL),
                                             latw::lifted_field_map(g, Normalization::SL), p);
    CHECK(std::abs(geo - latw::bracket1(f, g, a)) < 1e-4);
  }
}
