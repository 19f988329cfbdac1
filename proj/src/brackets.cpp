#include "latw/brackets.hpp"

#include <sstream>

namespace latw {

BracketId BracketId::parse(const std::string& s) {
  if (s == "1") return quadratic();
  if (s == "2") return linear();
  const std::string prefix = "pencil:";
  if (s.rfind(prefix, 0) == 0) {
    const std::string tail = s.substr(prefix.size());
    try {
      std::size_t used = 0;
      const double lambda = std::stod(tail, &used);
      if (used == tail.size()) return pencil(lambda);
    } catch (const std::exception&) {
    }
  }
  throw DomainError("unknown bracket '" + s + "' (expected 1, 2 or pencil:<lambda>)");
}

std::string BracketId::to_string() const {
  switch (kind) {
    case Kind::quadratic: return "1";
    case Kind::linear: return "2";
    case Kind::pencil: {
      std::ostringstream os;
      os << "pencil:" << lambda;
      return os.str();
    }
  }
  return "?";
}

Op quadratic_rate(const Op& d, const Op& v, RMatrix which) {
  auto rr = [which](const Op& l) { return which == RMatrix::r ? r_map(l) : r_plus(l); };
  return rr(d * v) * d - d * rr(v * d);
}

Op linear_rate(const Op& d, const Op& v) {
  const Op d0 = project(d, Part::zero);
  const Op dp = project(d, Part::plus);
  const Op vm = project(v, Part::minus);
  return project(dp * vm, Part::plus) * d0 - d0 * project(vm * dp, Part::plus);
}

double bracket1(const Op& d, const Op& v, const Op& w, RMatrix which) {
  return inner_product(quadratic_rate(d, v, which), w);
}

double bracket2(const Op& d, const Op& v, const Op& w, LinearForm form) {
  if (form == LinearForm::general) return inner_product(linear_rate(d, v), w);
  const Op dp = project(d, Part::plus);
  const Op vm = project(v, Part::minus);
  const int m = d.max_order();
  const double sign = m % 2 == 1 ? 1.0 : -1.0;
  return sign * inner_product(project(dp * vm - vm * dp, Part::plus), w);
}

double bracket1(const Functional& f, const Functional& g, const InvariantState& a, RMatrix which) {
  return bracket1(from_invariants(a), variational_derivative(f, a), variational_derivative(g, a), which);
}

double bracket2(const Functional& f, const Functional& g, const InvariantState& a, LinearForm form) {
  return bracket2(from_invariants(a), variational_derivative(f, a), variational_derivative(g, a), form);
}

double bracket_pencil(const Functional& f, const Functional& g, const InvariantState& a, double lambda,
                      PencilMethod method) {
  if (a.normalization() != Normalization::GL) throw DomainError("the pencil moves a^0 and needs a GL state");
  if (method == PencilMethod::linear_combination)
    return bracket1(f, g, a) + (lambda - 1.0) * bracket2(f, g, a);
  if (lambda == 0.0) throw ZeroLambda("the push-forward map is undefined at lambda = 0");
  // phi_lambda^{-1} scales a^0 by lambda; F o phi_lambda has its a^0 gradient divided by lambda.
  InvariantState pre = a;
  pre.free(0) *= lambda;
  CoordTable gf = f.gradient(a);
  CoordTable gg = g.gradient(a);
  gf.at(0) *= 1.0 / lambda;
  gg.at(0) *= 1.0 / lambda;
  return bracket1(from_invariants(pre), variational_derivative(gf, pre), variational_derivative(gg, pre));
}

double bracket(const Functional& f, const Functional& g, const InvariantState& a, const BracketId& b) {
  switch (b.kind) {
    case BracketId::Kind::quadratic: return bracket1(f, g, a);
    case BracketId::Kind::linear: return bracket2(f, g, a);
    case BracketId::Kind::pencil: return bracket_pencil(f, g, a, b.lambda);
  }
  return 0.0;
}

namespace {

CoordTable read_coordinates(const Op& rate, const InvariantState& a) {
  CoordTable out;
  for (int r : a.free_orders()) out.emplace(r, rate.coeff(r));
  return out;
}

CoordTable quadratic_field(const Op& d, const Op& v, const InvariantState& a) {
  Op rate = quadratic_rate(d, v);
  if (a.normalization() == Normalization::GL) {
    // Restore the T^m coefficient with an infinitesimal gauge [D, u], u of order 0.
    const Seq tau = rate.coeff(a.m());
    const Seq u = solve_shift_polynomial<double>({{1.0, a.m()}, {-1.0, 0}}, tau);
    const Op uo = Op::monomial(u, 0);
    rate += d * uo - uo * d;
  }
  return read_coordinates(rate, a);
}

}  // namespace

CoordTable hamiltonian_field(const Functional& f, const InvariantState& a, const BracketId& b) {
  const Op d = from_invariants(a);
  const Op v = variational_derivative(f, a);
  switch (b.kind) {
    case BracketId::Kind::quadratic: return quadratic_field(d, v, a);
    case BracketId::Kind::linear: return read_coordinates(linear_rate(d, v), a);
    case BracketId::Kind::pencil:
      if (a.normalization() != Normalization::GL) throw DomainError("the pencil moves a^0 and needs a GL state");
      return quadratic_field(d, v, a) + (b.lambda - 1.0) * read_coordinates(linear_rate(d, v), a);
  }
  return {};
}

Functional bracket_functional(const Functional& f, const Functional& g, const BracketId& b, double step) {
  return numeric_functional("{" + f.name + "," + g.name + "}_" + b.to_string(),
                            [f, g, b](const InvariantState& a) { return bracket(f, g, a, b); }, step);
}

double jacobi_residual(const Functional& f, const Functional& g, const Functional& h, const InvariantState& a,
                       const BracketId& b, double step) {
  return bracket(bracket_functional(f, g, b, step), h, a, b) + bracket(bracket_functional(g, h, b, step), f, a, b) +
         bracket(bracket_functional(h, f, b, step), g, a, b);
}

}  // namespace latw
