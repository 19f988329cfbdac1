#include "latw/polygon.hpp"

#include <cmath>

namespace latw {

namespace {

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& m, long q) {
  Eigen::MatrixXd base = q >= 0 ? m : m.inverse();
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  for (long i = 0; i < std::abs(q); ++i) out = base * out;
  return out;
}

/// |det| small relative to the product of column norms.
bool near_singular(const Eigen::MatrixXd& a) {
  double scale = 1.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) scale *= a.col(j).norm();
  return scale == 0.0 || std::abs(a.determinant()) <= 1e-12 * scale;
}

}  // namespace

TwistedSequence::TwistedSequence(std::vector<Eigen::VectorXd> values, Eigen::MatrixXd monodromy)
    : values_(std::move(values)), monodromy_(std::move(monodromy)) {
  if (values_.empty()) throw DomainError("a twisted sequence needs at least one value");
  if (monodromy_.rows() != monodromy_.cols()) throw DomainError("monodromy must be square");
  for (const auto& v : values_)
    if (v.size() != monodromy_.rows()) throw DomainError("value dimension differs from the monodromy size");
}

Eigen::VectorXd TwistedSequence::at(long n) const {
  const long len = static_cast<long>(values_.size());
  long q = n / len;
  long r = n % len;
  if (r < 0) {
    r += len;
    --q;
  }
  const Eigen::VectorXd& v = values_[static_cast<std::size_t>(r)];
  if (q == 0) return v;
  return matrix_power(monodromy_, q) * v;
}

double TwistedSequence::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, v.cwiseAbs().maxCoeff());
  return m;
}

Eigen::MatrixXd TwistedPolygon::frame(long n) const {
  Eigen::MatrixXd rho(m(), m());
  for (int k = 0; k < m(); ++k) rho.col(k) = at(n + k);
  return rho;
}

TwistedPolygon TwistedPolygon::displaced(const PolygonField& x, double t) const {
  if (x.period() != period() || x.dim() != dim()) throw PeriodMismatch("field does not match the polygon");
  std::vector<Eigen::VectorXd> v = values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += t * x.values()[i];
  return TwistedPolygon(std::move(v), monodromy());
}

TwistedPolygon reconstruct(const InvariantState& a, const std::optional<Eigen::MatrixXd>& seed) {
  const int m = a.m();
  const std::size_t n = a.period();
  const Eigen::MatrixXd rho0 = seed.value_or(Eigen::MatrixXd::Identity(m, m));
  if (rho0.rows() != m || rho0.cols() != m) throw DegenerateSeed("seed must be an m x m matrix");
  if (near_singular(rho0)) throw DegenerateSeed("seed frame is singular");

  std::vector<Eigen::VectorXd> g(n + static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) g[static_cast<std::size_t>(k)] = rho0.col(k);
  std::vector<Seq> coef;
  for (int k = 0; k < m; ++k) coef.push_back(a.coefficient(k));
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(m);
    for (int k = 0; k < m; ++k) next += coef[static_cast<std::size_t>(k)][static_cast<long>(i)] * g[i + static_cast<std::size_t>(k)];
    g[i + static_cast<std::size_t>(m)] = next;
  }
  Eigen::MatrixXd rho_n(m, m);
  for (int k = 0; k < m; ++k) rho_n.col(k) = g[n + static_cast<std::size_t>(k)];
  const Eigen::MatrixXd monodromy = rho_n * rho0.inverse();
  g.resize(n);
  return TwistedPolygon(std::move(g), monodromy);
}

InvariantState invariants_from_polygon(const TwistedPolygon& g, Normalization norm) {
  const int m = g.m();
  const std::size_t n = g.period();
  InvariantState out = InvariantState::zeros(m, n, norm);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::MatrixXd rho = g.frame(static_cast<long>(i));
    if (near_singular(rho)) throw DegenerateFrame("frame " + std::to_string(i) + " is singular");
    const Eigen::VectorXd c = rho.fullPivLu().solve(g.at(static_cast<long>(i) + m));
    for (int r : out.free_orders()) out.free(r)[static_cast<long>(i)] = c(r);
  }
  return out;
}

double frame_det(const TwistedPolygon& g, long n) { return g.frame_det(n); }

double theta(const TwistedPolygon& g, long n, const PolygonField& x) {
  Eigen::MatrixXd rho = g.frame(n);
  rho.col(0) = x.at(n);
  return rho.determinant();
}

Eigen::MatrixXd q_matrix(const TwistedPolygon& g, const PolygonField& x, long n) {
  const Eigen::MatrixXd rho = g.frame(n);
  if (near_singular(rho)) throw DegenerateFrame("frame " + std::to_string(n) + " is singular");
  Eigen::MatrixXd rhs(g.m(), g.m());
  for (int k = 0; k < g.m(); ++k) rhs.col(k) = x.at(n + k);
  return rho.fullPivLu().solve(rhs);
}

PolygonField apply(const Op& l, const TwistedSequence& g) {
  if (!l.exact()) throw InsufficientDepth("only finitely supported operators can be applied");
  if (l.period() != g.period()) throw PeriodMismatch("operator period differs from the polygon period");
  std::vector<Eigen::VectorXd> out(g.period(), Eigen::VectorXd::Zero(g.dim()));
  l.for_each([&](int k, const Seq& c) {
    for (std::size_t i = 0; i < g.period(); ++i) out[i] += c[static_cast<long>(i)] * g.at(static_cast<long>(i) + k);
  });
  return PolygonField(std::move(out), g.monodromy());
}

PolygonField lift_hamiltonian_field(const Functional& f, const TwistedPolygon& g, Normalization norm) {
  const InvariantState a = invariants_from_polygon(g, norm);
  return apply(r_map(variational_derivative(f, a) * from_invariants(a)), g);
}

FieldMap lifted_field_map(const Functional& f, Normalization norm) {
  return [f, norm](const TwistedPolygon& g) { return lift_hamiltonian_field(f, g, norm); };
}

PolygonField hierarchy_field(const TwistedPolygon& g, int s) {
  if (s < 1) throw DomainError("hierarchy index s must be positive");
  const int m = g.m();
  const Op d = from_invariants(invariants_from_polygon(g, Normalization::GL));
  const Op p = frac_power(d, s, m, 0);
  return apply(project(p, Part::nonnegative) * (static_cast<double>(s) / m), g);
}

FieldMap hierarchy_field_map(int s) {
  return [s](const TwistedPolygon& g) { return hierarchy_field(g, s); };
}

CoordTable induced_invariant_rate(const TwistedPolygon& g, const PolygonField& x, Normalization norm, double h) {
  const InvariantState plus = invariants_from_polygon(g.displaced(x, h), norm);
  const InvariantState minus = invariants_from_polygon(g.displaced(x, -h), norm);
  return (0.5 / h) * (plus.free() - minus.free());
}

double omega2_closed_form(const CoordTable& grad_f, const CoordTable& grad_g, const InvariantState& a) {
  const int m = a.m();
  const Seq a0 = a.coefficient(0);
  double total = 0.0;
  for (int r = 1; r < m; ++r) {
    const Seq& fr = grad_f.at(r);
    for (int s = r + 1; s <= m; ++s) {
      const Seq as = a.coefficient(s);
      const Seq& gsr = grad_g.at(s - r);
      total += period_sum(a0 * shift(as * fr, -r) * gsr);
      total -= period_sum(as * shift(a0 * fr, s - r) * gsr);
    }
  }
  return total;
}

double omega2_closed_form(const Functional& f, const Functional& g, const InvariantState& a) {
  return omega2_closed_form(f.gradient(a), g.gradient(a), a);
}

namespace {

PolygonField field_difference(const PolygonField& plus, const PolygonField& minus, double h) {
  std::vector<Eigen::VectorXd> v(plus.period());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (plus.values()[i] - minus.values()[i]) / (2.0 * h);
  return PolygonField(std::move(v), plus.monodromy());
}

/// D(gamma) applied to a field, with D the kernel operator of gamma.
PolygonField apply_kernel_operator(const TwistedPolygon& g, const PolygonField& x) {
  return apply(from_invariants(invariants_from_polygon(g, Normalization::GL)), x);
}

double omega2(const FieldMap& xf, const FieldMap& yf, const TwistedPolygon& g, double h) {
  const PolygonField x = xf(g);
  const PolygonField y = yf(g);
  const TwistedPolygon gyp = g.displaced(y, h), gym = g.displaced(y, -h);
  const TwistedPolygon gxp = g.displaced(x, h), gxm = g.displaced(x, -h);
  const PolygonField x_yp = xf(gyp), x_ym = xf(gym);
  const PolygonField y_xp = yf(gxp), y_xm = yf(gxm);
  // [Y, X] = (directional derivative of X along Y) - (of Y along X).
  const PolygonField ydx = field_difference(x_yp, x_ym, h);
  const PolygonField xdy = field_difference(y_xp, y_xm, h);
  std::vector<Eigen::VectorXd> c(g.period());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = ydx.values()[i] - xdy.values()[i];
  const PolygonField commutator(std::move(c), g.monodromy());

  double total = 0.0;
  for (long n = 0; n < static_cast<long>(g.period()); ++n) {
    const double d = g.frame_det(n);
    const double y_theta_x = (theta(gyp, n, x_yp) - theta(gym, n, x_ym)) / (2.0 * h);
    const double x_theta_y = (theta(gxp, n, y_xp) - theta(gxm, n, y_xm)) / (2.0 * h);
    const double x_d = (gxp.frame_det(n) - gxm.frame_det(n)) / (2.0 * h);
    const double y_d = (gyp.frame_det(n) - gym.frame_det(n)) / (2.0 * h);
    total += (y_theta_x - x_theta_y - theta(g, n, commutator) + (theta(g, n, y) * x_d - theta(g, n, x) * y_d) / d) / d;
  }
  return total;
}

double omega1(const FieldMap& xf, const FieldMap& yf, const TwistedPolygon& g, double h) {
  const PolygonField x = xf(g);
  const PolygonField y = yf(g);
  const TwistedPolygon gyp = g.displaced(y, h), gym = g.displaced(y, -h);
  const TwistedPolygon gxp = g.displaced(x, h), gxm = g.displaced(x, -h);
  const PolygonField dy = apply_kernel_operator(g, y);
  const PolygonField dx = apply_kernel_operator(g, x);
  const PolygonField dy_xp = apply_kernel_operator(gxp, yf(gxp)), dy_xm = apply_kernel_operator(gxm, yf(gxm));
  const PolygonField dx_yp = apply_kernel_operator(gyp, xf(gyp)), dx_ym = apply_kernel_operator(gym, xf(gym));
  const PolygonField x_of_dy = field_difference(dy_xp, dy_xm, h);
  const PolygonField y_of_dx = field_difference(dx_yp, dx_ym, h);
  std::vector<Eigen::VectorXd> c(g.period());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = x_of_dy.values()[i] - y_of_dx.values()[i];
  const PolygonField mixed(std::move(c), g.monodromy());

  double first = 0.0;
  double second = 0.0;
  for (long n = 0; n < static_cast<long>(g.period()); ++n) {
    const double d = g.frame_det(n);
    const double d1 = g.frame_det(n + 1);
    const double x_theta = (theta(gxp, n, dy_xp) - theta(gxm, n, dy_xm)) / (2.0 * h);
    const double y_theta = (theta(gyp, n, dx_yp) - theta(gym, n, dx_ym)) / (2.0 * h);
    const double x_d = (gxp.frame_det(n) - gxm.frame_det(n)) / (2.0 * h);
    const double y_d = (gyp.frame_det(n) - gym.frame_det(n)) / (2.0 * h);
    first += (x_theta - y_theta - theta(g, n, mixed)) / d1;
    second += (theta(g, n, dy) * x_d - theta(g, n, dx) * y_d) / (d * d1);
  }
  return 0.5 * first - second;
}

}  // namespace

double omega_geometric(OmegaForm which, const FieldMap& x, const FieldMap& y, const TwistedPolygon& g, double h) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  return which == OmegaForm::omega1 ? omega1(x, y, g, h) : omega2(x, y, g, h);
}

}  // namespace latw
