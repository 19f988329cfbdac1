#include "latw/verify.hpp"

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <future>
#include <numeric>
#include <random>
#include <sstream>
#include <string_view>

#include "latw/brackets.hpp"
#include "latw/flow.hpp"
#include "latw/functional.hpp"
#include "latw/polygon.hpp"

namespace latw {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::mt19937_64 check_rng(std::uint64_t seed, const SuiteSize& size, std::string_view name) {
  const std::uint64_t tag = fnv1a(name);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(size.m), static_cast<std::uint32_t>(size.N),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
  return std::mt19937_64(seq);
}

struct Tally {
  int trials = 0;
  double max_residual = 0.0;

  void add(double residual) {
    ++trials;
    if (std::isnan(residual) || std::isnan(max_residual))
      max_residual = std::numeric_limits<double>::quiet_NaN();
    else
      max_residual = std::max(max_residual, std::abs(residual));
  }
};

class Battery {
 public:
  Battery(int criterion, const SuiteSize& size, std::uint64_t seed, const SuiteOptions& options)
      : criterion_(criterion), size_(size), seed_(seed), options_(options) {}

  int m() const { return size_.m; }
  std::size_t n() const { return size_.N; }
  bool coprime() const { return std::gcd(static_cast<long>(size_.N), static_cast<long>(size_.m)) == 1; }
  const SuiteOptions& options() const { return options_; }

  template <class Body>
  void check(const std::string& name, const std::string& property, double tolerance, Body&& body) {
    CheckRecord rec;
    rec.name = name;
    rec.property = property;
    rec.criterion = criterion_;
    rec.m = size_.m;
    rec.N = size_.N;
    rec.tolerance = tolerance;
    std::mt19937_64 rng = check_rng(seed_, size_, name);
    Tally tally;
    try {
      body(rng, tally);
      rec.trials = tally.trials;
      rec.max_residual = tally.max_residual;
      rec.passed = tally.trials > 0 && tally.max_residual <= tolerance;
    } catch (const SingularSystem& e) {
      fail(rec, tally, e.what(), !coprime(), "SingularSystem");
    } catch (const BranchUnavailable& e) {
      fail(rec, tally, e.what(), size_.m % 2 == 0, "BranchUnavailable");
    } catch (const std::exception& e) {
      fail(rec, tally, e.what(), false, "error");
    }
    records_.push_back(std::move(rec));
  }

  std::vector<CheckRecord> take() { return std::move(records_); }

 private:
  static void fail(CheckRecord& rec, const Tally& tally, const std::string& what, bool expected,
                   const std::string& kind) {
    rec.trials = tally.trials;
    rec.max_residual = tally.max_residual;
    rec.passed = false;
    rec.expected_failure = expected;
    rec.note = kind + ": " + what;
  }

  int criterion_;
  SuiteSize size_;
  std::uint64_t seed_;
  SuiteOptions options_;
  std::vector<CheckRecord> records_;
};

double sign_m1(int m) { return m % 2 == 1 ? 1.0 : -1.0; }

Op random_op(std::size_t n, int lo, int hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Op op(n);
  for (int k = lo; k <= hi; ++k) {
    Seq c(n);
    for (double& v : c.values()) v = u(rng);
    op.set_coeff(k, c);
  }
  return op;
}

Seq random_seq(std::size_t n, std::mt19937_64& rng, double low = -1.0, double high = 1.0) {
  std::uniform_real_distribution<double> u(low, high);
  Seq s(n);
  for (double& v : s.values()) v = u(rng);
  return s;
}

CoordTable random_table(const InvariantState& a, std::mt19937_64& rng) {
  CoordTable t = zero_table(a);
  for (auto& [r, seq] : t) seq = random_seq(a.period(), rng);
  return t;
}

InvariantState boussinesq_state(int m, std::size_t n, std::mt19937_64& rng) {
  InvariantState a = InvariantState::random(m, n, Normalization::SL, rng);
  a.free(1) = random_seq(n, rng, 0.5, 1.5);
  return a;
}

/// Runs `trial` on Boussinesq states, redrawing any state whose flow leaves a^1 > 0.
template <class Trial>
void boussinesq_trial(int m, std::size_t n, std::mt19937_64& rng, Trial&& trial) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    try {
      trial(boussinesq_state(m, n, rng));
      return;
    } catch (const DomainError&) {
    }
  }
  throw DomainError("no Boussinesq state stayed in the domain a^1 > 0 after 100 draws");
}

/// Largest coefficient gap over orders [lo, hi].
template <class S>
double coeff_gap(const LaurentOp<S>& a, const LaurentOp<S>& b, int lo, int hi) {
  double d = 0.0;
  for (int k = lo; k <= hi; ++k) d = std::max(d, (a.coeff(k) - b.coeff(k)).max_abs());
  return d;
}

ComplexOp complexify(const Op& op) {
  ComplexOp out(op.period(), op.valid_floor());
  op.for_each([&](int k, const Seq& c) {
    ComplexSeq z(c.period());
    for (std::size_t i = 0; i < c.period(); ++i) z[static_cast<long>(i)] = c[static_cast<long>(i)];
    out.set_coeff(k, z);
  });
  return out;
}

/// Least-squares slope of log y against log x.
double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t k = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

double relative_gap(const CoordTable& approx, const CoordTable& ref) {
  const double scale = max_abs(ref);
  return max_abs(approx - ref) / (scale > 0.0 ? scale : 1.0);
}

const std::vector<int> kHierarchy = {1, 2, 4, 5};

// ---------------------------------------------------------------- criterion 1

void operator_algebra(Battery& b) {
  const std::size_t n = b.n();
  const int trials = b.options().triple_trials;
  b.check("associativity", "(AB)C = A(BC)", 1e-12, [&](auto& rng, Tally& t) {
    for (int i = 0; i < trials; ++i) {
      const Op x = random_op(n, -3, 3, rng), y = random_op(n, -3, 3, rng), z = random_op(n, -3, 3, rng);
      t.add(max_abs_diff((x * y) * z, x * (y * z)));
    }
  });
  b.check("trace ad-invariance", "<AB,C> = <A,BC>", 1e-12, [&](auto& rng, Tally& t) {
    for (int i = 0; i < trials; ++i) {
      const Op x = random_op(n, -3, 3, rng), y = random_op(n, -3, 3, rng), z = random_op(n, -3, 3, rng);
      t.add(inner_product(x * y, z) - inner_product(x, y * z));
    }
  });
  b.check("trace symmetry", "<A,B> = <B,A>", 1e-12, [&](auto& rng, Tally& t) {
    for (int i = 0; i < trials; ++i) {
      const Op x = random_op(n, -3, 3, rng), y = random_op(n, -3, 3, rng);
      t.add(inner_product(x, y) - inner_product(y, x));
    }
  });
  b.check("projection partition", "L_+ + L_0 + L_- = L and r^+(L) - r(L) = L/2", 1e-12, [&](auto& rng, Tally& t) {
    for (int i = 0; i < trials; ++i) {
      const Op l = random_op(n, -3, 3, rng);
      t.add(max_abs_diff(project(l, Part::plus) + project(l, Part::zero) + project(l, Part::minus), l));
      t.add(max_abs_diff(r_plus(l) - r_map(l), l * 0.5));
    }
  });
  b.check("shift and period sum", "shift(s,N) = s and sum shift(s,k) = sum s", 1e-12, [&](auto& rng, Tally& t) {
    for (int i = 0; i < trials; ++i) {
      const Seq s = random_seq(n, rng);
      t.add((shift(s, static_cast<long>(n)) - s).max_abs());
      t.add(period_sum(shift(s, 3)) - period_sum(s));
      t.add((shift(shift(s, 2), -5) - shift(s, -3)).max_abs());
    }
  });
  b.check("circulant singularity", "1 + T + ... + T^{m-1} singular iff gcd(N,m) > 1", 0.0, [&](auto&, Tally& t) {
    const bool singular = shift_polynomial_singular(geometric_shift_sum<double>(b.m()), n);
    t.add(singular == !b.coprime() ? 0.0 : 1.0);
  });
  b.check("circulant solve", "sum_j c_j shift(x, e_j) = rhs after solving", 1e-12, [&](auto& rng, Tally& t) {
    const auto terms = geometric_shift_sum<double>(b.m());
    for (int i = 0; i < trials; ++i) {
      const Seq rhs = random_seq(n, rng);
      const Seq x = solve_shift_polynomial(terms, rhs);
      Seq back(n);
      for (const auto& term : terms) back += shift(x, term.exponent) * term.coefficient;
      t.add((back - rhs).max_abs() / std::max(1.0, rhs.max_abs()));
    }
  });
}

// ---------------------------------------------------------------- criterion 2

void roots(Battery& b) {
  const int m = b.m();
  const std::size_t n = b.n();
  const int trials = b.options().trials;
  const int floor = -2 * m - 2;

  b.check("root reproduces D", "(D^{1/m})^m = D to the certified depth", 1e-11, [&](auto& rng, Tally& t) {
    for (int i = 0; i < trials; ++i) {
      const Op d = from_invariants(InvariantState::random(m, n, Normalization::GL, rng));
      if (m % 2 == 1) {
        const Op r = mth_root(d, m, floor);
        const Op p = power(r, m, floor + m - 1);
        t.add(coeff_gap(p, d, p.valid_floor(), m));
      } else {
        const ComplexOp dc = complexify(d);
        const ComplexOp r = mth_root(dc, m, floor);
        const ComplexOp p = power(r, m, floor + m - 1);
        t.add(coeff_gap(p, dc, p.valid_floor(), m));
      }
    }
  });
  if (m % 2 == 1) {
    b.check("root branch consistency", "real and complex roots agree for odd m", 1e-12, [&](auto& rng, Tally& t) {
      for (int i = 0; i < trials; ++i) {
        const Op d = from_invariants(InvariantState::random(m, n, Normalization::GL, rng));
        const Op r = mth_root(d, m, floor);
        const ComplexOp rc = mth_root(complexify(d), m, floor);
        t.add(coeff_gap(complexify(r), rc, floor, 1));
      }
    });
  } else {
    b.check("real even-m root", "c^m = -1 has no real solution for even m", 0.0, [&](auto& rng, Tally& t) {
      const Op d = from_invariants(InvariantState::random(m, n, Normalization::GL, rng));
      mth_root(d, m, floor);
      t.add(0.0);
    });
  }
  b.check("fractional power round trip", "D^{m/m} = D and D^{-1/m} D^{1/m} = 1", 1e-11, [&](auto& rng, Tally& t) {
    for (int i = 0; i < trials; ++i) {
      const Op d = from_invariants(InvariantState::random(m, n, Normalization::GL, rng));
      const Op full = frac_power(d, m, m, floor);
      t.add(coeff_gap(full, d, floor, m));
      const Op one = multiply(frac_power(d, -1, m, floor - 1), frac_power(d, 1, m, floor), floor);
      t.add(coeff_gap(one, Op::identity(n), floor, 1));
      const Op inv = invert(d, floor);
      t.add(coeff_gap(multiply(d, inv, floor + m), Op::identity(n), floor + m, m));
    }
  });
  b.check("co-primality guard", "root extraction raises SingularSystem when gcd(N,m) > 1", 0.0, [&](auto& rng, Tally& t) {
    if (m < 2) {
      t.add(0.0);
      return;
    }
    const Op d = from_invariants(InvariantState::random(m, static_cast<std::size_t>(m), Normalization::GL, rng));
    try {
      if (m % 2 == 1)
        mth_root(d, m, floor);
      else
        mth_root(complexify(d), m, floor);
      t.add(1.0);
    } catch (const SingularSystem&) {
      t.add(0.0);
    }
  });
  b.check("depth stability", "F_s and Z^s unchanged when the floor drops 5 orders", 1e-12, [&](auto& rng, Tally& t) {
    for (int i = 0; i < trials; ++i) {
      const InvariantState a = InvariantState::random(m, n, Normalization::SL, rng);
      for (int s : {1, 2}) {
        t.add(hierarchy_hamiltonian(s, 0)(a) - hierarchy_hamiltonian(s, 5)(a));
        const Op d = from_invariants(a);
        const Op z0 = Z_s(d, s, m, Normalization::SL, -m);
        const Op z5 = Z_s(d, s, m, Normalization::SL, -m - 5);
        t.add(coeff_gap(z0, z5, -m, 0));
      }
    }
  });
}

// ---------------------------------------------------------------- criterion 3

void variational(Battery& b) {
  const int m = b.m();
  const std::size_t n = b.n();
  const int trials = b.options().trials;
  for (int s : kHierarchy) {
    b.check("Z^s gradient s=" + std::to_string(s), "Z^s coefficients equal finite-difference gradients of F_s", 1e-6,
            [&](auto& rng, Tally& t) {
              for (int i = 0; i < trials; ++i) {
                for (auto norm : {Normalization::SL, Normalization::GL}) {
                  const InvariantState a = InvariantState::random(m, n, norm, rng);
                  const Functional f = hierarchy_hamiltonian(s);
                  t.add(relative_gap(f.gradient(a), finite_difference_grad(f, a)));
                }
              }
            });
  }
  b.check("pairing consistency", "<dF, dD> equals the directional derivative of F", 1e-5, [&](auto& rng, Tally& t) {
    const double h = kDefaultFdStep;
    for (int i = 0; i < trials; ++i) {
      for (auto norm : {Normalization::SL, Normalization::GL}) {
        const InvariantState a = InvariantState::random(m, n, norm, rng);
        const Functional f = random_polynomial(a, rng);
        const CoordTable v = random_table(a, rng);
        const double fd = (f(a.moved(v, h)) - f(a.moved(v, -h))) / (2.0 * h);
        Op dd(n);
        for (const auto& [r, seq] : v) dd.add_to_coeff(r, seq);
        const double scale = std::max(1.0, std::abs(fd));
        t.add((inner_product(variational_derivative(f, a), dd) - fd) / scale);
        t.add((pair(f.gradient(a), v) - fd) / scale);
      }
    }
  });
  if (m >= 2) {
    b.check("Boussinesq gradient", "grad H = 1/a^1 matches finite differences", 1e-8, [&](auto& rng, Tally& t) {
      for (int i = 0; i < trials; ++i) {
        const InvariantState a = boussinesq_state(m, n, rng);
        const Functional h = boussinesq_hamiltonian();
        t.add(max_abs(h.gradient(a) - finite_difference_grad(h, a)));
      }
    });
  }
}

// ---------------------------------------------------------------- criterion 4

void poisson_axioms(Battery& b) {
  const int m = b.m();
  const std::size_t n = b.n();
  const int trials = b.options().trials;
  const std::vector<BracketId> both = {BracketId::quadratic(), BracketId::linear()};

  b.check("antisymmetry", "{F,G} + {G,F} = 0 for both brackets", 1e-13, [&](auto& rng, Tally& t) {
    for (int i = 0; i < b.options().pair_trials; ++i) {
      for (auto norm : {Normalization::SL, Normalization::GL}) {
        const InvariantState a = InvariantState::random(m, n, norm, rng);
        const Functional f = random_polynomial(a, rng), g = random_polynomial(a, rng);
        for (const auto& id : both) {
          t.add(bracket(f, g, a, id) + bracket(g, f, a, id));
          t.add(bracket(f, f, a, id));
        }
      }
    }
  });
  b.check("Leibniz rule", "{FG,H} = F{G,H} + G{F,H}", 1e-9, [&](auto& rng, Tally& t) {
    for (int i = 0; i < trials; ++i) {
      for (auto norm : {Normalization::SL, Normalization::GL}) {
        const InvariantState a = InvariantState::random(m, n, norm, rng);
        const Functional f = random_polynomial(a, rng), g = random_polynomial(a, rng), h = random_polynomial(a, rng);
        for (const auto& id : both)
          t.add(bracket(product(f, g), h, a, id) - f(a) * bracket(g, h, a, id) - g(a) * bracket(f, h, a, id));
      }
    }
  });
  b.check("r versus r^+", "bracket 1 with r and with r^+ agree", 1e-12, [&](auto& rng, Tally& t) {
    for (int i = 0; i < trials; ++i) {
      for (auto norm : {Normalization::SL, Normalization::GL}) {
        const InvariantState a = InvariantState::random(m, n, norm, rng);
        const Functional f = random_polynomial(a, rng), g = random_polynomial(a, rng);
        t.add(bracket1(f, g, a, RMatrix::r) - bracket1(f, g, a, RMatrix::r_plus));
      }
    }
  });
  b.check("general versus special-linear form", "both bracket-2 formulas agree on SL states", 1e-12,
          [&](auto& rng, Tally& t) {
            for (int i = 0; i < trials; ++i) {
              const InvariantState a = InvariantState::random(m, n, Normalization::SL, rng);
              const Functional f = random_polynomial(a, rng), g = random_polynomial(a, rng);
              t.add(bracket2(f, g, a, LinearForm::general) - bracket2(f, g, a, LinearForm::special_linear));
            }
          });

  struct JacobiCase {
    std::string name;
    BracketId id;
    std::vector<Normalization> norms;
  };
  const std::vector<JacobiCase> cases = {
      {"Jacobi bracket 1", BracketId::quadratic(), {Normalization::SL, Normalization::GL}},
      {"Jacobi bracket 2", BracketId::linear(), {Normalization::SL, Normalization::GL}},
      {"Jacobi bracket 1+2", BracketId::pencil(2.0), {Normalization::GL}},
  };
  for (const auto& c : cases) {
    b.check(c.name, "cyclic sum {{F,G},H} vanishes (h = 1e-5)", 1e-5, [&](auto& rng, Tally& t) {
      for (int i = 0; i < trials; ++i) {
        for (auto norm : c.norms) {
          const InvariantState a = InvariantState::random(m, n, norm, rng);
          const Functional f = random_polynomial(a, rng), g = random_polynomial(a, rng),
                           h = random_polynomial(a, rng);
          t.add(jacobi_residual(f, g, h, a, c.id, 1e-5));
        }
      }
    });
    b.check(c.name + " h-sweep order", "Jacobi residual is O(h^2) over h = 4e-3, 2e-3, 1e-3 (|order - 2|)", 0.2,
            [&](auto& rng, Tally& t) {
              // Only triples whose residual at the largest step exceeds roundoff enter the fit.
              const std::vector<double> hs = {4e-3, 2e-3, 1e-3};
              for (int i = 0; i < 40 && t.trials < 3; ++i) {
                const Normalization norm = c.norms[static_cast<std::size_t>(i) % c.norms.size()];
                const InvariantState a = InvariantState::random(m, n, norm, rng);
                const Functional f = random_polynomial(a, rng), g = random_polynomial(a, rng),
                                 h = random_polynomial(a, rng);
                std::vector<double> res;
                for (double step : hs) res.push_back(std::abs(jacobi_residual(f, g, h, a, c.id, step)));
                if (res.front() < 1e-9) continue;
                t.add(log_slope(hs, res) - 2.0);
              }
            });
  }
  b.check("field and bracket consistency", "pairing of da/dt with grad G equals {F,G}", 1e-10,
          [&](auto& rng, Tally& t) {
            for (int i = 0; i < trials; ++i) {
              for (auto norm : {Normalization::SL, Normalization::GL}) {
                const InvariantState a = InvariantState::random(m, n, norm, rng);
                const Functional f = random_polynomial(a, rng);
                std::vector<BracketId> ids = both;
                if (norm == Normalization::GL) ids.push_back(BracketId::pencil(2.5));
                for (const auto& id : ids) {
                  const CoordTable field = hamiltonian_field(f, a, id);
                  for (int k = 0; k < 10; ++k) {
                    const Functional g = linear_functional("linear", random_table(a, rng));
                    t.add(pair(g.gradient(a), field) - bracket(f, g, a, id));
                  }
                }
              }
            }
          });
}

// ---------------------------------------------------------------- criterion 5

void pencil(Battery& b) {
  const int m = b.m();
  const std::size_t n = b.n();
  const int trials = b.options().trials;
  auto push = [](const Functional& f, const Functional& g, const InvariantState& a, double l) {
    return bracket_pencil(f, g, a, l, PencilMethod::pushforward);
  };
  b.check("pencil affine in lambda", "push-forward values at lambda = 1, 2, 3 are affine", 1e-9,
          [&](auto& rng, Tally& t) {
            for (int i = 0; i < trials; ++i) {
              const InvariantState a = InvariantState::random(m, n, Normalization::GL, rng);
              const Functional f = random_polynomial(a, rng), g = random_polynomial(a, rng);
              t.add(push(f, g, a, 1.0) - 2.0 * push(f, g, a, 2.0) + push(f, g, a, 3.0));
            }
          });
  b.check("pencil evaluation paths", "push-forward equals the linear combination", 1e-9, [&](auto& rng, Tally& t) {
    for (int i = 0; i < trials; ++i) {
      const InvariantState a = InvariantState::random(m, n, Normalization::GL, rng);
      const Functional f = random_polynomial(a, rng), g = random_polynomial(a, rng);
      for (double l : {0.5, 1.0, 2.0, 3.0, 4.0})
        t.add(push(f, g, a, l) - bracket_pencil(f, g, a, l, PencilMethod::linear_combination));
    }
  });
  b.check("pencil inverse powers", "fitted lambda^-2 and lambda^-1 coefficients vanish", 1e-9,
          [&](auto& rng, Tally& t) {
            const std::vector<double> ls = {0.5, 1.0, 2.0, 3.0, 4.0};
            for (int i = 0; i < trials; ++i) {
              const InvariantState a = InvariantState::random(m, n, Normalization::GL, rng);
              const Functional f = random_polynomial(a, rng), g = random_polynomial(a, rng);
              Eigen::MatrixXd basis(static_cast<Eigen::Index>(ls.size()), 4);
              Eigen::VectorXd values(static_cast<Eigen::Index>(ls.size()));
              for (std::size_t k = 0; k < ls.size(); ++k) {
                const auto row = static_cast<Eigen::Index>(k);
                basis(row, 0) = 1.0 / (ls[k] * ls[k]);
                basis(row, 1) = 1.0 / ls[k];
                basis(row, 2) = 1.0;
                basis(row, 3) = ls[k];
                values(row) = push(f, g, a, ls[k]);
              }
              const Eigen::VectorXd c = basis.colPivHouseholderQr().solve(values);
              t.add(c(0));
              t.add(c(1));
            }
          });
  b.check("zero lambda guard", "push-forward rejects lambda = 0", 0.0, [&](auto& rng, Tally& t) {
    const InvariantState a = InvariantState::random(m, n, Normalization::GL, rng);
    const Functional f = random_polynomial(a, rng), g = random_polynomial(a, rng);
    try {
      push(f, g, a, 0.0);
      t.add(1.0);
    } catch (const ZeroLambda&) {
      t.add(0.0);
    }
  });
}

// ---------------------------------------------------------------- criterion 6

void involutivity(Battery& b) {
  const int m = b.m();
  const std::size_t n = b.n();
  const int trials = b.options().trials;
  for (const auto& id : {BracketId::quadratic(), BracketId::linear()}) {
    b.check("involutivity bracket " + id.to_string(), "{F_p, F_s} = 0 for p, s in {1,2,4,5}", 1e-9,
            [&](auto& rng, Tally& t) {
              for (int i = 0; i < trials; ++i) {
                const InvariantState a = InvariantState::random(m, n, Normalization::SL, rng);
                for (int p : kHierarchy)
                  for (int s : kHierarchy)
                    if (p < s) t.add(bracket(hierarchy_hamiltonian(p), hierarchy_hamiltonian(s), a, id));
              }
            });
  }
  b.check("bracket-2 kernel", "bracket-2 fields of F_1..F_{m-1} vanish", 1e-12, [&](auto& rng, Tally& t) {
    for (int i = 0; i < trials; ++i) {
      const InvariantState a = InvariantState::random(m, n, Normalization::SL, rng);
      for (int s = 1; s < m; ++s) t.add(max_abs(hamiltonian_field(hierarchy_hamiltonian(s), a, BracketId::linear())));
    }
  });
  if (m == 3) {
    b.check("Boussinesq bi-Hamiltonian field", "H generates equal fields under both brackets", 1e-9,
            [&](auto& rng, Tally& t) {
              for (int i = 0; i < trials; ++i) {
                const InvariantState a = boussinesq_state(m, n, rng);
                const Functional h = boussinesq_hamiltonian();
                t.add(max_abs(hamiltonian_field(h, a, BracketId::quadratic()) -
                              hamiltonian_field(h, a, BracketId::linear())));
              }
            });
  }
}

// ---------------------------------------------------------------- criterion 7

void geometry(Battery& b) {
  const int m = b.m();
  const std::size_t n = b.n();
  const int trials = b.options().trials;
  const std::vector<Normalization> norms = {Normalization::SL, Normalization::GL};

  b.check("determinant relation", "a^0_n = (-1)^{m-1} d_{n+1}/d_n", 1e-10, [&](auto& rng, Tally& t) {
    for (int i = 0; i < trials; ++i) {
      const InvariantState a = InvariantState::random(m, n, Normalization::GL, rng);
      const TwistedPolygon g = reconstruct(a);
      for (long k = 0; k < static_cast<long>(n); ++k)
        t.add(a.coefficient(0)[k] - sign_m1(m) * g.frame_det(k + 1) / g.frame_det(k));
    }
  });
  b.check("SL unit determinants", "d_n = 1 for SL states with a unit seed", 1e-12, [&](auto& rng, Tally& t) {
    for (int i = 0; i < trials; ++i) {
      const TwistedPolygon g = reconstruct(InvariantState::random(m, n, Normalization::SL, rng));
      for (long k = 0; k < static_cast<long>(n); ++k) t.add(g.frame_det(k) - 1.0);
    }
  });
  b.check("polygon round trip", "invariants(reconstruct(a)) = a, kernel D(gamma) = 0, GL(m) invariance", 1e-10,
          [&](auto& rng, Tally& t) {
            std::uniform_real_distribution<double> u(-0.3, 0.3);
            for (int i = 0; i < trials; ++i) {
              for (auto norm : norms) {
                const InvariantState a = InvariantState::random(m, n, norm, rng);
                const TwistedPolygon g = reconstruct(a);
                t.add(max_abs(invariants_from_polygon(g, norm).free() - a.free()));
                t.add(apply(from_invariants(a), g).max_abs());
                Eigen::MatrixXd x = Eigen::MatrixXd::Identity(m, m);
                for (Eigen::Index r = 0; r < m; ++r)
                  for (Eigen::Index c = 0; c < m; ++c) x(r, c) += u(rng);
                std::vector<Eigen::VectorXd> moved;
                for (const auto& v : g.values()) moved.push_back(x * v);
                const TwistedPolygon gx(std::move(moved), x * g.monodromy() * x.inverse());
                t.add(max_abs(invariants_from_polygon(gx, norm).free() - a.free()));
              }
            }
          });
  b.check("omega2 closed form", "closed form omega_2(X^f, X^g) = {G,F}_2", 1e-10, [&](auto& rng, Tally& t) {
    for (int i = 0; i < trials; ++i) {
      for (auto norm : norms) {
        const InvariantState a = InvariantState::random(m, n, norm, rng);
        const Functional f = random_polynomial(a, rng), g = random_polynomial(a, rng);
        t.add(omega2_closed_form(f, g, a) - bracket2(g, f, a));
        t.add(omega2_closed_form(f, g, a) + omega2_closed_form(g, f, a));
      }
    }
  });
  b.check("omega2 geometric", "omega_2(X^g, X^f) = {F,G}_2 from theta_n and d_n", 1e-4, [&](auto& rng, Tally& t) {
    for (int i = 0; i < trials; ++i) {
      for (auto norm : norms) {
        const InvariantState a = InvariantState::random(m, n, norm, rng);
        const Functional f = random_polynomial(a, rng), g = random_polynomial(a, rng);
        const TwistedPolygon p = reconstruct(a);
        t.add(omega_geometric(OmegaForm::omega2, lifted_field_map(g, norm), lifted_field_map(f, norm), p) -
              bracket2(f, g, a));
      }
    }
  });
  b.check("omega1 geometric", "(-1)^{m-1} omega_1(X^f, X^g) = {F,G}_1", 1e-4, [&](auto& rng, Tally& t) {
    for (int i = 0; i < trials; ++i) {
      for (auto norm : norms) {
        const InvariantState a = InvariantState::random(m, n, norm, rng);
        const Functional f = random_polynomial(a, rng), g = random_polynomial(a, rng);
        const TwistedPolygon p = reconstruct(a);
        t.add(sign_m1(m) * omega_geometric(OmegaForm::omega1, lifted_field_map(f, norm), lifted_field_map(g, norm), p) -
              bracket1(f, g, a));
      }
    }
  });
  b.check("omega1 Hamiltonian property", "omega_1(X^f, Y) = (-1)^m Y(f) on SL polygons", 1e-5,
          [&](auto& rng, Tally& t) {
            const double h = kDefaultFdStep;
            for (int i = 0; i < trials; ++i) {
              const InvariantState a = InvariantState::random(m, n, Normalization::SL, rng);
              const Functional f = random_polynomial(a, rng), g = random_polynomial(a, rng);
              const TwistedPolygon p = reconstruct(a);
              const FieldMap y = lifted_field_map(g, Normalization::SL);
              const PolygonField yv = y(p);
              const double yf = (f(invariants_from_polygon(p.displaced(yv, h), Normalization::SL)) -
                                 f(invariants_from_polygon(p.displaced(yv, -h), Normalization::SL))) /
                                (2.0 * h);
              t.add(omega_geometric(OmegaForm::omega1, lifted_field_map(f, Normalization::SL), y, p) +
                    sign_m1(m) * yf);
            }
          });
  b.check("Q first row", "Q_{1,r+1} = -a^0 grad_r f for lifted fields", 1e-8, [&](auto& rng, Tally& t) {
    for (int i = 0; i < trials; ++i) {
      for (auto norm : norms) {
        const InvariantState a = InvariantState::random(m, n, norm, rng);
        const Functional f = random_polynomial(a, rng);
        const TwistedPolygon p = reconstruct(a);
        const PolygonField y = lift_hamiltonian_field(f, p, norm);
        const CoordTable grad = f.gradient(a);
        for (long k = 0; k < static_cast<long>(n); ++k) {
          const Eigen::MatrixXd q = q_matrix(p, y, k);
          for (int r = 1; r < m; ++r) t.add(q(0, r) + a.coefficient(0)[k] * grad.at(r)[k]);
        }
      }
    }
  });
}

// ---------------------------------------------------------------- criterion 8

void lift_consistency(Battery& b) {
  const int m = b.m();
  const std::size_t n = b.n();
  const int trials = b.options().trials;
  const auto sl = Normalization::SL;

  b.check("lifted field dynamics", "gamma' = Y^F induces the bracket-1 field of F", 1e-6, [&](auto& rng, Tally& t) {
    for (int i = 0; i < trials; ++i) {
      const InvariantState a = InvariantState::random(m, n, sl, rng);
      const Functional f = random_polynomial(a, rng);
      const TwistedPolygon p = reconstruct(a);
      t.add(max_abs(induced_invariant_rate(p, lift_hamiltonian_field(f, p, sl), sl) -
                    hamiltonian_field(f, a, BracketId::quadratic())));
    }
  });
  b.check("lifted field kernel", "D(Y^F) = -D_t(gamma)", 1e-6, [&](auto& rng, Tally& t) {
    for (int i = 0; i < trials; ++i) {
      const InvariantState a = InvariantState::random(m, n, sl, rng);
      const Functional f = random_polynomial(a, rng);
      const TwistedPolygon p = reconstruct(a);
      const PolygonField y = lift_hamiltonian_field(f, p, sl);
      const CoordTable rate = induced_invariant_rate(p, y, Normalization::GL);
      Op dt(n);
      for (const auto& [r, seq] : rate) dt.add_to_coeff(r, seq);
      const PolygonField lhs = apply(from_invariants(a), y);
      const PolygonField rhs = apply(dt, p);
      double worst = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        worst = std::max(worst, (lhs.values()[k] + rhs.values()[k]).cwiseAbs().maxCoeff());
      t.add(worst);
    }
  });
  b.check("hierarchy field dynamics", "X^{F_s} induces the bracket-1 field of F_s (s = 1, 2)", 1e-6,
          [&](auto& rng, Tally& t) {
            for (int i = 0; i < trials; ++i) {
              const InvariantState a = InvariantState::random(m, n, sl, rng);
              const TwistedPolygon p = reconstruct(a);
              for (int s : {1, 2})
                t.add(max_abs(induced_invariant_rate(p, hierarchy_field(p, s), sl) -
                              hamiltonian_field(hierarchy_hamiltonian(s), a, BracketId::quadratic())));
            }
          });
  b.check("hierarchy fields commute", "[X^{F_1}, X^{F_2}] = 0 by centered differences", 1e-4, [&](auto& rng, Tally& t) {
    const double h = kDefaultFdStep;
    for (int i = 0; i < trials; ++i) {
      const TwistedPolygon p = reconstruct(InvariantState::random(m, n, sl, rng));
      const PolygonField x1 = hierarchy_field(p, 1), x2 = hierarchy_field(p, 2);
      const PolygonField a2 = hierarchy_field(p.displaced(x1, h), 2), b2 = hierarchy_field(p.displaced(x1, -h), 2);
      const PolygonField a1 = hierarchy_field(p.displaced(x2, h), 1), b1 = hierarchy_field(p.displaced(x2, -h), 1);
      double worst = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        worst = std::max(worst, ((a2.values()[k] - b2.values()[k]) - (a1.values()[k] - b1.values()[k]))
                                        .cwiseAbs()
                                        .maxCoeff() /
                                    (2.0 * h));
      t.add(worst);
    }
  });
}

// ---------------------------------------------------------------- criterion 9

void flows(Battery& b) {
  const int m = b.m();
  const std::size_t n = b.n();
  const int trials = b.options().trials;
  const std::vector<double> dts = {1e-2, 5e-3, 2.5e-3};
  auto steps_for = [](double dt) { return static_cast<int>(std::lround(1.0 / dt)); };

  if (m == 3) {
    b.check("Boussinesq flows agree", "bracket-1 and bracket-2 trajectories of H agree over unit time", 1e-8,
            [&](auto& rng, Tally& t) {
              for (int i = 0; i < trials; ++i) boussinesq_trial(m, n, rng, [&](const InvariantState& a) {
                const Functional h = boussinesq_hamiltonian();
                const Trajectory t1 = integrate_flow(h, a, BracketId::quadratic(), 1e-3, 1000);
                const Trajectory t2 = integrate_flow(h, a, BracketId::linear(), 1e-3, 1000);
                double worst = 0.0;
                for (std::size_t k = 0; k < t1.states.size(); ++k)
                  worst = std::max(worst, max_abs(t1.states[k].free() - t2.states[k].free()));
                t.add(worst);
              });
            });
    b.check("Boussinesq self-conservation", "H drifts < 1e-10 along its own flow (dt = 5e-4)", 1e-10, [&](auto& rng, Tally& t) {
      const Functional h = boussinesq_hamiltonian();
      for (int i = 0; i < trials; ++i) boussinesq_trial(m, n, rng, [&](const InvariantState& a) {
        t.add(conservation_report(integrate_flow(h, a, BracketId::quadratic(), 5e-4, 2000), {h}).front().max_drift);
      });
    });
    b.check("Boussinesq convergence order", "H drift over dt = 1e-2, 5e-3, 2.5e-3 is O(dt^4) (|order - 4|)", 0.2,
            [&](auto& rng, Tally& t) {
              std::vector<double> total(dts.size(), 0.0);
              const Functional h = boussinesq_hamiltonian();
              for (int i = 0; i < trials; ++i) boussinesq_trial(m, n, rng, [&](const InvariantState& a) {
                std::vector<double> drift;
                for (double dt : dts) {
                  const Trajectory tr = integrate_flow(h, a, BracketId::quadratic(), dt, steps_for(dt));
                  drift.push_back(std::abs(h(tr.states.back()) - h(a)));
                }
                for (std::size_t k = 0; k < dts.size(); ++k) total[k] += drift[k];
              });
              t.add(log_slope(dts, total) - 4.0);
            });
  }
  b.check("F_2 conserved along F_1", "F_2 drift < 1e-8 over unit time at dt = 1e-3", 1e-8, [&](auto& rng, Tally& t) {
    const Functional f1 = hierarchy_hamiltonian(1), f2 = hierarchy_hamiltonian(2);
    for (int i = 0; i < trials; ++i) {
      const InvariantState a = InvariantState::random(m, n, Normalization::SL, rng);
      t.add(conservation_report(integrate_flow(f1, a, BracketId::quadratic(), 1e-3, 1000), {f2}).front().max_drift);
    }
  });
  b.check("F_1 flow convergence order", "F_2 drift over dt = 1e-2, 5e-3, 2.5e-3 is O(dt^4) (|order - 4|)", 0.2,
          [&](auto& rng, Tally& t) {
            const Functional f1 = hierarchy_hamiltonian(1), f2 = hierarchy_hamiltonian(2);
            std::vector<double> total(dts.size(), 0.0);
            for (int i = 0; i < trials; ++i) {
              const InvariantState a = InvariantState::random(m, n, Normalization::SL, rng);
              for (std::size_t k = 0; k < dts.size(); ++k) {
                const Trajectory tr = integrate_flow(f1, a, BracketId::quadratic(), dts[k], steps_for(dts[k]));
                total[k] += std::abs(f2(tr.states.back()) - f2(a));
              }
            }
            t.add(log_slope(dts, total) - 4.0);
          });
  if (m >= 2) {
    b.check("kernel flow is stationary", "F_1 under bracket 2 leaves the state fixed", 1e-13,
            [&](auto& rng, Tally& t) {
              const Functional f1 = hierarchy_hamiltonian(1);
              for (int i = 0; i < trials; ++i) {
                const InvariantState a = InvariantState::random(m, n, Normalization::SL, rng);
                const Trajectory tr = integrate_flow(f1, a, BracketId::linear(), 1e-2, 100);
                t.add(max_abs(tr.states.back().free() - a.free()));
              }
            });
  }
}

}  // namespace

bool VerificationReport::all_passed() const {
  for (const auto& r : records)
    if (!r.expected_failure && !r.passed) return false;
  return true;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  nlohmann::json sz = nlohmann::json::array();
  for (const auto& s : sizes) sz.push_back({{"m", s.m}, {"N", s.N}});
  j["sizes"] = sz;
  j["environment"] = environment;
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : records) {
    recs.push_back({{"name", r.name},
                    {"property", r.property},
                    {"criterion", r.criterion},
                    {"m", r.m},
                    {"N", r.N},
                    {"trials", r.trials},
                    {"max_residual", r.max_residual},
                    {"tolerance", r.tolerance},
                    {"passed", r.passed},
                    {"expected_failure", r.expected_failure},
                    {"note", r.note}});
  }
  j["records"] = recs;
  j["all_passed"] = all_passed();
  return j;
}

std::vector<SuiteSize> default_sizes() { return {{2, 3}, {3, 4}, {3, 5}}; }

std::vector<SuiteSize> acceptance_sizes() { return {{3, 4}}; }

std::vector<SuiteSize> parse_sizes(const std::string& s) {
  std::vector<SuiteSize> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw DomainError("size '" + item + "' is not of the form m:N");
    const int m = std::stoi(item.substr(0, colon));
    const long n = std::stol(item.substr(colon + 1));
    if (m < 1 || n < 1) throw DomainError("size '" + item + "' must have positive m and N");
    out.push_back({m, static_cast<std::size_t>(n)});
  }
  if (out.empty()) throw DomainError("no sizes given");
  return out;
}

std::string criterion_title(int criterion) {
  switch (criterion) {
    case 1: return "operator algebra";
    case 2: return "roots and fractional powers";
    case 3: return "variational calculus";
    case 4: return "Poisson axioms";
    case 5: return "pencil linearity";
    case 6: return "hierarchy involutivity";
    case 7: return "polygon geometry";
    case 8: return "lift consistency";
    case 9: return "flows";
    case 10: return "determinism";
  }
  return "unknown";
}

std::vector<CheckRecord> run_criterion(int criterion, const SuiteSize& size, std::uint64_t seed,
                                       const SuiteOptions& options) {
  Battery b(criterion, size, seed, options);
  switch (criterion) {
    case 1: operator_algebra(b); break;
    case 2: roots(b); break;
    case 3: variational(b); break;
    case 4: poisson_axioms(b); break;
    case 5: pencil(b); break;
    case 6: involutivity(b); break;
    case 7: geometry(b); break;
    case 8: lift_consistency(b); break;
    case 9: flows(b); break;
    default: throw DomainError("criterion must be in 1..9");
  }
  return b.take();
}

nlohmann::json environment_fingerprint() {
  nlohmann::json env;
#if defined(__clang__)
  env["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
  env["compiler"] = std::string("gcc ") + __VERSION__;
#else
  env["compiler"] = "unknown";
#endif
  env["cplusplus"] = static_cast<long>(__cplusplus);
  env["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                 std::to_string(EIGEN_MINOR_VERSION);
  env["scalar"] = "double";
  env["epsilon"] = std::numeric_limits<double>::epsilon();
#ifdef NDEBUG
  env["assertions"] = false;
#else
  env["assertions"] = true;
#endif
  return env;
}

VerificationReport verify_suite(std::uint64_t seed, const std::vector<SuiteSize>& sizes,
                                const SuiteOptions& options) {
  auto run_size = [seed, options](SuiteSize size) {
    std::vector<CheckRecord> out;
    for (int c = 1; c <= 9; ++c) {
      auto recs = run_criterion(c, size, seed, options);
      out.insert(out.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
    }
    return out;
  };
  std::vector<std::vector<CheckRecord>> per_size(sizes.size());
  if (options.parallel) {
    std::vector<std::future<std::vector<CheckRecord>>> jobs;
    for (const auto& s : sizes) jobs.push_back(std::async(std::launch::async, run_size, s));
    for (std::size_t i = 0; i < jobs.size(); ++i) per_size[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < sizes.size(); ++i) per_size[i] = run_size(sizes[i]);
  }
  VerificationReport report;
  report.seed = seed;
  report.sizes = sizes;
  report.environment = environment_fingerprint();
  for (auto& recs : per_size)
    report.records.insert(report.records.end(), std::make_move_iterator(recs.begin()),
                          std::make_move_iterator(recs.end()));
  return report;
}

}  // namespace latw
