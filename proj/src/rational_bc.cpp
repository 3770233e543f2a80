#include "spectral_bvp/rational_bc.hpp"

#include "spectral_bvp/errors.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <cmath>
#include <string>

namespace sbvp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double lead_normalizer(const RationalBC& f) { return f.h0() > 0.0 ? 1.0 / f.h0() : 1.0; }

void require_rational(const RationalBC& f, const char* what) {
  if (f.is_dirichlet()) throw DomainError(std::string(what) + ": Dirichlet boundary function has no finite value");
}
}  // namespace

std::vector<double> real_roots(const RealPolynomial& p, double imag_tol) {
  std::vector<double> roots;
  if (p.degree() < 1) return roots;
  if (p.degree() == 1) {
    roots.push_back(-p.coefficient(0) / p.coefficient(1));
    return roots;
  }
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(p.coefficients());
  for (const auto& z : solver.roots()) {
    if (std::abs(z.imag()) <= imag_tol * std::max(1.0, std::abs(z))) roots.push_back(z.real());
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

RationalBC RationalBC::dirichlet() { return RationalBC(); }

RationalBC RationalBC::rational(double h0, double h, std::vector<Pole> poles) {
  if (!std::isfinite(h0) || !std::isfinite(h)) throw ValidationError("rational boundary function: non-finite h0 or h");
  if (h0 < 0.0) throw ValidationError("rational boundary function: h0 must be nonnegative");
  for (std::size_t k = 0; k < poles.size(); ++k) {
    if (!std::isfinite(poles[k].location) || !std::isfinite(poles[k].residue))
      throw ValidationError("rational boundary function: non-finite pole data");
    if (!(poles[k].residue > 0.0))
      throw ValidationError("rational boundary function: residue " + std::to_string(k) + " must be positive");
    if (k > 0 && !(poles[k].location > poles[k - 1].location))
      throw ValidationError("rational boundary function: pole locations must be strictly increasing");
  }
  RationalBC f;
  f.dirichlet_ = false;
  f.h0_ = h0;
  f.h_ = h;
  f.poles_ = std::move(poles);
  return f;
}

int index(const RationalBC& f) {
  if (f.is_dirichlet()) return -1;
  return 2 * f.pole_count() + (f.h0() > 0.0 ? 1 : 0);
}

UpDown up_down(const RationalBC& f) {
  if (f.is_dirichlet()) return {RealPolynomial::constant(-1.0), RealPolynomial()};
  const double c = lead_normalizer(f);
  RealPolynomial down = RealPolynomial::constant(c);
  for (const auto& p : f.poles()) down = down * RealPolynomial::root_factor(p.location);
  RealPolynomial up = RealPolynomial({f.h(), f.h0()}) * down;
  for (std::size_t k = 0; k < f.poles().size(); ++k) {
    RealPolynomial rest = RealPolynomial::constant(c * f.poles()[k].residue);
    for (std::size_t j = 0; j < f.poles().size(); ++j)
      if (j != k) rest = rest * RealPolynomial::root_factor(f.poles()[j].location);
    up = up + rest;
  }
  return {up, down};
}

std::pair<double, double> up_down_at(const RationalBC& f, double lambda) {
  if (f.is_dirichlet()) return {-1.0, 0.0};
  const auto ud = up_down(f);
  return {ud.up(lambda), ud.down(lambda)};
}

std::pair<double, double> up_down_deriv_at(const RationalBC& f, double lambda) {
  if (f.is_dirichlet()) return {0.0, 0.0};
  const auto ud = up_down(f);
  return {ud.up.derivative()(lambda), ud.down.derivative()(lambda)};
}

double eval(const RationalBC& f, double lambda) {
  require_rational(f, "eval");
  double v = f.h0() * lambda + f.h();
  for (const auto& p : f.poles()) {
    if (lambda == p.location) return kInf;
    v += p.residue / (p.location - lambda);
  }
  return v;
}

double eval_deriv(const RationalBC& f, double lambda) {
  require_rational(f, "eval_deriv");
  double v = f.h0();
  for (const auto& p : f.poles()) {
    if (lambda == p.location) throw DomainError("eval_deriv: lambda is a pole");
    const double d = p.location - lambda;
    v += p.residue / (d * d);
  }
  return v;
}

double smallest_pole(const RationalBC& f) {
  if (f.is_dirichlet() || f.poles().empty()) return kInf;
  return f.poles().front().location;
}

int pole_count(const RationalBC& f, double lambda) {
  if (f.is_dirichlet()) return 0;
  return static_cast<int>(std::count_if(f.poles().begin(), f.poles().end(),
                                        [lambda](const Pole& p) { return p.location <= lambda; }));
}

bool precedes(const RationalBC& f, const RationalBC& g) {
  if (f.is_dirichlet()) return true;
  if (g.is_dirichlet()) return false;
  // λ → −∞: f ≈ h0 λ + h
  if (f.h0() < g.h0()) return false;
  if (f.h0() == g.h0() && f.h() > g.h()) return false;
  const double pf = smallest_pole(f), pg = smallest_pole(g);
  const double m = std::min(pf, pg);
  if (std::isfinite(m)) {
    if (pf < pg) return false;
    if (pf == pg && f.poles().front().residue > g.poles().front().residue) return false;
  }
  // Sample on (−1e6, m) with points clustered near m and near zero.
  const double top = std::isfinite(m) ? m : 1e6;
  const int n = 256;
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) / n;
    const double lam = top - (top + 1e6) * std::pow(t, 3.0);
    if (lam >= m) continue;
    const double a = eval(f, lam), b = eval(g, lam);
    if (a > b + 1e-12 * std::max({1.0, std::abs(a), std::abs(b)})) return false;
  }
  return true;
}

RationalBC shift(const RationalBC& f, double alpha) {
  require_rational(f, "shift");
  return RationalBC::rational(f.h0(), f.h() + alpha, f.poles());
}

ThetaBranch classify_theta(double mu, double tau, const RationalBC& f) {
  if (f.is_dirichlet()) return ThetaBranch::Above;
  const double fmu = eval(f, mu);
  if (std::abs(tau - fmu) <= 1e-10) return ThetaBranch::Equal;
  if (tau > fmu) return ThetaBranch::Above;
  throw DomainError("theta: tau < f(mu) violates the admissible set");
}

namespace {

// Root of f(λ) = τ in (a, b) where f − τ goes from negative to positive; infinite ends allowed.
double solve_level(const RationalBC& f, double tau, double a, double b) {
  auto g = [&](double x) { return eval(f, x) - tau; };
  auto nudge = [](double x) { return 1e-13 * std::max(1.0, std::abs(x)); };
  double lo, hi;
  if (std::isfinite(a)) {
    lo = a + nudge(a);
    double eps = nudge(a);
    while (!(g(lo) < 0.0)) {
      eps *= 0.01;
      lo = a + eps;
      if (eps < 1e-300 || lo == a) throw InconsistencyError("theta: cannot bracket level set near a pole");
    }
  } else {
    const double ref = std::isfinite(b) ? b : 0.0;
    double step = 1.0;
    lo = ref - step;
    while (!(g(lo) < 0.0)) {
      step *= 2.0;
      lo = ref - step;
      if (step > 1e300) throw InconsistencyError("theta: level set unbounded below");
    }
  }
  if (std::isfinite(b)) {
    double eps = nudge(b);
    hi = b - eps;
    while (!(g(hi) > 0.0)) {
      eps *= 0.01;
      hi = b - eps;
      if (eps < 1e-300 || hi == b) throw InconsistencyError("theta: cannot bracket level set near a pole");
    }
  } else {
    double step = 1.0;
    hi = lo + step;
    while (!(g(hi) > 0.0)) {
      step *= 2.0;
      hi = lo + step;
      if (step > 1e300) throw InconsistencyError("theta: level set unbounded above");
    }
  }
  if (hi < lo) throw InconsistencyError("theta: empty bracket");
  boost::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

RationalBC theta(double mu, double tau, double rho, const RationalBC& f, ThetaBranch branch) {
  if (f.is_dirichlet()) return RationalBC::constant(rho);
  if (!(mu < smallest_pole(f))) throw DomainError("theta: mu must lie below the smallest pole of f");
  if (branch == ThetaBranch::Auto) branch = classify_theta(mu, tau, f);
  const bool equal = branch == ThetaBranch::Equal;

  if (f.is_constant()) {
    if (equal) return RationalBC::dirichlet();
    if (!(tau > f.h())) throw DomainError("theta: tau must exceed the constant value of f");
    return RationalBC::rational(1.0 / (tau - f.h()), rho - mu / (tau - f.h()));
  }

  const auto& poles = f.poles();
  const int d = static_cast<int>(poles.size());
  std::vector<double> roots;
  // First interval (−∞, h1): its root is μ on the Equal branch, otherwise a root above μ.
  if (!equal) {
    roots.push_back(solve_level(f, tau, mu, d > 0 ? poles[0].location : kInf));
  }
  for (int k = 0; k + 1 < d; ++k) roots.push_back(solve_level(f, tau, poles[k].location, poles[k + 1].location));
  if (d > 0 && f.h0() > 0.0) roots.push_back(solve_level(f, tau, poles[d - 1].location, kInf));

  std::vector<Pole> hat;
  hat.reserve(roots.size());
  double tail = 0.0;
  for (double p : roots) {
    const double res = (p - mu) / eval_deriv(f, p);
    if (!(res > 0.0)) throw InconsistencyError("theta: nonpositive residue from level-set root");
    hat.push_back({p, res});
    tail += res / (p - mu);
  }
  const double h0_hat = f.h0() > 0.0 ? 0.0 : 1.0 / (tau - f.h());
  if (f.h0() == 0.0 && !(tau > f.h())) throw InconsistencyError("theta: tau must exceed the limit value h");
  const double value_at_mu = equal ? rho - 1.0 / eval_deriv(f, mu) : rho;
  const double h_hat = value_at_mu - h0_hat * mu - tail;
  for (std::size_t k = 1; k < hat.size(); ++k)
    if (!(hat[k].location > hat[k - 1].location)) throw InconsistencyError("theta: level-set roots not separated");
  return RationalBC::rational(h0_hat, h_hat, std::move(hat));
}

double coefficient_distance(const RationalBC& a, const RationalBC& b) {
  if (a.is_dirichlet() || b.is_dirichlet()) return (a.is_dirichlet() && b.is_dirichlet()) ? 0.0 : kInf;
  if (a.pole_count() != b.pole_count() || ((a.h0() > 0) != (b.h0() > 0))) return kInf;
  double d = std::max(std::abs(a.h0() - b.h0()), std::abs(a.h() - b.h()));
  for (int k = 0; k < a.pole_count(); ++k) {
    d = std::max(d, std::abs(a.poles()[k].location - b.poles()[k].location));
    d = std::max(d, std::abs(a.poles()[k].residue - b.poles()[k].residue));
  }
  return d;
}

}  // namespace sbvp
