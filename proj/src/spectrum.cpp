#include "spectral_bvp/spectrum.hpp"

#include "spectral_bvp/errors.hpp"
#include "spectral_bvp/parallel.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace sbvp {

namespace {
constexpr double kPi = std::numbers::pi;

ShotInit phi_init(const RationalBC& f, double lambda, bool with_derivative) {
  const auto [up, down] = up_down_at(f, lambda);
  ShotInit in{down, -up};
  if (with_derivative) {
    const auto [dup, ddown] = up_down_deriv_at(f, lambda);
    in.dy = ddown;
    in.dy1 = -dup;
  }
  return in;
}

// Angle of (y, y⁽¹⁾) in (0, π].
double angle(double y, double y1) {
  double a = std::atan2(y, y1);
  if (a <= 0.0) a += kPi;
  return a;
}
}  // namespace

void validate(const SpectralData& d) {
  if (d.eigenvalues.size() < 1) throw ValidationError("spectral data: empty");
  if (d.eigenvalues.size() != d.norming_constants.size())
    throw ValidationError("spectral data: eigenvalue and norming constant counts differ");
  if (!d.eigenvalues.allFinite() || !d.norming_constants.allFinite()) throw ValidationError("spectral data: non-finite entry");
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!(d.norming_constants[i] > 0.0)) throw ValidationError("spectral data: norming constants must be positive");
    if (i > 0 && !(d.eigenvalues[i] > d.eigenvalues[i - 1]))
      throw ValidationError("spectral data: eigenvalues must increase strictly");
  }
  if (d.ind_f < -1 || d.ind_F < -1) throw ValidationError("spectral data: indices must be >= -1");
}

HalfInteger HalfInteger::from_double(double v) {
  const double t = std::round(2.0 * v);
  if (std::abs(2.0 * v - t) > 1e-9) throw ValidationError("value is not a half-integer");
  return HalfInteger{static_cast<int>(t)};
}

CharValues char_function_both(const Problem& p, double lambda, const IntegratorOptions& opt) {
  const auto left = shoot(p.s, lambda, Endpoint::Left, phi_init(p.f, lambda, false), false, opt);
  const auto [Fu, Fd] = up_down_at(p.F, lambda);
  const double a = std::exp(left.log_scale) * (Fu * left.y - Fd * left.y1);
  const auto [fu, fd] = up_down_at(p.f, lambda);
  const auto right = shoot(p.s, lambda, Endpoint::Right, ShotInit{Fd, Fu}, false, opt);
  const double b = std::exp(right.log_scale) * (fd * right.y1 + fu * right.y);
  return {a, b};
}

double char_function(const Problem& p, double lambda, const IntegratorOptions& opt) {
  const auto left = shoot(p.s, lambda, Endpoint::Left, phi_init(p.f, lambda, false), false, opt);
  const auto [Fu, Fd] = up_down_at(p.F, lambda);
  return std::exp(left.log_scale) * (Fu * left.y - Fd * left.y1);
}

double eigen_phase(const Problem& p, double lambda, const IntegratorOptions& opt) {
  ShotInit in = phi_init(p.f, lambda, false);
  if (in.y < 0.0 || (in.y == 0.0 && in.y1 < 0.0)) {
    in.y = -in.y;
    in.y1 = -in.y1;
  }
  const auto r = shoot(p.s, lambda, Endpoint::Left, in, false, opt);
  const auto [Fu, Fd] = up_down_at(p.F, lambda);
  const double acotF = angle(Fd, Fu);
  const int poles = pole_count(p.f, lambda) + pole_count(p.F, lambda);
  return kPi * (poles + r.sign_changes) + angle(r.y, r.y1) - acotF;
}

namespace {

struct Bracket {
  double lo, hi;
};

double lower_phase_bound(const Problem& p, const IntegratorOptions& opt) {
  double lam = -1.0;
  for (int it = 0; it < 60; ++it) {
    if (eigen_phase(p, lam, opt) < 0.0) return lam;
    lam = 4.0 * lam - 10.0;
  }
  throw SearchError("eigenvalues: no lower bracket found down to " + std::to_string(lam));
}

double solve_level(const Problem& p, int n, double lo, double hi, const SpectrumOptions& opt) {
  auto g = [&](double lam) { return eigen_phase(p, lam, opt.integrator) - n * kPi; };
  const double tol = opt.eig_tol;
  auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol * std::max(1.0, std::abs(a)); };
  boost::uintmax_t iters = 100;
  const double glo = g(lo), ghi = g(hi);
  if (!(glo < 0.0 && ghi > 0.0)) {
    std::ostringstream os;
    os << "eigenvalues: invalid bracket for n=" << n << " [" << lo << ", " << hi << "] phases " << glo << ", " << ghi;
    throw SearchError(os.str());
  }
  auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, stop, iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

std::vector<double> eigenvalues(const Problem& p, int count, const SpectrumOptions& opt) {
  if (count < 1) throw DomainError("eigenvalues: count must be positive");
  if (count > opt.max_count) throw DomainError("eigenvalues: count exceeds configured cap");
  std::vector<double> out;
  out.reserve(count);
  double lo = lower_phase_bound(p, opt.integrator);
  for (int n = 0; n < count; ++n) {
    const double base = std::sqrt(std::max(lo, 0.0));
    double hi = std::max(lo + 1.0, (base + 1.5) * (base + 1.5));
    int expand = 0;
    while (eigen_phase(p, hi, opt.integrator) <= n * kPi) {
      if (++expand > 80) throw SearchError("eigenvalues: bracket exhaustion for n=" + std::to_string(n));
      const double next = lo + 2.0 * (hi - lo);
      lo = hi;  // the phase at hi is still below nπ
      hi = next;
    }
    const double lam = solve_level(p, n, lo, hi, opt);
    out.push_back(lam);
    lo = lam;
  }
  return out;
}

std::vector<double> eigenvalues_near(const Problem& p, const std::vector<double>& guesses, const SpectrumOptions& opt) {
  std::vector<double> out(guesses.size());
  for (std::size_t i = 0; i < guesses.size(); ++i) {
    const int n = static_cast<int>(i);
    const double g0 = guesses[i];
    double step = 1e-7 * std::max(1.0, std::abs(g0));
    const double ph = eigen_phase(p, g0, opt.integrator) - n * kPi;
    if (ph == 0.0) {
      out[i] = g0;
      continue;
    }
    // Walk away from the guess with growing steps until the level nπ is bracketed.
    double a = g0, b = g0;
    const double dir = ph < 0.0 ? 1.0 : -1.0;
    for (int it = 0;; ++it) {
      if (it > 60) throw SearchError("eigenvalues_near: no bracket near the guess for n=" + std::to_string(n));
      b = g0 + dir * step;
      if ((eigen_phase(p, b, opt.integrator) - n * kPi) * ph < 0.0) break;
      a = b;
      step *= 8.0;
    }
    out[i] = solve_level(p, n, std::min(a, b), std::max(a, b), opt);
  }
  return out;
}

double eigenvalue(const Problem& p, int n, const SpectrumOptions& opt) {
  SpectrumOptions o = opt;
  o.max_count = std::max(o.max_count, n + 1);
  return eigenvalues(p, n + 1, o).back();
}

Eigenpair eigenpair(const Problem& p, double lambda, const IntegratorOptions& opt) {
  const auto r = shoot(p.s, lambda, Endpoint::Left, phi_init(p.f, lambda, true), true, opt);
  const auto [Fu, Fd] = up_down_at(p.F, lambda);
  const auto [dFu, dFd] = up_down_deriv_at(p.F, lambda);
  const auto [fu, fd] = up_down_at(p.f, lambda);
  const auto [dfu, dfd] = up_down_deriv_at(p.f, lambda);
  const double sc = std::exp(r.log_scale);
  const double y = r.y * sc, y1 = r.y1 * sc;
  const double norm2 = y * y + y1 * y1;
  if (!(norm2 > 0.0)) throw InconsistencyError("eigenpair: vanishing endpoint data");
  Eigenpair e;
  e.lambda = lambda;
  e.beta = (Fd * y + Fu * y1) / norm2;
  if (e.beta == 0.0) throw DomainError("eigenpair: lambda is not an eigenvalue (beta = 0)");
  const double l2 = r.l2 * sc * sc;
  const double wf = dfu * fd - fu * dfd;
  const double wF = dFu * Fd - Fu * dFd;
  e.gamma = l2 + wf + wF / (e.beta * e.beta);
  if (p.F.is_dirichlet()) {
    e.gamma_phi = l2 + wf;
  } else if (Fd == 0.0) {
    e.gamma_phi = std::numeric_limits<double>::quiet_NaN();
  } else {
    e.gamma_phi = l2 + wf + eval_deriv(p.F, lambda) * y * y;
  }
  e.chi_prime = dFu * y + Fu * r.dy * sc - dFd * y1 - Fd * r.dy1 * sc;
  return e;
}

double beta(const Problem& p, double lambda_n, const IntegratorOptions& opt) {
  const auto a = phi(p, lambda_n, opt);
  const auto b = psi(p, lambda_n, opt);
  Eigen::Index k;
  a.y.cwiseAbs().maxCoeff(&k);
  const double bt = b.y[k] / a.y[k];
  const double resid = (b.y - bt * a.y).cwiseAbs().maxCoeff();
  if (!(bt != 0.0) || resid > 1e-6 * b.y.cwiseAbs().maxCoeff())
    throw DomainError("beta: lambda is not an eigenvalue (psi is not proportional to phi)");
  return bt;
}

double norming_constant(const Problem& p, double lambda_n, const IntegratorOptions& opt) {
  const auto e = eigenpair(p, lambda_n, opt);
  if (!(e.gamma > 0.0)) throw InconsistencyError("norming constant is not positive");
  return e.gamma;
}

SpectralData spectral_data(const Problem& p, int count, const SpectrumOptions& opt) {
  return spectral_data_from(p, eigenvalues(p, count, opt), opt);
}

SpectralData spectral_data_from(const Problem& p, const std::vector<double>& eigs, const SpectrumOptions& opt) {
  const int count = static_cast<int>(eigs.size());
  SpectralData d;
  d.ind_f = index(p.f);
  d.ind_F = index(p.F);
  d.eigenvalues = Eigen::Map<const Eigen::VectorXd>(eigs.data(), count);
  d.norming_constants.resize(count);
  parallel_for(static_cast<std::size_t>(count),
               [&](std::size_t i) { d.norming_constants[i] = norming_constant(p, eigs[i], opt.integrator); });
  return d;
}

GroundPair ground_pair(const Problem& p, const SpectrumOptions& opt) {
  const double l0 = eigenvalue(p, 0, opt);
  return {l0, norming_constant(p, l0, opt.integrator)};
}

int oscillation_count(const Problem& p, double lambda_n, const IntegratorOptions& opt) {
  const auto tr = phi(p, lambda_n, opt);
  const Eigen::Index n = tr.grid.size();
  const double scale = tr.y.cwiseAbs().maxCoeff();
  const auto [Fu, Fd] = up_down_at(p.F, lambda_n);
  (void)Fu;
  // Drop the last node if the boundary condition forces y(π) = 0 there.
  Eigen::Index last = n - 1;
  if (Fd == 0.0 && std::abs(tr.y[last]) <= 1e-7 * scale) --last;
  int sign = 0;
  int count = 0;
  Eigen::Index prev_change = -1;
  for (Eigen::Index i = 0; i <= last; ++i) {
    const double v = (i == 0 && tr.y[0] == 0.0) ? 0.0 : tr.y[i];
    const int sg = (v > 0.0) - (v < 0.0);
    if (sg == 0) continue;
    if (sign != 0 && sg != sign) {
      if (prev_change >= 0 && i - prev_change < 2)
        throw ResolutionError("oscillation_count: grid too coarse to separate zeros");
      prev_change = i;
      ++count;
    }
    sign = sg;
  }
  return count;
}

AsymptoticResiduals asymptotic_residuals(const SpectralData& data) {
  AsymptoticResiduals r;
  const double L = (data.ind_f + data.ind_F) / 2.0;
  for (Eigen::Index n = 0; n < data.size(); ++n) {
    const double lam = data.eigenvalues[n];
    const double root = lam >= 0.0 ? std::sqrt(lam) : -std::sqrt(-lam);
    r.a.push_back(root - (n - L));
    const double base = n - L;
    if (base == 0.0) continue;
    r.b.push_back(data.norming_constants[n] / ((kPi / 2.0) * std::pow(base, 2.0 * data.ind_f)) - 1.0);
    r.b_index.push_back(static_cast<int>(n));
  }
  return r;
}

}  // namespace sbvp
