#include "spectral_bvp/transforms.hpp"

#include "spectral_bvp/errors.hpp"

#include <cmath>
#include <numbers>

namespace sbvp {

namespace {
constexpr double kPi = std::numbers::pi;

TransformRecord record_from(const SolutionTrace& v, double Lambda, int I, int J, Direction dir) {
  const Eigen::Index n = v.grid.size() - 1;
  TransformRecord r;
  r.Lambda = Lambda;
  r.I = I;
  r.J = J;
  r.v0 = v.y[0];
  r.v_pi = v.y[n];
  r.v1_0 = v.quasi_deriv[0];
  r.v1_pi = v.quasi_deriv[n];
  r.direction = dir;
  return r;
}

// The Darboux step shared by T̂ and T̃: given v at Λ and Θ branches for both ends.
Problem darboux_step(const Problem& p, const SolutionTrace& v, ThetaBranch left, ThetaBranch right) {
  const Eigen::Index n = v.grid.size() - 1;
  if (!(v.y[0] * v.y[n] > 0.0)) throw InconsistencyError("transform: v has opposite endpoint signs");
  for (Eigen::Index i = 0; i <= n; ++i)
    if (!(v.y[i] * v.y[0] > 0.0)) throw InconsistencyError("transform: v has a zero on [0, pi]");
  const double lg = (2.0 / kPi) * std::log(v.y[n] / v.y[0]);
  const double a = -v.quasi_deriv[0] / v.y[0];
  const double b = v.quasi_deriv[n] / v.y[n];
  Problem out;
  out.s = darboux_potential(p.s, v);
  out.f = theta(v.lambda, a, a + lg, p.f, left);
  out.F = theta(v.lambda, b, b - lg, p.F, right);
  return out;
}

ThetaBranch equal_or_any(const RationalBC& f) { return f.is_dirichlet() ? ThetaBranch::Auto : ThetaBranch::Equal; }
ThetaBranch above_or_any(const RationalBC& f) { return f.is_dirichlet() ? ThetaBranch::Auto : ThetaBranch::Above; }

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

SpectrumOptions transform_options() {
  SpectrumOptions o;
  o.integrator.rel_tol = 1e-12;
  o.integrator.abs_tol = 1e-14;
  o.eig_tol = 1e-14;
  return o;
}

HatResult t_hat(const Problem& p, const SpectrumOptions& opt) {
  const bool fd = p.f.is_dirichlet(), Fd = p.F.is_dirichlet();
  if (fd && Fd) throw DomainError("t_hat: both boundary conditions are Dirichlet");
  const auto g = ground_pair(p, opt);
  const int J = (!fd && !Fd) ? 1 : 0;
  const int I = fd ? -1 : 1;
  const double Lambda = J ? g.lambda0 : g.lambda0 - 2.0;
  const auto v = fd ? psi(p, Lambda, opt.integrator) : phi(p, Lambda, opt.integrator);
  HatResult r;
  r.problem = darboux_step(p, v, equal_or_any(p.f), equal_or_any(p.F));
  r.record = record_from(v, Lambda, I, J, Direction::Forward);
  r.lambda0 = g.lambda0;
  r.gamma0 = g.gamma0;
  return r;
}

SpectralData spectral_map_forward(const SpectralData& data, const TransformRecord& rec) {
  SpectralData out;
  const Eigen::Index n = data.size() - rec.J;
  if (n < 0) throw DomainError("spectral_map_forward: not enough data");
  out.eigenvalues = data.eigenvalues.tail(n);
  out.norming_constants.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double gap = out.eigenvalues[k] - rec.Lambda;
    if (gap == 0.0) throw DomainError("spectral_map_forward: eigenvalue coincides with Lambda");
    out.norming_constants[k] = data.norming_constants[k + rec.J] / std::pow(gap, rec.I);
  }
  out.ind_f = data.ind_f - rec.I;
  out.ind_F = data.ind_F + rec.I * (1 - 2 * rec.J);
  return out;
}

SpectralData spectral_map_inverse(const SpectralData& data, double mu, double nu, const TransformRecord& rec) {
  SpectralData out;
  const Eigen::Index n = data.size();
  out.eigenvalues.resize(n + rec.J);
  out.norming_constants.resize(n + rec.J);
  if (rec.J == 1) {
    out.eigenvalues[0] = mu;
    out.norming_constants[0] = nu;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const double gap = data.eigenvalues[k] - rec.Lambda;
    if (gap == 0.0) throw DomainError("spectral_map_inverse: eigenvalue coincides with Lambda");
    out.eigenvalues[k + rec.J] = data.eigenvalues[k];
    out.norming_constants[k + rec.J] = data.norming_constants[k] * std::pow(gap, rec.I);
  }
  out.ind_f = data.ind_f + rec.I;
  out.ind_F = data.ind_F - rec.I * (1 - 2 * rec.J);
  return out;
}

double kappa(const Problem& p, double mu, const IntegratorOptions& opt) {
  const auto C = shoot(p.s, mu, Endpoint::Left, {1.0, 0.0}, false, opt);
  const auto S = shoot(p.s, mu, Endpoint::Left, {0.0, 1.0}, false, opt);
  const auto [Fu, Fd] = up_down_at(p.F, mu);
  const double cs = std::exp(C.log_scale - S.log_scale);
  const double num = (Fd * C.y1 - Fu * C.y) * cs;
  const double den = Fd * S.y1 - Fu * S.y;
  const double scale = std::abs(Fd * S.y1) + std::abs(Fu * S.y);
  if (std::abs(den) <= 1e-12 * scale) throw PreconditionError("kappa: mu is (numerically) an eigenvalue of P(s, inf, F)");
  return num / den;
}

TildeResult t_tilde(double mu, double nu, const Problem& p, TildeBranch branch, const SpectrumOptions& opt) {
  if (!(nu > 0.0)) throw DomainError("t_tilde: nu must be positive");
  if (branch == TildeBranch::Auto) {
    const auto g = ground_pair(p, opt);
    const double tol = 1e-8;
    if (close_rel(mu, g.lambda0, tol)) {
      if (p.f.is_constant() && close_rel(nu, g.gamma0 / 2.0, tol))
        branch = TildeBranch::ConstantLeft;
      else if (p.F.is_constant() && close_rel(nu, 2.0 * g.gamma0, tol))
        branch = TildeBranch::ConstantRight;
      else
        throw DomainError("t_tilde: mu equals the smallest eigenvalue but (f, F, nu) matches neither constant-end set");
    } else if (mu < g.lambda0) {
      branch = TildeBranch::Below;
    } else {
      throw DomainError("t_tilde: mu must not exceed the smallest eigenvalue (nearest set: mu < lambda0)");
    }
  }
  TildeResult r;
  r.branch = branch;
  switch (branch) {
    case TildeBranch::Below: {
      const double k = kappa(p, mu, opt.integrator);
      const auto [fu, fd] = up_down_at(p.f, mu);
      const double w = k * fd - fu;
      const double den = nu + fd * w;
      if (!(den > 0.0)) throw InconsistencyError("t_tilde: rho denominator is not positive");
      const double rho = (nu * k + fu * w) / den;
      const auto u = integrate(p.s, mu, {Endpoint::Left, 1.0, -rho}, opt.integrator);
      r.problem = darboux_step(p, u, above_or_any(p.f), above_or_any(p.F));
      r.record = record_from(u, mu, 1, 1, Direction::Inverse);
      break;
    }
    case TildeBranch::ConstantLeft: {
      if (!p.f.is_constant()) throw DomainError("t_tilde: constant-left branch needs constant f");
      const auto u = phi(p, mu - 2.0, opt.integrator);
      r.problem = darboux_step(p, u, ThetaBranch::Equal, above_or_any(p.F));
      r.record = record_from(u, mu - 2.0, -1, 0, Direction::Inverse);
      break;
    }
    case TildeBranch::ConstantRight: {
      if (!p.F.is_constant()) throw DomainError("t_tilde: constant-right branch needs constant F");
      const auto u = psi(p, mu - 2.0, opt.integrator);
      r.problem = darboux_step(p, u, above_or_any(p.f), ThetaBranch::Equal);
      r.record = record_from(u, mu - 2.0, 1, 0, Direction::Inverse);
      break;
    }
    case TildeBranch::Auto:
      break;
  }
  return r;
}

double gamma0_rho(const Problem& p, double lambda0, const IntegratorOptions& opt) {
  if (p.f.is_dirichlet()) throw DomainError("gamma0_rho: f must be finite");
  const auto r = shoot(p.s, lambda0, Endpoint::Left, {up_down_at(p.f, lambda0).second, -up_down_at(p.f, lambda0).first},
                       false, opt);
  const double fd = up_down_at(p.f, lambda0).second;
  return eval(p.f, lambda0) + (2.0 / kPi) * (std::log(r.y / fd) + r.log_scale);
}

double gamma0_from_hat(const Problem& p_hat, double lambda0, double rho, const IntegratorOptions& opt) {
  const double k = kappa(p_hat, lambda0, opt);
  if (std::abs(rho - k) <= 1e-12 * std::max(1.0, std::abs(k))) throw DomainError("gamma0_from_hat: rho equals kappa");
  const auto [fu, fd] = up_down_at(p_hat.f, lambda0);
  const double g = (fu - k * fd) * (rho * fd - fu) / (rho - k);
  if (!(g > 0.0)) throw InconsistencyError("gamma0_from_hat: non-positive result");
  return g;
}

ChainReduction reduce_chain(const Problem& p, const SpectrumOptions& opt) {
  ChainReduction c;
  c.problems.push_back(p);
  const int K = std::max(index(p.f), index(p.F));
  for (int k = 0; k < K; ++k) {
    auto h = t_hat(c.problems.back(), opt);
    if (h.record.J == 1) c.removed_pairs.emplace_back(h.lambda0, h.gamma0);
    c.records.push_back(h.record);
    c.problems.push_back(std::move(h.problem));
  }
  return c;
}

}  // namespace sbvp
