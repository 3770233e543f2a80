#include "spectral_bvp/quasi_ode.hpp"

#include "spectral_bvp/errors.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <numbers>

namespace sbvp {

namespace {

namespace odeint = boost::numeric::odeint;
constexpr double kPi = std::numbers::pi;

// State layout: y, y⁽¹⁾, ∂λy, ∂λy⁽¹⁾, ∫y².
using State = std::array<double, 5>;

struct System {
  const Potential::Piece* piece;
  double lambda;
  void operator()(const State& u, State& du, double x) const {
    const double s = (*piece)(x);
    const double q = s * s + lambda;
    du[0] = u[1] + s * u[0];
    du[1] = -s * u[1] - q * u[0];
    du[2] = u[3] + s * u[2];
    du[3] = -s * u[3] - q * u[2] - u[0];
    du[4] = u[0] * u[0];
  }
};

// Frequency bound for the scaled Prüfer angle; limits steps so that no step holds two zeros.
double max_step(const Potential& s, double lambda) {
  const double sm = s.sup_bound();
  return 1.5 / (std::sqrt(std::max(lambda, 1.0)) + sm + sm * sm);
}

class Stepper {
 public:
  Stepper(const Potential& s, double lambda, const IntegratorOptions& opt)
      : lambda_(lambda), hmax_(max_step(s, lambda)),
        ctrl_(odeint::make_controlled(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_fehlberg78<State>())) {}

  // Advance u from a to b (either direction) inside one smooth piece; calls on_step after each accepted step.
  template <typename OnStep>
  void advance(State& u, double a, double b, const Potential::Piece& piece, OnStep&& on_step) {
    System sys{&piece, lambda_};
    const double dir = b > a ? 1.0 : -1.0;
    double t = a;
    if (dt_ == 0.0) dt_ = std::min(hmax_, 1e-2);
    int failures = 0;
    while (dir * (b - t) > 1e-15) {
      const double remaining = std::abs(b - t);
      double h = std::min({std::abs(dt_), hmax_, remaining});
      const bool last = h == remaining;
      double step = dir * h;
      double tt = t;
      const auto res = ctrl_.try_step(sys, u, tt, step);
      if (res == odeint::success) {
        t = last ? b : tt;
        if (!last || std::abs(step) > std::abs(dt_)) dt_ = std::abs(step);
        failures = 0;
        on_step(u, t);
      } else {
        dt_ = std::abs(step);
        if (++failures > 200 || dt_ < 1e-14) throw IntegrationError("step size underflow", t);
      }
    }
  }

 private:
  double lambda_;
  double hmax_;
  double dt_ = 0.0;
  odeint::controlled_runge_kutta<odeint::runge_kutta_fehlberg78<State>> ctrl_;
};

Eigen::Index piece_index(const Potential& s, double a, double b) {
  const auto& k = s.knots();
  const double mid = 0.5 * (a + b);
  Eigen::Index i = std::upper_bound(k.data(), k.data() + k.size(), mid) - k.data() - 1;
  return std::clamp<Eigen::Index>(i, 0, k.size() - 2);
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

SolutionTrace integrate(const Potential& s, double lambda, InitialData init, const IntegratorOptions& opt) {
  if (init.y == 0.0 && init.quasi_deriv == 0.0) throw DomainError("integrate: initial data must be nonzero");
  SolutionTrace tr;
  tr.lambda = lambda;
  tr.grid = default_grid(s, opt.grid_points);
  const Eigen::Index n = tr.grid.size();
  tr.y.resize(n);
  tr.quasi_deriv.resize(n);
  Stepper stepper(s, lambda, opt);
  State u{init.y, init.quasi_deriv, 0.0, 0.0, 0.0};
  auto record = [&](Eigen::Index i) {
    if (!std::isfinite(u[0]) || !std::isfinite(u[1])) throw IntegrationError("solution overflow", tr.grid[i]);
    tr.y[i] = u[0];
    tr.quasi_deriv[i] = u[1];
  };
  auto noop = [](const State&, double) {};
  if (init.at == Endpoint::Left) {
    record(0);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      const auto piece = s.piece(piece_index(s, tr.grid[i], tr.grid[i + 1]));
      stepper.advance(u, tr.grid[i], tr.grid[i + 1], piece, noop);
      record(i + 1);
    }
  } else {
    record(n - 1);
    for (Eigen::Index i = n - 1; i > 0; --i) {
      const auto piece = s.piece(piece_index(s, tr.grid[i - 1], tr.grid[i]));
      stepper.advance(u, tr.grid[i], tr.grid[i - 1], piece, noop);
      record(i - 1);
    }
  }
  return tr;
}

ShotResult shoot(const Potential& s, double lambda, Endpoint from, const ShotInit& init, bool with_derivative,
                 const IntegratorOptions& opt) {
  Stepper stepper(s, lambda, opt);
  State u{init.y, init.y1, with_derivative ? init.dy : 0.0, with_derivative ? init.dy1 : 0.0, 0.0};
  ShotResult r{};
  const bool forward = from == Endpoint::Left;
  int sign = sign_of(init.y);
  if (sign == 0) sign = forward ? sign_of(init.y1) : -sign_of(init.y1);
  const double big = 1e150;
  auto on_step = [&](State& st, double) {
    const int sg = sign_of(st[0]);
    if (sg != 0 && sg != sign) {
      ++r.sign_changes;
      sign = sg;
    }
    const double mag = std::abs(st[0]) + std::abs(st[1]);
    if (mag > big) {
      const double f = 1.0 / mag;
      for (int k = 0; k < 4; ++k) st[k] *= f;
      st[4] *= f * f;
      r.log_scale += std::log(mag);
    }
  };
  const auto& k = s.knots();
  const Eigen::Index m = k.size();
  if (forward) {
    for (Eigen::Index i = 0; i + 1 < m; ++i)
      if (k[i + 1] > k[i]) stepper.advance(u, k[i], k[i + 1], s.piece(i), on_step);
  } else {
    for (Eigen::Index i = m - 1; i > 0; --i)
      if (k[i] > k[i - 1]) stepper.advance(u, k[i], k[i - 1], s.piece(i - 1), on_step);
  }
  // A sign change registered on the final sample sits at the far endpoint only if y vanishes there.
  r.y = u[0];
  r.y1 = u[1];
  r.dy = u[2];
  r.dy1 = u[3];
  r.l2 = forward ? u[4] : -u[4];
  return r;
}

SolutionTrace phi(const Problem& p, double lambda, const IntegratorOptions& opt) {
  const auto [up, down] = up_down_at(p.f, lambda);
  return integrate(p.s, lambda, {Endpoint::Left, down, -up}, opt);
}

SolutionTrace psi(const Problem& p, double lambda, const IntegratorOptions& opt) {
  const auto [up, down] = up_down_at(p.F, lambda);
  return integrate(p.s, lambda, {Endpoint::Right, down, up}, opt);
}

SolutionTrace solution_C(const Potential& s, double lambda, const IntegratorOptions& opt) {
  return integrate(s, lambda, {Endpoint::Left, 1.0, 0.0}, opt);
}

SolutionTrace solution_S(const Potential& s, double lambda, const IntegratorOptions& opt) {
  return integrate(s, lambda, {Endpoint::Left, 0.0, 1.0}, opt);
}

SolutionTrace solution_S_pi(const Potential& s, double lambda, const IntegratorOptions& opt) {
  return integrate(s, lambda, {Endpoint::Right, 0.0, 1.0}, opt);
}

double wronskian(const SolutionTrace& u, const SolutionTrace& w) {
  if (u.lambda != w.lambda) throw DomainError("wronskian: traces belong to different lambda");
  if (u.grid.size() != w.grid.size()) throw DomainError("wronskian: traces on different grids");
  return u.y[0] * w.quasi_deriv[0] - u.quasi_deriv[0] * w.y[0];
}

double wronskian_variation(const SolutionTrace& u, const SolutionTrace& w) {
  const double w0 = wronskian(u, w);
  const Eigen::ArrayXd pw = u.y.array() * w.quasi_deriv.array() - u.quasi_deriv.array() * w.y.array();
  return (pw - w0).abs().maxCoeff();
}

}  // namespace sbvp
