#pragma once

#include "spectral_bvp/potential.hpp"
#include "spectral_bvp/rational_bc.hpp"

#include <Eigen/Core>

namespace sbvp {

struct Problem {
  Potential s;
  RationalBC f = RationalBC::dirichlet();
  RationalBC F = RationalBC::dirichlet();
};

enum class Endpoint { Left, Right };

struct InitialData {
  Endpoint at = Endpoint::Left;
  double y = 0.0;
  double quasi_deriv = 1.0;
};

struct SolutionTrace {
  Eigen::VectorXd grid, y, quasi_deriv;
  double lambda = 0.0;
};

struct IntegratorOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int grid_points = 2048;
};

// Trace on default_grid(s) satisfying y' = y⁽¹⁾ + s y, y⁽¹⁾' = −s y⁽¹⁾ − (s² + λ) y.
SolutionTrace integrate(const Potential& s, double lambda, InitialData init, const IntegratorOptions& opt = {});

SolutionTrace phi(const Problem& p, double lambda, const IntegratorOptions& opt = {});
SolutionTrace psi(const Problem& p, double lambda, const IntegratorOptions& opt = {});
// C(0) = 1, C⁽¹⁾(0) = 0; S(0) = 0, S⁽¹⁾(0) = 1; S_π(π) = 0, S_π⁽¹⁾(π) = 1.
SolutionTrace solution_C(const Potential& s, double lambda, const IntegratorOptions& opt = {});
SolutionTrace solution_S(const Potential& s, double lambda, const IntegratorOptions& opt = {});
SolutionTrace solution_S_pi(const Potential& s, double lambda, const IntegratorOptions& opt = {});

// u y⁽¹⁾ − u⁽¹⁾ y at x = 0.
double wronskian(const SolutionTrace& u, const SolutionTrace& w);
// Largest deviation of the pointwise Wronskian from its value at 0.
double wronskian_variation(const SolutionTrace& u, const SolutionTrace& w);

// Shooting across [0, π] with optional λ-derivative and ∫y². All returned magnitudes are
// multiplied by exp(-log_scale); the true values are value·exp(log_scale) (for l2, exp(2 log_scale)).
struct ShotInit {
  double y, y1;
  double dy = 0.0, dy1 = 0.0;  // d/dλ of the initial data
};
struct ShotResult {
  double y, y1;
  double dy, dy1;
  double l2;
  double log_scale = 0.0;
  int sign_changes = 0;  // sign changes of y strictly inside the interval (step-end samples)
};
ShotResult shoot(const Potential& s, double lambda, Endpoint from, const ShotInit& init, bool with_derivative,
                 const IntegratorOptions& opt = {});

}  // namespace sbvp
