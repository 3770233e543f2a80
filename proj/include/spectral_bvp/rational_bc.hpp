#pragma once

#include "spectral_bvp/polynomial.hpp"

#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace sbvp {

struct Pole {
  double location;
  double residue;
};

// f(λ) = h0 λ + h + Σ δk/(hk − λ), or the Dirichlet marker f = ∞.
class RationalBC {
 public:
  static RationalBC dirichlet();
  static RationalBC rational(double h0, double h, std::vector<Pole> poles = {});
  static RationalBC constant(double h) { return rational(0.0, h); }

  bool is_dirichlet() const { return dirichlet_; }
  bool is_constant() const { return !dirichlet_ && h0_ == 0.0 && poles_.empty(); }
  double h0() const { return h0_; }
  double h() const { return h_; }
  const std::vector<Pole>& poles() const { return poles_; }
  int pole_count() const { return static_cast<int>(poles_.size()); }

 private:
  RationalBC() = default;
  bool dirichlet_ = true;
  double h0_ = 0.0;
  double h_ = 0.0;
  std::vector<Pole> poles_;
};

struct UpDown {
  RealPolynomial up;
  RealPolynomial down;
};

int index(const RationalBC& f);
UpDown up_down(const RationalBC& f);
// The pair (f↑(λ), f↓(λ)) evaluated without forming the polynomials.
std::pair<double, double> up_down_at(const RationalBC& f, double lambda);
// λ-derivatives (f↑'(λ), f↓'(λ)).
std::pair<double, double> up_down_deriv_at(const RationalBC& f, double lambda);

double eval(const RationalBC& f, double lambda);
double eval_deriv(const RationalBC& f, double lambda);
double smallest_pole(const RationalBC& f);
int pole_count(const RationalBC& f, double lambda);
bool precedes(const RationalBC& f, const RationalBC& g);
RationalBC shift(const RationalBC& f, double alpha);

enum class ThetaBranch { Auto, Equal, Above };

// Θ(μ, τ, ρ, f)(λ) = (μ − λ)/(f(λ) − τ) + ρ. Equal means τ = f(μ), Above means τ > f(μ).
RationalBC theta(double mu, double tau, double rho, const RationalBC& f, ThetaBranch branch = ThetaBranch::Auto);

// Resolves Auto to Equal/Above using the 1e-10 tolerance; throws if τ < f(μ).
ThetaBranch classify_theta(double mu, double tau, const RationalBC& f);

// Largest absolute difference between coefficients. Infinite if shapes differ.
double coefficient_distance(const RationalBC& a, const RationalBC& b);

}  // namespace sbvp
