#pragma once

#include <Eigen/Core>

#include <variant>
#include <vector>

namespace sbvp {

struct SolutionTrace;

// Zero-mean coefficient s on [0, π].
class Potential {
 public:
  // s(x) = offset + Σ cos[k−1] cos(kx) + Σ sin[k−1] sin(kx); offset removes the mean of the sine part.
  struct Fourier {
    Eigen::VectorXd cos_coeffs, sin_coeffs;
    double offset = 0.0;
  };
  struct PiecewiseLinear {
    Eigen::VectorXd x, v;
  };
  // Piecewise Hermite data at knots: quintic when second derivatives are given, cubic otherwise.
  struct Hermite {
    Eigen::VectorXd x, v, dv, d2v;
  };
  // s(x) = Σ coeffs[k−1] P_k(2x/π − 1), k ≥ 1; zero-mean by orthogonality.
  struct Legendre {
    Eigen::VectorXd coeffs;
  };
  using Basis = std::variant<Fourier, PiecewiseLinear, Hermite, Legendre>;

  // Smooth restriction of s to one knot interval, usable without lookup.
  struct Piece {
    double a = 0.0, b = 0.0;
    double c[6] = {0, 0, 0, 0, 0, 0};  // polynomial in (x − a)
    const Fourier* fourier = nullptr;
    const Legendre* legendre = nullptr;
    double operator()(double x) const;
  };

  Potential();  // s ≡ 0
  static Potential zero() { return Potential(); }
  static Potential fourier(Eigen::VectorXd cos_coeffs, Eigen::VectorXd sin_coeffs);
  static Potential fourier(const std::vector<double>& cos_coeffs, const std::vector<double>& sin_coeffs);
  static Potential legendre(Eigen::VectorXd coeffs);
  // Strict constructors: reject data whose mean exceeds 1e-10.
  static Potential piecewise_linear(Eigen::VectorXd x, Eigen::VectorXd v);
  static Potential hermite(Eigen::VectorXd x, Eigen::VectorXd v, Eigen::VectorXd dv, Eigen::VectorXd d2v = {});

  const Basis& basis() const { return basis_; }
  double eval(double x) const;
  double derivative(double x) const;
  // One-sided derivative (side < 0 from the left, side > 0 from the right).
  double derivative(double x, int side) const;
  double second_derivative(double x, int side = 0) const;
  double mean() const { return mean_; }
  // Upper bound for sup |s|.
  double sup_bound() const { return sup_; }
  // Breakpoints including 0 and π (just {0, π} for the global bases).
  const Eigen::VectorXd& knots() const { return knots_; }
  Piece piece(Eigen::Index i) const;  // interval [knots[i], knots[i+1]]

 private:
  explicit Potential(Basis b);
  double piecewise_derivative(double x, int side, int order) const;
  void finalize();
  Basis basis_;
  Eigen::VectorXd knots_;
  double mean_ = 0.0;
  double sup_ = 0.0;
};

Potential project_zero_mean(const Potential::PiecewiseLinear& raw);
Potential project_zero_mean(const Potential::Hermite& raw);
Potential project_zero_mean(const Potential::Fourier& raw);

double eval(const Potential& s, double x);

// ∫ (a − b)² over [lo, hi], square-rooted.
double l2_distance(const Potential& a, const Potential& b, double lo = 0.0, double hi = 3.14159265358979323846);
double l2_norm(const Potential& a, double lo = 0.0, double hi = 3.14159265358979323846);
double symmetry_defect(const Potential& s);

// ŝ = −s − 2 v⁽¹⁾/v + (2/π) ln(v(π)/v(0)); stored as quintic Hermite data on the trace grid.
Potential darboux_potential(const Potential& s, const SolutionTrace& v);

// Least-squares refit of s onto cos/sin modes using n_grid uniform samples.
Potential fit_fourier(const Potential& s, int n_cos, int n_sin, int n_grid = 2048);

// Uniform grid of n points on [0, π] merged with the potential's knots.
Eigen::VectorXd default_grid(const Potential& s, int n = 2048);

}  // namespace sbvp
