#pragma once

#include "spectral_bvp/quasi_ode.hpp"

#include <Eigen/Core>

#include <vector>

namespace sbvp {

struct SpectralData {
  Eigen::VectorXd eigenvalues;
  Eigen::VectorXd norming_constants;
  int ind_f = -1;
  int ind_F = -1;
  Eigen::Index size() const { return eigenvalues.size(); }
};

// Throws ValidationError unless eigenvalues increase strictly and norming constants are positive.
void validate(const SpectralData& d);

// Value stored as twice the half-integer.
struct HalfInteger {
  int twice = 0;
  static HalfInteger from_double(double v);
  double value() const { return twice / 2.0; }
  bool is_integer() const { return twice % 2 == 0; }
};

struct SpectrumOptions {
  IntegratorOptions integrator;
  double eig_tol = 1e-13;  // relative bracket width for eigenvalues
  int max_count = 64;
};

double char_function(const Problem& p, double lambda, const IntegratorOptions& opt = {});
// Both one-sided formulas; used for cross-checking.
struct CharValues {
  double from_phi, from_psi;
};
CharValues char_function_both(const Problem& p, double lambda, const IntegratorOptions& opt = {});

// Continuous increasing phase whose level nπ is crossed exactly at the n-th eigenvalue.
double eigen_phase(const Problem& p, double lambda, const IntegratorOptions& opt = {});

std::vector<double> eigenvalues(const Problem& p, int count, const SpectrumOptions& opt = {});
double eigenvalue(const Problem& p, int n, const SpectrumOptions& opt = {});
// Eigenvalues 0..k−1 searched outward from nearby guesses (e.g. of a slightly perturbed problem).
std::vector<double> eigenvalues_near(const Problem& p, const std::vector<double>& guesses, const SpectrumOptions& opt = {});

struct Eigenpair {
  double lambda;
  double beta;
  double gamma;        // from ∫φ² and the endpoint Wronskian terms with β
  double gamma_phi;    // ∫φ² + f'(λ)φ(0)² + F'(λ)φ(π)² (finite-value form; NaN at poles of F)
  double chi_prime;
};
Eigenpair eigenpair(const Problem& p, double lambda_n, const IntegratorOptions& opt = {});

// β from grid traces: ψ = βφ, taken at the node of max |φ|; checks the residual.
double beta(const Problem& p, double lambda_n, const IntegratorOptions& opt = {});
double norming_constant(const Problem& p, double lambda_n, const IntegratorOptions& opt = {});
SpectralData spectral_data(const Problem& p, int count, const SpectrumOptions& opt = {});
SpectralData spectral_data_from(const Problem& p, const std::vector<double>& eigenvalues, const SpectrumOptions& opt = {});
int oscillation_count(const Problem& p, double lambda_n, const IntegratorOptions& opt = {});

// Smallest eigenvalue and its norming constant.
struct GroundPair {
  double lambda0, gamma0;
};
GroundPair ground_pair(const Problem& p, const SpectrumOptions& opt = {});

double hadamard_product(const Eigen::VectorXd& eigs, HalfInteger L, double lambda, long tail_count = 10000);
double hadamard_derivative_at(const Eigen::VectorXd& eigs, HalfInteger L, Eigen::Index k, long tail_count = 10000);
// Real-axis form of the large-λ estimate (√λ)^{2L+1} sin((√λ + L)π).
double asymptotic_chi(HalfInteger L, double lambda);
// Constant c such that c·product matches asymptotic_chi for the reference spectrum (n − L)².
struct Calibration {
  double constant;
  double spread;  // max relative deviation across probes
};
Calibration hadamard_calibration(HalfInteger L, long tail_count = 10000);

struct AsymptoticResiduals {
  std::vector<double> a, b;
  std::vector<int> b_index;  // n values kept in b
};
AsymptoticResiduals asymptotic_residuals(const SpectralData& data);

}  // namespace sbvp
