#pragma once

#include "spectral_bvp/polynomial.hpp"
#include "spectral_bvp/transforms.hpp"

#include <string>
#include <vector>

namespace sbvp {

struct FitOptions {
  int basis_size = 12;  // Legendre terms in the fitted base potential
  int max_basis = 40;
  double tol_eig = 1e-6;    // max relative eigenvalue error
  double tol_gamma = 1e-5;  // max relative norming-constant error
  int max_evaluations = 4000;
  int max_pairs = 30;  // data beyond this many pairs is not fitted
  SpectrumOptions spectrum = fit_spectrum_options();

  static SpectrumOptions fit_spectrum_options();
};

struct FitReport {
  Problem problem;
  double max_eig_error = 0.0;
  double max_gamma_error = 0.0;
  int basis_size = 0;
  int evaluations = 0;
  bool converged = false;
};

// Base case: data whose indices are both in {−1, 0}. Throws ReconstructionError when the fit misses the tolerances.
FitReport fit_constant_bc(const SpectralData& data, const FitOptions& opt = {});
Problem inverse_constant_bc(const SpectralData& data, const FitOptions& opt = {});

struct Indices {
  int M = 0, N = 0;
};
// Reads ind f, ind F from the asymptotics of the data (at least 15 pairs).
Indices detect_indices(const SpectralData& data);

struct InverseReport {
  Problem problem;
  FitReport base;
  std::vector<SpectralData> levels;      // levels[0] is the input
  std::vector<TransformRecord> records;  // forward records linking levels[k] to levels[k+1]
  double max_eig_error = 0.0;             // of the final problem against the fitted input pairs
  double max_gamma_error = 0.0;
};
InverseReport inverse_spectral_data_report(const SpectralData& data, const FitOptions& opt = {});
Problem inverse_spectral_data(const SpectralData& data, const FitOptions& opt = {});

struct HankelOptions {
  int extrapolate_to = 2000;  // terms summed explicitly, computed plus extrapolated
  int tail_fit = 15;          // trailing pairs used for the asymptotic model
  double max_condition = 1e13;
  double max_tail_fraction = 0.1;  // refuse when the tail exceeds this share of the smallest |s_k|
};
struct FDownRecovery {
  RealPolynomial p;  // ∏ (τ_k − λ)
  std::vector<double> poles;
  double condition = 0.0;
  Eigen::VectorXd moments;
};
// Recovers the pole polynomial of f (degree d) from spectral data through a Hankel system of moments.
FDownRecovery recover_f_down(const SpectralData& data, int d, const HankelOptions& opt = {});

struct TwoSpectraInput {
  Eigen::VectorXd lambdas;  // spectrum of (s, f, F)
  Eigen::VectorXd mus;      // spectrum of (s, f + α, F)
  HalfInteger L;
  int r = 0;
  double nu = 0.0;
  std::vector<int> pole_indices;
};
// ν from the limit of (√λ_n − √μ_n)(n − L)^{2r+1}, extrapolated in even inverse powers.
double estimate_nu(const Eigen::VectorXd& lambdas, const Eigen::VectorXd& mus, HalfInteger L, int r);
struct NuEstimate {
  double nu = 0.0;
  int r = 0;
};
// Picks the r ∈ {0, 1} whose scaled difference sequence settles to a finite nonzero limit.
NuEstimate estimate_nu_r(const Eigen::VectorXd& lambdas, const Eigen::VectorXd& mus, HalfInteger L);
// Zeros of ξ − χ below the largest supplied eigenvalue.
std::vector<double> two_spectra_zeros(const Eigen::VectorXd& lambdas, const Eigen::VectorXd& mus, HalfInteger L);
struct TwoSpectraResult {
  Problem problem;
  double alpha = 0.0;
  std::vector<double> tau;
  SpectralData data;
  InverseReport report;
  // The first sequence led the interlacing, so the roles were exchanged and α < 0.
  bool swapped = false;
};
// Either interlacing orientation is accepted; ν is taken as given (positive for the leading-μ orientation).
TwoSpectraResult two_spectra_inverse(const TwoSpectraInput& in, const FitOptions& opt = {});

struct TwoProblemDiagnostics {
  bool interlacing = false;
  double identity_residual = 0.0;  // ξ − χ − α f↓ ψ(0), relative, over a λ grid
  double gamma_formula_error = 0.0;
  std::vector<double> nu_sequence;  // (√λ_n − √μ_n)(n − L)^{2r+1}
  double nu_limit = 0.0;            // α (h₀′)² / π
  double nu_relative_error = 0.0;   // at the last n
  double nu_extrapolated = 0.0;     // limit fitted in even inverse powers of n − L
  int herglotz_points = 0;
  int herglotz_failures = 0;
  Eigen::VectorXd lambdas, mus;
};
TwoProblemDiagnostics two_problem_diagnostics(const Problem& p, double alpha, int count,
                                              const SpectrumOptions& opt = {});

Problem symmetric_inverse(const Eigen::VectorXd& lambdas, HalfInteger L, const FitOptions& opt = {});
// Norming constants implied by a symmetric spectrum.
Eigen::VectorXd symmetric_norming_constants(const Eigen::VectorXd& lambdas, HalfInteger L);

struct HalfInverseReport {
  double spectrum_gap = 0.0;  // max relative eigenvalue difference
  double l2_left = 0.0;       // ‖s₁ − s₂‖ on [0, π/2]
  double l2_right = 0.0;      // on [π/2, π]
  double F_distance = 0.0;
};
HalfInverseReport half_inverse_check(const Problem& a, const Problem& b, int count, const SpectrumOptions& opt = {});

}  // namespace sbvp
