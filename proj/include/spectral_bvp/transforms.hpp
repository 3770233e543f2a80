#pragma once

#include "spectral_bvp/spectrum.hpp"

#include <utility>
#include <vector>

namespace sbvp {

enum class Direction { Forward, Inverse };

// Λ, I and J always describe the forward map T̂ between the two problems involved.
struct TransformRecord {
  double Lambda = 0.0;
  int I = 1;
  int J = 1;
  double v0 = 0.0, v_pi = 0.0, v1_0 = 0.0, v1_pi = 0.0;
  Direction direction = Direction::Forward;
};

// Tighter tolerances used wherever λ̊, γ̊ seed Θ classification.
SpectrumOptions transform_options();

struct HatResult {
  Problem problem;
  TransformRecord record;
  double lambda0 = 0.0;
  double gamma0 = 0.0;
};
HatResult t_hat(const Problem& p, const SpectrumOptions& opt = transform_options());

SpectralData spectral_map_forward(const SpectralData& data, const TransformRecord& rec);
SpectralData spectral_map_inverse(const SpectralData& data, double mu, double nu, const TransformRecord& rec);

double kappa(const Problem& p, double mu, const IntegratorOptions& opt = transform_options().integrator);

enum class TildeBranch { Auto, Below, ConstantLeft, ConstantRight };

struct TildeResult {
  Problem problem;
  TransformRecord record;
  TildeBranch branch = TildeBranch::Below;
};
// Branch Below: μ < λ̊, ν > 0. ConstantLeft: f constant, μ = λ̊, ν = γ̊/2. ConstantRight: F constant, μ = λ̊, ν = 2γ̊.
TildeResult t_tilde(double mu, double nu, const Problem& p, TildeBranch branch = TildeBranch::Auto,
                    const SpectrumOptions& opt = transform_options());

double gamma0_from_hat(const Problem& p_hat, double lambda0, double rho,
                       const IntegratorOptions& opt = transform_options().integrator);
// The ρ that pairs with gamma0_from_hat for a pre-image p with finite f.
double gamma0_rho(const Problem& p, double lambda0, const IntegratorOptions& opt = transform_options().integrator);

struct ChainReduction {
  std::vector<Problem> problems;
  std::vector<TransformRecord> records;
  std::vector<std::pair<double, double>> removed_pairs;
};
ChainReduction reduce_chain(const Problem& p, const SpectrumOptions& opt = transform_options());

}  // namespace sbvp
