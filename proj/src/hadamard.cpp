#include "spectral_bvp/errors.hpp"
#include "spectral_bvp/spectrum.hpp"

#include <Eigen/QR>

#include <cmath>
#include <vector>
#include <numbers>

namespace sbvp {

namespace {
constexpr double kPi = std::numbers::pi;

struct SignedLog {
  double log = 0.0;
  int sign = 1;
  void mul(double v) {
    if (v == 0.0) {
      sign = 0;
      return;
    }
    if (v < 0.0) sign = -sign;
    log += std::log(std::abs(v));
  }
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log); }
};

double weight(double n, double L) {
  if (n < L) return 1.0;
  if (n == L) return kPi;
  return 1.0 / ((n - L) * (n - L));
}

// Trailing eigenvalues modelled as λ_n ≈ m² + A + B/m², m = n − L.
struct TailModel {
  double A = 0.0, B = 0.0;
};

TailModel tail_model(const Eigen::VectorXd& eigs, double L) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index n = eigs.size() - 1; n >= 0 && idx.size() < 12; --n) {
    if (n - L < 1.0) break;
    idx.push_back(n);
  }
  TailModel t;
  if (idx.empty()) return t;
  if (idx.size() < 4) {
    for (auto n : idx) t.A += eigs[n] - (n - L) * (n - L);
    t.A /= double(idx.size());
    return t;
  }
  Eigen::MatrixXd M(idx.size(), 2);
  Eigen::VectorXd y(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const double m = idx[i] - L;
    M(i, 0) = 1.0;
    M(i, 1) = 1.0 / (m * m);
    y[i] = eigs[idx[i]] - m * m;
  }
  const Eigen::Vector2d c = M.colPivHouseholderQr().solve(y);
  t.A = c[0];
  t.B = c[1];
  return t;
}

// −∏ w_n (λ_n − λ) over all n except `skip`, tail replaced by asymptotic factors.
SignedLog product(const Eigen::VectorXd& eigs, double L, double lambda, Eigen::Index skip, long tail_count) {
  SignedLog acc;
  acc.mul(-1.0);
  const Eigen::Index N = eigs.size();
  for (Eigen::Index n = 0; n < N; ++n) {
    if (n == skip) continue;
    acc.mul(weight(static_cast<double>(n), L) * (eigs[n] - lambda));
  }
  const TailModel tm = tail_model(eigs, L);
  for (long n = N; n <= tail_count; ++n) {
    const double m = n - L;
    const double lam_n = m > 0.0 ? m * m + tm.A + tm.B / (m * m) : 0.0;
    acc.mul(weight(static_cast<double>(n), L) * (lam_n - lambda));
  }
  // Σ_{m > start} log(1 − x/m²) ≈ −x/start − x²/(6 start³)
  const double start = std::max<double>(static_cast<double>(tail_count), static_cast<double>(N - 1)) + 0.5 - L;
  const double x = lambda - tm.A;
  if (start > 0.0) acc.log += -x / start - x * x / (6.0 * start * start * start);
  return acc;
}

}  // namespace

double hadamard_product(const Eigen::VectorXd& eigs, HalfInteger L, double lambda, long tail_count) {
  for (Eigen::Index n = 0; n < eigs.size(); ++n)
    if (eigs[n] == lambda) return 0.0;
  return product(eigs, L.value(), lambda, -1, tail_count).value();
}

double hadamard_derivative_at(const Eigen::VectorXd& eigs, HalfInteger L, Eigen::Index k, long tail_count) {
  if (k < 0 || k >= eigs.size()) throw DomainError("hadamard_derivative_at: index out of range");
  // d/dλ of w_k(λ_k − λ) is −w_k.
  SignedLog rest = product(eigs, L.value(), eigs[k], k, tail_count);
  rest.mul(-weight(static_cast<double>(k), L.value()));
  return rest.value();
}

double asymptotic_chi(HalfInteger L, double lambda) {
  const double root = std::sqrt(std::abs(lambda));
  if (!L.is_integer()) {
    const int k = (L.twice + 1) / 2;
    const double c = lambda >= 0.0 ? std::cos(root * kPi) : std::cosh(root * kPi);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return -sign * std::pow(lambda, k) * c;
  }
  const int l = L.twice / 2;
  // g(λ) = √λ sin(√λπ) continued to λ < 0
  auto g_over_lambda = [&] {
    if (lambda == 0.0) return kPi;
    return lambda > 0.0 ? std::sin(root * kPi) / root : std::sinh(root * kPi) / root;
  };
  const double sign = (std::abs(l) % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(lambda, l + 1) * g_over_lambda();
}

Calibration hadamard_calibration(HalfInteger L, long tail_count) {
  const double Lv = L.value();
  const int N = 400;
  Eigen::VectorXd ref(N);
  for (int n = 0; n < N; ++n) ref[n] = n > Lv ? (n - Lv) * (n - Lv) : 0.0;
  const double probes[] = {-7.3, -2.1, 0.37, 3.3, 11.7, 27.9, 44.1};
  double first = 0.0, spread = 0.0;
  bool have = false;
  for (double lam : probes) {
    const double ratio = asymptotic_chi(L, lam) / hadamard_product(ref, L, lam, tail_count);
    if (!have) {
      first = ratio;
      have = true;
    }
    spread = std::max(spread, std::abs(ratio / first - 1.0));
  }
  return {first, spread};
}

}  // namespace sbvp
