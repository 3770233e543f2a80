#include "doctest.h"

#include "spectral_bvp/errors.hpp"
#include "spectral_bvp/spectrum.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

using namespace sbvp;
using std::numbers::pi;

namespace {
Problem zero_problem(RationalBC f, RationalBC F) { return Problem{Potential::zero(), std::move(f), std::move(F)}; }
const auto D = RationalBC::dirichlet();
const auto N0 = RationalBC::constant(0.0);
}  // namespace

TEST_CASE("characteristic function closed forms") {
  const double lam = 2.7, k = std::sqrt(lam);
  CHECK(char_function(zero_problem(D, D), lam) == doctest::Approx(-std::sin(pi * k) / k).epsilon(1e-9));
  CHECK(char_function(zero_problem(N0, N0), lam) == doctest::Approx(k * std::sin(pi * k)).epsilon(1e-9));
  CHECK(char_function(zero_problem(D, N0), lam) == doctest::Approx(-std::cos(pi * k)).epsilon(1e-9));
  CHECK(std::abs(char_function(zero_problem(D, D), 4.0)) < 1e-9);
  CHECK(std::abs(char_function(zero_problem(N0, N0), 1.0)) < 1e-9);
  CHECK(std::abs(char_function(zero_problem(D, N0), 0.25)) < 1e-9);
  auto s = Potential::fourier(std::vector<double>{0.3, 0.1}, std::vector<double>{-0.2});
  Problem p{s, RationalBC::rational(0.5, 0.2, {{3.0, 1.0}}), RationalBC::rational(0.0, -0.4, {{1.5, 0.7}})};
  for (double l : {-2.0, 0.5, 7.3, 30.1}) {
    auto b = char_function_both(p, l);
    CHECK(b.from_phi == doctest::Approx(b.from_psi).epsilon(1e-7));
  }
}

TEST_CASE("closed form spectra") {
  auto a = spectral_data(zero_problem(D, D), 5);
  for (int n = 0; n < 5; ++n) {
    CHECK(a.eigenvalues[n] == doctest::Approx((n + 1.0) * (n + 1.0)).epsilon(1e-10));
    CHECK(a.norming_constants[n] == doctest::Approx(pi / (2 * (n + 1.0) * (n + 1.0))).epsilon(1e-8));
  }
  auto b = spectral_data(zero_problem(N0, N0), 4);
  CHECK(std::abs(b.eigenvalues[0]) < 1e-10);
  CHECK(b.norming_constants[0] == doctest::Approx(pi).epsilon(1e-8));
  for (int n = 1; n < 4; ++n) {
    CHECK(b.eigenvalues[n] == doctest::Approx(n * n).epsilon(1e-10));
    CHECK(b.norming_constants[n] == doctest::Approx(pi / 2).epsilon(1e-8));
  }
  auto c = eigenvalues(zero_problem(D, N0), 3);
  CHECK(c[0] == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(c[1] == doctest::Approx(2.25).epsilon(1e-10));
  CHECK(c[2] == doctest::Approx(6.25).epsilon(1e-10));
  // affine f, Dirichlet F: γ = ∫φ² + φ(0)²
  Problem af = zero_problem(RationalBC::rational(1, 0), D);
  const double l0 = eigenvalue(af, 1);
  auto tr = phi(af, l0);
  double integral = 0.0;
  for (Eigen::Index i = 0; i + 1 < tr.grid.size(); ++i)
    integral += 0.5 * (tr.grid[i + 1] - tr.grid[i]) * (tr.y[i] * tr.y[i] + tr.y[i + 1] * tr.y[i + 1]);
  CHECK(norming_constant(af, l0) == doctest::Approx(integral + tr.y[0] * tr.y[0]).epsilon(1e-6));
}

TEST_CASE("beta") {
  auto p = zero_problem(D, D);
  CHECK(beta(p, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(beta(p, 4.0) == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK_THROWS_AS(beta(p, 2.0), DomainError);
  // f = 0, F = ∞: φ = cos(kx), ψ = sin(k(π−x))/... ψ(π) = 0, ψ⁽¹⁾(π) = −1
  auto q = zero_problem(N0, D);
  const double l = 2.25, k = 1.5;
  CHECK(beta(q, l) == doctest::Approx(-1.0 / (-k * std::sin(k * pi))).epsilon(1e-8));
}

TEST_CASE("identity chi' = beta gamma and oscillation counts on random problems") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 3; ++trial) {
    auto s = Potential::fourier(std::vector<double>{u(rng), u(rng), u(rng)}, std::vector<double>{u(rng), u(rng)});
    Problem p{s, RationalBC::rational(0.7, 0.3, {{2.0 + trial, 1.0}}), RationalBC::rational(0, -0.2, {{5.5, 0.6}})};
    auto eigs = eigenvalues(p, 12);
    for (int n = 0; n < 12; ++n) {
      auto e = eigenpair(p, eigs[n]);
      CHECK(e.chi_prime / (e.beta * e.gamma) == doctest::Approx(1.0).epsilon(1e-6));
      CHECK(e.gamma_phi == doctest::Approx(e.gamma).epsilon(1e-6));
      CHECK(e.beta == doctest::Approx(beta(p, eigs[n])).epsilon(1e-6));
      CHECK(oscillation_count(p, eigs[n]) + pole_count(p.f, eigs[n]) + pole_count(p.F, eigs[n]) == n);
    }
    CHECK(eigs[0] < std::min(smallest_pole(p.f), smallest_pole(p.F)));
  }
}

TEST_CASE("oscillation counts for classical problems") {
  CHECK(oscillation_count(zero_problem(D, D), 9.0) == 2);
  CHECK(oscillation_count(zero_problem(N0, N0), 9.0) == 3);
}

TEST_CASE("no zeros below the ground state of the Dirichlet-right problem") {
  auto s = Potential::fourier(std::vector<double>{0.5, 0.2}, std::vector<double>{-0.3});
  Problem p{s, RationalBC::constant(0.4), D};
  const double l0 = eigenvalue(p, 0);
  for (double lam : {l0 - 5.0, l0 - 0.5, l0 - 1e-6}) {
    auto r = shoot(s, lam, Endpoint::Left, {1.0, -0.4}, false);
    CHECK(r.sign_changes == 0);
  }
}

TEST_CASE("smallest eigenvalue ordering") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto s = Potential::fourier(std::vector<double>{0.2}, std::vector<double>{0.1});
  for (int t = 0; t < 6; ++t) {
    auto f = RationalBC::rational(t % 2 ? 0.5 : 0.0, u(rng));
    auto g = shift(f, 0.5 + std::abs(u(rng)));
    auto F = RationalBC::constant(u(rng));
    REQUIRE(precedes(f, g));
    CHECK(eigenvalue(Problem{s, f, F}, 0) >= eigenvalue(Problem{s, g, F}, 0));
  }
}

TEST_CASE("interlacing with the Dirichlet-right problem") {
  auto s = Potential::fourier(std::vector<double>{0.3}, std::vector<double>{0.2, -0.1});
  auto f = RationalBC::constant(0.2);
  auto a = eigenvalues(Problem{s, f, D}, 10);
  auto b = eigenvalues(Problem{s, f, RationalBC::constant(-0.6)}, 11);
  for (int n = 0; n < 10; ++n) {
    CHECK(b[n] < a[n]);
    CHECK(a[n] < b[n + 1]);
  }
}

TEST_CASE("hadamard product") {
  Eigen::VectorXd e(30);
  for (int n = 0; n < 30; ++n) e[n] = (n + 0.5) * (n + 0.5);
  const auto L = HalfInteger{-1};
  for (double lam = -5.0; lam <= 50.0; lam += 1.7)
    CHECK(std::abs(hadamard_product(e, L, lam) + std::cos(pi * std::sqrt(std::abs(lam)) * (lam >= 0 ? 1 : 0)) *
                                                      (lam >= 0 ? 1.0 : 0.0) +
                   (lam < 0 ? std::cosh(pi * std::sqrt(-lam)) : 0.0)) < 1e-5);
  Eigen::VectorXd sq(30);
  for (int n = 0; n < 30; ++n) sq[n] = n * n;
  for (double lam : {0.3, 2.2, 10.5}) {
    const double k = std::sqrt(lam);
    CHECK(hadamard_product(sq, HalfInteger{0}, lam) == doctest::Approx(k * std::sin(pi * k)).epsilon(1e-5));
  }
  CHECK(hadamard_product(sq, HalfInteger{0}, sq[3]) == 0.0);
  auto cal = hadamard_calibration(HalfInteger{-2});
  CHECK(cal.constant == doctest::Approx(pi).epsilon(1e-6));
  CHECK(cal.spread < 1e-6);
  CHECK(hadamard_calibration(HalfInteger{0}).constant == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(hadamard_calibration(HalfInteger{4}).constant == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(hadamard_calibration(HalfInteger{3}).constant == doctest::Approx(1.0).epsilon(1e-6));
  // derivative at a zero against a centered difference
  const double h = 1e-5;
  const double num = (hadamard_product(sq, HalfInteger{0}, sq[4] + h) - hadamard_product(sq, HalfInteger{0}, sq[4] - h)) / (2 * h);
  CHECK(hadamard_derivative_at(sq, HalfInteger{0}, 4) == doctest::Approx(num).epsilon(1e-6));
}

TEST_CASE("asymptotic residuals") {
  auto r = asymptotic_residuals(spectral_data(zero_problem(D, D), 8));
  for (double a : r.a) CHECK(std::abs(a) < 1e-9);
  for (double b : r.b) CHECK(std::abs(b) < 1e-7);
  auto q = asymptotic_residuals(spectral_data(zero_problem(N0, N0), 8));
  CHECK(q.b.size() == 7);
  CHECK(q.b_index.front() == 1);
  for (double b : q.b) CHECK(std::abs(b) < 1e-7);
}

TEST_CASE("eigenvalue timing for closed forms") {
  const auto t0 = std::chrono::steady_clock::now();
  auto a = spectral_data(zero_problem(D, D), 20);
  auto b = spectral_data(zero_problem(N0, N0), 20);
  auto c = spectral_data(zero_problem(D, N0), 20);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(secs < 10.0);
  CHECK(c.eigenvalues[19] == doctest::Approx(19.5 * 19.5).epsilon(1e-8));
}
