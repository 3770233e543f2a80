#include "doctest.h"

#include "spectral_bvp/errors.hpp"
#include "spectral_bvp/rational_bc.hpp"

#include <cmath>
#include <random>

using namespace sbvp;

namespace {

RationalBC random_bc(std::mt19937& rng, int ind) {
  if (ind < 0) return RationalBC::dirichlet();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int d = ind / 2;
  const double h0 = ind % 2 ? 0.5 + 1.5 * u(rng) : 0.0;
  std::vector<Pole> poles;
  double loc = -3.0 + 2.0 * u(rng);
  for (int k = 0; k < d; ++k) {
    loc += 0.5 + 4.0 * u(rng);
    poles.push_back({loc, 0.3 + 2.0 * u(rng)});
  }
  return RationalBC::rational(h0, -1.0 + 2.0 * u(rng), poles);
}

}  // namespace

TEST_CASE("index of boundary functions") {
  CHECK(index(RationalBC::dirichlet()) == -1);
  CHECK(index(RationalBC::rational(1, 0)) == 1);
  CHECK(index(RationalBC::rational(0, 0, {{1, 1}})) == 2);
}

TEST_CASE("up_down polynomials") {
  auto d = up_down(RationalBC::dirichlet());
  CHECK(d.up(3.0) == -1.0);
  CHECK(d.down.is_zero());
  auto c = up_down(RationalBC::constant(2.5));
  CHECK(c.up.degree() == 0);
  CHECK(c.up(0.0) == 2.5);
  CHECK(c.down(7.0) == 1.0);
  auto p = up_down(RationalBC::rational(0, 0, {{1, 1}}));
  CHECK(p.up.degree() == 0);
  CHECK(p.up(0.3) == doctest::Approx(1.0));
  CHECK(p.down.coefficient(0) == 1.0);
  CHECK(p.down.coefficient(1) == -1.0);
}

TEST_CASE("eval and derivative") {
  CHECK(eval(RationalBC::rational(1, 0), 2.0) == 2.0);
  const auto f = RationalBC::rational(0, 0, {{1, 1}});
  CHECK(eval(f, 0.0) == doctest::Approx(1.0));
  CHECK(eval_deriv(f, 0.0) == doctest::Approx(1.0));
  CHECK(std::isinf(eval(f, 1.0)));
  CHECK_THROWS_AS(eval(RationalBC::dirichlet(), 0.0), DomainError);
}

TEST_CASE("smallest pole and pole count") {
  CHECK(std::isinf(smallest_pole(RationalBC::dirichlet())));
  CHECK(std::isinf(smallest_pole(RationalBC::rational(1, 0))));
  CHECK(smallest_pole(RationalBC::rational(0, 0, {{3, 2}, {5, 1}})) == 3.0);
  const auto f = RationalBC::rational(0, 0, {{1, 1}, {4, 1}});
  CHECK(pole_count(RationalBC::dirichlet(), 100.0) == 0);
  CHECK(pole_count(f, 2.0) == 1);
  CHECK(pole_count(f, 4.0) == 2);
}

TEST_CASE("partial order") {
  CHECK(precedes(RationalBC::dirichlet(), RationalBC::constant(3)));
  CHECK(precedes(RationalBC::constant(0), RationalBC::constant(1)));
  CHECK_FALSE(precedes(RationalBC::rational(1, 0), RationalBC::constant(0)));
  CHECK_FALSE(precedes(RationalBC::constant(0), RationalBC::dirichlet()));
}

TEST_CASE("theta examples") {
  auto a = theta(0, 0, 5, RationalBC::dirichlet());
  CHECK(a.is_constant());
  CHECK(a.h() == 5.0);

  auto b = theta(0, 0, 1, RationalBC::rational(1, 0));
  CHECK(b.is_constant());
  CHECK(b.h() == doctest::Approx(0.0));

  auto c = theta(0, 1, 0, RationalBC::rational(0, 0, {{1, 1}}));
  CHECK(index(c) == 1);
  CHECK(c.h0() == doctest::Approx(1.0));
  CHECK(c.h() == doctest::Approx(-1.0));

  auto d = theta(0, 1, 0, RationalBC::constant(0));
  CHECK(index(d) == 1);
  CHECK(d.h0() == doctest::Approx(1.0));
  CHECK(d.h() == doctest::Approx(0.0).epsilon(1e-14));

  CHECK(theta(0, 2, 0, RationalBC::constant(2)).is_dirichlet());
  CHECK_THROWS_AS(theta(0, -1, 0, RationalBC::constant(0)), DomainError);
  CHECK_THROWS_AS(theta(2, 5, 0, RationalBC::rational(0, 0, {{1, 1}})), DomainError);
}

TEST_CASE("shift") {
  auto f = shift(RationalBC::constant(0), 1.0);
  CHECK(f.h() == 1.0);
  auto g = shift(RationalBC::rational(1, 2, {{3, 1}}), -2.0);
  CHECK(g.h() == 0.0);
  CHECK(g.h0() == 1.0);
  CHECK(g.poles().size() == 1);
  CHECK(coefficient_distance(shift(shift(g, 0.7), -0.7), g) < 1e-15);
  CHECK_THROWS_AS(shift(RationalBC::dirichlet(), 1.0), DomainError);
}

TEST_CASE("theta involution, index shift, interlacing and value at mu") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int ind = trial % 7;
    const auto f = random_bc(rng, ind);
    const double top = std::isfinite(smallest_pole(f)) ? smallest_pole(f) : 2.0;
    const double mu = top - 0.2 - 3.0 * u(rng);
    const double fmu = eval(f, mu);
    const bool equal = trial % 2 == 0;
    const double tau = equal ? fmu : fmu + 0.1 + 2.0 * u(rng);
    const double rho = -2.0 + 4.0 * u(rng);
    const auto branch = equal ? ThetaBranch::Equal : ThetaBranch::Above;
    const auto g = theta(mu, tau, rho, f, branch);
    if (f.is_constant() && equal) {
      CHECK(g.is_dirichlet());
      continue;
    }
    CHECK(index(g) == index(f) + (equal ? -1 : 1));
    // f̂(μ) ≤ ρ with equality on the Above branch
    if (!g.is_dirichlet()) {
      if (equal)
        CHECK(eval(g, mu) < rho);
      else
        CHECK(eval(g, mu) == doctest::Approx(rho).epsilon(1e-10));
    }
    if (!f.poles().empty() && !g.poles().empty()) {
      CHECK((smallest_pole(f) < smallest_pole(g)) == equal);
      std::vector<std::pair<double, int>> all;
      for (auto& p : f.poles()) all.push_back({p.location, 0});
      for (auto& p : g.poles()) all.push_back({p.location, 1});
      std::sort(all.begin(), all.end());
      for (std::size_t k = 1; k < all.size(); ++k) CHECK(all[k].second != all[k - 1].second);
    }
    // pointwise agreement with the defining formula
    for (double lam : {mu - 1.3, mu + 0.05}) {
      if (lam >= smallest_pole(f)) continue;
      const double direct = (mu - lam) / (eval(f, lam) - tau) + rho;
      if (lam != mu) CHECK(eval(g, lam) == doctest::Approx(direct).epsilon(1e-9));
    }
    const auto back = theta(mu, rho, tau, g, equal ? ThetaBranch::Above : ThetaBranch::Equal);
    CHECK(coefficient_distance(back, f) < 1e-9);
  }
}

TEST_CASE("monotonicity and up_down consistency") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_bc(rng, trial % 7);
    const auto ud = up_down(f);
    for (int k = 0; k < 200; ++k) {
      const double lam = u(rng);
      if (!f.is_constant()) CHECK(eval_deriv(f, lam) > 0.0);
      const double v = eval(f, lam);
      CHECK(std::abs(ud.up(lam) - v * ud.down(lam)) <= 1e-10 * std::max(1.0, std::abs(ud.up(lam))));
    }
    CHECK(ud.up.degree() + ud.down.degree() == index(f));
  }
}
