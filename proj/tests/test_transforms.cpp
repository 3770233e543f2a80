#include "doctest.h"

#include "spectral_bvp/errors.hpp"
#include "spectral_bvp/transforms.hpp"

#include <cmath>
#include <numbers>

using namespace sbvp;
using std::numbers::pi;

namespace {
const auto D = RationalBC::dirichlet();
Potential cos2(double a) { return Potential::fourier(std::vector<double>{0.0, a}, {}); }
}  // namespace

TEST_CASE("t_hat on Neumann-Neumann") {
  Problem p{Potential::zero(), RationalBC::constant(0), RationalBC::constant(0)};
  auto h = t_hat(p);
  CHECK(h.problem.f.is_dirichlet());
  CHECK(h.problem.F.is_dirichlet());
  CHECK(l2_norm(h.problem.s) < 1e-10);
  CHECK(std::abs(h.record.Lambda) < 1e-12);
  CHECK(h.record.I == 1);
  CHECK(h.record.J == 1);
  CHECK(h.gamma0 == doctest::Approx(pi).epsilon(1e-10));
  CHECK(gamma0_from_hat(h.problem, h.lambda0, gamma0_rho(p, h.lambda0)) == doctest::Approx(pi).epsilon(1e-9));
}

TEST_CASE("t_hat with a Dirichlet end") {
  Problem p{Potential::zero(), D, RationalBC::constant(0)};
  auto h = t_hat(p);
  CHECK(h.record.Lambda == doctest::Approx(0.25 - 2.0).epsilon(1e-12));
  CHECK(h.record.I == -1);
  CHECK(h.record.J == 0);
  CHECK(h.problem.f.is_constant());
  CHECK(index(h.problem.F) == -1);
  CHECK_THROWS_AS(t_hat(Problem{Potential::zero(), D, D}), DomainError);
}

TEST_CASE("spectral maps") {
  SpectralData nn;
  nn.ind_f = nn.ind_F = 0;
  nn.eigenvalues.resize(6);
  nn.norming_constants.resize(6);
  for (int n = 0; n < 6; ++n) {
    nn.eigenvalues[n] = n * n;
    nn.norming_constants[n] = n == 0 ? pi : pi / 2;
  }
  TransformRecord rec;
  rec.Lambda = 0.0;
  rec.I = 1;
  rec.J = 1;
  auto dd = spectral_map_forward(nn, rec);
  CHECK(dd.ind_f == -1);
  CHECK(dd.ind_F == -1);
  for (int n = 0; n < 5; ++n) {
    CHECK(dd.eigenvalues[n] == (n + 1.0) * (n + 1.0));
    CHECK(dd.norming_constants[n] == doctest::Approx(pi / (2 * (n + 1.0) * (n + 1.0))));
  }
  auto back = spectral_map_inverse(dd, 0.0, pi, rec);
  CHECK((back.eigenvalues - nn.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.norming_constants - nn.norming_constants).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(back.ind_f == 0);
  TransformRecord r2;
  r2.Lambda = -1.75;
  r2.I = -1;
  r2.J = 0;
  SpectralData one;
  one.eigenvalues = Eigen::VectorXd::Constant(1, 0.25);
  one.norming_constants = Eigen::VectorXd::Constant(1, 3.0);
  CHECK(spectral_map_forward(one, r2).norming_constants[0] == doctest::Approx(6.0));
}

TEST_CASE("kappa") {
  Problem p{Potential::zero(), RationalBC::constant(0), D};
  CHECK(kappa(p, -1.0) == doctest::Approx(std::cosh(pi) / std::sinh(pi)).epsilon(1e-10));
  Problem q{Potential::zero(), RationalBC::constant(0), RationalBC::constant(0)};
  // C⁽¹⁾ = sinh x, S⁽¹⁾ = cosh x for λ = −1
  CHECK(kappa(q, -1.0) == doctest::Approx(std::tanh(pi)).epsilon(1e-10));
}

TEST_CASE("round trip T~(T^(p)) for a cos 2x potential") {
  Problem p{cos2(1.0), RationalBC::constant(1.0), RationalBC::constant(-1.0)};
  auto h = t_hat(p);
  auto t = t_tilde(h.lambda0, h.gamma0, h.problem);
  CHECK(t.branch == TildeBranch::Below);
  CHECK(l2_distance(t.problem.s, p.s) < 1e-6);
  CHECK(coefficient_distance(t.problem.f, p.f) < 1e-8);
  CHECK(coefficient_distance(t.problem.F, p.F) < 1e-8);
}

TEST_CASE("t_tilde gains an eigenvalue") {
  Problem p{Potential::zero(), D, D};
  auto t = t_tilde(0.5, 1.0, p);
  CHECK(index(t.problem.f) == 0);
  CHECK(index(t.problem.F) == 0);
  auto sd = spectral_data(t.problem, 4);
  CHECK(sd.eigenvalues[0] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(sd.norming_constants[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sd.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(sd.norming_constants[1] == doctest::Approx(pi / 2 * 0.5).epsilon(1e-6));
}

TEST_CASE("constant-end branches round trip") {
  Problem p{cos2(0.4), RationalBC::constant(0.3), D};
  const auto g = ground_pair(p, transform_options());
  auto t = t_tilde(g.lambda0, g.gamma0 / 2, p);
  CHECK(t.branch == TildeBranch::ConstantLeft);
  CHECK(t.problem.f.is_dirichlet());
  auto h = t_hat(t.problem);
  CHECK(l2_distance(h.problem.s, p.s) < 1e-6);
  CHECK(coefficient_distance(h.problem.f, p.f) < 1e-8);
  CHECK(coefficient_distance(h.problem.F, p.F) < 1e-8);

  Problem q{cos2(0.4), D, RationalBC::constant(0.3)};
  const auto gq = ground_pair(q, transform_options());
  auto tq = t_tilde(gq.lambda0, 2 * gq.gamma0, q);
  CHECK(tq.branch == TildeBranch::ConstantRight);
  CHECK(tq.problem.F.is_dirichlet());
  auto hq = t_hat(tq.problem);
  CHECK(l2_distance(hq.problem.s, q.s) < 1e-6);
  CHECK(coefficient_distance(hq.problem.F, q.F) < 1e-8);

  CHECK_THROWS_AS(t_tilde(gq.lambda0 + 0.5, 1.0, q), DomainError);
}

TEST_CASE("spectral data of T^(p) matches the mapped data") {
  auto s = Potential::fourier(std::vector<double>{0.3, -0.2}, std::vector<double>{0.15});
  Problem p{s, RationalBC::rational(0.8, 0.1, {{2.5, 0.7}}), RationalBC::rational(0.0, 0.4, {{4.0, 1.1}})};
  auto data = spectral_data(p, 13);
  auto h = t_hat(p);
  CHECK(index(h.problem.f) == 2);
  CHECK(index(h.problem.F) == 1);
  auto mapped = spectral_map_forward(data, h.record);
  auto direct = spectral_data(h.problem, 12);
  for (int n = 0; n < 12; ++n) {
    CHECK(direct.eigenvalues[n] == doctest::Approx(mapped.eigenvalues[n]).epsilon(1e-6));
    CHECK(direct.norming_constants[n] == doctest::Approx(mapped.norming_constants[n]).epsilon(1e-6));
  }
  CHECK(gamma0_from_hat(h.problem, h.lambda0, gamma0_rho(p, h.lambda0)) == doctest::Approx(h.gamma0).epsilon(1e-6));
  auto t = t_tilde(h.lambda0, h.gamma0, h.problem);
  CHECK(l2_distance(t.problem.s, p.s) < 1e-6);
  CHECK(coefficient_distance(t.problem.f, p.f) < 1e-8);
  CHECK(coefficient_distance(t.problem.F, p.F) < 1e-8);
  CHECK(std::abs(h.problem.s.mean()) < 1e-10);
}

TEST_CASE("chain reduction") {
  Problem p0{cos2(0.2), RationalBC::constant(0), RationalBC::constant(0)};
  auto c0 = reduce_chain(p0);
  CHECK(c0.problems.size() == 1);
  Problem p1{Potential::zero(), RationalBC::rational(1, 0), RationalBC::constant(0)};
  auto c1 = reduce_chain(p1);
  CHECK(c1.records.size() == 1);
  CHECK(index(c1.problems.back().f) <= 0);
  CHECK(index(c1.problems.back().F) <= 0);
  Problem p2{cos2(0.3), RationalBC::rational(0, 0.2, {{3.0, 1.0}}), D};
  auto c2 = reduce_chain(p2);
  CHECK(c2.records.size() == 2);
  CHECK(c2.problems.size() == 3);
  int jsum = 0;
  for (auto& r : c2.records) jsum += r.J;
  auto e0 = eigenvalues(p2, 8);
  auto eK = eigenvalues(c2.problems.back(), 8);
  for (int n = jsum; n < 8; ++n) CHECK(e0[n] == doctest::Approx(eK[n - jsum]).epsilon(1e-8));
  for (auto& q : c2.problems) CHECK(std::abs(q.s.mean()) < 1e-8);
}
