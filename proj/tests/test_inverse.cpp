#include "doctest.h"

#include "spectral_bvp/errors.hpp"
#include "spectral_bvp/inverse.hpp"

#include <cmath>
#include <numbers>

using namespace sbvp;
using std::numbers::pi;

namespace {
const auto D = RationalBC::dirichlet();
Potential cos2(double a) { return Potential::fourier(std::vector<double>{0.0, a}, {}); }

SpectrumOptions wide() {
  SpectrumOptions o;
  o.max_count = 64;
  return o;
}

Eigen::VectorXd to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double max_rel_gap(const std::vector<double>& a, const Eigen::VectorXd& b, int n) {
  double g = 0.0;
  for (int i = 0; i < n; ++i) g = std::max(g, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
  return g;
}
}  // namespace

TEST_CASE("detect_indices") {
  SpectralData d;
  d.eigenvalues.resize(20);
  d.norming_constants.resize(20);
  for (int n = 0; n < 20; ++n) {
    d.eigenvalues[n] = n * n;
    d.norming_constants[n] = n == 0 ? pi : pi / 2;
  }
  auto r = detect_indices(d);
  CHECK(r.M == 0);
  CHECK(r.N == 0);

  Problem p{cos2(0.3), RationalBC::rational(0, 0.5, {{2.0, 1.0}}), RationalBC::rational(1.0, 0.0)};
  auto sd = spectral_data(p, 30);
  r = detect_indices(sd);
  CHECK(r.M == 2);
  CHECK(r.N == 1);

  Problem q{cos2(0.3), D, RationalBC::constant(1.0)};
  r = detect_indices(spectral_data(q, 20));
  CHECK(r.M == -1);
  CHECK(r.N == 0);

  d.eigenvalues = d.eigenvalues.head(10);
  d.norming_constants = d.norming_constants.head(10);
  CHECK_THROWS_AS(detect_indices(d), ValidationError);
}

TEST_CASE("base case fit: constant ends") {
  Problem p{cos2(0.3), RationalBC::constant(0), RationalBC::constant(0)};
  auto data = spectral_data(p, 25);
  auto rep = fit_constant_bc(data);
  CHECK(rep.converged);
  CHECK(l2_distance(rep.problem.s, p.s) < 1e-5);
  CHECK(std::abs(rep.problem.f.h()) < 1e-6);
  CHECK(std::abs(rep.problem.F.h()) < 1e-6);

  // Idempotence: the reconstruction's own data reproduce it.
  auto again = inverse_constant_bc(spectral_data(rep.problem, 25));
  CHECK(l2_distance(again.s, rep.problem.s) < 1e-8);
  CHECK(std::abs(again.f.h() - rep.problem.f.h()) < 1e-8);
  CHECK(std::abs(again.F.h() - rep.problem.F.h()) < 1e-8);

  SpectralData bad = data;
  bad.ind_f = 1;
  CHECK_THROWS_AS(fit_constant_bc(bad), ValidationError);
}

TEST_CASE("base case fit: closed forms") {
  SpectralData d;
  d.ind_f = d.ind_F = -1;
  d.eigenvalues.resize(12);
  d.norming_constants.resize(12);
  for (int n = 0; n < 12; ++n) {
    d.eigenvalues[n] = (n + 1.0) * (n + 1.0);
    d.norming_constants[n] = pi / (2.0 * (n + 1.0) * (n + 1.0));
  }
  auto p = inverse_constant_bc(d);
  CHECK(p.f.is_dirichlet());
  CHECK(p.F.is_dirichlet());
  CHECK(l2_norm(p.s) < 1e-7);
}

TEST_CASE("inverse by spectral data through the chain") {
  Problem p{cos2(0.2), RationalBC::rational(1.0, 0.0), D};
  auto data = spectral_data(p, 25);
  auto rep = inverse_spectral_data_report(data);
  REQUIRE(rep.records.size() == 1);
  CHECK(rep.records[0].J == 0);
  CHECK(rep.levels.back().ind_f == 0);
  CHECK(rep.levels.back().ind_F == 0);
  CHECK(l2_distance(rep.problem.s, p.s) < 5e-3);
  CHECK(rep.problem.F.is_dirichlet());
  CHECK(std::abs(rep.problem.f.h0() - 1.0) < 1e-3);
  CHECK(std::abs(rep.problem.f.h()) < 1e-3);
  CHECK(rep.max_eig_error < 1e-6);
  CHECK(rep.max_gamma_error < 1e-5);

  SpectralData wrong = data;
  wrong.ind_F = 2;
  CHECK_THROWS_AS(inverse_spectral_data(wrong), ValidationError);
}

TEST_CASE("recover f-down from moments") {
  Problem p{cos2(0.3), RationalBC::rational(0, 0.5, {{2.0, 1.0}}), RationalBC::constant(0.0)};
  auto r = recover_f_down(spectral_data(p, 60, wide()), 1);
  REQUIRE(r.poles.size() == 1);
  CHECK(std::abs(r.poles[0] - 2.0) < 1e-4);

  p.f = RationalBC::rational(0, 0.5, {{1.0, 1.0}, {4.0, 0.7}});
  auto data = spectral_data(p, 60, wide());
  r = recover_f_down(data, 2);
  REQUIRE(r.poles.size() == 2);
  CHECK(std::abs(r.poles[0] - 1.0) < 1e-4);
  CHECK(std::abs(r.poles[1] - 4.0) < 1e-4);
  CHECK(r.condition > 0.0);
  CHECK(std::abs(r.p(4.0)) < 1e-3);

  CHECK_THROWS_AS(recover_f_down(data, 3), DomainError);
}

TEST_CASE("two spectra, d = 0") {
  Problem p{Potential::zero(), RationalBC::constant(0.0), D};
  Problem q{Potential::zero(), RationalBC::constant(1.0), D};
  const auto la = eigenvalues(p, 40, wide()), mu = eigenvalues(q, 40, wide());
  TwoSpectraInput in;
  in.lambdas = to_vec(la);
  in.mus = to_vec(mu);
  in.L = HalfInteger{-1};
  auto est = estimate_nu_r(in.lambdas, in.mus, in.L);
  CHECK(est.r == 0);
  CHECK(est.nu == doctest::Approx(1.0 / pi).epsilon(1e-8));
  in.r = est.r;
  in.nu = est.nu;

  auto tau = two_spectra_zeros(in.lambdas, in.mus, in.L);
  REQUIRE(tau.size() >= 5);
  for (int k = 0; k < 5; ++k) CHECK(tau[k] == doctest::Approx((k + 1.0) * (k + 1.0)).epsilon(1e-8));

  auto res = two_spectra_inverse(in);
  CHECK(l2_norm(res.problem.s) < 5e-3);
  CHECK(std::abs(res.problem.f.h()) < 1e-3);
  CHECK(res.problem.F.is_dirichlet());
  CHECK(std::abs(res.alpha - 1.0) < 1e-3);
  Problem rq = res.problem;
  rq.f = shift(res.problem.f, res.alpha);
  CHECK(max_rel_gap(eigenvalues(res.problem, 15), in.lambdas, 15) < 1e-6);
  CHECK(max_rel_gap(eigenvalues(rq, 15), in.mus, 15) < 1e-6);

  // Opposite orientation: the first sequence leads, so α comes back negative.
  TwoSpectraInput sw = in;
  std::swap(sw.lambdas, sw.mus);
  auto r2 = two_spectra_inverse(sw);
  CHECK(r2.swapped);
  CHECK(r2.alpha == doctest::Approx(-res.alpha).epsilon(1e-6));
  CHECK(r2.problem.f.h() == doctest::Approx(1.0).epsilon(1e-3));

  TwoSpectraInput d1 = in;
  d1.pole_indices = {0};
  CHECK_THROWS_AS(two_spectra_inverse(d1), ValidationError);
  TwoSpectraInput bad = in;
  std::swap(bad.mus[3], bad.mus[4]);
  CHECK_THROWS_AS(two_spectra_inverse(bad), ValidationError);
}

TEST_CASE("two-problem diagnostics") {
  Problem p{Potential::zero(), RationalBC::constant(0.0), D};
  auto d = two_problem_diagnostics(p, 1.0, 32);
  CHECK(d.interlacing);
  CHECK(d.identity_residual < 1e-5);
  CHECK(d.gamma_formula_error < 1e-5);
  CHECK(d.nu_limit == doctest::Approx(1.0 / pi).epsilon(1e-12));
  CHECK(d.nu_relative_error < 1e-4);
  CHECK(d.nu_extrapolated == doctest::Approx(1.0 / pi).epsilon(1e-5));
  CHECK(d.herglotz_points == 100);
  CHECK(d.herglotz_failures == 0);

  Problem r{Potential::fourier(std::vector<double>{0.1, 0.3}, std::vector<double>{0.2}), RationalBC::rational(0.5, 0.5),
            RationalBC::rational(0, -1.0, {{5.0, 2.0}})};
  auto e = two_problem_diagnostics(r, 1.0, 32);
  CHECK(e.interlacing);
  CHECK(e.identity_residual < 1e-7);
  CHECK(e.gamma_formula_error < 1e-6);
  CHECK(e.nu_relative_error < 0.1);
  CHECK(e.herglotz_failures == 0);
}

TEST_CASE("symmetric inverse") {
  Eigen::VectorXd l(30);
  for (int n = 0; n < 30; ++n) l[n] = (n + 1.0) * (n + 1.0);
  auto g = symmetric_norming_constants(l, HalfInteger{-2});
  for (int n = 0; n < 10; ++n) CHECK(g[n] == doctest::Approx(pi / (2.0 * (n + 1.0) * (n + 1.0))).epsilon(1e-8));
  auto p = symmetric_inverse(l, HalfInteger{-2});
  CHECK(p.f.is_dirichlet());
  CHECK(p.F.is_dirichlet());
  CHECK(l2_norm(p.s) < 1e-6);

  for (int n = 0; n < 30; ++n) l[n] = double(n) * n;
  auto q = symmetric_inverse(l, HalfInteger{0});
  CHECK(l2_norm(q.s) < 1e-6);
  CHECK(std::abs(q.f.h()) < 1e-6);
  CHECK(std::abs(q.F.h()) < 1e-6);

  Problem sym{Potential::fourier(std::vector<double>{0.2}, {}), RationalBC::constant(0), RationalBC::constant(0)};
  auto r = symmetric_inverse(to_vec(eigenvalues(sym, 40, wide())), HalfInteger{0});
  CHECK(l2_distance(r.s, sym.s) < 5e-3);
  CHECK(symmetry_defect(r.s) < 1e-3);
  CHECK(coefficient_distance(r.f, r.F) < 1e-3);

  Eigen::VectorXd dup = l;
  dup[5] = dup[4];
  CHECK_THROWS_AS(symmetric_inverse(dup, HalfInteger{0}), ValidationError);
}

TEST_CASE("half inverse check") {
  Problem a{Potential::zero(), RationalBC::constant(0.3), RationalBC::constant(0)};
  auto same = half_inverse_check(a, a, 20);
  CHECK(same.spectrum_gap == 0.0);
  CHECK(same.l2_left == 0.0);
  CHECK(same.l2_right == 0.0);
  CHECK(same.F_distance == 0.0);

  // 0.1 sin 4x on [π/2, π], zero on the left half; the kink at π/2 gets a duplicated knot.
  const int n = 257;
  std::vector<double> x, v, dv, d2v;
  for (int i = 0; i < n; ++i) {
    const double t = pi * i / (n - 1);
    const bool right = t > pi / 2;
    x.push_back(t);
    v.push_back(right ? 0.1 * std::sin(4 * t) : 0.0);
    dv.push_back(right ? 0.4 * std::cos(4 * t) : 0.0);
    d2v.push_back(right ? -1.6 * std::sin(4 * t) : 0.0);
    if (i == (n - 1) / 2) {
      x.push_back(t);
      v.push_back(0.0);
      dv.push_back(0.4);
      d2v.push_back(0.0);
    }
  }
  Problem b = a;
  b.s = Potential::hermite(to_vec(x), to_vec(v), to_vec(dv), to_vec(d2v));
  auto diff = half_inverse_check(a, b, 20);
  CHECK(diff.spectrum_gap > 1e-7);
  CHECK(diff.l2_left < 1e-14);
  CHECK(diff.l2_right > 0.05);
  CHECK(diff.F_distance == 0.0);
}
