#include "spectral_bvp/errors.hpp"
#include "spectral_bvp/inverse.hpp"

#include <boost/math/tools/roots.hpp>

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace sbvp {

namespace {
constexpr double kPi = std::numbers::pi;

double signed_sqrt(double x) { return x >= 0.0 ? std::sqrt(x) : -std::sqrt(-x); }

SpectralData truncate(const SpectralData& d, Eigen::Index n) {
  SpectralData t = d;
  n = std::min(n, d.size());
  t.eigenvalues = d.eigenvalues.head(n);
  t.norming_constants = d.norming_constants.head(n);
  return t;
}

void check_interlacing(const Eigen::VectorXd& lambdas, const Eigen::VectorXd& mus) {
  for (Eigen::Index n = 0; n < lambdas.size(); ++n) {
    if (!(mus[n] < lambdas[n])) throw ValidationError("two spectra: need mu_n < lambda_n");
    if (n + 1 < mus.size() && !(lambdas[n] < mus[n + 1])) throw ValidationError("two spectra: need lambda_n < mu_{n+1}");
  }
}

}  // namespace

InverseReport inverse_spectral_data_report(const SpectralData& input, const FitOptions& opt) {
  validate(input);
  int M = input.ind_f, N = input.ind_F;
  if (M < -1 || N < -1) throw ValidationError("inverse_spectral_data: indices must be at least -1");
  if (input.size() >= 15) {
    // The eigenvalue intercept must agree with the declared index sum.
    const Eigen::Index n = input.size(), from = n / 2, m = n - from;
    Eigen::MatrixXd A(m, 2);
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      A(i, 0) = 1.0;
      A(i, 1) = 1.0 / double(from + i + 1);
      y[i] = signed_sqrt(input.eigenvalues[from + i]) - double(from + i);
    }
    const double twoL = -2.0 * A.colPivHouseholderQr().solve(y)[0];
    if (std::abs(twoL - (M + N)) > 0.5) {
      std::ostringstream os;
      os << "inverse_spectral_data: eigenvalue asymptotics give 2L = " << twoL << ", indices give " << M + N;
      throw ValidationError(os.str());
    }
  }

  InverseReport rep;
  rep.levels.push_back(truncate(input, opt.max_pairs));
  while (M > 0 || N > 0) {
    const SpectralData& prev = rep.levels.back();
    const int I = M >= 0 ? 1 : -1;
    const int J = (M >= 0 && N >= 0) ? 1 : 0;
    if (prev.size() - J < 3) throw ValidationError("inverse_spectral_data: too few pairs for the index reduction");
    TransformRecord rec;
    rec.Lambda = prev.eigenvalues[0] - 2.0 + 2.0 * J;
    rec.I = I;
    rec.J = J;
    SpectralData next;
    const Eigen::Index n = prev.size() - J;
    next.eigenvalues = prev.eigenvalues.segment(J, n);
    next.norming_constants.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
      next.norming_constants[i] = prev.norming_constants[i + J] * std::pow(prev.eigenvalues[i + J] - rec.Lambda, -I);
    M -= I;
    N += I - 2 * J;
    next.ind_f = M;
    next.ind_F = N;
    rep.records.push_back(rec);
    rep.levels.push_back(std::move(next));
  }

  rep.base = fit_constant_bc(rep.levels.back(), opt);
  if (!rep.base.converged) {
    std::ostringstream os;
    os << "inverse_spectral_data: base fit did not reach tolerance (max relative eigenvalue error "
       << rep.base.max_eig_error << ", max relative norming-constant error " << rep.base.max_gamma_error << ")";
    throw ReconstructionError(os.str());
  }

  Problem p = rep.base.problem;
  for (std::size_t k = rep.records.size(); k-- > 0;) {
    const auto& rec = rep.records[k];
    const auto& lev = rep.levels[k];
    const TildeBranch branch =
        rec.J == 1 ? TildeBranch::Below : (rec.I == 1 ? TildeBranch::ConstantRight : TildeBranch::ConstantLeft);
    p = t_tilde(lev.eigenvalues[0], lev.norming_constants[0], p, branch).problem;
  }
  rep.problem = p;

  const auto& target = rep.levels.front();
  const auto got = spectral_data(p, static_cast<int>(target.size()), opt.spectrum);
  for (Eigen::Index i = 0; i < target.size(); ++i) {
    rep.max_eig_error = std::max(rep.max_eig_error, std::abs(got.eigenvalues[i] - target.eigenvalues[i]) /
                                                        std::max(1.0, std::abs(target.eigenvalues[i])));
    rep.max_gamma_error =
        std::max(rep.max_gamma_error, std::abs(got.norming_constants[i] / target.norming_constants[i] - 1.0));
  }
  return rep;
}

Problem inverse_spectral_data(const SpectralData& data, const FitOptions& opt) {
  return inverse_spectral_data_report(data, opt).problem;
}

double estimate_nu(const Eigen::VectorXd& lambdas, const Eigen::VectorXd& mus, HalfInteger L, int r) {
  const Eigen::Index n = std::min(lambdas.size(), mus.size());
  const Eigen::Index from = std::max<Eigen::Index>(n / 2, static_cast<Eigen::Index>(std::floor(L.value())) + 2);
  const Eigen::Index m = n - from;
  if (m < 4) throw ValidationError("estimate_nu: need more eigenvalues");
  Eigen::MatrixXd A(m, 3);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index k = from + i;
    const double mm = double(k) - L.value();
    A(i, 0) = 1.0;
    A(i, 1) = 1.0 / (mm * mm);
    A(i, 2) = 1.0 / (mm * mm * mm * mm);
    y[i] = (signed_sqrt(lambdas[k]) - signed_sqrt(mus[k])) * std::pow(mm, 2 * r + 1);
  }
  return A.colPivHouseholderQr().solve(y)[0];
}

NuEstimate estimate_nu_r(const Eigen::VectorXd& lambdas, const Eigen::VectorXd& mus, HalfInteger L) {
  const Eigen::Index n = std::min(lambdas.size(), mus.size());
  auto drift = [&](int r) {
    // Relative change of the scaled sequence across the trailing half.
    const Eigen::Index a = n / 2, b = n - 1;
    auto d = [&](Eigen::Index k) {
      return (signed_sqrt(lambdas[k]) - signed_sqrt(mus[k])) * std::pow(double(k) - L.value(), 2 * r + 1);
    };
    return std::abs(d(b) - d(a)) / std::max(std::abs(d(b)), 1e-300);
  };
  NuEstimate e;
  e.r = (L.twice != -1 && drift(1) < drift(0)) ? 1 : 0;
  e.nu = estimate_nu(lambdas, mus, L, e.r);
  return e;
}

std::vector<double> two_spectra_zeros(const Eigen::VectorXd& lambdas, const Eigen::VectorXd& mus, HalfInteger L) {
  auto D = [&](double x) { return hadamard_product(mus, L, x) - hadamard_product(lambdas, L, x); };
  std::vector<double> nodes;
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    nodes.push_back(lambdas[i]);
    nodes.push_back(mus[i]);
  }
  std::sort(nodes.begin(), nodes.end());
  const double top = lambdas[lambdas.size() - 1];
  const double lo = nodes.front() - 20.0 - std::abs(nodes.front());
  std::vector<double> grid;
  for (int i = 0; i < 40; ++i) grid.push_back(lo + (nodes.front() - lo) * i / 40.0);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    for (int j = 0; j < 8; ++j) grid.push_back(nodes[i] + (nodes[i + 1] - nodes[i]) * j / 8.0);
  grid.push_back(top);
  std::vector<double> zeros;
  double x0 = grid.front(), d0 = D(x0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double x1 = grid[i], d1 = D(x1);
    if (d0 == 0.0) {
      zeros.push_back(x0);
    } else if (d0 * d1 < 0.0) {
      boost::uintmax_t iters = 200;
      auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-14 * std::max(1.0, std::abs(a)); };
      const auto br = boost::math::tools::toms748_solve(D, x0, x1, d0, d1, tol, iters);
      zeros.push_back(0.5 * (br.first + br.second));
    }
    x0 = x1;
    d0 = d1;
  }
  return zeros;
}

TwoSpectraResult two_spectra_inverse(const TwoSpectraInput& in, const FitOptions& opt) {
  if (in.lambdas.size() != in.mus.size() || in.lambdas.size() < 10)
    throw ValidationError("two_spectra_inverse: need two spectra of equal length, at least 10 each");
  if (in.lambdas[0] < in.mus[0]) {
    // λ leads: (μ, λ) are the spectra of (s, f + α, F) and (s, f + α + |α|, F).
    TwoSpectraInput sw = in;
    std::swap(sw.lambdas, sw.mus);
    sw.nu = std::abs(in.nu);
    TwoSpectraResult r = two_spectra_inverse(sw, opt);
    r.problem.f = shift(r.problem.f, r.alpha);
    r.alpha = -r.alpha;
    r.swapped = true;
    return r;
  }
  check_interlacing(in.lambdas, in.mus);
  if (in.r != 0 && in.r != 1) throw ValidationError("two_spectra_inverse: r must be 0 or 1");
  if (in.L.twice == -1 && in.r == 1) throw ValidationError("two_spectra_inverse: L = -1/2 with r = 1 is excluded");
  const int d = static_cast<int>(in.pole_indices.size());
  if (2 * d > in.L.twice + 1 - in.r) {
    std::ostringstream os;
    os << "two_spectra_inverse: " << d << " poles requested but at most " << (in.L.twice + 1 - in.r) / 2
       << " are admissible for L = " << in.L.value() << ", r = " << in.r;
    throw ValidationError(os.str());
  }
  if (!(in.nu > 0.0)) throw ValidationError("two_spectra_inverse: nu must be positive");

  TwoSpectraResult out;
  out.tau = two_spectra_zeros(in.lambdas, in.mus, in.L);
  std::set<int> seen;
  RealPolynomial p = RealPolynomial::constant(1.0);
  for (int i : in.pole_indices) {
    if (i < 0 || i >= static_cast<int>(out.tau.size()) || !seen.insert(i).second)
      throw ValidationError("two_spectra_inverse: pole index out of range or repeated");
    p = p * RealPolynomial::root_factor(out.tau[i]);
  }

  const Eigen::Index n = in.lambdas.size();
  SpectralData data;
  data.eigenvalues = in.lambdas;
  data.norming_constants.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double chi_prime = hadamard_derivative_at(in.lambdas, in.L, k);
    const double xi = hadamard_product(in.mus, in.L, in.lambdas[k]);
    const double pk = p(in.lambdas[k]);
    data.norming_constants[k] = kPi * in.nu * pk * pk * chi_prime / xi;
    if (!(data.norming_constants[k] > 0.0))
      throw InconsistencyError("two_spectra_inverse: non-positive norming constant; spectra or nu are inconsistent");
  }
  data.ind_f = 2 * d + in.r;
  data.ind_F = in.L.twice - 2 * d - in.r;
  out.data = data;
  out.report = inverse_spectral_data_report(data, opt);
  out.problem = out.report.problem;
  const double h0p = in.r == 1 ? 1.0 / out.problem.f.h0() : 1.0;
  out.alpha = kPi * in.nu / (h0p * h0p);
  return out;
}

TwoProblemDiagnostics two_problem_diagnostics(const Problem& p, double alpha, int count, const SpectrumOptions& opt) {
  if (p.f.is_dirichlet()) throw DomainError("two_problem_diagnostics: f must be finite");
  if (!(alpha > 0.0)) throw DomainError("two_problem_diagnostics: alpha must be positive");
  if (count < 5) throw DomainError("two_problem_diagnostics: count too small");
  Problem q = p;
  q.f = shift(p.f, alpha);
  TwoProblemDiagnostics r;
  const auto la = eigenvalues(p, count, opt), mu = eigenvalues(q, count, opt);
  r.lambdas = Eigen::Map<const Eigen::VectorXd>(la.data(), count);
  r.mus = Eigen::Map<const Eigen::VectorXd>(mu.data(), count);
  r.interlacing = true;
  for (int n = 0; n < count; ++n) {
    if (!(mu[n] < la[n])) r.interlacing = false;
    if (n + 1 < count && !(la[n] < mu[n + 1])) r.interlacing = false;
  }

  const auto& io = opt.integrator;
  auto psi0 = [&](double lambda) {
    const auto [u, dn] = up_down_at(p.F, lambda);
    const auto s = shoot(p.s, lambda, Endpoint::Right, {dn, u}, false, io);
    return s.y * std::exp(s.log_scale);
  };
  const int G = 100;
  const double lo = mu.front() - 5.0, hi = 0.5 * (la[count - 2] + la[count - 1]);
  std::vector<double> singular(la.begin(), la.end());
  for (const auto& pl : p.f.poles()) singular.push_back(pl.location);
  auto ratio = [&](double x) { return -char_function(q, x, io) / char_function(p, x, io); };
  for (int i = 0; i < G; ++i) {
    const double x = lo + (hi - lo) * i / (G - 1);
    const double c = char_function(p, x, io), xi = char_function(q, x, io);
    const double fd = up_down_at(p.f, x).second;
    const double rhs = alpha * fd * psi0(x);
    const double scale = std::abs(xi) + std::abs(c) + std::abs(rhs);
    if (scale > 0.0) r.identity_residual = std::max(r.identity_residual, std::abs(xi - c - rhs) / scale);
    // Local monotonicity of −ξ/χ, stepping towards the farther side of the nearest singularity.
    double below = hi - lo, above = hi - lo;
    for (double sg : singular) {
      if (sg <= x) below = std::min(below, x - sg);
      else above = std::min(above, sg - x);
    }
    if (std::min(below, above) == 0.0) continue;
    const double h = std::min(0.25 * std::max(below, above), (hi - lo) / (G - 1));
    const double a = above >= below ? x : x - h, b = above >= below ? x + h : x;
    ++r.herglotz_points;
    if (!(ratio(b) > ratio(a))) ++r.herglotz_failures;
  }

  for (int n = 0; n < count; ++n) {
    const auto ep = eigenpair(p, la[n], io);
    const double xi = char_function(q, la[n], io);
    const double fd = up_down_at(p.f, la[n]).second;
    const double formula = alpha * fd * fd * ep.chi_prime / xi;
    r.gamma_formula_error = std::max(r.gamma_formula_error, std::abs(formula / ep.gamma - 1.0));
  }

  const int ind = index(p.f);
  const int rr = ((ind % 2) + 2) % 2;
  const double L = 0.5 * (index(p.f) + index(p.F));
  const double h0p = p.f.h0() > 0.0 ? 1.0 / p.f.h0() : 1.0;
  r.nu_limit = alpha * h0p * h0p / kPi;
  for (int n = 0; n < count; ++n) {
    const double m = n - L;
    if (!(m > 0.0)) continue;
    r.nu_sequence.push_back((signed_sqrt(la[n]) - signed_sqrt(mu[n])) * std::pow(m, 2 * rr + 1));
  }
  if (!r.nu_sequence.empty()) r.nu_relative_error = std::abs(r.nu_sequence.back() / r.nu_limit - 1.0);
  r.nu_extrapolated = estimate_nu(r.lambdas, r.mus, HalfInteger{index(p.f) + index(p.F)}, rr);
  return r;
}

Eigen::VectorXd symmetric_norming_constants(const Eigen::VectorXd& lambdas, HalfInteger L) {
  if (!L.is_integer()) throw ValidationError("symmetric_inverse: L must be an integer");
  const double c = hadamard_calibration(L).constant;
  Eigen::VectorXd g(lambdas.size());
  for (Eigen::Index n = 0; n < lambdas.size(); ++n) {
    g[n] = (n % 2 == 0 ? 1.0 : -1.0) * c * hadamard_derivative_at(lambdas, L, n);
    if (!(g[n] > 0.0)) throw InconsistencyError("symmetric_inverse: spectrum does not come from a symmetric problem");
  }
  return g;
}

Problem symmetric_inverse(const Eigen::VectorXd& lambdas, HalfInteger L, const FitOptions& opt) {
  if (L.twice < -2) throw ValidationError("symmetric_inverse: L must be at least -1");
  for (Eigen::Index n = 1; n < lambdas.size(); ++n)
    if (!(lambdas[n] > lambdas[n - 1])) throw ValidationError("symmetric_inverse: eigenvalues must increase");
  SpectralData data;
  data.eigenvalues = lambdas;
  data.norming_constants = symmetric_norming_constants(lambdas, L);
  data.ind_f = data.ind_F = L.twice / 2;
  return inverse_spectral_data(data, opt);
}

HalfInverseReport half_inverse_check(const Problem& a, const Problem& b, int count, const SpectrumOptions& opt) {
  HalfInverseReport r;
  const auto la = eigenvalues(a, count, opt), lb = eigenvalues(b, count, opt);
  for (int n = 0; n < count; ++n) r.spectrum_gap = std::max(r.spectrum_gap, std::abs(la[n] - lb[n]) / std::max(1.0, std::abs(la[n])));
  r.l2_left = l2_distance(a.s, b.s, 0.0, kPi / 2.0);
  r.l2_right = l2_distance(a.s, b.s, kPi / 2.0, kPi);
  r.F_distance = coefficient_distance(a.F, b.F);
  return r;
}

}  // namespace sbvp
