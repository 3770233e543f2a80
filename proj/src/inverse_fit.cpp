#include "spectral_bvp/errors.hpp"
#include "spectral_bvp/inverse.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <unsupported/Eigen/NonLinearOptimization>

#include <algorithm>
#include <memory>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sbvp {

namespace {
constexpr double kPi = std::numbers::pi;

double signed_sqrt(double x) { return x >= 0.0 ? std::sqrt(x) : -std::sqrt(-x); }

// Parameter layout: [Legendre coefficients | h (if f constant) | H (if F constant)].
struct Layout {
  int basis = 0;
  bool has_h = false, has_H = false;
  int size() const { return basis + int(has_h) + int(has_H); }

  Problem problem(const Eigen::VectorXd& x) const {
    Problem p;
    p.s = basis > 0 ? Potential::legendre(x.head(basis)) : Potential::zero();
    int k = basis;
    p.f = has_h ? RationalBC::constant(x[k++]) : RationalBC::dirichlet();
    p.F = has_H ? RationalBC::constant(x[k]) : RationalBC::dirichlet();
    return p;
  }
};

struct BudgetExhausted {};

struct SpectralResidual {
  typedef double Scalar;
  typedef Eigen::VectorXd InputType;
  typedef Eigen::VectorXd ValueType;
  typedef Eigen::MatrixXd JacobianType;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const SpectralData* data;
  Layout layout;
  // Parameters not being fitted in this stage are held at these values.
  Eigen::VectorXd frozen;
  std::vector<int> active;
  SpectrumOptions spec;
  int* evaluations;
  int budget = 1 << 30;
  // Best point seen so far, returned if the evaluation budget runs out mid-stage.
  std::shared_ptr<std::pair<Eigen::VectorXd, double>> best =
      std::make_shared<std::pair<Eigen::VectorXd, double>>(Eigen::VectorXd(), INFINITY);
  // Eigenvalues of the last evaluated model seed the next search.
  std::shared_ptr<std::vector<double>> warm = std::make_shared<std::vector<double>>();
  std::shared_ptr<std::pair<Eigen::VectorXd, Eigen::VectorXd>> last =
      std::make_shared<std::pair<Eigen::VectorXd, Eigen::VectorXd>>();

  int inputs() const { return static_cast<int>(active.size()); }
  int values() const { return 2 * static_cast<int>(data->size()); }

  Eigen::VectorXd expand(const Eigen::VectorXd& x) const {
    Eigen::VectorXd full = frozen;
    for (std::size_t i = 0; i < active.size(); ++i) full[active[i]] = x[static_cast<Eigen::Index>(i)];
    return full;
  }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& fvec) const {
    if (last->first.size() == x.size() && last->first == x) {
      fvec = last->second;
      return 0;
    }
    if (*evaluations >= budget) throw BudgetExhausted{};
    ++*evaluations;
    const Eigen::Index n = data->size();
    fvec.resize(2 * n);
    try {
      const Problem p = layout.problem(expand(x));
      std::vector<double> eigs;
      if (static_cast<Eigen::Index>(warm->size()) == n) {
        try {
          eigs = eigenvalues_near(p, *warm, spec);
        } catch (const SearchError&) {
          eigs.clear();
        }
      }
      if (eigs.empty()) eigs = eigenvalues(p, static_cast<int>(n), spec);
      *warm = eigs;
      const auto model = spectral_data_from(p, eigs, spec);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double ld = data->eigenvalues[i];
        fvec[i] = (model.eigenvalues[i] - ld) / (2.0 * std::max(1.0, std::sqrt(std::abs(ld))));
        fvec[n + i] = std::log(model.norming_constants[i] / data->norming_constants[i]);
      }
      if (!fvec.allFinite()) fvec.setConstant(1e3);
    } catch (const Error&) {
      fvec.setConstant(1e3);
    }
    *last = {x, fvec};
    if (fvec.squaredNorm() < best->second) *best = {x, fvec.squaredNorm()};
    return 0;
  }

  int df(const Eigen::VectorXd& x, Eigen::MatrixXd& jac) const {
    Eigen::VectorXd f0, f1;
    (*this)(x, f0);
    jac.resize(f0.size(), x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
      Eigen::VectorXd xp = x;
      xp[j] += h;
      (*this)(xp, f1);
      jac.col(j) = (f1 - f0) / h;
    }
    return 0;
  }
};

struct Errors {
  double eig = 0.0, gamma = 0.0;
};

Errors data_errors(const SpectralData& data, const Problem& p, const SpectrumOptions& spec) {
  const auto m = spectral_data(p, static_cast<int>(data.size()), spec);
  Errors e;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    e.eig = std::max(e.eig, std::abs(m.eigenvalues[i] - data.eigenvalues[i]) / std::max(1.0, std::abs(data.eigenvalues[i])));
    e.gamma = std::max(e.gamma, std::abs(m.norming_constants[i] / data.norming_constants[i] - 1.0));
  }
  return e;
}

Eigen::VectorXd run_lm(SpectralResidual& fn, const Eigen::VectorXd& start_full, int max_fev) {
  fn.frozen = start_full;
  Eigen::VectorXd x(fn.inputs());
  for (int i = 0; i < fn.inputs(); ++i) x[i] = start_full[fn.active[i]];
  Eigen::LevenbergMarquardt<SpectralResidual> lm(fn);
  lm.parameters.maxfev = max_fev;
  lm.parameters.xtol = 1e-12;
  lm.parameters.ftol = 1e-14;
  try {
    lm.minimize(x);
  } catch (const BudgetExhausted&) {
    if (fn.best->first.size() == x.size()) x = fn.best->first;
  }
  return fn.expand(x);
}

// Resize the Legendre block of a parameter vector, keeping the constants.
Eigen::VectorXd regrow(const Eigen::VectorXd& x, const Layout& from, const Layout& to) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(to.size());
  const int keep = std::min(from.basis, to.basis);
  y.head(keep) = x.head(keep);
  const int tail = from.size() - from.basis;
  y.tail(tail) = x.tail(tail);
  return y;
}

}  // namespace

SpectrumOptions FitOptions::fit_spectrum_options() {
  SpectrumOptions s;
  s.integrator.rel_tol = 1e-11;
  s.integrator.abs_tol = 1e-13;
  s.eig_tol = 1e-13;
  return s;
}

FitReport fit_constant_bc(const SpectralData& data, const FitOptions& opt) {
  validate(data);
  if (data.ind_f > 0 || data.ind_F > 0 || data.ind_f < -1 || data.ind_F < -1)
    throw ValidationError("inverse_constant_bc: both indices must be -1 or 0");
  if (data.size() < 3) throw ValidationError("inverse_constant_bc: need at least 3 pairs");
  if (data.size() > opt.spectrum.max_count) throw ValidationError("inverse_constant_bc: too many pairs for the spectrum options");

  int evaluations = 0;
  Layout layout{0, data.ind_f == 0, data.ind_F == 0};
  const double L = 0.5 * (data.ind_f + data.ind_F);

  // Constants from the mean eigenvalue shift: λ_n ≈ (n − L)² + (2/π)(h + H) for s ≡ 0.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(layout.size());
  {
    const Eigen::Index n = data.size(), from = n / 2;
    double shift = 0.0;
    for (Eigen::Index i = from; i < n; ++i) shift += data.eigenvalues[i] - (i - L) * (i - L);
    shift /= double(n - from);
    const int nc = int(layout.has_h) + int(layout.has_H);
    if (nc > 0) x.tail(nc).setConstant(shift * kPi / 2.0 / nc);
  }

  auto make_fn = [&](const Layout& l, std::vector<int> active) {
    return SpectralResidual{&data, l, Eigen::VectorXd(), std::move(active), opt.spectrum, &evaluations, opt.max_evaluations};
  };
  auto all_active = [](const Layout& l) {
    std::vector<int> a(l.size());
    for (int i = 0; i < l.size(); ++i) a[i] = i;
    return a;
  };

  if (layout.size() > 0) {
    auto fn = make_fn(layout, all_active(layout));
    x = run_lm(fn, x, 200);
  }

  // Grow the basis, warm-starting each stage from the previous one.
  const int max_params = static_cast<int>(2 * data.size()) - 1;
  std::vector<int> stages{4, 8};
  for (int k = opt.basis_size; k <= opt.max_basis; k += 8) stages.push_back(k);
  FitReport rep;
  Errors best{1e300, 1e300};
  Eigen::VectorXd best_x = x;
  Layout best_layout = layout;
  for (int b : stages) {
    Layout next = layout;
    next.basis = std::min(b, max_params - (layout.size() - layout.basis));
    if (next.basis <= layout.basis && layout.basis > 0) break;
    x = regrow(x, layout, next);
    layout = next;
    auto fn = make_fn(layout, all_active(layout));
    x = run_lm(fn, x, 60 * (layout.size() + 1));
    const Errors e = data_errors(data, layout.problem(x), opt.spectrum);
    if (std::max(e.eig / opt.tol_eig, e.gamma / opt.tol_gamma) < std::max(best.eig / opt.tol_eig, best.gamma / opt.tol_gamma)) {
      best = e;
      best_x = x;
      best_layout = layout;
    }
    if (layout.basis >= opt.basis_size && e.eig <= opt.tol_eig && e.gamma <= opt.tol_gamma) break;
    if (evaluations > opt.max_evaluations) break;
  }
  rep.problem = best_layout.problem(best_x);
  rep.max_eig_error = best.eig;
  rep.max_gamma_error = best.gamma;
  rep.basis_size = best_layout.basis;
  rep.evaluations = evaluations;
  rep.converged = best.eig <= opt.tol_eig && best.gamma <= opt.tol_gamma;
  return rep;
}

Problem inverse_constant_bc(const SpectralData& data, const FitOptions& opt) {
  const auto rep = fit_constant_bc(data, opt);
  if (!rep.converged) {
    std::ostringstream os;
    os << "inverse_constant_bc: fit did not reach tolerance (max relative eigenvalue error " << rep.max_eig_error
       << ", max relative norming-constant error " << rep.max_gamma_error << ", basis " << rep.basis_size << ")";
    throw ReconstructionError(os.str());
  }
  return rep.problem;
}

Indices detect_indices(const SpectralData& data) {
  validate(data);
  const Eigen::Index n = data.size();
  if (n < 15) throw ValidationError("detect_indices: need at least 15 pairs");
  const Eigen::Index from = n / 2, m = n - from;
  // √λ_n − n = −L + a/n
  Eigen::MatrixXd A(m, 2);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double k = double(from + i);
    A(i, 0) = 1.0;
    A(i, 1) = 1.0 / (k + 1.0);
    y[i] = signed_sqrt(data.eigenvalues[from + i]) - k;
  }
  const double twoL = -2.0 * A.colPivHouseholderQr().solve(y)[0];
  const int twoL_i = static_cast<int>(std::lround(twoL));
  if (std::abs(twoL - twoL_i) > 0.1) throw ValidationError("detect_indices: eigenvalue asymptotics do not fit (n - L)^2");
  const double L = twoL_i / 2.0;
  // log γ_n = c + 2M log(n − L) + b/(n − L)²
  Eigen::MatrixXd B(m, 3);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double k = double(from + i) - L;
    if (!(k > 0.0)) throw ValidationError("detect_indices: data too short for the detected L");
    B(i, 0) = 1.0;
    B(i, 1) = 2.0 * std::log(k);
    B(i, 2) = 1.0 / (k * k);
    y[i] = std::log(data.norming_constants[from + i]);
  }
  const double M = B.colPivHouseholderQr().solve(y)[1];
  const int M_i = static_cast<int>(std::lround(M));
  if (std::abs(M - M_i) > 0.2) throw ValidationError("detect_indices: norming constants do not grow like a power of n");
  Indices r{M_i, twoL_i - M_i};
  if (r.M < -1 || r.N < -1) throw ValidationError("detect_indices: detected indices below -1");
  return r;
}

FDownRecovery recover_f_down(const SpectralData& data, int d, const HankelOptions& opt) {
  validate(data);
  if (d < 1) throw DomainError("recover_f_down: degree must be positive");
  if (data.ind_f < 2 * d) throw DomainError("recover_f_down: ind f is too small for that many poles");
  const Eigen::Index n = data.size();
  const int tf = std::min<int>(opt.tail_fit, static_cast<int>(n) - 2);
  if (tf < 6) throw ValidationError("recover_f_down: need more pairs for the asymptotic model");
  const double L = 0.5 * (data.ind_f + data.ind_F);
  const int M = data.ind_f;

  // Trailing models: √λ = m + a/m + b/m³ and log γ = c + 2M log m + e/m² + g/m⁴, m = n − L.
  Eigen::MatrixXd A(tf, 2), G(tf, 3);
  Eigen::VectorXd ya(tf), yg(tf);
  for (int i = 0; i < tf; ++i) {
    const Eigen::Index k = n - tf + i;
    const double m = double(k) - L;
    A(i, 0) = 1.0 / m;
    A(i, 1) = 1.0 / (m * m * m);
    ya[i] = signed_sqrt(data.eigenvalues[k]) - m;
    G(i, 0) = 1.0;
    G(i, 1) = 1.0 / (m * m);
    G(i, 2) = 1.0 / (m * m * m * m);
    yg[i] = std::log(data.norming_constants[k]) - 2.0 * M * std::log(m);
  }
  const Eigen::VectorXd ca = A.colPivHouseholderQr().solve(ya);
  const Eigen::VectorXd cg = G.colPivHouseholderQr().solve(yg);

  const int K = 2 * d;
  Eigen::VectorXd s = Eigen::VectorXd::Zero(K);
  auto add = [&](double lam, double gam) {
    double pw = 1.0 / gam;
    for (int k = 0; k < K; ++k, pw *= lam) s[k] += pw;
  };
  for (Eigen::Index i = 0; i < n; ++i) add(data.eigenvalues[i], data.norming_constants[i]);
  const long last = std::max<long>(opt.extrapolate_to, static_cast<long>(n));
  for (long i = n; i < last; ++i) {
    const double m = double(i) - L;
    const double r = m + ca[0] / m + ca[1] / (m * m * m);
    add(r * r, std::exp(cg[0] + 2.0 * M * std::log(m) + cg[1] / (m * m) + cg[2] / (m * m * m * m)));
  }
  // Tail Σ_{m ≥ m0} m^{2k−2M} (1 + (2k a − e)/m²) e^{−c} by Euler–Maclaurin.
  const double m0 = double(last) - L;
  auto zeta_tail = [&](double p) {
    return std::pow(m0, 1.0 - p) / (p - 1.0) + 0.5 * std::pow(m0, -p) + p * std::pow(m0, -p - 1.0) / 12.0;
  };
  double worst_tail = 0.0;
  for (int k = 0; k < K; ++k) {
    const double p = 2.0 * M - 2.0 * k;
    const double t = std::exp(-cg[0]) * (zeta_tail(p) + (2.0 * k * ca[0] - cg[1]) * zeta_tail(p + 2.0));
    s[k] += t;
    worst_tail = std::max(worst_tail, std::abs(t));
  }
  if (worst_tail > opt.max_tail_fraction * s.cwiseAbs().minCoeff())
    throw ConditioningError("recover_f_down: moment tail is too large relative to the retained sums");

  // Σ_i p_i s_{i+k} = −s_{d+k}, k < d, with p monic.
  Eigen::MatrixXd H(d, d);
  Eigen::VectorXd rhs(d);
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < d; ++i) H(k, i) = s[i + k];
    rhs[k] = -s[d + k];
  }
  // Scale rows and columns so the conditioning reflects the data, not units of λ.
  Eigen::VectorXd sc = H.diagonal().cwiseAbs().cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd Hs = sc.asDiagonal() * H * sc.asDiagonal();
  Eigen::LLT<Eigen::MatrixXd> llt(Hs);
  if (llt.info() != Eigen::Success) throw ConditioningError("recover_f_down: Hankel matrix is not positive definite");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hs);
  const double cond = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
  if (!(cond < opt.max_condition)) throw ConditioningError("recover_f_down: Hankel matrix is ill-conditioned");
  const Eigen::VectorXd c = sc.asDiagonal() * llt.solve(sc.asDiagonal() * rhs);

  Eigen::VectorXd coeffs(d + 1);
  coeffs.head(d) = c;
  coeffs[d] = 1.0;
  const RealPolynomial monic(coeffs);
  FDownRecovery out;
  out.poles = real_roots(monic);
  if (static_cast<int>(out.poles.size()) != d) throw InconsistencyError("recover_f_down: pole polynomial has non-real roots");
  std::sort(out.poles.begin(), out.poles.end());
  out.p = RealPolynomial::constant(1.0);
  for (double t : out.poles) out.p = out.p * RealPolynomial::root_factor(t);
  out.condition = cond;
  out.moments = s;
  return out;
}

}  // namespace sbvp
