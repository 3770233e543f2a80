#include "spectral_bvp/potential.hpp"

#include "spectral_bvp/errors.hpp"
#include "spectral_bvp/quasi_ode.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sbvp {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kEdgeTol = 1e-12;

double fourier_value(const Potential::Fourier& f, double x) {
  // Chebyshev-style recurrences for cos(kx), sin(kx).
  const double c1 = std::cos(x), s1 = std::sin(x);
  double ck = c1, sk = s1, ckm = 1.0, skm = 0.0;
  double v = f.offset;
  const Eigen::Index n = std::max(f.cos_coeffs.size(), f.sin_coeffs.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k < f.cos_coeffs.size()) v += f.cos_coeffs[k] * ck;
    if (k < f.sin_coeffs.size()) v += f.sin_coeffs[k] * sk;
    const double cn = 2.0 * c1 * ck - ckm, sn = 2.0 * c1 * sk - skm;
    ckm = ck;
    skm = sk;
    ck = cn;
    sk = sn;
  }
  return v;
}

double fourier_derivative(const Potential::Fourier& f, double x) {
  double v = 0.0;
  for (Eigen::Index k = 0; k < f.cos_coeffs.size(); ++k) v -= (k + 1) * f.cos_coeffs[k] * std::sin((k + 1) * x);
  for (Eigen::Index k = 0; k < f.sin_coeffs.size(); ++k) v += (k + 1) * f.sin_coeffs[k] * std::cos((k + 1) * x);
  return v;
}

// Value (order 0) or x-derivative of Σ c[k−1] P_k(t), t = 2x/π − 1.
double legendre_eval(const Eigen::VectorXd& c, double x, int order) {
  const double t = 2.0 * x / kPi - 1.0;
  if (order == 0) {
    // Clenshaw: b_k = c_k + α_k(t) b_{k+1} + β_{k+1} b_{k+2}, α_k = (2k+1)t/(k+1), β_k = −k/(k+1).
    double b1 = 0.0, b2 = 0.0;
    for (Eigen::Index k = c.size(); k >= 1; --k) {
      const double b = c[k - 1] + (2.0 * k + 1.0) * t / (k + 1.0) * b1 - (k + 1.0) / (k + 2.0) * b2;
      b2 = b1;
      b1 = b;
    }
    // Σ_{k≥1} c_k P_k = b_1 P_1 + β_1 b_2 P_0.
    return b1 * t - 0.5 * b2;
  }
  double p0 = 1.0, p1 = t, d0 = 0.0, d1 = 1.0, e0 = 0.0, e1 = 0.0;
  double v = 0.0;
  for (Eigen::Index k = 1; k <= c.size(); ++k) {
    v += c[k - 1] * (order == 0 ? p1 : order == 1 ? d1 : e1);
    // P_{k+1} = ((2k+1) t P_k − k P_{k−1})/(k+1), P'_{k+1} = P'_{k−1} + (2k+1) P_k.
    const double p2 = ((2.0 * k + 1.0) * t * p1 - k * p0) / (k + 1.0);
    const double d2 = d0 + (2.0 * k + 1.0) * p1;
    const double e2 = e0 + (2.0 * k + 1.0) * d1;
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
    e0 = e1;
    e1 = e2;
  }
  const double scale = order == 0 ? 1.0 : order == 1 ? 2.0 / kPi : 4.0 / (kPi * kPi);
  return v * scale;
}

void check_knots(const Eigen::VectorXd& x, Eigen::Index nv, const char* what) {
  if (x.size() < 2 || x.size() != nv) throw ValidationError(std::string(what) + ": need matching x and value arrays");
  if (std::abs(x[0]) > kEdgeTol || std::abs(x[x.size() - 1] - kPi) > kEdgeTol)
    throw ValidationError(std::string(what) + ": breakpoints must start at 0 and end at pi");
  for (Eigen::Index i = 1; i < x.size(); ++i)
    if (!(x[i] >= x[i - 1])) throw ValidationError(std::string(what) + ": breakpoints must be nondecreasing");
  if (!x.allFinite()) throw ValidationError(std::string(what) + ": non-finite breakpoint");
}

// Locate i with x[i] <= t <= x[i+1] and x[i+1] > x[i].
Eigen::Index locate(const Eigen::VectorXd& x, double t) {
  const double* b = x.data();
  const double* e = b + x.size();
  Eigen::Index i = std::upper_bound(b, e, t) - b - 1;
  i = std::clamp<Eigen::Index>(i, 0, x.size() - 2);
  while (i > 0 && x[i + 1] == x[i]) --i;
  while (i + 2 < x.size() && x[i + 1] == x[i]) ++i;
  return i;
}

Potential::Piece hermite_piece(double a, double b, double va, double vb, double da, double db) {
  Potential::Piece p;
  p.a = a;
  p.b = b;
  const double h = b - a;
  p.c[0] = va;
  p.c[1] = da;
  if (h > 0.0) {
    const double m = (vb - va) / h;
    p.c[2] = (3.0 * m - 2.0 * da - db) / h;
    p.c[3] = (da + db - 2.0 * m) / (h * h);
  }
  return p;
}

Potential::Piece quintic_piece(double a, double b, double p0, double p1, double d0, double d1, double a0, double a1) {
  Potential::Piece p;
  p.a = a;
  p.b = b;
  const double h = b - a;
  p.c[0] = p0;
  p.c[1] = d0;
  p.c[2] = a0 / 2.0;
  if (h > 0.0) {
    const double h2 = h * h, h3 = h2 * h;
    p.c[3] = (20.0 * (p1 - p0) - (8.0 * d1 + 12.0 * d0) * h - (3.0 * a0 - a1) * h2) / (2.0 * h3);
    p.c[4] = (30.0 * (p0 - p1) + (14.0 * d1 + 16.0 * d0) * h + (3.0 * a0 - 2.0 * a1) * h2) / (2.0 * h3 * h);
    p.c[5] = (12.0 * (p1 - p0) - 6.0 * (d1 + d0) * h - (a0 - a1) * h2) / (2.0 * h3 * h2);
  }
  return p;
}

double piece_integral(const Potential::Piece& p) {
  const double h = p.b - p.a;
  double acc = 0.0, hp = h;
  for (int k = 0; k < 6; ++k, hp *= h) acc += p.c[k] * hp / (k + 1);
  return acc;
}

double hermite_integral(const Potential::Hermite& r) {
  const bool quintic = r.d2v.size() == r.v.size();
  double integral = 0.0;
  for (Eigen::Index i = 0; i + 1 < r.x.size(); ++i) {
    const double h = r.x[i + 1] - r.x[i];
    integral += quintic ? h * (r.v[i] + r.v[i + 1]) / 2.0 + h * h * (r.dv[i] - r.dv[i + 1]) / 10.0 +
                              h * h * h * (r.d2v[i] + r.d2v[i + 1]) / 120.0
                        : h * (r.v[i] + r.v[i + 1]) / 2.0 + h * h * (r.dv[i] - r.dv[i + 1]) / 12.0;
  }
  return integral;
}

}  // namespace

double Potential::Piece::operator()(double x) const {
  if (fourier) return fourier_value(*fourier, x);
  if (legendre) return legendre_eval(legendre->coeffs, x, 0);
  const double t = x - a;
  return c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5]))));
}

Potential::Potential() : Potential(Fourier{}) {}

Potential::Potential(Basis b) : basis_(std::move(b)) { finalize(); }

void Potential::finalize() {
  if (auto* f = std::get_if<Fourier>(&basis_)) {
    knots_.resize(2);
    knots_ << 0.0, kPi;
    sup_ = std::abs(f->offset) + f->cos_coeffs.cwiseAbs().sum() + f->sin_coeffs.cwiseAbs().sum();
    double m = f->offset;
    for (Eigen::Index k = 0; k < f->sin_coeffs.size(); ++k)
      if ((k + 1) % 2 == 1) m += 2.0 * f->sin_coeffs[k] / ((k + 1) * kPi);
    mean_ = m;
    return;
  }
  if (auto* l = std::get_if<Legendre>(&basis_)) {
    knots_.resize(2);
    knots_ << 0.0, kPi;
    sup_ = l->coeffs.cwiseAbs().sum();
    mean_ = 0.0;
    return;
  }
  if (auto* p = std::get_if<PiecewiseLinear>(&basis_)) {
    knots_ = p->x;
    sup_ = p->v.cwiseAbs().maxCoeff();
  } else {
    const auto& h = std::get<Hermite>(basis_);
    knots_ = h.x;
    sup_ = 0.0;
    for (Eigen::Index i = 0; i + 1 < h.x.size(); ++i) {
      const double len = h.x[i + 1] - h.x[i];
      // Hermite overshoot is bounded by the derivative terms.
      sup_ = std::max(sup_, std::max(std::abs(h.v[i]), std::abs(h.v[i + 1])) +
                                len * (std::abs(h.dv[i]) + std::abs(h.dv[i + 1])) / 4.0);
    }
  }
  double m = 0.0;
  for (Eigen::Index i = 0; i + 1 < knots_.size(); ++i) m += piece_integral(piece(i));
  mean_ = m / kPi;
}

Potential Potential::fourier(Eigen::VectorXd cos_coeffs, Eigen::VectorXd sin_coeffs) {
  if (!cos_coeffs.allFinite() || !sin_coeffs.allFinite()) throw ValidationError("fourier potential: non-finite coefficient");
  Fourier f{std::move(cos_coeffs), std::move(sin_coeffs), 0.0};
  Potential raw{Basis(f)};
  f.offset = -raw.mean();
  return Potential(Basis(std::move(f)));
}

Potential Potential::fourier(const std::vector<double>& c, const std::vector<double>& s) {
  return fourier(Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size())),
                 Eigen::Map<const Eigen::VectorXd>(s.data(), static_cast<Eigen::Index>(s.size())));
}

Potential Potential::legendre(Eigen::VectorXd coeffs) {
  if (!coeffs.allFinite()) throw ValidationError("legendre potential: non-finite coefficient");
  return Potential(Basis(Legendre{std::move(coeffs)}));
}

Potential Potential::piecewise_linear(Eigen::VectorXd x, Eigen::VectorXd v) {
  check_knots(x, v.size(), "piecewise_linear potential");
  if (!v.allFinite()) throw ValidationError("piecewise_linear potential: non-finite value");
  Potential p{Basis(PiecewiseLinear{std::move(x), std::move(v)})};
  if (std::abs(p.mean()) > 1e-10) throw ValidationError("piecewise_linear potential: mean is not zero");
  return p;
}

Potential Potential::hermite(Eigen::VectorXd x, Eigen::VectorXd v, Eigen::VectorXd dv, Eigen::VectorXd d2v) {
  check_knots(x, v.size(), "hermite potential");
  if (dv.size() != v.size()) throw ValidationError("hermite potential: derivative array size mismatch");
  if (d2v.size() != 0 && d2v.size() != v.size()) throw ValidationError("hermite potential: second derivative array size mismatch");
  if (!v.allFinite() || !dv.allFinite() || !d2v.allFinite()) throw ValidationError("hermite potential: non-finite value");
  Potential p{Basis(Hermite{std::move(x), std::move(v), std::move(dv), std::move(d2v)})};
  if (std::abs(p.mean()) > 1e-10) throw ValidationError("hermite potential: mean is not zero");
  return p;
}

Potential::Piece Potential::piece(Eigen::Index i) const {
  if (auto* f = std::get_if<Fourier>(&basis_)) {
    Piece p;
    p.a = 0.0;
    p.b = kPi;
    p.fourier = f;
    return p;
  }
  if (auto* l = std::get_if<Legendre>(&basis_)) {
    Piece p;
    p.a = 0.0;
    p.b = kPi;
    p.legendre = l;
    return p;
  }
  if (auto* pl = std::get_if<PiecewiseLinear>(&basis_)) {
    Piece p;
    p.a = pl->x[i];
    p.b = pl->x[i + 1];
    p.c[0] = pl->v[i];
    if (p.b > p.a) p.c[1] = (pl->v[i + 1] - pl->v[i]) / (p.b - p.a);
    return p;
  }
  const auto& h = std::get<Hermite>(basis_);
  if (h.d2v.size() == h.v.size())
    return quintic_piece(h.x[i], h.x[i + 1], h.v[i], h.v[i + 1], h.dv[i], h.dv[i + 1], h.d2v[i], h.d2v[i + 1]);
  return hermite_piece(h.x[i], h.x[i + 1], h.v[i], h.v[i + 1], h.dv[i], h.dv[i + 1]);
}

double Potential::eval(double x) const {
  if (!(x >= -kEdgeTol && x <= kPi + kEdgeTol)) throw DomainError("potential: x outside [0, pi]");
  x = std::clamp(x, 0.0, kPi);
  if (auto* f = std::get_if<Fourier>(&basis_)) return fourier_value(*f, x);
  if (auto* l = std::get_if<Legendre>(&basis_)) return legendre_eval(l->coeffs, x, 0);
  return piece(locate(knots_, x))(x);
}

double Potential::derivative(double x) const { return derivative(x, 0); }

namespace {
double fourier_second(const Potential::Fourier& f, double x) {
  double v = 0.0;
  for (Eigen::Index k = 0; k < f.cos_coeffs.size(); ++k) v -= (k + 1) * (k + 1) * f.cos_coeffs[k] * std::cos((k + 1) * x);
  for (Eigen::Index k = 0; k < f.sin_coeffs.size(); ++k) v -= (k + 1) * (k + 1) * f.sin_coeffs[k] * std::sin((k + 1) * x);
  return v;
}
}  // namespace

double Potential::piecewise_derivative(double x, int side, int order) const {
  if (!(x >= -kEdgeTol && x <= kPi + kEdgeTol)) throw DomainError("potential: x outside [0, pi]");
  x = std::clamp(x, 0.0, kPi);
  if (auto* f = std::get_if<Fourier>(&basis_)) return order == 1 ? fourier_derivative(*f, x) : fourier_second(*f, x);
  if (auto* l = std::get_if<Legendre>(&basis_)) return legendre_eval(l->coeffs, x, order);
  auto at = [&](Eigen::Index i) {
    const Piece p = piece(i);
    const double t = x - p.a;
    if (order == 1) return p.c[1] + t * (2.0 * p.c[2] + t * (3.0 * p.c[3] + t * (4.0 * p.c[4] + 5.0 * t * p.c[5])));
    return 2.0 * p.c[2] + t * (6.0 * p.c[3] + t * (12.0 * p.c[4] + 20.0 * t * p.c[5]));
  };
  const Eigen::Index n = knots_.size();
  const double* b = knots_.data();
  const double* e = b + n;
  const Eigen::Index left = std::clamp<Eigen::Index>(std::lower_bound(b, e, x) - b - 1, 0, n - 2);
  const Eigen::Index right = std::clamp<Eigen::Index>(std::upper_bound(b, e, x) - b - 1, 0, n - 2);
  if (side < 0) return at(left);
  if (side > 0) return at(right);
  const bool interior_knot = x > 0.0 && x < kPi && std::binary_search(b, e, x);
  return interior_knot ? 0.5 * (at(left) + at(right)) : at(right);
}

double Potential::derivative(double x, int side) const { return piecewise_derivative(x, side, 1); }
double Potential::second_derivative(double x, int side) const { return piecewise_derivative(x, side, 2); }

double eval(const Potential& s, double x) { return s.eval(x); }

Potential project_zero_mean(const Potential::PiecewiseLinear& raw) {
  check_knots(raw.x, raw.v.size(), "project_zero_mean");
  if (!raw.v.allFinite()) throw ValidationError("project_zero_mean: non-finite sample");
  double integral = 0.0;
  for (Eigen::Index i = 0; i + 1 < raw.x.size(); ++i) integral += 0.5 * (raw.x[i + 1] - raw.x[i]) * (raw.v[i] + raw.v[i + 1]);
  Eigen::VectorXd v = raw.v.array() - integral / kPi;
  return Potential::piecewise_linear(raw.x, std::move(v));
}

Potential project_zero_mean(const Potential::Hermite& raw) {
  check_knots(raw.x, raw.v.size(), "project_zero_mean");
  if (!raw.v.allFinite() || !raw.dv.allFinite() || !raw.d2v.allFinite())
    throw ValidationError("project_zero_mean: non-finite sample");
  Eigen::VectorXd v = raw.v.array() - hermite_integral(raw) / kPi;
  return Potential::hermite(raw.x, std::move(v), raw.dv, raw.d2v);
}

Potential project_zero_mean(const Potential::Fourier& raw) { return Potential::fourier(raw.cos_coeffs, raw.sin_coeffs); }

namespace {

template <typename F>
double integrate_pieces(const Potential& a, const Potential& b, double lo, double hi, F&& integrand) {
  std::vector<double> cuts{lo, hi};
  for (const auto* p : {&a, &b})
    for (Eigen::Index i = 0; i < p->knots().size(); ++i)
      if (p->knots()[i] > lo && p->knots()[i] < hi) cuts.push_back(p->knots()[i]);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  static const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
  static const double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                               0.2369268850561891};
  const double max_len = kPi / 1024.0;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    if (!(len > 0.0)) continue;
    const int m = static_cast<int>(std::ceil(len / max_len));
    const double h = len / m;
    for (int j = 0; j < m; ++j) {
      const double c = cuts[i] + (j + 0.5) * h;
      for (int q = 0; q < 5; ++q) total += gw[q] * 0.5 * h * integrand(c + 0.5 * h * gx[q]);
    }
  }
  return total;
}

}  // namespace

double l2_distance(const Potential& a, const Potential& b, double lo, double hi) {
  return std::sqrt(integrate_pieces(a, b, lo, hi, [&](double x) {
    const double d = a.eval(x) - b.eval(x);
    return d * d;
  }));
}

double l2_norm(const Potential& a, double lo, double hi) { return l2_distance(a, Potential::zero(), lo, hi); }

double symmetry_defect(const Potential& s) {
  // Mirror knots are added by sampling both x and π − x on the same cuts.
  Potential mirror = s;
  if (s.knots().size() > 2) {
    const auto& k = s.knots();
    Eigen::VectorXd x(k.size()), v(k.size());
    for (Eigen::Index i = 0; i < k.size(); ++i) {
      x[i] = kPi - k[k.size() - 1 - i];
      v[i] = 0.0;
    }
    x[0] = 0.0;
    x[x.size() - 1] = kPi;
    mirror = Potential::piecewise_linear(x, v);
  }
  return std::sqrt(integrate_pieces(s, mirror, 0.0, kPi, [&](double x) {
    const double d = s.eval(x) + s.eval(kPi - x);
    return d * d;
  }));
}

Potential fit_fourier(const Potential& s, int n_cos, int n_sin, int n_grid) {
  Eigen::MatrixXd A(n_grid, 1 + n_cos + n_sin);
  Eigen::VectorXd y(n_grid);
  for (int i = 0; i < n_grid; ++i) {
    const double x = kPi * (i + 0.5) / n_grid;
    y[i] = s.eval(x);
    A(i, 0) = 1.0;
    for (int k = 0; k < n_cos; ++k) A(i, 1 + k) = std::cos((k + 1) * x);
    for (int k = 0; k < n_sin; ++k) A(i, 1 + n_cos + k) = std::sin((k + 1) * x);
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
  return Potential::fourier(Eigen::VectorXd(c.segment(1, n_cos)), Eigen::VectorXd(c.segment(1 + n_cos, n_sin)));
}

Eigen::VectorXd default_grid(const Potential& s, int n) {
  std::vector<double> g;
  g.reserve(n + s.knots().size());
  for (int i = 0; i < n; ++i) g.push_back(kPi * i / (n - 1));
  for (Eigen::Index i = 0; i < s.knots().size(); ++i) g.push_back(s.knots()[i]);
  std::sort(g.begin(), g.end());
  // Merge points closer than a tiny fraction of the spacing.
  std::vector<double> out;
  const double tol = 1e-9 * kPi / n;
  for (double x : g)
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  out.front() = 0.0;
  out.back() = kPi;
  return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

Potential darboux_potential(const Potential& s, const SolutionTrace& v) {
  const Eigen::Index n = v.grid.size();
  if (n < 2) throw DomainError("darboux_potential: trace too short");
  const double v0 = v.y[0], vpi = v.y[n - 1];
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(v.y[i] * v0 > 0.0)) throw SingularityError("darboux_potential: v vanishes or changes sign on [0, pi]");
  if (!(v0 * vpi > 0.0)) throw SingularityError("darboux_potential: v(0) and v(pi) have opposite signs");
  const double shift = (2.0 / kPi) * std::log(vpi / v0);
  // Knots of s where its derivatives jump are duplicated so each side keeps its own data.
  const bool smooth = s.knots().size() == 2;
  std::vector<double> x, val, dval, d2val;
  x.reserve(n + 16);
  val.reserve(n + 16);
  dval.reserve(n + 16);
  d2val.reserve(n + 16);
  const auto& knots = s.knots();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = v.grid[i];
    const double si = s.eval(xi);
    const double w = v.quasi_deriv[i] / v.y[i];
    const double value = -si - 2.0 * w + shift;
    const double sw = si + w;
    // w' = −λ − (s + w)², so ŝ' = −s' + 2λ + 2(s + w)² and ŝ'' = −s'' + 4(s + w)(s' − λ − (s + w)²).
    auto push = [&](int side) {
      const double d1 = s.derivative(xi, side), d2 = s.second_derivative(xi, side);
      x.push_back(xi);
      val.push_back(value);
      dval.push_back(-d1 + 2.0 * v.lambda + 2.0 * sw * sw);
      d2val.push_back(-d2 + 4.0 * sw * (d1 - v.lambda - sw * sw));
    };
    const bool kink = !smooth && i > 0 && i + 1 < n && std::binary_search(knots.data(), knots.data() + knots.size(), xi);
    if (kink && (s.derivative(xi, -1) != s.derivative(xi, 1) || s.second_derivative(xi, -1) != s.second_derivative(xi, 1))) {
      push(-1);
      push(+1);
    } else {
      push(i == 0 ? 1 : (i + 1 == n ? -1 : 1));
    }
  }
  auto as_vec = [](std::vector<double>& a) { return Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size()))); };
  Potential::Hermite raw{as_vec(x), as_vec(val), as_vec(dval), as_vec(d2val)};
  return project_zero_mean(raw);
}

}  // namespace sbvp
