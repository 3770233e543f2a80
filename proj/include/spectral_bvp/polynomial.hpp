#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <vector>

namespace sbvp {

// Real polynomial, coefficients stored in ascending degree. Trailing exact zeros are trimmed,
// so the zero polynomial has no coefficients and degree -1.
template <typename Scalar>
class Polynomial {
 public:
  using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Polynomial() = default;
  explicit Polynomial(Coefficients c) : c_(std::move(c)) { trim(); }
  Polynomial(std::initializer_list<Scalar> c) : c_(static_cast<Eigen::Index>(c.size())) {
    std::copy(c.begin(), c.end(), c_.data());
    trim();
  }

  static Polynomial constant(Scalar a) { return Polynomial({a}); }
  // (root - x)
  static Polynomial root_factor(Scalar root) { return Polynomial({root, Scalar(-1)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.size() == 0; }
  const Coefficients& coefficients() const { return c_; }
  Scalar coefficient(int k) const { return k < c_.size() ? c_[k] : Scalar(0); }
  Scalar leading() const { return is_zero() ? Scalar(0) : c_[c_.size() - 1]; }

  Scalar operator()(Scalar x) const {
    Scalar r(0);
    for (Eigen::Index k = c_.size() - 1; k >= 0; --k) r = r * x + c_[k];
    return r;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    Coefficients d(c_.size() - 1);
    for (Eigen::Index k = 1; k < c_.size(); ++k) d[k - 1] = Scalar(k) * c_[k];
    return Polynomial(d);
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Coefficients r = Coefficients::Zero(std::max(a.c_.size(), b.c_.size()));
    r.head(a.c_.size()) += a.c_;
    r.head(b.c_.size()) += b.c_;
    return Polynomial(r);
  }
  friend Polynomial operator-(const Polynomial& a) { return Polynomial(Coefficients(-a.c_)); }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Coefficients r = Coefficients::Zero(a.c_.size() + b.c_.size() - 1);
    for (Eigen::Index i = 0; i < a.c_.size(); ++i) r.segment(i, b.c_.size()) += a.c_[i] * b.c_;
    return Polynomial(r);
  }
  friend Polynomial operator*(Scalar s, const Polynomial& a) { return Polynomial(Coefficients(s * a.c_)); }

 private:
  void trim() {
    Eigen::Index n = c_.size();
    while (n > 0 && c_[n - 1] == Scalar(0)) --n;
    c_.conservativeResize(n);
  }
  Coefficients c_;
};

using RealPolynomial = Polynomial<double>;

// Real roots (sorted) of a polynomial via the companion matrix; roots whose imaginary part
// exceeds imag_tol relative to their modulus are discarded.
std::vector<double> real_roots(const RealPolynomial& p, double imag_tol = 1e-8);

}  // namespace sbvp
