#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace socil::ad {

/**
 * Second-order forward-mode scalar: carries a value, its gradient and its
 * Hessian with respect to a fixed set of d seed variables. Propagating D2
 * through a function evaluation yields exact first and second derivatives,
 * which is what the analytic DerivativeProvider is built on.
 *
 * All D2 values participating in one evaluation must share the same d.
 */
class D2 {
 public:
  double v = 0.0;
  Eigen::VectorXd g;
  Eigen::MatrixXd H;

  D2() = default;

  /// Constant with respect to the seed variables.
  D2(double value, Eigen::Index dim)
      : v(value),
        g(Eigen::VectorXd::Zero(dim)),
        H(Eigen::MatrixXd::Zero(dim, dim)) {}

  /// Seed variable number `index` of `dim`.
  static D2 variable(double value, Eigen::Index dim, Eigen::Index index) {
    D2 x(value, dim);
    x.g(index) = 1.0;
    return x;
  }

  Eigen::Index dim() const { return g.size(); }

  D2 operator-() const {
    D2 r = *this;
    r.v = -r.v;
    r.g = -r.g;
    r.H = -r.H;
    return r;
  }

  D2& operator+=(const D2& o) {
    v += o.v;
    g += o.g;
    H += o.H;
    return *this;
  }
  D2& operator-=(const D2& o) {
    v -= o.v;
    g -= o.g;
    H -= o.H;
    return *this;
  }
  D2& operator+=(double c) {
    v += c;
    return *this;
  }
  D2& operator-=(double c) {
    v -= c;
    return *this;
  }
  D2& operator*=(double c) {
    v *= c;
    g *= c;
    H *= c;
    return *this;
  }

  friend D2 operator+(D2 a, const D2& b) { return a += b; }
  friend D2 operator-(D2 a, const D2& b) { return a -= b; }
  friend D2 operator+(D2 a, double c) { return a += c; }
  friend D2 operator+(double c, D2 a) { return a += c; }
  friend D2 operator-(D2 a, double c) { return a -= c; }
  friend D2 operator-(double c, const D2& a) { return -a + c; }
  friend D2 operator*(const D2& a, double c) {
    D2 r = a;
    return r *= c;
  }
  friend D2 operator*(double c, const D2& a) { return a * c; }
  friend D2 operator/(D2 a, double c) { return a *= (1.0 / c); }

  friend D2 operator*(const D2& a, const D2& b) {
    D2 r(a.v * b.v, a.dim());
    r.g = a.g * b.v + b.g * a.v;
    r.H = a.H * b.v + b.H * a.v + a.g * b.g.transpose() + b.g * a.g.transpose();
    return r;
  }

  friend D2 operator/(const D2& a, const D2& b) { return a * inverse(b); }
  friend D2 operator/(double c, const D2& b) { return inverse(b) * c; }

  /// Chain rule for a scalar map with first/second derivatives d1, d2 at v.
  D2 unary(double value, double d1, double d2) const {
    D2 r(value, dim());
    r.g = d1 * g;
    r.H = d1 * H + d2 * (g * g.transpose());
    return r;
  }

  friend D2 inverse(const D2& a) {
    const double iv = 1.0 / a.v;
    return a.unary(iv, -iv * iv, 2.0 * iv * iv * iv);
  }

  friend D2 sin(const D2& a) {
    const double s = std::sin(a.v), c = std::cos(a.v);
    return a.unary(s, c, -s);
  }
  friend D2 cos(const D2& a) {
    const double s = std::sin(a.v), c = std::cos(a.v);
    return a.unary(c, -s, -c);
  }
  friend D2 exp(const D2& a) {
    const double e = std::exp(a.v);
    return a.unary(e, e, e);
  }
  friend D2 log(const D2& a) {
    const double iv = 1.0 / a.v;
    return a.unary(std::log(a.v), iv, -iv * iv);
  }
  friend D2 sqrt(const D2& a) {
    const double s = std::sqrt(a.v);
    return a.unary(s, 0.5 / s, -0.25 / (s * a.v));
  }
};

inline D2 sq(const D2& a) { return a.unary(a.v * a.v, 2.0 * a.v, 2.0); }

using AdVector = std::vector<D2>;

/// Seed `values` as variables occupying [offset, offset+values.size()) of d.
inline AdVector make_variables(const Eigen::VectorXd& values, Eigen::Index dim,
                               Eigen::Index offset) {
  AdVector out;
  out.reserve(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i)
    out.push_back(D2::variable(values(i), dim, offset + i));
  return out;
}

/// Seed `values` as constants (zero gradient and Hessian).
inline AdVector make_constants(const Eigen::VectorXd& values,
                               Eigen::Index dim) {
  AdVector out;
  out.reserve(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i)
    out.push_back(D2(values(i), dim));
  return out;
}

}  // namespace socil::ad
