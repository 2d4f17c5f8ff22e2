#include <cmath>

#include "socil/problem.hpp"

namespace socil {

namespace {

// Steps per the numeric-derivative design: 1e-5*(1+|c|) for first
// derivatives, 1e-4*(1+|c|) for second-difference stencils.
double step1(double c) { return 1e-5 * (1.0 + std::abs(c)); }
double step2(double c) { return 1e-4 * (1.0 + std::abs(c)); }

enum class Group { kX, kU, kTheta };

// Flat-theta adapters around the problem handles.
using VecFn = std::function<Vector(const Vector&, const Vector&, const Vector&)>;
using ScalFn = std::function<double(const Vector&, const Vector&, const Vector&)>;

struct Point {
  Vector x, u, th;
};

const Vector& group_of(const Point& pt, Group g) {
  switch (g) {
    case Group::kX: return pt.x;
    case Group::kU: return pt.u;
    default: return pt.th;
  }
}

Point shifted(Point pt, Group g, Eigen::Index i, double delta) {
  switch (g) {
    case Group::kX: pt.x(i) += delta; break;
    case Group::kU: pt.u(i) += delta; break;
    default: pt.th(i) += delta; break;
  }
  return pt;
}

Matrix jacobian(const VecFn& f, const Point& pt, Group g, Eigen::Index rows) {
  const Vector& v = group_of(pt, g);
  Matrix J(rows, v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double h = step1(v(i));
    const Point hi = shifted(pt, g, i, h);
    const Point lo = shifted(pt, g, i, -h);
    J.col(i) = (f(hi.x, hi.u, hi.th) - f(lo.x, lo.u, lo.th)) / (2.0 * h);
  }
  return J;
}

Vector gradient(const ScalFn& f, const Point& pt, Group g) {
  const Vector& v = group_of(pt, g);
  Vector grad(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double h = step1(v(i));
    const Point hi = shifted(pt, g, i, h);
    const Point lo = shifted(pt, g, i, -h);
    grad(i) = (f(hi.x, hi.u, hi.th) - f(lo.x, lo.u, lo.th)) / (2.0 * h);
  }
  return grad;
}

Matrix hessian_block(const ScalFn& f, const Point& pt, Group ga, Group gb) {
  const Vector& va = group_of(pt, ga);
  const Vector& vb = group_of(pt, gb);
  Matrix H(va.size(), vb.size());
  const bool same = (ga == gb);
  const double f0 = same ? f(pt.x, pt.u, pt.th) : 0.0;
  for (Eigen::Index i = 0; i < va.size(); ++i) {
    const double hi = step2(va(i));
    for (Eigen::Index j = 0; j < vb.size(); ++j) {
      if (same && j < i) {
        H(i, j) = H(j, i);
        continue;
      }
      if (same && i == j) {
        const Point a = shifted(pt, ga, i, hi);
        const Point b = shifted(pt, ga, i, -hi);
        H(i, i) = (f(a.x, a.u, a.th) - 2.0 * f0 + f(b.x, b.u, b.th)) / (hi * hi);
        continue;
      }
      const double hj = step2(vb(j));
      const Point pp = shifted(shifted(pt, ga, i, hi), gb, j, hj);
      const Point pm = shifted(shifted(pt, ga, i, hi), gb, j, -hj);
      const Point mp = shifted(shifted(pt, ga, i, -hi), gb, j, hj);
      const Point mm = shifted(shifted(pt, ga, i, -hi), gb, j, -hj);
      H(i, j) = (f(pp.x, pp.u, pp.th) - f(pm.x, pm.u, pm.th) -
                 f(mp.x, mp.u, mp.th) + f(mm.x, mm.u, mm.th)) /
                (4.0 * hi * hj);
    }
  }
  return H;
}

}  // namespace

DynamicsBlocks NumericProvider::dynamics(const Vector& x, const Vector& u,
                                         const ParamVector& theta,
                                         const Vector& w,
                                         bool want_theta) const {
  const int n = problem_.state_dim;
  const Point pt{x, u, theta.flat()};
  VecFn f = [&](const Vector& xx, const Vector& uu, const Vector& th) {
    return problem_.dynamics(xx, uu, theta.with_flat(th));
  };
  ScalFn s = [&](const Vector& xx, const Vector& uu, const Vector& th) {
    return w.size() > 0 ? w.dot(f(xx, uu, th)) : 0.0;
  };

  DynamicsBlocks b;
  b.value = f(x, u, pt.th);
  b.x = jacobian(f, pt, Group::kX, n);
  b.u = jacobian(f, pt, Group::kU, n);
  b.wxx = hessian_block(s, pt, Group::kX, Group::kX);
  b.wxu = hessian_block(s, pt, Group::kX, Group::kU);
  b.wuu = hessian_block(s, pt, Group::kU, Group::kU);
  if (want_theta) {
    b.theta = jacobian(f, pt, Group::kTheta, n);
    b.wxtheta = hessian_block(s, pt, Group::kX, Group::kTheta);
    b.wutheta = hessian_block(s, pt, Group::kU, Group::kTheta);
  }
  return b;
}

CostBlocks NumericProvider::stage_cost(const Vector& x, const Vector& u,
                                       const ParamVector& theta,
                                       bool want_theta) const {
  const Point pt{x, u, theta.flat()};
  ScalFn c = [&](const Vector& xx, const Vector& uu, const Vector& th) {
    return problem_.stage_cost(xx, uu, theta.with_flat(th));
  };
  CostBlocks b;
  b.value = c(x, u, pt.th);
  b.x = gradient(c, pt, Group::kX);
  b.u = gradient(c, pt, Group::kU);
  b.xx = hessian_block(c, pt, Group::kX, Group::kX);
  b.xu = hessian_block(c, pt, Group::kX, Group::kU);
  b.uu = hessian_block(c, pt, Group::kU, Group::kU);
  if (want_theta) {
    b.xtheta = hessian_block(c, pt, Group::kX, Group::kTheta);
    b.utheta = hessian_block(c, pt, Group::kU, Group::kTheta);
  }
  return b;
}

TerminalCostBlocks NumericProvider::terminal_cost(const Vector& x,
                                                  const ParamVector& theta,
                                                  bool want_theta) const {
  const Point pt{x, Vector(0), theta.flat()};
  ScalFn c = [&](const Vector& xx, const Vector&, const Vector& th) {
    return problem_.terminal_cost(xx, theta.with_flat(th));
  };
  TerminalCostBlocks b;
  b.value = c(x, pt.u, pt.th);
  b.x = gradient(c, pt, Group::kX);
  b.xx = hessian_block(c, pt, Group::kX, Group::kX);
  if (want_theta) b.xtheta = hessian_block(c, pt, Group::kX, Group::kTheta);
  return b;
}

namespace {

ConstraintBlocks path_constraint_blocks(const PathConstraintFn& fn,
                                        int count, const Vector& x,
                                        const Vector& u,
                                        const ParamVector& theta,
                                        const Vector& w, bool want_theta) {
  const Point pt{x, u, theta.flat()};
  VecFn f = [&](const Vector& xx, const Vector& uu, const Vector& th) {
    return count > 0 ? fn(xx, uu, theta.with_flat(th)) : Vector(0);
  };
  ScalFn s = [&](const Vector& xx, const Vector& uu, const Vector& th) {
    return count > 0 && w.size() > 0 ? w.dot(f(xx, uu, th)) : 0.0;
  };
  ConstraintBlocks b;
  b.value = f(x, u, pt.th);
  b.x = jacobian(f, pt, Group::kX, count);
  b.u = jacobian(f, pt, Group::kU, count);
  b.wxx = hessian_block(s, pt, Group::kX, Group::kX);
  b.wxu = hessian_block(s, pt, Group::kX, Group::kU);
  b.wuu = hessian_block(s, pt, Group::kU, Group::kU);
  if (want_theta) {
    b.theta = jacobian(f, pt, Group::kTheta, count);
    b.wxtheta = hessian_block(s, pt, Group::kX, Group::kTheta);
    b.wutheta = hessian_block(s, pt, Group::kU, Group::kTheta);
  }
  return b;
}

TerminalConstraintBlocks term_constraint_blocks(const TerminalConstraintFn& fn,
                                                int count, const Vector& x,
                                                const ParamVector& theta,
                                                const Vector& w,
                                                bool want_theta) {
  const Point pt{x, Vector(0), theta.flat()};
  VecFn f = [&](const Vector& xx, const Vector&, const Vector& th) {
    return count > 0 ? fn(xx, theta.with_flat(th)) : Vector(0);
  };
  ScalFn s = [&](const Vector& xx, const Vector& uu, const Vector& th) {
    return count > 0 && w.size() > 0 ? w.dot(f(xx, uu, th)) : 0.0;
  };
  TerminalConstraintBlocks b;
  b.value = f(x, pt.u, pt.th);
  b.x = jacobian(f, pt, Group::kX, count);
  b.wxx = hessian_block(s, pt, Group::kX, Group::kX);
  if (want_theta) {
    b.theta = jacobian(f, pt, Group::kTheta, count);
    b.wxtheta = hessian_block(s, pt, Group::kX, Group::kTheta);
  }
  return b;
}

}  // namespace

ConstraintBlocks NumericProvider::ineq_path(const Vector& x, const Vector& u,
                                            const ParamVector& theta,
                                            const Vector& w,
                                            bool want_theta) const {
  return path_constraint_blocks(problem_.ineq_path, problem_.num_ineq_path, x,
                                u, theta, w, want_theta);
}

ConstraintBlocks NumericProvider::eq_path(const Vector& x, const Vector& u,
                                          const ParamVector& theta,
                                          const Vector& w,
                                          bool want_theta) const {
  return path_constraint_blocks(problem_.eq_path, problem_.num_eq_path, x, u,
                                theta, w, want_theta);
}

TerminalConstraintBlocks NumericProvider::ineq_term(const Vector& x,
                                                    const ParamVector& theta,
                                                    const Vector& w,
                                                    bool want_theta) const {
  return term_constraint_blocks(problem_.ineq_term, problem_.num_ineq_term, x,
                                theta, w, want_theta);
}

TerminalConstraintBlocks NumericProvider::eq_term(const Vector& x,
                                                  const ParamVector& theta,
                                                  const Vector& w,
                                                  bool want_theta) const {
  return term_constraint_blocks(problem_.eq_term, problem_.num_eq_term, x,
                                theta, w, want_theta);
}

// ---------------------------------------------------------------------------
// AutodiffProvider

namespace {

struct Seeded {
  ad::AdVector x, u, th;
  Eigen::Index dim;
};

Seeded seed(const Vector& x, const Vector& u, const Vector& th_flat,
            bool want_theta) {
  Seeded s;
  s.dim = x.size() + u.size() + (want_theta ? th_flat.size() : 0);
  s.x = ad::make_variables(x, s.dim, 0);
  s.u = ad::make_variables(u, s.dim, x.size());
  s.th = want_theta ? ad::make_variables(th_flat, s.dim, x.size() + u.size())
                    : ad::make_constants(th_flat, s.dim);
  return s;
}

}  // namespace

DynamicsBlocks AutodiffProvider::dynamics(const Vector& x, const Vector& u,
                                          const ParamVector& theta,
                                          const Vector& w,
                                          bool want_theta) const {
  const Seeded s = seed(x, u, theta.flat(), want_theta);
  ad::AdVector out(static_cast<std::size_t>(n_));
  fns_.dynamics(s.x, s.u, s.th, out);

  DynamicsBlocks b;
  b.value.resize(n_);
  b.x.resize(n_, n_);
  b.u.resize(n_, m_);
  if (want_theta) b.theta.resize(n_, p_);
  Matrix contracted = Matrix::Zero(s.dim, s.dim);
  for (int k = 0; k < n_; ++k) {
    b.value(k) = out[static_cast<std::size_t>(k)].v;
    const Vector& g = out[static_cast<std::size_t>(k)].g;
    b.x.row(k) = g.head(n_).transpose();
    b.u.row(k) = g.segment(n_, m_).transpose();
    if (want_theta) b.theta.row(k) = g.tail(p_).transpose();
    if (w.size() > 0) contracted += w(k) * out[static_cast<std::size_t>(k)].H;
  }
  b.wxx = contracted.block(0, 0, n_, n_);
  b.wxu = contracted.block(0, n_, n_, m_);
  b.wuu = contracted.block(n_, n_, m_, m_);
  if (want_theta) {
    b.wxtheta = contracted.block(0, n_ + m_, n_, p_);
    b.wutheta = contracted.block(n_, n_ + m_, m_, p_);
  }
  return b;
}

CostBlocks AutodiffProvider::stage_cost(const Vector& x, const Vector& u,
                                        const ParamVector& theta,
                                        bool want_theta) const {
  const Seeded s = seed(x, u, theta.flat(), want_theta);
  const ad::D2 c = fns_.stage_cost(s.x, s.u, s.th);
  CostBlocks b;
  b.value = c.v;
  b.x = c.g.head(n_);
  b.u = c.g.segment(n_, m_);
  b.xx = c.H.block(0, 0, n_, n_);
  b.xu = c.H.block(0, n_, n_, m_);
  b.uu = c.H.block(n_, n_, m_, m_);
  if (want_theta) {
    b.xtheta = c.H.block(0, n_ + m_, n_, p_);
    b.utheta = c.H.block(n_, n_ + m_, m_, p_);
  }
  return b;
}

TerminalCostBlocks AutodiffProvider::terminal_cost(const Vector& x,
                                                   const ParamVector& theta,
                                                   bool want_theta) const {
  const Vector th_flat = theta.flat();
  const Eigen::Index dim = x.size() + (want_theta ? th_flat.size() : 0);
  const ad::AdVector xa = ad::make_variables(x, dim, 0);
  const ad::AdVector tha = want_theta
                               ? ad::make_variables(th_flat, dim, x.size())
                               : ad::make_constants(th_flat, dim);
  const ad::D2 c = fns_.terminal_cost(xa, tha);
  TerminalCostBlocks b;
  b.value = c.v;
  b.x = c.g.head(n_);
  b.xx = c.H.block(0, 0, n_, n_);
  if (want_theta) b.xtheta = c.H.block(0, n_, n_, p_);
  return b;
}

namespace {

ConstraintBlocks ad_path_blocks(const AdPathConstraintFn& fn, int count, int n,
                                int m, int p, const Vector& x, const Vector& u,
                                const ParamVector& theta, const Vector& w,
                                bool want_theta) {
  ConstraintBlocks b;
  b.value.resize(count);
  b.x.resize(count, n);
  b.u.resize(count, m);
  if (want_theta) b.theta.resize(count, p);
  if (count == 0) {
    b.wxx = Matrix::Zero(n, n);
    b.wxu = Matrix::Zero(n, m);
    b.wuu = Matrix::Zero(m, m);
    if (want_theta) {
      b.wxtheta = Matrix::Zero(n, p);
      b.wutheta = Matrix::Zero(m, p);
    }
    return b;
  }
  const Seeded s = seed(x, u, theta.flat(), want_theta);
  ad::AdVector out(static_cast<std::size_t>(count));
  fn(s.x, s.u, s.th, out);
  Matrix contracted = Matrix::Zero(s.dim, s.dim);
  for (int k = 0; k < count; ++k) {
    b.value(k) = out[static_cast<std::size_t>(k)].v;
    const Vector& g = out[static_cast<std::size_t>(k)].g;
    b.x.row(k) = g.head(n).transpose();
    b.u.row(k) = g.segment(n, m).transpose();
    if (want_theta) b.theta.row(k) = g.tail(p).transpose();
    if (w.size() > 0) contracted += w(k) * out[static_cast<std::size_t>(k)].H;
  }
  b.wxx = contracted.block(0, 0, n, n);
  b.wxu = contracted.block(0, n, n, m);
  b.wuu = contracted.block(n, n, m, m);
  if (want_theta) {
    b.wxtheta = contracted.block(0, n + m, n, p);
    b.wutheta = contracted.block(n, n + m, m, p);
  }
  return b;
}

TerminalConstraintBlocks ad_term_blocks(const AdTerminalConstraintFn& fn,
                                        int count, int n, int p,
                                        const Vector& x,
                                        const ParamVector& theta,
                                        const Vector& w, bool want_theta) {
  TerminalConstraintBlocks b;
  b.value.resize(count);
  b.x.resize(count, n);
  if (want_theta) b.theta.resize(count, p);
  if (count == 0) {
    b.wxx = Matrix::Zero(n, n);
    if (want_theta) b.wxtheta = Matrix::Zero(n, p);
    return b;
  }
  const Vector th_flat = theta.flat();
  const Eigen::Index dim = x.size() + (want_theta ? th_flat.size() : 0);
  const ad::AdVector xa = ad::make_variables(x, dim, 0);
  const ad::AdVector tha = want_theta
                               ? ad::make_variables(th_flat, dim, x.size())
                               : ad::make_constants(th_flat, dim);
  ad::AdVector out(static_cast<std::size_t>(count));
  fn(xa, tha, out);
  Matrix contracted = Matrix::Zero(dim, dim);
  for (int k = 0; k < count; ++k) {
    b.value(k) = out[static_cast<std::size_t>(k)].v;
    const Vector& g = out[static_cast<std::size_t>(k)].g;
    b.x.row(k) = g.head(n).transpose();
    if (want_theta) b.theta.row(k) = g.tail(p).transpose();
    if (w.size() > 0) contracted += w(k) * out[static_cast<std::size_t>(k)].H;
  }
  b.wxx = contracted.block(0, 0, n, n);
  if (want_theta) b.wxtheta = contracted.block(0, n, n, p);
  return b;
}

}  // namespace

ConstraintBlocks AutodiffProvider::ineq_path(const Vector& x, const Vector& u,
                                             const ParamVector& theta,
                                             const Vector& w,
                                             bool want_theta) const {
  return ad_path_blocks(fns_.ineq_path, q_, n_, m_, p_, x, u, theta, w,
                        want_theta);
}

ConstraintBlocks AutodiffProvider::eq_path(const Vector& x, const Vector& u,
                                           const ParamVector& theta,
                                           const Vector& w,
                                           bool want_theta) const {
  return ad_path_blocks(fns_.eq_path, s_, n_, m_, p_, x, u, theta, w,
                        want_theta);
}

TerminalConstraintBlocks AutodiffProvider::ineq_term(const Vector& x,
                                                     const ParamVector& theta,
                                                     const Vector& w,
                                                     bool want_theta) const {
  return ad_term_blocks(fns_.ineq_term, q_term_, n_, p_, x, theta, w,
                        want_theta);
}

TerminalConstraintBlocks AutodiffProvider::eq_term(const Vector& x,
                                                   const ParamVector& theta,
                                                   const Vector& w,
                                                   bool want_theta) const {
  return ad_term_blocks(fns_.eq_term, s_term_, n_, p_, x, theta, w,
                        want_theta);
}

std::shared_ptr<const DerivativeProvider> ensure_provider(
    const ControlProblem& problem) {
  if (problem.provider) return problem.provider;
  ControlProblem copy = problem;
  copy.provider = nullptr;
  return std::make_shared<NumericProvider>(std::move(copy));
}

}  // namespace socil
