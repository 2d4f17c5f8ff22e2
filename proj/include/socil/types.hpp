#pragma once

#include <Eigen/Dense>
#include <vector>

#include "socil/error.hpp"

namespace socil {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/**
 * Tunable parameter vector, partitioned into dynamics, objective and
 * constraint sub-vectors. The flat layout is always [dyn, obj, cstr];
 * Jacobian columns throughout the library refer to this order.
 */
struct ParamVector {
  Vector dyn;
  Vector obj;
  Vector cstr;

  ParamVector() = default;
  ParamVector(Vector dyn_, Vector obj_, Vector cstr_)
      : dyn(std::move(dyn_)), obj(std::move(obj_)), cstr(std::move(cstr_)) {}

  Eigen::Index size() const { return dyn.size() + obj.size() + cstr.size(); }

  /// Concatenation [dyn; obj; cstr].
  Vector flat() const {
    Vector v(size());
    v << dyn, obj, cstr;
    return v;
  }

  /// Rebuild from a flat vector using this instance's partition sizes.
  ParamVector with_flat(const Vector& v) const {
    if (v.size() != size())
      throw DimensionError("ParamVector::with_flat: expected length " +
                           std::to_string(size()) + ", got " +
                           std::to_string(v.size()));
    ParamVector out = *this;
    out.dyn = v.head(dyn.size());
    out.obj = v.segment(dyn.size(), obj.size());
    out.cstr = v.tail(cstr.size());
    return out;
  }

  bool all_finite() const {
    return dyn.allFinite() && obj.allFinite() && cstr.allFinite();
  }
};

/**
 * Stacked state/input sequence. `states` has T+1 entries, `inputs` has T.
 * `rolled_out` marks trajectories produced by iterating the dynamics from x0.
 */
struct Trajectory {
  std::vector<Vector> states;
  std::vector<Vector> inputs;
  bool rolled_out = false;

  int horizon() const { return static_cast<int>(inputs.size()); }

  int state_dim() const {
    return states.empty() ? 0 : static_cast<int>(states.front().size());
  }
  int input_dim() const {
    return inputs.empty() ? 0 : static_cast<int>(inputs.front().size());
  }

  /// Stacked [x_t; u_t]; the input block is zero for the terminal index.
  Vector stacked(int t) const {
    const int T = horizon();
    if (t < 0 || t > T)
      throw DimensionError("Trajectory::stacked: index " + std::to_string(t) +
                           " outside [0, " + std::to_string(T) + "]");
    Vector xi(state_dim() + input_dim());
    xi.head(state_dim()) = states[static_cast<std::size_t>(t)];
    if (t < T)
      xi.tail(input_dim()) = inputs[static_cast<std::size_t>(t)];
    else
      xi.tail(input_dim()).setZero();
    return xi;
  }
};

}  // namespace socil
