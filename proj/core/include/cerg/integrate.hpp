#pragma once

#include "cerg/state.hpp"

namespace cerg {

/// Stage buffers for the classical fixed-step 4th-order scheme.
struct Rk4Scratch {
    State k1, k2, k3, k4, mid;

    explicit Rk4Scratch(Eigen::Index n)
        : k1(State::zero(n)), k2(State::zero(n)), k3(State::zero(n)), k4(State::zero(n)),
          mid(State::zero(n)) {}
};

/// Stages 2-4 of a classical RK4 step, for callers that already evaluated the
/// derivative at `x` into `s.k1`.
template <typename Deriv>
void rk4_step_from_k1(Deriv&& deriv, State& x, double dt, Rk4Scratch& s) {
    s.mid.q = x.q + (0.5 * dt) * s.k1.q;
    s.mid.qd = x.qd + (0.5 * dt) * s.k1.qd;
    deriv(s.mid, s.k2);
    s.mid.q = x.q + (0.5 * dt) * s.k2.q;
    s.mid.qd = x.qd + (0.5 * dt) * s.k2.qd;
    deriv(s.mid, s.k3);
    s.mid.q = x.q + dt * s.k3.q;
    s.mid.qd = x.qd + dt * s.k3.qd;
    deriv(s.mid, s.k4);
    x.q += (dt / 6.0) * (s.k1.q + 2.0 * s.k2.q + 2.0 * s.k3.q + s.k4.q);
    x.qd += (dt / 6.0) * (s.k1.qd + 2.0 * s.k2.qd + 2.0 * s.k3.qd + s.k4.qd);
}

/// One classical RK4 step of x' = f(x), advancing `x` in place. `deriv` must
/// write the derivative of its first argument into its second.
template <typename Deriv>
void rk4_step(Deriv&& deriv, State& x, double dt, Rk4Scratch& s) {
    deriv(x, s.k1);
    rk4_step_from_k1(deriv, x, dt, s);
}

}  // namespace cerg
