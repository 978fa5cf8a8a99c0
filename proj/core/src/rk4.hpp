#pragma once

// Classical fourth-order Runge-Kutta step shared by the density-matrix and
// ket integrators. `deriv(x, out)` must write dx/dt into `out`.

namespace manycopies::detail {

template <typename State, typename Deriv>
void rk4_step(State& x, double dt, Deriv&& deriv, State& k1, State& k2, State& k3, State& k4,
              State& tmp) {
  deriv(x, k1);
  tmp = x + (0.5 * dt) * k1;
  deriv(tmp, k2);
  tmp = x + (0.5 * dt) * k2;
  deriv(tmp, k3);
  tmp = x + dt * k3;
  deriv(tmp, k4);
  x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace manycopies::detail
