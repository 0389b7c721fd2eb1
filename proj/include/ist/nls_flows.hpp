#pragma once

#include "ist/rhp_inverse.hpp"

namespace ist {

struct EvolutionConfig {
  double t = 0.0;
  double dt = 1e-3;         // split-step increment of the paired reference run
  Grid1D x_grid;
  Grid1D lambda_grid;
  double bc_tol = 1e-10;
  BCOptions bc;
  SweepOptions sweep;
};

ReflectionCoefficient evolve_reflection(const ReflectionCoefficient& r0, double t);

// q(., t) = I(exp(4 i lambda^2 t) R(q0)) on cfg.x_grid.
ReconstructionResult ist_solve(const Potential1D& q0, double t, const EvolutionConfig& cfg);

// exp(it d^2/dx^2) as the multiplier exp(-i t xi^2).
ComplexField1D linear_propagator(const ComplexField1D& f, double t);

// Strang splitting for i q_t + q_xx - 2|q|^2 q = 0; the nonlinear substep is
// the exact pointwise rotation exp(-2 i |q|^2 dt).
ComplexField1D splitstep_nls(const ComplexField1D& q0, double t, double dt);

// Closed-form long-time profile q ~ t^{-1/2} alpha(z0) exp(i x^2/(4t) - i nu log(8t)),
// z0 = -x/(4t), nu = -(1/2 pi) log(1 - |r(z0)|^2), |alpha|^2 = nu/2. The phase
// of alpha combines the Stieltjes integral of log(1-|r|^2), pi/4, arg Gamma(i nu)
// and -arg(-r(z0)); branch conventions were pinned by the decay-rate harness.
struct AsymptoticProfile {
  double z0 = 0.0;
  double nu = 0.0;
  double amplitude = 0.0;   // |alpha| = sqrt(nu/2)
  double alpha_phase = 0.0;
  cd value;                 // assembled q_asym(x, t)
  bool degenerate = false;  // r vanishes near z0; profile set to zero
};

AsymptoticProfile deift_zhou_profile(const ReflectionCoefficient& r, double x, double t);

// Im log Gamma(z) for Re z > 0 (Lanczos); exposed for tests.
double arg_gamma(cd z);

}  // namespace ist
