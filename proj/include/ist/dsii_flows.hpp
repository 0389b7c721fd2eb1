#pragma once

#include "ist/dsii_scatter.hpp"

namespace ist {

struct DSIIRunConfig {
  double t = 0.0;
  double dt = 1e-3;
  Grid2D z_grid;
  int k_block = 0;
  double cgo_tol = 1e-10;
  CgoOptions cgo;
};

// Solution operator of i v_t + 2(dz^2 + dbar^2) v = 0: multiplier
// exp(-i t (xi1^2 - xi2^2)).
ComplexField2D dsii_linear(const ComplexField2D& f, double t);

// The nonlocal term (g + conj g) q with g = -4 dbar^{-1}(dz |q|^2), computed
// through the Beurling multiplier.
ComplexField2D dsii_nonlinearity(const ComplexField2D& q);

// g itself (real part doubled is the potential in the phase rotation).
std::vector<double> dsii_real_potential(const ComplexField2D& q);

ComplexField2D dsii_splitstep(const Potential2D& q0, double t, double dt);

// q(., t) = S(exp(2 i (k^2 + conj(k)^2) t) S q0) on the z-grid of q0.
Potential2D dsii_ist_solution(const Potential2D& q0, double t, const DSIIRunConfig& cfg);

}  // namespace ist
