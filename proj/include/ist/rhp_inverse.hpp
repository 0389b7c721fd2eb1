#pragma once

#include "ist/zs_direct.hpp"

namespace ist {

// Weights of the jump factorization (I - w^-)^{-1}(I + w^+) at spatial
// parameter x; w_plus is the (2,1) entry of w^+, w_minus the (1,2) entry of
// w^-. Both have modulus |r| at every node.
struct BCWeights {
  Grid1D lambda_grid;
  std::vector<cd> w_plus, w_minus;
  double x = 0.0;
};

BCWeights make_bc_weights(const ReflectionCoefficient& r, double x);

enum class BCPath { trivial, fixed_point, krylov };

// Row (mu11, mu21) of the Beals-Coifman solution at one x; the full matrix
// follows from mu12 = conj(mu21), mu22 = conj(mu11).
struct BCSolution {
  Grid1D lambda_grid;
  std::vector<cd> mu11, mu21;
  double x = 0.0;
  double residual = 0.0;
  int iterations = 0;
  double contraction_ratio = 0.0;  // measured on the fixed-point path
  BCPath path = BCPath::trivial;
};

struct BCOptions {
  double tol = 1e-10;
  int max_iter = 200;
  double krylov_gate = 0.8;  // sup|r| above which GMRES replaces iteration
  int krylov_restart = 60;
  bool allow_krylov = true;  // diagnostics disable the fallback
  int workers = 0;
};

BCSolution bc_solve(const ReflectionCoefficient& r, double x, double tol = 1e-10,
                    const BCOptions& opts = {});

struct ReconstructionStat {
  double x = 0.0;
  double residual = 0.0;
  int iterations = 0;
  BCPath path = BCPath::trivial;
};

struct ReconstructionResult {
  Potential1D q;
  std::vector<ReconstructionStat> stats;
  double max_contraction_ratio = 0.0;
};

ReconstructionResult reconstruct_q(const ReflectionCoefficient& r, const Grid1D& x_grid,
                                   double tol = 1e-10, const BCOptions& opts = {});
ReconstructionResult reconstruct_q_serial(const ReflectionCoefficient& r, const Grid1D& x_grid,
                                          double tol = 1e-10, const BCOptions& opts = {});

// q(x) at a single off-grid point (the asymptotics harness probes arbitrary x).
cd reconstruct_q_at(const ReflectionCoefficient& r, double x, double tol = 1e-10,
                    const BCOptions& opts = {});

// Scalar Riemann-Hilbert function G(z) = exp((2 pi i)^{-1} int log(1-|r|^2)/(s-z) ds);
// equals the analytic continuation a(z) for Im z < 0. z must stay at least one
// grid spacing away from the real axis.
cd a_from_r(const ReflectionCoefficient& r, cd z);

}  // namespace ist
