#pragma once

#include <functional>
#include <limits>

#include "ist/field.hpp"

namespace ist {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Potential1D {
  ComplexField1D field;
  double tail_mass = 0.0;  // reported |q| mass outside the sweep window
  // Optional closed-form evaluator used at integrator nodes. When absent,
  // values between samples come from the band-limited interpolant.
  std::function<cd(double)> sampler;

  Potential1D() = default;
  explicit Potential1D(ComplexField1D f) : field(std::move(f)) {}
  Potential1D(ComplexField1D f, std::function<cd(double)> s)
      : field(std::move(f)), sampler(std::move(s)) {}

  double l1_norm() const { return norm_l1(field); }
  double l2_norm() const { return norm_l2(field); }
};

struct SweepOptions {
  int order = 4;      // 2 = exponential midpoint, 4 = two-exponential CF4
  int substeps = 1;   // integrator steps per grid cell
  double phase_audit = M_PI * (1.0 + 1e-9);  // max |2 lambda| * step allowed
  double support_floor = 1e-14;  // relative cutoff defining the sweep window
  int workers = 0;    // 0 = library default; 1 = serial reference
};

// First column of the normalized Jost solution along the sweep from the
// right edge of the window down to the left edge (both ends included).
struct JostTrajectory {
  double x_right = 0.0, x_left = 0.0;
  double step = 0.0;  // positive; motion is right to left
  std::vector<cd> n11, n21;  // indexed from the right edge

  cd a() const { return n11.back(); }
  cd b_raw() const { return n21.back(); }  // still in the conjugated frame
  double max_det_drift() const;
};

struct TransitionData {
  Grid1D lambda_grid;
  std::vector<cd> a, b;
  double tol_unitarity = 1e-8;

  double max_unitarity_defect() const;
  void validate() const;  // throws SolverError on unitarity violation
};

struct ReflectionCoefficient {
  Grid1D lambda_grid;
  std::vector<cd> r;
  double sup_norm = 0.0;
  std::vector<cd> r_left;  // the left coefficient b/a

  cd at(int j) const { return r[j]; }
};

JostTrajectory jost_sweep(const Potential1D& q, cd lambda, const SweepOptions& opts = {});

TransitionData transition_data(const Potential1D& q, const Grid1D& lambda_grid,
                               const SweepOptions& opts = {});
TransitionData transition_data_serial(const Potential1D& q, const Grid1D& lambda_grid,
                                      const SweepOptions& opts = {});

inline double infinity_tolerance() { return std::numeric_limits<double>::infinity(); }

// Truncated Volterra series by recursive cumulative quadrature; includes the
// iterated integrals through order 2 * n_max + 1. The factorial truncation
// bound ||q||_1^n_max / n_max! must not exceed tol.
TransitionData volterra_transition(const Potential1D& q, const Grid1D& lambda_grid, int n_max,
                                   double tol = infinity_tolerance());

ReflectionCoefficient reflection(const TransitionData& td);

// Sampled values of q at the integrator nodes of one sweep; shared by all
// lambda. Exposed for the oracle tests.
struct SweepTableau {
  double x_right = 0.0, x_left = 0.0, step = 0.0;
  int nsteps = 0;
  std::vector<cd> g1, g2;  // CF4 combination values (g2 unused for order 2)
  int order = 4;
};
SweepTableau build_sweep_tableau(const Potential1D& q, const SweepOptions& opts);

}  // namespace ist
