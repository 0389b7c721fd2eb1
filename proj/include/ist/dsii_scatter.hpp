#pragma once

#include "ist/field.hpp"

namespace ist {

struct Potential2D {
  ComplexField2D field;
  double l1 = 0.0, l2 = 0.0, h1 = 0.0;  // h1 adds the spectral-gradient L2

  Potential2D() = default;
  explicit Potential2D(ComplexField2D f);
};

enum class CgoPath { trivial, fixed_point, krylov };

// Pair (m_plus, m_minus) of solutions of dbar m = +/- e_{-k} q conj(m),
// m -> 1, at one spectral parameter k on the grid's k-lattice.
struct CGOState {
  cd k;
  ComplexField2D m_plus, m_minus;
  double residual_plus = 0.0, residual_minus = 0.0;
  int iterations = 0;
  double contraction_ratio = 0.0;
  CgoPath path = CgoPath::trivial;

  ComplexField2D m1() const;  // (m+ + m-)/2
  ComplexField2D m2() const;  // e_{-k} conj(m+ - m-)/2
};

struct CgoOptions {
  double tol = 1e-10;
  int max_iter = 200;
  double contraction_gate = 0.8;  // observed ratio above which GMRES takes over
  int krylov_restart = 40;
  int workers = 0;
};

CGOState cgo_solve(const Potential2D& q, cd k, double tol = 1e-10, const CgoOptions& opts = {});

struct CgoStat {
  double k1 = 0.0, k2 = 0.0;
  int iterations = 0;
  double residual = 0.0;
  CgoPath path = CgoPath::trivial;
};

// Samples of s(k) on a centered square sub-block of the k-lattice. The block
// is stored as a spatial grid whose nodes are exactly the lattice points;
// source_grid remembers the z-grid so the inverse can reproduce it.
struct DSIIScatteringData {
  Grid2D k_grid;
  std::vector<cd> s;
  Grid2D source_grid;
  double isometry_deviation = 0.0;  // | ||s|| - ||q|| | / ||q||, recorded
  std::vector<CgoStat> stats;

  double l2_norm() const;
};

struct ScatteringOptions {
  CgoOptions cgo;
  int k_block = 0;  // 0: use 3n/8 (48^2 on a 128^2 grid)
  // The CGO iterates have 1/z tails, so their torus wrap-around limits the
  // transform accuracy; both solves can run on zero-padded tori.
  int z_pad = 1;        // forward solves on a (z_pad n)^2 torus
  int inverse_pad = 1;  // inverse solves on a (pad n)^2 k-lattice
};

DSIIScatteringData scattering_transform(const Potential2D& q, double tol = 1e-10,
                                        const ScatteringOptions& opts = {});
DSIIScatteringData scattering_transform_serial(const Potential2D& q, double tol = 1e-10,
                                               const ScatteringOptions& opts = {});

DSIIScatteringData evolve_s(const DSIIScatteringData& s0, double t);

// The same transform applied to s with the roles of z and k swapped; the
// block is zero-padded onto the full k-lattice of the source grid, so the
// output lands on the source z-grid.
Potential2D inverse_scattering(const DSIIScatteringData& s, double tol = 1e-10,
                               const ScatteringOptions& opts = {});

}  // namespace ist
