#include "ist/zs_direct.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ist/fft.hpp"

namespace ist {

namespace {

// Advance (m1, m2) by exp(s * G), G = [[0, w], [conj(w), d]]; closed form
// through the Cayley-Hamilton identity G^2 = d G + |w|^2 I.
inline void step_column(cd& m1, cd& m2, cd w, cd d, double s) {
  const cd half = 0.5 * d;
  const cd kap = std::sqrt(half * half + w * std::conj(w));
  const cd sk = s * kap;
  cd ch, shk;  // cosh(sk), sinh(sk)/kap
  if (std::abs(sk) < 1e-6) {
    const cd sk2 = sk * sk;
    ch = 1.0 + sk2 * (0.5 + sk2 / 24.0);
    shk = s * (1.0 + sk2 * (1.0 / 6.0 + sk2 / 120.0));
  } else {
    ch = std::cosh(sk);
    shk = std::sinh(sk) / kap;
  }
  const cd e = std::exp(s * half);
  const cd a11 = e * (ch - shk * half), a12 = e * shk * w;
  const cd a21 = e * shk * std::conj(w), a22 = e * (ch + shk * half);
  const cd t1 = a11 * m1 + a12 * m2;
  const cd t2 = a21 * m1 + a22 * m2;
  m1 = t1;
  m2 = t2;
}

// Band-limited samples of q at all grid nodes shifted by delta.
std::vector<cd> shifted_samples(const ComplexField1D& f, double delta) {
  const int n = f.grid.n;
  std::vector<cd> F = fft::forward(f.v, n);
  const double dxi = f.grid.fourier_spacing();
  for (int j = 0; j < n; ++j) {
    const int m = f.grid.freq_index(j);
    F[j] *= std::exp(cd(0.0, m * dxi * delta));
  }
  return fft::inverse_normalized(F, n);
}

struct Window {
  int lo = 0, hi = -1;  // node range [lo, hi]; empty if hi < lo
};

Window support_window(const ComplexField1D& f, double rel_floor) {
  double peak = 0.0;
  for (const cd& z : f.v) peak = std::max(peak, std::abs(z));
  Window w;
  if (peak == 0.0) return w;
  const double floor = peak * rel_floor;
  int lo = f.grid.n, hi = -1;
  for (int j = 0; j < f.grid.n; ++j)
    if (std::abs(f.v[j]) > floor) {
      lo = std::min(lo, j);
      hi = std::max(hi, j);
    }
  w.lo = std::max(0, lo - 2);
  w.hi = std::min(f.grid.n - 1, hi + 2);
  return w;
}

constexpr double kGaussC1 = 0.5 - 0.28867513459481288225;  // 1/2 -+ sqrt(3)/6
constexpr double kGaussC2 = 0.5 + 0.28867513459481288225;
constexpr double kCfAlpha = 0.25 + 0.28867513459481288225;
constexpr double kCfBeta = 0.25 - 0.28867513459481288225;

}  // namespace

double JostTrajectory::max_det_drift() const {
  double d = 0.0;
  for (std::size_t i = 0; i < n11.size(); ++i)
    d = std::max(d, std::abs(std::norm(n11[i]) - std::norm(n21[i]) - 1.0));
  return d;
}

double TransitionData::max_unitarity_defect() const {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(std::norm(a[i]) - std::norm(b[i]) - 1.0));
  return d;
}

void TransitionData::validate() const {
  const double d = max_unitarity_defect();
  if (d > tol_unitarity)
    throw SolverError("transition data violates |a|^2 - |b|^2 = 1 by " + std::to_string(d));
}

SweepTableau build_sweep_tableau(const Potential1D& q, const SweepOptions& opts) {
  require_finite(q.field, "jost sweep");
  if (opts.order != 2 && opts.order != 4) throw SolverError("sweep order must be 2 or 4");
  if (opts.substeps < 1) throw SolverError("substeps must be >= 1");
  SweepTableau t;
  t.order = opts.order;
  const Window w = support_window(q.field, opts.support_floor);
  if (w.hi < w.lo) return t;  // zero potential: empty sweep
  const Grid1D& g = q.field.grid;
  t.x_left = g.node(w.lo);
  t.x_right = std::min(g.node(w.hi) + g.spacing(), g.half_width);
  t.nsteps = (w.hi - w.lo + 1) * opts.substeps;
  t.step = (t.x_right - t.x_left) / t.nsteps;

  // Values of q at x_left + (j + c) * step for all steps, from the analytic
  // sampler when present, else one band-limited shift per substep offset.
  const int s = opts.substeps;
  auto fill = [&](double c, std::vector<cd>& dst) {
    dst.resize(t.nsteps);
    if (q.sampler) {
      for (int i = 0; i < t.nsteps; ++i) dst[i] = q.sampler(t.x_left + (i + c) * t.step);
      return;
    }
    for (int m = 0; m < s; ++m) {
      const double delta = (m + c) * t.step;
      std::vector<cd> shifted = shifted_samples(q.field, delta);
      for (int cell = 0; cell * s + m < t.nsteps; ++cell)
        dst[cell * s + m] = shifted[w.lo + cell];
    }
  };
  if (opts.order == 2) {
    fill(0.5, t.g1);
  } else {
    std::vector<cd> v1, v2;
    fill(kGaussC1, v1);
    fill(kGaussC2, v2);
    t.g1.resize(t.nsteps);
    t.g2.resize(t.nsteps);
    // the sweep runs right to left, so the first exponential of the pair
    // weights the upper Gauss node
    for (int i = 0; i < t.nsteps; ++i) {
      t.g1[i] = kCfBeta * v1[i] + kCfAlpha * v2[i];
      t.g2[i] = kCfAlpha * v1[i] + kCfBeta * v2[i];
    }
  }
  return t;
}

namespace {

// Sweep the first Jost column from x_right down to x_left at spectral
// parameter z (real on the continuous spectrum; Im z < 0 for the analytic
// continuation of a). Works in the frame m1 = N11, m2 = exp(2 i z x) N21.
void run_sweep(const SweepTableau& t, cd z, std::vector<cd>* n11, std::vector<cd>* n21) {
  cd m1(1.0, 0.0), m2(0.0, 0.0);
  const cd d = cd(0.0, 2.0) * z;
  const double s = -t.step;
  if (n11) {
    n11->assign(t.nsteps + 1, cd(0, 0));
    n21->assign(t.nsteps + 1, cd(0, 0));
    (*n11)[0] = m1;
    (*n21)[0] = cd(0.0, 0.0);
  }
  for (int j = t.nsteps - 1; j >= 0; --j) {
    if (t.order == 2) {
      step_column(m1, m2, t.g1[j], d, s);
    } else {
      step_column(m1, m2, t.g1[j], 0.5 * d, s);
      step_column(m1, m2, t.g2[j], 0.5 * d, s);
    }
    if (n11) {
      const int idx = t.nsteps - j;
      const double x = t.x_left + j * t.step;
      (*n11)[idx] = m1;
      (*n21)[idx] = std::exp(cd(0.0, -2.0) * z * x) * m2;
    }
  }
}

void audit_phase(const SweepTableau& t, double lambda_max, const SweepOptions& opts) {
  if (t.nsteps == 0) return;
  if (2.0 * std::abs(lambda_max) * t.step > opts.phase_audit)
    throw SolverError("jost sweep: phase increment per step exceeds audit threshold "
                      "(grid too coarse for this spectral range)");
}

}  // namespace

JostTrajectory jost_sweep(const Potential1D& q, cd lambda, const SweepOptions& opts) {
  SweepTableau t = build_sweep_tableau(q, opts);
  JostTrajectory traj;
  traj.x_right = t.x_right;
  traj.x_left = t.x_left;
  traj.step = t.step;
  if (t.nsteps == 0) {
    traj.n11 = {cd(1.0, 0.0)};
    traj.n21 = {cd(0.0, 0.0)};
    return traj;
  }
  audit_phase(t, std::abs(lambda), opts);
  run_sweep(t, lambda, &traj.n11, &traj.n21);
  return traj;
}

namespace {

TransitionData transition_core(const Potential1D& q, const Grid1D& lambda_grid,
                               const SweepOptions& opts, bool parallel) {
  SweepTableau t = build_sweep_tableau(q, opts);
  TransitionData td;
  td.lambda_grid = lambda_grid;
  td.a.assign(lambda_grid.n, cd(1.0, 0.0));
  td.b.assign(lambda_grid.n, cd(0.0, 0.0));
  if (t.nsteps == 0) return td;
  audit_phase(t, lambda_grid.half_width, opts);

  auto one = [&](int j) {
    const double lam = lambda_grid.node(j);
    cd m1(1.0, 0.0), m2(0.0, 0.0);
    const cd d = cd(0.0, 2.0 * lam);
    const double s = -t.step;
    for (int k = t.nsteps - 1; k >= 0; --k) {
      if (t.order == 2) {
        step_column(m1, m2, t.g1[k], d, s);
      } else {
        step_column(m1, m2, t.g1[k], 0.5 * d, s);
        step_column(m1, m2, t.g2[k], 0.5 * d, s);
      }
    }
    td.a[j] = m1;
    td.b[j] = std::exp(cd(0.0, -2.0 * lam * t.x_left)) * m2;
  };

  if (parallel) {
#ifdef _OPENMP
    if (opts.workers > 0) omp_set_num_threads(opts.workers);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < lambda_grid.n; ++j) one(j);
#else
    for (int j = 0; j < lambda_grid.n; ++j) one(j);
#endif
  } else {
    for (int j = 0; j < lambda_grid.n; ++j) one(j);
  }
  td.validate();
  return td;
}

}  // namespace

TransitionData transition_data(const Potential1D& q, const Grid1D& lambda_grid,
                               const SweepOptions& opts) {
  return transition_core(q, lambda_grid, opts, opts.workers != 1);
}

TransitionData transition_data_serial(const Potential1D& q, const Grid1D& lambda_grid,
                                      const SweepOptions& opts) {
  return transition_core(q, lambda_grid, opts, false);
}

TransitionData volterra_transition(const Potential1D& q, const Grid1D& lambda_grid, int n_max,
                                   double tol) {
  require_finite(q.field, "volterra_transition");
  if (n_max < 0) throw SolverError("volterra_transition: n_max must be >= 0");
  const double l1 = q.l1_norm();
  double bound = 1.0;
  for (int k = 1; k <= n_max; ++k) bound *= l1 / k;
  if (bound >= tol)
    throw SolverError("volterra_transition: truncation bound " + std::to_string(bound) +
                      " not met for requested tolerance");

  const Grid1D& g = q.field.grid;
  const int n = g.n;
  const double h = g.spacing();
  TransitionData td;
  td.lambda_grid = lambda_grid;
  td.a.assign(lambda_grid.n, cd(1.0, 0.0));
  td.b.assign(lambda_grid.n, cd(0.0, 0.0));
  td.tol_unitarity = 1e300;  // the truncated series is not exactly unitary

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int jl = 0; jl < lambda_grid.n; ++jl) {
    std::vector<cd> u(n, cd(1.0, 0.0)), v(n, cd(0.0, 0.0));
    const double lam = lambda_grid.node(jl);
    std::vector<cd> ep(n), em(n);
    for (int j = 0; j < n; ++j) {
      ep[j] = std::exp(cd(0.0, 2.0 * lam * g.node(j)));
      em[j] = std::conj(ep[j]);
    }
    // Cumulative integrals by spectral antiderivative: the integrands decay
    // at both window edges and 2 lambda is an exact lattice frequency, so
    // int_{x}^{top} f = F(top) - F(x) + c0 (top - x) is spectrally accurate
    // and uniform in lambda.
    std::vector<cd> work(n), spec(n), F(n);
    const double top = g.half_width;  // integrate through the full upper tail
    auto suffix_int = [&](const std::vector<cd>& f, std::vector<cd>& out) {
      fft::forward(f.data(), spec.data(), n);
      const cd c0 = spec[0] / double(n);
      spec[0] = cd(0.0, 0.0);
      const double dxi = g.fourier_spacing();
      for (int j = 1; j < n; ++j) spec[j] /= cd(0.0, g.freq_index(j) * dxi) * double(n);
      fft::inverse(spec.data(), F.data(), n);
      const cd Ftop = F[0];  // F is 2L-periodic: F(+L) = F(-L)
      for (int j = 0; j < n; ++j) out[j] = (Ftop - F[j]) + c0 * (top - g.node(j));
    };
    const int updates = 2 * n_max + 1;
    for (int step = 0; step < updates; ++step) {
      if (step % 2 == 0) {  // odd-order term: advance v from u
        for (int j = 0; j < n; ++j) work[j] = em[j] * std::conj(q.field.v[j]) * u[j];
        suffix_int(work, v);
        for (int j = 0; j < n; ++j) v[j] = -v[j];
      } else {  // even-order term: advance u from v
        for (int j = 0; j < n; ++j) work[j] = ep[j] * q.field.v[j] * v[j];
        suffix_int(work, u);
        for (int j = 0; j < n; ++j) u[j] = cd(1.0, 0.0) - u[j];
      }
    }
    td.a[jl] = u[0];
    td.b[jl] = v[0];
  }
  return td;
}

ReflectionCoefficient reflection(const TransitionData& td) {
  td.validate();
  ReflectionCoefficient rc;
  rc.lambda_grid = td.lambda_grid;
  rc.r.resize(td.a.size());
  rc.r_left.resize(td.a.size());
  double sup = 0.0;
  for (std::size_t j = 0; j < td.a.size(); ++j) {
    rc.r[j] = td.b[j] / std::conj(td.a[j]);
    rc.r_left[j] = td.b[j] / td.a[j];
    sup = std::max(sup, std::abs(rc.r[j]));
  }
  rc.sup_norm = sup;
  if (!(sup < 1.0))
    throw SolverError("reflection: sup |r| = " + std::to_string(sup) + " is not < 1");
  return rc;
}

}  // namespace ist
