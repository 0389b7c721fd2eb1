#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ist/potentials.hpp"
#include "ist/spectral.hpp"
#include "ist/zs_direct.hpp"

using namespace ist;

namespace {

Potential1D gaussian(const Grid1D& g, double amp, double width = 1.0) {
  PotentialSpec s;
  s.amplitude = amp;
  s.width = width;
  return make_potential(s, g);
}

}  // namespace

TEST_CASE("zero potential gives the identity jost solution") {
  const Grid1D xg(256, 8.0);
  Potential1D q{ComplexField1D(xg)};
  JostTrajectory tr = jost_sweep(q, cd(0.7, 0.0));
  for (const cd& v : tr.n11) CHECK(std::abs(v - 1.0) == 0.0);
  for (const cd& v : tr.n21) CHECK(std::abs(v) == 0.0);

  TransitionData td = transition_data(q, dual_half_grid(xg));
  for (const cd& a : td.a) CHECK(std::abs(a - 1.0) == 0.0);
  for (const cd& b : td.b) CHECK(std::abs(b) == 0.0);
}

TEST_CASE("determinant is conserved along the sweep") {
  const Grid1D xg(1024, 12.0);
  Potential1D q = gaussian(xg, 0.9);
  for (double lam : {0.0, 0.35, 1.7, -4.2}) {
    JostTrajectory tr = jost_sweep(q, cd(lam, 0.0));
    CHECK(tr.max_det_drift() < 1e-10);
  }
}

TEST_CASE("unitarity holds on the full spectral grid") {
  const Grid1D xg(1024, 12.0);
  const Grid1D lg = dual_half_grid(xg);
  for (double amp : {0.3, 1.0}) {
    TransitionData td = transition_data(gaussian(xg, amp), lg);
    CHECK(td.max_unitarity_defect() < 1e-8);
    for (const cd& a : td.a) CHECK(std::abs(a) >= 1.0 - 1e-8);
  }
}

TEST_CASE("transition data matches a half-step refinement oracle") {
  const Grid1D xg(1024, 12.0);
  const Grid1D lg = dual_half_grid(xg);
  Potential1D q = gaussian(xg, 0.5);
  SweepOptions coarse;
  SweepOptions fine;
  fine.substeps = 2;
  TransitionData td1 = transition_data(q, lg, coarse);
  TransitionData td2 = transition_data(q, lg, fine);
  double worst = 0.0;
  for (int j = 0; j < lg.n; ++j)
    worst = std::max({worst, std::abs(td1.a[j] - td2.a[j]), std::abs(td1.b[j] - td2.b[j])});
  CHECK(worst < 1e-8);
}

TEST_CASE("grid refinement shows at least order 3.5 for the cf4 sweep") {
  const Grid1D xg(512, 10.0);
  Potential1D q = gaussian(xg, 1.2);
  const cd lam(0.9, 0.0);
  auto endpoint = [&](int substeps) {
    SweepOptions o;
    o.substeps = substeps;
    JostTrajectory tr = jost_sweep(q, lam, o);
    return std::make_pair(tr.a(), tr.b_raw());
  };
  auto [a1, b1] = endpoint(1);
  auto [a2, b2] = endpoint(2);
  auto [a4, b4] = endpoint(4);
  const double e1 = std::abs(a1 - a4) + std::abs(b1 - b4);
  const double e2 = std::abs(a2 - a4) + std::abs(b2 - b4);
  // the ratio of successive refinement errors tracks 2^order
  const double order = std::log2(e1 / e2);
  CHECK(order > 3.5);
}

TEST_CASE("exponential midpoint variant is second order") {
  const Grid1D xg(512, 10.0);
  Potential1D q = gaussian(xg, 1.2);
  auto endpoint = [&](int substeps) {
    SweepOptions o;
    o.order = 2;
    o.substeps = substeps;
    return jost_sweep(q, cd(0.9, 0.0), o).a();
  };
  const cd a1 = endpoint(1), a2 = endpoint(2), a4 = endpoint(4);
  const double order = std::log2(std::abs(a1 - a4) / std::abs(a2 - a4));
  CHECK(order > 1.7);
  CHECK(order < 2.6);
}

TEST_CASE("box potential reproduces the piecewise-constant transfer matrix") {
  // closed form for q = A on [0, l): a + b phases from exp(-l C)
  const Grid1D xg(2048, 16.0);
  const Grid1D lg = dual_half_grid(xg);
  PotentialSpec box;
  box.family = PotentialFamily::box;
  box.amplitude = 0.75;
  box.width = 4.0;
  Potential1D q = make_potential(box, xg);
  TransitionData td = transition_data(q, lg);
  double worst = 0.0;
  for (int j = 0; j < lg.n; j += 7) {
    const double lam = lg.node(j);
    const cd kappa = std::sqrt(cd(box.amplitude * box.amplitude - lam * lam, 0.0));
    const double l = box.width;
    const cd ch = std::cosh(l * kappa);
    const cd sh = std::abs(kappa) > 1e-12 ? std::sinh(l * kappa) / kappa : cd(l, 0.0);
    const cd e11 = ch + sh * cd(0.0, lam);   // [exp(-l C)]_11, C = [[-i lam, A],[A, i lam]]
    const cd e21 = -sh * box.amplitude;
    const cd phr = std::exp(cd(0.0, -lam * l));
    worst = std::max(worst, std::abs(td.a[j] - e11 * phr));
    worst = std::max(worst, std::abs(td.b[j] - e21 * phr));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("volterra series agrees with the ode path for small data") {
  const Grid1D xg(1024, 12.0);
  const Grid1D lg = dual_half_grid(xg);
  Potential1D q = gaussian(xg, 0.1);
  TransitionData ode = transition_data(q, lg);
  TransitionData ser = volterra_transition(q, lg, 6);
  // the outermost lattice octave is excluded: there the modulated integrand
  // crosses the Nyquist frequency and the series quadrature aliases, while
  // both |b| values are at the noise floor anyway
  double worst = 0.0;
  for (int j = 0; j < lg.n; ++j) {
    if (std::abs(lg.node(j)) > lg.half_width / 2) continue;
    worst = std::max({worst, std::abs(ode.a[j] - ser.a[j]), std::abs(ode.b[j] - ser.b[j])});
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("first volterra term is the antilinear fourier transform") {
  const Grid1D xg(1024, 12.0);
  const Grid1D lg = dual_half_grid(xg);
  Potential1D q = gaussian(xg, 0.05);
  TransitionData ser = volterra_transition(q, lg, 0);
  ComplexField1D fa = antilinear_fourier(q.field);
  double worst = 0.0;
  for (int j = 0; j < lg.n; ++j) {
    CHECK(ser.a[j] == cd(1.0, 0.0));
    worst = std::max(worst, std::abs(ser.b[j] - fa.v[j]));
  }
  CHECK(worst < 1e-6);  // trapezoid vs exact lattice transform
  CHECK_THROWS(volterra_transition(gaussian(xg, 4.0), lg, 8, 1e-9));
}

TEST_CASE("reflection data is strictly below one and consistent with a") {
  const Grid1D xg(1024, 12.0);
  const Grid1D lg = dual_half_grid(xg);
  TransitionData td = transition_data(gaussian(xg, 1.0), lg);
  ReflectionCoefficient r = reflection(td);
  CHECK(r.sup_norm < 1.0);
  double worst = 0.0;
  for (int j = 0; j < lg.n; ++j) {
    const double lhs = std::norm(r.r[j]);
    const double rhs = 1.0 - 1.0 / std::norm(td.a[j]);
    worst = std::max(worst, std::abs(lhs - rhs));
    CHECK(std::abs(std::abs(r.r_left[j]) - std::abs(r.r[j])) < 1e-12);
  }
  CHECK(worst < 1e-12);
  TransitionData zero;
  zero.lambda_grid = lg;
  zero.a.assign(lg.n, cd(1.0, 0.0));
  zero.b.assign(lg.n, cd(0.0, 0.0));
  CHECK(reflection(zero).sup_norm == 0.0);
}

TEST_CASE("linearization of the direct map decays at second order") {
  const Grid1D xg(2048, 16.0);
  const Grid1D lg = dual_half_grid(xg);
  PotentialSpec base;
  base.amplitude = 1.0;
  ComplexField1D fa = antilinear_fourier(make_potential(base, xg).field);
  std::vector<double> errs;
  for (double eps : {0.2, 0.1, 0.05}) {
    PotentialSpec ps = base;
    ps.amplitude = eps;
    ReflectionCoefficient r = reflection(transition_data(make_potential(ps, xg), lg));
    double err = 0.0;
    for (int j = 0; j < lg.n; ++j) err = std::max(err, std::abs(r.r[j] / eps - fa.v[j]));
    errs.push_back(err);
  }
  const double slope = std::log(errs[0] / errs[2]) / std::log(4.0);
  CHECK(slope > 1.7);
  CHECK(slope < 2.3);
}

TEST_CASE("phase audit rejects spectral parameters beyond the step resolution") {
  const Grid1D xg(256, 8.0);
  Potential1D q = gaussian(xg, 0.5);
  SweepOptions strict;
  strict.phase_audit = 0.05;
  CHECK_THROWS(jost_sweep(q, cd(40.0, 0.0), strict));
}

TEST_CASE("parallel and serial transition sweeps agree bitwise") {
  const Grid1D xg(512, 10.0);
  const Grid1D lg = dual_half_grid(xg);
  Potential1D q = gaussian(xg, 0.8);
  TransitionData tp = transition_data(q, lg);
  TransitionData ts = transition_data_serial(q, lg);
  for (int j = 0; j < lg.n; ++j) {
    CHECK(tp.a[j] == ts.a[j]);
    CHECK(tp.b[j] == ts.b[j]);
  }
}
