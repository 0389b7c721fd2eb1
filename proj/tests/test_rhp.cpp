#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ist/fft.hpp"
#include "ist/potentials.hpp"
#include "ist/rhp_inverse.hpp"
#include "ist/spectral.hpp"

using namespace ist;

namespace {

ReflectionCoefficient reflect_gaussian(const Grid1D& xg, double amp) {
  PotentialSpec s;
  s.amplitude = amp;
  return reflection(transition_data(make_potential(s, xg), dual_half_grid(xg)));
}

}  // namespace

TEST_CASE("zero reflection data gives the identity solution immediately") {
  const Grid1D xg(512, 12.0);
  ReflectionCoefficient r;
  r.lambda_grid = dual_half_grid(xg);
  r.r.assign(r.lambda_grid.n, cd(0.0, 0.0));
  r.r_left = r.r;
  r.sup_norm = 0.0;
  BCSolution s = bc_solve(r, 1.3);
  CHECK(s.iterations == 0);
  CHECK(s.path == BCPath::trivial);
  for (const cd& m : s.mu11) CHECK(m == cd(1.0, 0.0));
  for (const cd& m : s.mu21) CHECK(m == cd(0.0, 0.0));
  CHECK(std::abs(reconstruct_q_at(r, 0.7)) == 0.0);
}

TEST_CASE("weights carry modulus |r| at every node") {
  const Grid1D xg(512, 12.0);
  ReflectionCoefficient r = reflect_gaussian(xg, 0.8);
  BCWeights w = make_bc_weights(r, 2.2);
  for (int j = 0; j < w.lambda_grid.n; ++j) {
    CHECK(std::abs(std::abs(w.w_plus[j]) - std::abs(r.r[j])) < 1e-14);
    CHECK(std::abs(std::abs(w.w_minus[j]) - std::abs(r.r[j])) < 1e-14);
  }
}

TEST_CASE("fixed-point residuals decay geometrically with ratio below sup|r|") {
  const Grid1D xg(512, 12.0);
  ReflectionCoefficient r = reflect_gaussian(xg, 0.3);
  CHECK(r.sup_norm < 0.8);
  for (double x : {0.0, -1.5, 3.0}) {
    BCSolution s = bc_solve(r, x, 1e-11);
    CHECK(s.path == BCPath::fixed_point);
    CHECK(s.residual <= 1e-11);
    CHECK(s.contraction_ratio <= r.sup_norm + 0.05);
  }
}

TEST_CASE("solution row satisfies the integral equation and its symmetry") {
  const Grid1D xg(512, 12.0);
  const double x = 0.9;
  ReflectionCoefficient r = reflect_gaussian(xg, 0.6);
  BCSolution s = bc_solve(r, x, 1e-12);
  const Grid1D& lg = r.lambda_grid;
  // mu11 = 1 - C_-(mu12 e^{2 i lam x} r), mu12 = C_+(mu11 e^{-2 i lam x} conj r)
  ComplexField1D t1(lg), t2(lg);
  for (int j = 0; j < lg.n; ++j) {
    const cd ph = std::exp(cd(0.0, 2.0 * lg.node(j) * x));
    const cd mu12 = std::conj(s.mu21[j]);
    t1.v[j] = mu12 * (-ph * r.r[j]);
    t2.v[j] = s.mu11[j] * std::conj(ph * r.r[j]);
  }
  ComplexField1D lhs1 = cauchy_project(t1, CauchySign::minus);
  ComplexField1D lhs2 = cauchy_project(t2, CauchySign::plus);
  double worst = 0.0;
  for (int j = 0; j < lg.n; ++j) {
    worst = std::max(worst, std::abs(s.mu11[j] - (cd(1.0, 0.0) + lhs1.v[j])));
    worst = std::max(worst, std::abs(std::conj(s.mu21[j]) - lhs2.v[j]));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("mu11 - 1 has no strictly positive frequency content") {
  const Grid1D xg(1024, 12.0);
  ReflectionCoefficient r = reflect_gaussian(xg, 0.7);
  BCSolution s = bc_solve(r, 0.4, 1e-12);
  const int n = r.lambda_grid.n;
  std::vector<cd> u(n);
  for (int j = 0; j < n; ++j) u[j] = s.mu11[j] - 1.0;
  std::vector<cd> U = fft::forward(u, n);
  double pos = 0.0, all = 0.0;
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(U[j]) / n;
    all = std::max(all, mag);
    if (r.lambda_grid.freq_index(j) > 0) pos = std::max(pos, mag);
  }
  CHECK(pos < 1e-8 * std::max(1.0, all));
}

TEST_CASE("krylov path reproduces the fixed-point solution") {
  const Grid1D xg(512, 12.0);
  ReflectionCoefficient r = reflect_gaussian(xg, 0.3);
  BCOptions fp;
  BCOptions kr;
  kr.krylov_gate = 0.0;  // force GMRES
  BCSolution a = bc_solve(r, 1.1, 1e-12, fp);
  BCSolution b = bc_solve(r, 1.1, 1e-12, kr);
  CHECK(a.path == BCPath::fixed_point);
  CHECK(b.path == BCPath::krylov);
  double worst = 0.0;
  for (int j = 0; j < r.lambda_grid.n; ++j)
    worst = std::max(worst, std::abs(a.mu11[j] - b.mu11[j]));
  CHECK(worst < 1e-9);
}

TEST_CASE("round trip reconstructs a moderate gaussian potential") {
  const Grid1D xg(1024, 12.0);
  PotentialSpec ps;
  ps.amplitude = 0.7;
  Potential1D q = make_potential(ps, xg);
  ReflectionCoefficient r = reflection(transition_data(q, dual_half_grid(xg)));
  ReconstructionResult rec = reconstruct_q(r, xg);
  CHECK(rel_l2_error(rec.q.field, q.field) < 1e-4);
  for (const ReconstructionStat& st : rec.stats) CHECK(st.residual < 1e-9);
}

TEST_CASE("small data linearization of the inverse map") {
  // q approx -(1/pi) int e^{-2 i x s} conj(r(s)) ds with O(|r|^3) discrepancy
  const Grid1D xg(1024, 12.0);
  auto defect = [&](double amp) {
    ReflectionCoefficient r = reflect_gaussian(xg, amp);
    const Grid1D& lg = r.lambda_grid;
    double worst = 0.0;
    for (double x : {0.0, 0.8, -2.0}) {
      cd lin(0.0, 0.0);
      for (int j = 0; j < lg.n; ++j)
        lin += std::conj(r.r[j]) * std::exp(cd(0.0, -2.0 * x * lg.node(j)));
      lin *= -lg.spacing() / M_PI;
      worst = std::max(worst, std::abs(reconstruct_q_at(r, x) - lin));
    }
    return worst;
  };
  const double d1 = defect(0.1), d2 = defect(0.05);
  CHECK(d1 < 2e-3);
  CHECK(d2 < d1 / 6.0);  // cubic order: halving the data gains about 8x
}

TEST_CASE("direct map of the reconstruction returns the reflection data") {
  const Grid1D xg(1024, 12.0);
  ReflectionCoefficient r = reflect_gaussian(xg, 0.2);
  CHECK(r.sup_norm <= 0.6);
  ReconstructionResult rec = reconstruct_q(r, xg);
  rec.q.tail_mass = 0.0;
  ReflectionCoefficient r2 = reflection(transition_data(rec.q, dual_half_grid(xg)));
  double num = 0.0, den = 0.0;
  for (int j = 0; j < r.lambda_grid.n; ++j) {
    num += std::norm(r2.r[j] - r.r[j]);
    den += std::norm(r.r[j]);
  }
  CHECK(std::sqrt(num / den) < 1e-4);
}

TEST_CASE("one-sided decay of the nonlinear reconstruction part") {
  const Grid1D xg(2048, 24.0);
  ReflectionCoefficient r = reflect_gaussian(xg, 0.8);
  const Grid1D& lg = r.lambda_grid;
  auto q1 = [&](double x) {
    // subtract the linear part to isolate the mu-dependent remainder
    BCSolution s = bc_solve(r, x, 1e-12);
    cd full(0.0, 0.0), lin(0.0, 0.0);
    for (int j = 0; j < lg.n; ++j) {
      const cd ph = std::exp(cd(0.0, -2.0 * x * lg.node(j)));
      full += std::conj(r.r[j]) * ph * s.mu11[j];
      lin += std::conj(r.r[j]) * ph;
    }
    return std::abs(full - lin) * lg.spacing() / M_PI;
  };
  const double v4 = q1(4.0), v8 = q1(8.0), v16 = q1(16.0);
  const double floor = 1e-12;  // solver tolerance noise
  CHECK(v8 <= std::max(v4 * (1.0 + 4 * 4) / (1.0 + 8 * 8) * 1.5, floor));
  CHECK(v16 <= std::max(v8 * (1.0 + 8 * 8) / (1.0 + 16 * 16) * 1.5, floor));
}

TEST_CASE("scalar riemann-hilbert function reproduces the continued a") {
  const Grid1D xg(1024, 12.0);
  PotentialSpec ps;
  ps.amplitude = 0.5;
  Potential1D q = make_potential(ps, xg);
  TransitionData td = transition_data(q, dual_half_grid(xg));
  ReflectionCoefficient r = reflection(td);

  CHECK_THROWS(a_from_r(r, cd(0.5, 0.5 * r.lambda_grid.spacing())));

  const cd z(0.0, -2.0);
  const cd g = a_from_r(r, z);
  const cd a_ode = jost_sweep(q, z).a();
  CHECK(std::abs(g - a_ode) < 1e-5);

  // |a|^2 (1 - |r|^2) = 1 exactly on the axis; off the axis the boundary
  // limit is approached monotonically (the rate is only delta log delta)
  const int j = r.lambda_grid.n / 2 + 3;
  const double lam = r.lambda_grid.node(j);
  CHECK(std::abs(std::norm(td.a[j]) * (1.0 - std::norm(r.r[j])) - 1.0) < 1e-10);
  double prev = 1e300;
  for (double delta : {1.6, 0.8, 0.4, 0.2}) {
    const cd gb = a_from_r(r, cd(lam, -delta));
    const double dev = std::abs(std::norm(gb) * (1.0 - std::norm(r.r[j])) - 1.0);
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev < 0.2);
}

TEST_CASE("parallel and serial reconstructions agree bitwise") {
  const Grid1D xg(256, 10.0);
  ReflectionCoefficient r = reflect_gaussian(xg, 0.5);
  ReconstructionResult a = reconstruct_q(r, xg);
  ReconstructionResult b = reconstruct_q_serial(r, xg);
  for (int j = 0; j < xg.n; ++j) CHECK(a.q.field.v[j] == b.q.field.v[j]);
}
