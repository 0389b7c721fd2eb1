#include "ist/dsii_flows.hpp"

#include <cmath>

#include "ist/spectral.hpp"
#include "ist/zs_direct.hpp"  // SolverError

namespace ist {

ComplexField2D dsii_linear(const ComplexField2D& f, double t) {
  FourierMultiplierSpec2D spec;
  spec.symbol = [t](double a, double b) { return std::exp(cd(0.0, -t * (a * a - b * b))); };
  spec.zero_mode = cd(1.0, 0.0);
  return apply_multiplier(spec, f);
}

std::vector<double> dsii_real_potential(const ComplexField2D& q) {
  ComplexField2D asq(q.grid);
  for (std::size_t i = 0; i < q.v.size(); ++i) asq.v[i] = cd(std::norm(q.v[i]), 0.0);
  ComplexField2D g = beurling(asq);
  for (cd& c : g.v) c *= -4.0;
  std::vector<double> out(q.v.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 2.0 * g.v[i].real();  // g + conj(g)
  return out;
}

ComplexField2D dsii_nonlinearity(const ComplexField2D& q) {
  std::vector<double> pot = dsii_real_potential(q);
  ComplexField2D out(q.grid);
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = pot[i] * q.v[i];
  return out;
}

ComplexField2D dsii_splitstep(const Potential2D& q0, double t, double dt) {
  require_finite(q0.field, "dsii_splitstep");
  if (!(dt > 0.0)) throw SolverError("dsii_splitstep: dt must be positive");
  {
    std::vector<double> pot = dsii_real_potential(q0.field);
    double peak = 0.0;
    for (double v : pot) peak = std::max(peak, std::abs(v));
    if (dt * peak > 0.1)
      throw SolverError("dsii_splitstep: dt does not resolve the nonlinear phase");
  }
  const int nsteps = int(std::llround(t / dt));
  if (std::abs(nsteps * dt - t) > 1e-9 * std::max(1.0, t))
    throw SolverError("dsii_splitstep: t must be an integer multiple of dt");

  ComplexField2D q = q0.field;
  for (int s = 0; s < nsteps; ++s) {
    q = dsii_linear(q, dt / 2.0);
    std::vector<double> pot = dsii_real_potential(q);  // frozen midpoint potential
    for (std::size_t i = 0; i < q.v.size(); ++i) q.v[i] *= std::exp(cd(0.0, pot[i] * dt));
    q = dsii_linear(q, dt / 2.0);
    if (!all_finite(q)) throw SolverError("dsii_splitstep: solution lost finiteness");
  }
  return q;
}

Potential2D dsii_ist_solution(const Potential2D& q0, double t, const DSIIRunConfig& cfg) {
  ScatteringOptions opts;
  opts.cgo = cfg.cgo;
  opts.k_block = cfg.k_block;
  DSIIScatteringData s = scattering_transform(q0, cfg.cgo_tol, opts);
  DSIIScatteringData st = evolve_s(s, t);
  return inverse_scattering(st, cfg.cgo_tol, opts);
}

}  // namespace ist
