#include "ist/nls_flows.hpp"

#include <cmath>

#include "ist/fft.hpp"
#include "ist/spectral.hpp"

namespace ist {

ReflectionCoefficient evolve_reflection(const ReflectionCoefficient& r0, double t) {
  ReflectionCoefficient rt = r0;
  for (std::size_t j = 0; j < rt.r.size(); ++j) {
    const double lam = rt.lambda_grid.node(int(j));
    const cd ph = std::exp(cd(0.0, 4.0 * lam * lam * t));
    rt.r[j] *= ph;
    rt.r_left[j] *= ph;
  }
  return rt;  // sup_norm unchanged: the multiplier is unimodular
}

ReconstructionResult ist_solve(const Potential1D& q0, double t, const EvolutionConfig& cfg) {
  TransitionData td = transition_data(q0, cfg.lambda_grid, cfg.sweep);
  ReflectionCoefficient r = reflection(td);
  ReflectionCoefficient rt = evolve_reflection(r, t);
  return reconstruct_q(rt, cfg.x_grid, cfg.bc_tol, cfg.bc);
}

ComplexField1D linear_propagator(const ComplexField1D& f, double t) {
  FourierMultiplierSpec1D spec;
  spec.symbol = [t](double xi) { return std::exp(cd(0.0, -t * xi * xi)); };
  spec.zero_mode = cd(1.0, 0.0);
  return apply_multiplier(spec, f);
}

ComplexField1D splitstep_nls(const ComplexField1D& q0, double t, double dt) {
  require_finite(q0, "splitstep_nls");
  if (!(dt > 0.0)) throw SolverError("splitstep_nls: dt must be positive");
  double peak2 = 0.0;
  for (const cd& z : q0.v) peak2 = std::max(peak2, std::norm(z));
  if (dt * 2.0 * peak2 > 0.1)
    throw SolverError("splitstep_nls: dt does not resolve the nonlinear phase");
  const int nsteps = int(std::llround(t / dt));
  if (std::abs(nsteps * dt - t) > 1e-9 * std::max(1.0, t))
    throw SolverError("splitstep_nls: t must be an integer multiple of dt");

  ComplexField1D q = q0;
  for (int s = 0; s < nsteps; ++s) {
    q = linear_propagator(q, dt / 2.0);
    for (cd& z : q.v) z *= std::exp(cd(0.0, -2.0 * std::norm(z) * dt));
    q = linear_propagator(q, dt / 2.0);
    if (!all_finite(q)) throw SolverError("splitstep_nls: solution lost finiteness");
  }
  return q;
}

namespace {

// Lanczos approximation of log Gamma, Re z > 0.
cd log_gamma(cd z) {
  static const double g = 7.0;
  static const double c[9] = {0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
                              771.32342877765313,   -176.61502916214059, 12.507343278686905,
                              -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  cd x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (z + double(i - 1));
  const cd t = z + g - 0.5;
  return 0.5 * std::log(2.0 * M_PI) + (z - 0.5) * std::log(t) - t + std::log(x);
}

struct GridInterp {
  const Grid1D& g;
  double value(const std::vector<double>& f, double x) const {
    const double u = (x + g.half_width) / g.spacing();
    int j = int(std::floor(u));
    j = std::max(0, std::min(g.n - 2, j));
    const double w = u - j;
    return (1.0 - w) * f[j] + w * f[j + 1];
  }
  cd value(const std::vector<cd>& f, double x) const {
    const double u = (x + g.half_width) / g.spacing();
    int j = int(std::floor(u));
    j = std::max(0, std::min(g.n - 2, j));
    const double w = u - j;
    return (1.0 - w) * f[j] + w * f[j + 1];
  }
};

}  // namespace

double arg_gamma(cd z) { return log_gamma(z).imag(); }

AsymptoticProfile deift_zhou_profile(const ReflectionCoefficient& r, double x, double t) {
  if (!(t >= 1.0)) throw SolverError("deift_zhou_profile: requires t >= 1");
  const Grid1D& g = r.lambda_grid;
  AsymptoticProfile p;
  p.z0 = -x / (4.0 * t);
  if (std::abs(p.z0) > g.half_width - 2.0 * g.spacing())
    throw SolverError("deift_zhou_profile: z0 outside the spectral grid");

  const int n = g.n;
  std::vector<double> logw(n);
  for (int j = 0; j < n; ++j) logw[j] = std::log1p(-std::norm(r.r[j]));
  // centered finite differences of log(1 - |r|^2)
  std::vector<double> dlogw(n, 0.0);
  for (int j = 1; j + 1 < n; ++j) dlogw[j] = (logw[j + 1] - logw[j - 1]) / (2.0 * g.spacing());

  GridInterp interp{g};
  p.nu = -interp.value(logw, p.z0) / (2.0 * M_PI);
  if (p.nu < 1e-14) {
    p.degenerate = true;  // arg(i nu) undefined where r vanishes
    p.value = cd(0.0, 0.0);
    return p;
  }
  p.amplitude = std::sqrt(p.nu / 2.0);

  // Stieltjes integral int_{-inf}^{z0} log(z0 - s) d(log(1-|r(s)|^2)); the
  // node nearest z0 is excluded and replaced by the analytic integral of the
  // log singularity over that cell.
  const double h = g.spacing();
  const int j0 = std::max(1, std::min(n - 2, int(std::llround((p.z0 + g.half_width) / h))));
  double stieltjes = 0.0;
  for (int j = 0; j < j0; ++j) {
    const double d = p.z0 - g.node(j);
    if (d <= 0.0) break;
    stieltjes += std::log(d) * dlogw[j];
  }
  stieltjes *= h;
  stieltjes += interp.value(dlogw, p.z0) * h * (std::log(h) - 1.0);
  stieltjes /= M_PI;

  const cd r0 = interp.value(r.r, p.z0);
  const double arg_minus_r = std::atan2(-r0.imag(), -r0.real());
  p.alpha_phase = stieltjes + M_PI / 4.0 + (arg_gamma(cd(1.0, p.nu)) - M_PI / 2.0)
                  - arg_minus_r;

  const double modulation = x * x / (4.0 * t) - p.nu * std::log(8.0 * t);
  p.value = p.amplitude / std::sqrt(t) * std::exp(cd(0.0, p.alpha_phase + modulation));
  return p;
}

}  // namespace ist
