#include "ist/rhp_inverse.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ist/fft.hpp"
#include "ist/gmres.hpp"

namespace ist {

namespace {

// Half-line frequency cutoffs with the half-weight zero mode, applied on raw
// FFT buffers (hot path of the solver).
struct CauchyKernel {
  int n;
  std::vector<double> mult_plus, mult_minus;

  explicit CauchyKernel(const Grid1D& g) : n(g.n), mult_plus(g.n), mult_minus(g.n) {
    for (int j = 0; j < n; ++j) {
      const int m = g.freq_index(j);
      mult_plus[j] = m > 0 ? 1.0 : (m == 0 ? 0.5 : 0.0);
      mult_minus[j] = m < 0 ? -1.0 : (m == 0 ? -0.5 : 0.0);
    }
  }

  void apply(const std::vector<cd>& in, std::vector<cd>& out, bool plus,
             std::vector<cd>& scratch) const {
    fft::forward(in.data(), scratch.data(), n);
    const std::vector<double>& m = plus ? mult_plus : mult_minus;
    const double s = 1.0 / n;
    for (int j = 0; j < n; ++j) scratch[j] *= m[j] * s;
    fft::inverse(scratch.data(), out.data(), n);
  }
};

struct BCSystem {
  const Grid1D& grid;
  CauchyKernel cauchy;
  std::vector<cd> wp, wm;  // w^+_{21}, w^-_{12}
  std::vector<cd> b_v;     // C_+(w^-_{12}): the v-component of C_w(I)
  mutable std::vector<cd> t1, t2;

  BCSystem(const ReflectionCoefficient& r, double x)
      : grid(r.lambda_grid), cauchy(r.lambda_grid), wp(grid.n), wm(grid.n), b_v(grid.n),
        t1(grid.n), t2(grid.n) {
    for (int j = 0; j < grid.n; ++j) {
      const cd ph = std::exp(cd(0.0, 2.0 * grid.node(j) * x));
      wp[j] = -ph * r.r[j];
      wm[j] = std::conj(ph * r.r[j]);
    }
    cauchy.apply(wm, b_v, true, t1);
  }

  // (u, v) -> C_w(u, v) = (C_-(v wp), C_+(u wm))
  void apply_cw(const std::vector<cd>& u, const std::vector<cd>& v, std::vector<cd>& out_u,
                std::vector<cd>& out_v) const {
    for (int j = 0; j < grid.n; ++j) t2[j] = v[j] * wp[j];
    cauchy.apply(t2, out_u, false, t1);
    for (int j = 0; j < grid.n; ++j) t2[j] = u[j] * wm[j];
    cauchy.apply(t2, out_v, true, t1);
  }

  double step_norm(const std::vector<cd>& du, const std::vector<cd>& dv) const {
    double s = 0.0;
    for (int j = 0; j < grid.n; ++j) s += std::norm(du[j]) + std::norm(dv[j]);
    return std::sqrt(s * grid.spacing());
  }
};

}  // namespace

BCWeights make_bc_weights(const ReflectionCoefficient& r, double x) {
  BCWeights w;
  w.lambda_grid = r.lambda_grid;
  w.x = x;
  w.w_plus.resize(r.r.size());
  w.w_minus.resize(r.r.size());
  for (std::size_t j = 0; j < r.r.size(); ++j) {
    const cd ph = std::exp(cd(0.0, 2.0 * r.lambda_grid.node(int(j)) * x));
    w.w_plus[j] = -ph * r.r[j];
    w.w_minus[j] = std::conj(ph * r.r[j]);
  }
  return w;
}

BCSolution bc_solve(const ReflectionCoefficient& r, double x, double tol, const BCOptions& opts) {
  if (!(r.sup_norm < 1.0)) throw SolverError("bc_solve: sup|r| must be < 1");
  const int n = r.lambda_grid.n;
  BCSolution sol;
  sol.lambda_grid = r.lambda_grid;
  sol.x = x;
  sol.mu11.assign(n, cd(1.0, 0.0));
  sol.mu21.assign(n, cd(0.0, 0.0));
  if (r.sup_norm == 0.0) return sol;  // mu = I in zero iterations

  BCSystem sys(r, x);
  std::vector<cd> u(n, cd(0, 0)), v(n, cd(0, 0));

  bool done = false;
  if (r.sup_norm <= opts.krylov_gate) {
    sol.path = BCPath::fixed_point;
    std::vector<cd> nu(n), nv(n);
    double prev = 0.0;
    for (int it = 1; it <= opts.max_iter; ++it) {
      sys.apply_cw(u, v, nu, nv);
      for (int j = 0; j < n; ++j) nv[j] += sys.b_v[j];
      for (int j = 0; j < n; ++j) {
        nu[j] -= u[j];
        nv[j] -= v[j];
      }
      const double res = sys.step_norm(nu, nv);
      for (int j = 0; j < n; ++j) {
        u[j] += nu[j];
        v[j] += nv[j];
      }
      if (prev > 0.0) sol.contraction_ratio = std::max(sol.contraction_ratio, res / prev);
      prev = res;
      sol.iterations = it;
      sol.residual = res;
      if (res <= tol) {
        done = true;
        break;
      }
    }
  }
  if (!done && opts.allow_krylov) {
    // either gated out or plain iteration stalled
    sol.path = BCPath::krylov;
    std::vector<cd> bvec(2 * n), xvec(2 * n, cd(0, 0));
    for (int j = 0; j < n; ++j) bvec[n + j] = sys.b_v[j];
    std::vector<cd> au(n), av(n);
    std::function<void(const std::vector<cd>&, std::vector<cd>&)> op =
        [&](const std::vector<cd>& in, std::vector<cd>& out) {
          const std::vector<cd> iu(in.begin(), in.begin() + n);
          const std::vector<cd> iv(in.begin() + n, in.end());
          sys.apply_cw(iu, iv, au, av);
          out.resize(2 * n);
          for (int j = 0; j < n; ++j) {
            out[j] = in[j] - au[j];
            out[n + j] = in[n + j] - av[j];
          }
        };
    // seed with the fixed-point iterate when it made progress
    for (int j = 0; j < n; ++j) {
      xvec[j] = u[j];
      xvec[n + j] = v[j];
    }
    GmresResult g = gmres<cd>(op, bvec, xvec, opts.krylov_restart, 40 * opts.max_iter,
                              tol / std::max(1.0, sys.step_norm(sys.b_v, sys.b_v)));
    if (!g.converged)
      throw SolverError("bc_solve: Krylov solver did not converge at x = " + std::to_string(x));
    for (int j = 0; j < n; ++j) {
      u[j] = xvec[j];
      v[j] = xvec[n + j];
    }
    sol.iterations += g.matvecs;
    // report the equation residual in the discrete L2 norm
    std::vector<cd> ru(n), rv(n);
    sys.apply_cw(u, v, ru, rv);
    for (int j = 0; j < n; ++j) {
      ru[j] = ru[j] - u[j];
      rv[j] = rv[j] + sys.b_v[j] - v[j];
    }
    sol.residual = sys.step_norm(ru, rv);
  }

  for (int j = 0; j < n; ++j) {
    sol.mu11[j] = cd(1.0, 0.0) + u[j];
    sol.mu21[j] = std::conj(v[j]);  // mu21 = conj(mu12) by the matrix symmetry
  }
  return sol;
}

namespace {

cd reconstruct_from_solution(const ReflectionCoefficient& r, const BCSolution& sol, double x) {
  // q(x) = -(1/pi) int conj(r(s)) exp(-2 i x s) mu11(x, s) ds
  const Grid1D& g = r.lambda_grid;
  cd acc(0.0, 0.0);
  for (int j = 0; j < g.n; ++j)
    acc += std::conj(r.r[j]) * std::exp(cd(0.0, -2.0 * x * g.node(j))) * sol.mu11[j];
  return -(1.0 / M_PI) * acc * g.spacing();
}

ReconstructionResult reconstruct_core(const ReflectionCoefficient& r, const Grid1D& x_grid,
                                      double tol, const BCOptions& opts, bool parallel) {
  ReconstructionResult out;
  out.q.field = ComplexField1D(x_grid);
  out.stats.resize(x_grid.n);
  std::vector<double> ratios(x_grid.n, 0.0);
  std::string first_error;

  auto one = [&](int i) {
    const double x = x_grid.node(i);
    try {
      BCSolution sol = bc_solve(r, x, tol, opts);
      out.q.field.v[i] = reconstruct_from_solution(r, sol, x);
      out.stats[i] = {x, sol.residual, sol.iterations, sol.path};
      ratios[i] = sol.contraction_ratio;
    } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (first_error.empty())
        first_error = std::string(e.what()) + " (while reconstructing at x = " +
                      std::to_string(x) + ")";
    }
  };

  if (parallel) {
#ifdef _OPENMP
    if (opts.workers > 0) omp_set_num_threads(opts.workers);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < x_grid.n; ++i) one(i);
#else
    for (int i = 0; i < x_grid.n; ++i) one(i);
#endif
  } else {
    for (int i = 0; i < x_grid.n; ++i) one(i);
  }
  if (!first_error.empty()) throw SolverError(first_error);
  for (double c : ratios) out.max_contraction_ratio = std::max(out.max_contraction_ratio, c);
  return out;
}

}  // namespace

ReconstructionResult reconstruct_q(const ReflectionCoefficient& r, const Grid1D& x_grid,
                                   double tol, const BCOptions& opts) {
  return reconstruct_core(r, x_grid, tol, opts, opts.workers != 1);
}

ReconstructionResult reconstruct_q_serial(const ReflectionCoefficient& r, const Grid1D& x_grid,
                                          double tol, const BCOptions& opts) {
  return reconstruct_core(r, x_grid, tol, opts, false);
}

cd reconstruct_q_at(const ReflectionCoefficient& r, double x, double tol, const BCOptions& opts) {
  BCSolution sol = bc_solve(r, x, tol, opts);
  return reconstruct_from_solution(r, sol, x);
}

cd a_from_r(const ReflectionCoefficient& r, cd z) {
  const Grid1D& g = r.lambda_grid;
  if (std::abs(z.imag()) <= g.spacing())
    throw SolverError("a_from_r: z is within one grid spacing of the real axis");
  if (!(r.sup_norm < 1.0)) throw SolverError("a_from_r: sup|r| must be < 1");
  cd acc(0.0, 0.0);
  for (int j = 0; j < g.n; ++j) {
    const double lg = std::log1p(-std::norm(r.r[j]));
    acc += lg / (g.node(j) - z);
  }
  acc *= g.spacing() / cd(0.0, 2.0 * M_PI);
  return std::exp(acc);
}

}  // namespace ist
