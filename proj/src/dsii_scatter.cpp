#include "ist/dsii_scatter.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ist/fft.hpp"
#include "ist/gmres.hpp"
#include "ist/spectral.hpp"
#include "ist/zs_direct.hpp"  // SolverError

namespace ist {

Potential2D::Potential2D(ComplexField2D f) : field(std::move(f)) {
  require_finite(field, "Potential2D");
  l1 = norm_l1(field);
  l2 = norm_l2(field);
  ComplexField2D gx = dz(field), gy = dbar(field);
  // |grad|^2 = 2(|dz q|^2 + |dbar q|^2)
  double s = 0.0;
  for (std::size_t i = 0; i < gx.v.size(); ++i) s += 2.0 * (std::norm(gx.v[i]) + std::norm(gy.v[i]));
  h1 = std::sqrt(l2 * l2 + s * field.grid.cell_area());
}

namespace {

// Precomputed tables for one grid: the dbar^{-1} multiplier in FFT layout.
struct DbarTable {
  int n1, n2;
  std::vector<cd> inv_symbol;

  explicit DbarTable(const Grid2D& g) : n1(g.n1), n2(g.n2), inv_symbol(g.size()) {
    const double d1 = g.fourier_spacing1(), d2 = g.fourier_spacing2();
    for (int j1 = 0; j1 < n1; ++j1) {
      const int m1 = g.freq_index1(j1);
      for (int j2 = 0; j2 < n2; ++j2) {
        const int m2 = g.freq_index2(j2);
        cd& c = inv_symbol[std::size_t(j1) * n2 + j2];
        if (m1 == 0 && m2 == 0)
          c = cd(0.0, 0.0);
        else
          c = 2.0 / (cd(0.0, 1.0) * cd(m1 * d1, m2 * d2));
      }
    }
  }

  void solve(const std::vector<cd>& in, std::vector<cd>& out, std::vector<cd>& scratch) const {
    fft::forward2(in.data(), scratch.data(), n1, n2);
    const double s = 1.0 / (double(n1) * n2);
    for (std::size_t i = 0; i < inv_symbol.size(); ++i) scratch[i] *= inv_symbol[i] * s;
    fft::inverse2(scratch.data(), out.data(), n1, n2);
  }
};

struct CgoWork {
  const Grid2D& grid;
  const DbarTable& dbar;
  std::vector<cd> eq;  // e_{-k}(z) q(z)
  std::vector<cd> t1, t2;

  CgoWork(const Grid2D& g, const DbarTable& tab, const std::vector<cd>& q, cd k)
      : grid(g), dbar(tab), eq(g.size()), t1(g.size()), t2(g.size()) {
    ComplexField2D E = phase_ek(g, -k);
    for (std::size_t i = 0; i < eq.size(); ++i) eq[i] = E.v[i] * q[i];
  }

  // w -> sign * dbar^{-1}(e_{-k} q conj(w))
  void apply(const std::vector<cd>& w, std::vector<cd>& out, double sign) {
    for (std::size_t i = 0; i < eq.size(); ++i) t2[i] = eq[i] * std::conj(w[i]);
    dbar.solve(t2, out, t1);
    if (sign < 0)
      for (cd& c : out) c = -c;
  }

  double l2(const std::vector<cd>& w) const {
    double s = 0.0;
    for (const cd& c : w) s += std::norm(c);
    return std::sqrt(s * grid.cell_area());
  }
};

struct SignSolve {
  double residual = 0.0;
  int iterations = 0;
  double ratio = 0.0;
  CgoPath path = CgoPath::fixed_point;
};

SignSolve solve_sign(CgoWork& work, double sign, double tol, const CgoOptions& opts,
                     std::vector<cd>& w) {
  const std::size_t N = work.grid.size();
  std::vector<cd> b(N);
  {
    std::vector<cd> ones(N, cd(1.0, 0.0));
    work.apply(ones, b, sign);  // dbar^{-1}(e_{-k} u) with the sign folded in
  }
  w.assign(N, cd(0.0, 0.0));
  SignSolve st;
  std::vector<cd> nw(N);
  double prev = 0.0;
  bool done = false;
  for (int it = 1; it <= opts.max_iter; ++it) {
    work.apply(w, nw, sign);
    for (std::size_t i = 0; i < N; ++i) nw[i] += b[i] - w[i];
    const double res = work.l2(nw);
    for (std::size_t i = 0; i < N; ++i) w[i] += nw[i];
    if (prev > 0.0) st.ratio = std::max(st.ratio, res / prev);
    prev = res;
    st.iterations = it;
    st.residual = res;
    if (res <= tol) {
      done = true;
      break;
    }
    if (st.ratio > opts.contraction_gate && it >= 8) break;  // hand off to Krylov
  }
  if (done) return st;

  st.path = CgoPath::krylov;
  // (I - A)w = b with the antilinear A treated as an R-linear operator on
  // stacked (Re, Im) vectors.
  std::vector<double> bv(2 * N), xv(2 * N);
  for (std::size_t i = 0; i < N; ++i) {
    bv[i] = b[i].real();
    bv[N + i] = b[i].imag();
    xv[i] = w[i].real();
    xv[N + i] = w[i].imag();
  }
  std::vector<cd> win(N), wout(N);
  std::function<void(const std::vector<double>&, std::vector<double>&)> op =
      [&](const std::vector<double>& in, std::vector<double>& out) {
        for (std::size_t i = 0; i < N; ++i) win[i] = cd(in[i], in[N + i]);
        work.apply(win, wout, sign);
        out.resize(2 * N);
        for (std::size_t i = 0; i < N; ++i) {
          out[i] = in[i] - wout[i].real();
          out[N + i] = in[N + i] - wout[i].imag();
        }
      };
  double bl2 = 0.0;
  for (double v : bv) bl2 += v * v;
  bl2 = std::sqrt(bl2);
  const double gm_tol =
      std::max(1e-14, tol / std::max(1e-300, bl2 * std::sqrt(work.grid.cell_area())));
  GmresResult g = gmres<double>(op, bv, xv, opts.krylov_restart, 50 * opts.max_iter, gm_tol);
  if (!g.converged) throw SolverError("cgo_solve: Krylov solver did not converge");
  for (std::size_t i = 0; i < N; ++i) w[i] = cd(xv[i], xv[N + i]);
  st.iterations += g.matvecs;
  work.apply(w, nw, sign);
  for (std::size_t i = 0; i < N; ++i) nw[i] += b[i] - w[i];
  st.residual = work.l2(nw);
  return st;
}

CGOState cgo_solve_with_tables(const ComplexField2D& qf, const DbarTable& tab, cd k, double tol,
                               const CgoOptions& opts) {
  const Grid2D& g = qf.grid;
  if (!on_k_lattice(g, k)) throw SolverError("cgo_solve: k is not on the grid's k-lattice");
  CGOState st;
  st.k = k;
  st.m_plus = ComplexField2D(g);
  st.m_minus = ComplexField2D(g);
  CgoWork work(g, tab, qf.v, k);
  std::vector<cd> w;
  SignSolve sp = solve_sign(work, +1.0, tol, opts, w);
  for (std::size_t i = 0; i < g.size(); ++i) st.m_plus.v[i] = cd(1.0, 0.0) + w[i];
  SignSolve sm = solve_sign(work, -1.0, tol, opts, w);
  for (std::size_t i = 0; i < g.size(); ++i) st.m_minus.v[i] = cd(1.0, 0.0) + w[i];
  st.residual_plus = sp.residual;
  st.residual_minus = sm.residual;
  st.iterations = sp.iterations + sm.iterations;
  st.contraction_ratio = std::max(sp.ratio, sm.ratio);
  st.path = (sp.path == CgoPath::krylov || sm.path == CgoPath::krylov) ? CgoPath::krylov
                                                                       : CgoPath::fixed_point;
  return st;
}

}  // namespace

ComplexField2D CGOState::m1() const {
  ComplexField2D out(m_plus.grid);
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = 0.5 * (m_plus.v[i] + m_minus.v[i]);
  return out;
}

ComplexField2D CGOState::m2() const {
  ComplexField2D E = phase_ek(m_plus.grid, -k);
  ComplexField2D out(m_plus.grid);
  for (std::size_t i = 0; i < out.v.size(); ++i)
    out.v[i] = 0.5 * E.v[i] * std::conj(m_plus.v[i] - m_minus.v[i]);
  return out;
}

CGOState cgo_solve(const Potential2D& q, cd k, double tol, const CgoOptions& opts) {
  DbarTable tab(q.field.grid);
  return cgo_solve_with_tables(q.field, tab, k, tol, opts);
}

double DSIIScatteringData::l2_norm() const {
  double s2 = 0.0;
  for (const cd& c : s) s2 += std::norm(c);
  return std::sqrt(s2 * k_grid.cell_area());
}

namespace {

// Evaluates s on the centered block {(m1, m2) * stride * dk} of the
// k-lattice. The CGO system is solved on a z_pad-times larger torus when
// requested; the data and the transform quadrature stay on the original
// window either way.
DSIIScatteringData transform_core(const ComplexField2D& qf, const Grid2D& source, double tol,
                                  const ScatteringOptions& opts, int k_stride, bool parallel) {
  require_finite(qf, "scattering_transform");
  const Grid2D& g = qf.grid;
  int kb = opts.k_block > 0 ? opts.k_block : (3 * std::min(g.n1, g.n2)) / 8;
  kb = std::min(kb, std::min(g.n1, g.n2));
  if (kb < 8) kb = std::min(g.n1, g.n2);
  if (kb % 2 != 0) ++kb;

  const int pad = std::max(1, opts.z_pad);
  const Grid2D gs(pad * g.n1, pad * g.n2, pad * g.half_width1, pad * g.half_width2);
  ComplexField2D qs(gs);
  const int zo1 = (gs.n1 - g.n1) / 2, zo2 = (gs.n2 - g.n2) / 2;
  if (pad == 1) {
    qs.v = qf.v;
  } else {
    for (int j1 = 0; j1 < g.n1; ++j1)
      for (int j2 = 0; j2 < g.n2; ++j2) qs.at(zo1 + j1, zo2 + j2) = qf.at(j1, j2);
  }

  const double dk1 = g.k_spacing1() * k_stride, dk2 = g.k_spacing2() * k_stride;
  DSIIScatteringData out;
  out.k_grid = Grid2D(kb, kb, kb / 2 * dk1, kb / 2 * dk2);
  out.s.assign(std::size_t(kb) * kb, cd(0.0, 0.0));
  out.source_grid = source;
  out.stats.resize(out.s.size());

  ComplexField2D faq = antilinear_fourier(qf);  // on the full k-lattice of g
  DbarTable tab(gs);
  const double area = g.cell_area();
  std::string first_error;

  auto one = [&](int idx) {
    const int i1 = idx / kb, i2 = idx % kb;
    const cd k = cd((i1 - kb / 2) * dk1, (i2 - kb / 2) * dk2);
    try {
      CGOState st = cgo_solve_with_tables(qs, tab, k, tol, opts.cgo);
      // s(k) = F_a q(k) - (i/pi) int e_k conj(q) (m1 - 1) dz
      ComplexField2D E = phase_ek(g, k);
      cd corr(0.0, 0.0);
      for (int j1 = 0; j1 < g.n1; ++j1)
        for (int j2 = 0; j2 < g.n2; ++j2) {
          const std::size_t is = std::size_t(zo1 + j1) * gs.n2 + (zo2 + j2);
          const std::size_t io = std::size_t(j1) * g.n2 + j2;
          const cd m1v = 0.5 * (st.m_plus.v[is] + st.m_minus.v[is]) - 1.0;
          corr += E.v[io] * std::conj(qf.v[io]) * m1v;
        }
      corr *= cd(0.0, -1.0) * area / M_PI;
      const int f1 = (i1 - kb / 2) * k_stride + g.n1 / 2;
      const int f2 = (i2 - kb / 2) * k_stride + g.n2 / 2;
      out.s[idx] = faq.v[std::size_t(f1) * g.n2 + f2] + corr;
      out.stats[idx] = {k.real(), k.imag(),
                        st.iterations,
                        std::max(st.residual_plus, st.residual_minus),
                        st.path};
    } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (first_error.empty())
        first_error = std::string(e.what()) + " (k = " + std::to_string(k.real()) + " + " +
                      std::to_string(k.imag()) + "i, |q|_2 = " + std::to_string(norm_l2(qf)) + ")";
    }
  };

  const int total = kb * kb;
  if (parallel) {
#ifdef _OPENMP
    if (opts.cgo.workers > 0) omp_set_num_threads(opts.cgo.workers);
#pragma omp parallel for schedule(dynamic, 8)
    for (int idx = 0; idx < total; ++idx) one(idx);
#else
    for (int idx = 0; idx < total; ++idx) one(idx);
#endif
  } else {
    for (int idx = 0; idx < total; ++idx) one(idx);
  }
  if (!first_error.empty()) throw SolverError(first_error);

  const double nq = norm_l2(qf);
  if (nq > 0.0) out.isometry_deviation = std::abs(out.l2_norm() - nq) / nq;
  return out;
}

}  // namespace

DSIIScatteringData scattering_transform(const Potential2D& q, double tol,
                                        const ScatteringOptions& opts) {
  return transform_core(q.field, q.field.grid, tol, opts, 1, opts.cgo.workers != 1);
}

DSIIScatteringData scattering_transform_serial(const Potential2D& q, double tol,
                                               const ScatteringOptions& opts) {
  return transform_core(q.field, q.field.grid, tol, opts, 1, false);
}

DSIIScatteringData evolve_s(const DSIIScatteringData& s0, double t) {
  DSIIScatteringData st = s0;
  const Grid2D& g = st.k_grid;
  for (int j1 = 0; j1 < g.n1; ++j1)
    for (int j2 = 0; j2 < g.n2; ++j2) {
      const double k1 = g.x1(j1), k2 = g.x2(j2);
      // k^2 + conj(k)^2 = 2(k1^2 - k2^2), a real phase
      st.s[std::size_t(j1) * g.n2 + j2] *= std::exp(cd(0.0, 4.0 * t * (k1 * k1 - k2 * k2)));
    }
  return st;
}

Potential2D inverse_scattering(const DSIIScatteringData& s, double tol,
                               const ScatteringOptions& opts) {
  if (s.source_grid.n1 == 0)
    throw SolverError("inverse_scattering: scattering data lacks a source grid");
  // Zero-pad the block onto the (possibly enlarged) k-lattice of the source
  // grid; the swapped-role transform evaluated with the matching stride then
  // lands exactly on the source z-grid.
  const int pad = std::max(1, opts.inverse_pad);
  const Grid2D base = dual_half_grid(s.source_grid);
  const Grid2D padded(pad * base.n1, pad * base.n2, pad * base.half_width1,
                      pad * base.half_width2);
  if (s.k_grid.n1 > padded.n1 || s.k_grid.n2 > padded.n2)
    throw SolverError("inverse_scattering: block larger than the source lattice");
  ComplexField2D sf(padded);
  const int off1 = (padded.n1 - s.k_grid.n1) / 2, off2 = (padded.n2 - s.k_grid.n2) / 2;
  for (int j1 = 0; j1 < s.k_grid.n1; ++j1)
    for (int j2 = 0; j2 < s.k_grid.n2; ++j2)
      sf.at(off1 + j1, off2 + j2) = s.s[std::size_t(j1) * s.k_grid.n2 + j2];

  ScatteringOptions inv_opts = opts;
  inv_opts.k_block = s.source_grid.n1;  // evaluate on the source lattice
  inv_opts.z_pad = 1;                   // the embedding above is the padding
  DSIIScatteringData q =
      transform_core(sf, padded, tol, inv_opts, pad, opts.cgo.workers != 1);
  return Potential2D(ComplexField2D(s.source_grid, std::move(q.s)));
}

}  // namespace ist
