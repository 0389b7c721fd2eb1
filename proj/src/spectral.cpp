#include "ist/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "ist/fft.hpp"

namespace ist {

ComplexField1D apply_multiplier(const FourierMultiplierSpec1D& spec, const ComplexField1D& f) {
  require_finite(f, "apply_multiplier");
  const int n = f.grid.n;
  std::vector<cd> F = fft::forward(f.v, n);
  const double dxi = f.grid.fourier_spacing();
  for (int j = 0; j < n; ++j) {
    const int m = f.grid.freq_index(j);
    F[j] *= (m == 0) ? spec.zero_mode : spec.symbol(m * dxi);
  }
  return ComplexField1D(f.grid, fft::inverse_normalized(F, n));
}

ComplexField2D apply_multiplier(const FourierMultiplierSpec2D& spec, const ComplexField2D& f) {
  require_finite(f, "apply_multiplier");
  const int n1 = f.grid.n1, n2 = f.grid.n2;
  std::vector<cd> F = fft::forward2(f.v, n1, n2);
  const double d1 = f.grid.fourier_spacing1(), d2 = f.grid.fourier_spacing2();
  for (int j1 = 0; j1 < n1; ++j1) {
    const int m1 = f.grid.freq_index1(j1);
    for (int j2 = 0; j2 < n2; ++j2) {
      const int m2 = f.grid.freq_index2(j2);
      cd& c = F[std::size_t(j1) * n2 + j2];
      c *= (m1 == 0 && m2 == 0) ? spec.zero_mode : spec.symbol(m1 * d1, m2 * d2);
    }
  }
  return ComplexField2D(f.grid, fft::inverse2_normalized(F, n1, n2));
}

ComplexField1D cauchy_project(const ComplexField1D& f, CauchySign sign, ZeroModePolicy policy) {
  FourierMultiplierSpec1D spec;
  if (sign == CauchySign::plus) {
    spec.symbol = [](double xi) { return xi > 0 ? cd(1.0, 0.0) : cd(0.0, 0.0); };
    spec.zero_mode = policy == ZeroModePolicy::half_split ? cd(0.5, 0.0) : cd(1.0, 0.0);
  } else {
    spec.symbol = [](double xi) { return xi < 0 ? cd(-1.0, 0.0) : cd(0.0, 0.0); };
    spec.zero_mode = policy == ZeroModePolicy::half_split ? cd(-0.5, 0.0) : cd(0.0, 0.0);
  }
  return apply_multiplier(spec, f);
}

// dbar has symbol (i/2)(xi1 + i xi2), d has symbol (i/2)(xi1 - i xi2).
ComplexField2D solid_cauchy(const ComplexField2D& f, bool conjugate) {
  FourierMultiplierSpec2D spec;
  if (!conjugate)
    spec.symbol = [](double a, double b) { return 2.0 / (cd(0.0, 1.0) * cd(a, b)); };
  else
    spec.symbol = [](double a, double b) { return 2.0 / (cd(0.0, 1.0) * cd(a, -b)); };
  return apply_multiplier(spec, f);
}

ComplexField2D beurling(const ComplexField2D& f) {
  FourierMultiplierSpec2D spec;
  spec.symbol = [](double a, double b) { return cd(a, -b) / cd(a, b); };
  return apply_multiplier(spec, f);
}

ComplexField2D dbar(const ComplexField2D& f) {
  FourierMultiplierSpec2D spec;
  spec.symbol = [](double a, double b) { return cd(0.0, 0.5) * cd(a, b); };
  return apply_multiplier(spec, f);
}

ComplexField2D dz(const ComplexField2D& f) {
  FourierMultiplierSpec2D spec;
  spec.symbol = [](double a, double b) { return cd(0.0, 0.5) * cd(a, -b); };
  return apply_multiplier(spec, f);
}

ComplexField1D antilinear_fourier(const ComplexField1D& f) {
  require_finite(f, "antilinear_fourier");
  const int n = f.grid.n;
  std::vector<cd> c(n);
  for (int j = 0; j < n; ++j) c[j] = std::conj(f.v[j]);
  std::vector<cd> F = fft::forward(c, n);
  const double h = f.grid.spacing();
  ComplexField1D out(dual_half_grid(f.grid));
  for (int j = 0; j < n; ++j) {
    const int m = j - n / 2;  // lambda_m at output node j
    const double sgn = (m & 1) ? -1.0 : 1.0;
    out.v[j] = -h * sgn * F[((m % n) + n) % n];
  }
  return out;
}

namespace {

// Shared core of the 2D antilinear and natural transforms:
// (c/pi) int e_k(z) g(z) dz on the k-lattice.
ComplexField2D ek_transform(const ComplexField2D& g, cd prefactor) {
  const int n1 = g.grid.n1, n2 = g.grid.n2;
  std::vector<cd> F = fft::forward2(g.v, n1, n2);
  const cd c = prefactor * g.grid.cell_area() / M_PI;
  ComplexField2D out(dual_half_grid(g.grid));
  for (int j1 = 0; j1 < n1; ++j1) {
    const int m1 = j1 - n1 / 2;
    const int i1 = (((-m1) % n1) + n1) % n1;
    for (int j2 = 0; j2 < n2; ++j2) {
      const int m2 = j2 - n2 / 2;
      const int i2 = ((m2 % n2) + n2) % n2;
      const double sgn = ((m1 + m2) & 1) ? -1.0 : 1.0;
      out.v[std::size_t(j1) * n2 + j2] = c * sgn * F[std::size_t(i1) * n2 + i2];
    }
  }
  return out;
}

}  // namespace

ComplexField2D antilinear_fourier(const ComplexField2D& f) {
  require_finite(f, "antilinear_fourier");
  ComplexField2D g(f.grid);
  for (std::size_t i = 0; i < f.v.size(); ++i) g.v[i] = std::conj(f.v[i]);
  return ek_transform(g, cd(0.0, -1.0));
}

ComplexField2D natural_fourier(const ComplexField2D& f) {
  require_finite(f, "natural_fourier");
  return ek_transform(f, cd(1.0, 0.0));
}

bool on_k_lattice(const Grid2D& g, cd k, double tol) {
  const double m1 = k.real() / g.k_spacing1();
  const double m2 = k.imag() / g.k_spacing2();
  return std::abs(m1 - std::round(m1)) < tol && std::abs(m2 - std::round(m2)) < tol;
}

ComplexField2D phase_ek(const Grid2D& g, cd k) {
  if (!on_k_lattice(g, k))
    throw FieldError("phase_ek: k is not on the grid's k-lattice");
  ComplexField2D out(g);
  // e_k(z) = exp(2i(k1 x1 - k2 x2)); split into per-axis factors.
  std::vector<cd> p1(g.n1), p2(g.n2);
  for (int j = 0; j < g.n1; ++j) p1[j] = std::exp(cd(0.0, 2.0 * k.real() * g.x1(j)));
  for (int j = 0; j < g.n2; ++j) p2[j] = std::exp(cd(0.0, -2.0 * k.imag() * g.x2(j)));
  for (int j1 = 0; j1 < g.n1; ++j1)
    for (int j2 = 0; j2 < g.n2; ++j2) out.v[std::size_t(j1) * g.n2 + j2] = p1[j1] * p2[j2];
  return out;
}

std::vector<double> default_radii(double spacing, double half_width) {
  std::vector<double> radii;
  for (double r = spacing; r <= half_width / 2.0 + 1e-12; r *= 2.0) radii.push_back(r);
  return radii;
}

namespace {

std::vector<double> maximal_core(const std::vector<double>& absf, int n1, int n2, double h1,
                                 double h2, const std::vector<double>& radii) {
  if (radii.empty()) throw FieldError("maximal_function: empty radii list");
  for (double r : radii)
    if (!(r > 0)) throw FieldError("maximal_function: radii must be positive");
  const std::size_t sz = std::size_t(n1) * n2;
  std::vector<cd> F(sz);
  for (std::size_t i = 0; i < sz; ++i) F[i] = cd(absf[i], 0.0);
  std::vector<cd> Fhat = fft::forward2(F, n1, n2);
  std::vector<double> out(sz, 0.0);
  std::vector<cd> mask(sz), conv(sz);
  for (double rho : radii) {
    std::fill(mask.begin(), mask.end(), cd(0.0, 0.0));
    long count = 0;
    const int w1 = std::min(n1 / 2, int(rho / h1) + 1);
    const int w2 = std::min(n2 / 2, int(rho / h2) + 1);
    for (int d1 = -w1; d1 <= w1; ++d1)
      for (int d2 = -w2; d2 <= w2; ++d2) {
        if (d1 * h1 * d1 * h1 + d2 * h2 * d2 * h2 > rho * rho) continue;
        const int i1 = ((d1 % n1) + n1) % n1, i2 = ((d2 % n2) + n2) % n2;
        cd& c = mask[std::size_t(i1) * n2 + i2];
        if (c.real() == 0.0) ++count;  // wrap-collisions only for rho ~ L
        c = cd(1.0, 0.0);
      }
    std::vector<cd> M = fft::forward2(mask, n1, n2);
    for (std::size_t i = 0; i < sz; ++i) M[i] *= Fhat[i];
    conv = fft::inverse2_normalized(M, n1, n2);
    const double inv = 1.0 / double(count);
    for (std::size_t i = 0; i < sz; ++i) out[i] = std::max(out[i], conv[i].real() * inv);
  }
  return out;
}

}  // namespace

std::vector<double> maximal_function(const ComplexField1D& f, const std::vector<double>& radii) {
  require_finite(f, "maximal_function");
  if (radii.empty()) throw FieldError("maximal_function: empty radii list");
  const int n = f.grid.n;
  const double h = f.grid.spacing();
  std::vector<double> absf(n);
  for (int j = 0; j < n; ++j) absf[j] = std::abs(f.v[j]);
  std::vector<double> out(n, 0.0);
  for (double rho : radii) {
    if (!(rho > 0)) throw FieldError("maximal_function: radii must be positive");
    const int w = std::min(n / 2, int(rho / h) + 1);
    int count = 0;
    for (int d = -w; d <= w; ++d)
      if (std::abs(d * h) <= rho) ++count;
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int d = -w; d <= w; ++d) {
        if (std::abs(d * h) > rho) continue;
        s += absf[((j + d) % n + n) % n];
      }
      out[j] = std::max(out[j], s / count);
    }
  }
  return out;
}

std::vector<double> maximal_function(const ComplexField2D& f, const std::vector<double>& radii) {
  require_finite(f, "maximal_function");
  const int n1 = f.grid.n1, n2 = f.grid.n2;
  std::vector<double> absf(f.v.size());
  for (std::size_t i = 0; i < f.v.size(); ++i) absf[i] = std::abs(f.v[i]);
  return maximal_core(absf, n1, n2, f.grid.spacing1(), f.grid.spacing2(), radii);
}

}  // namespace ist
