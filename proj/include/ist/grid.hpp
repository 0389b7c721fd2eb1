#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace ist {

using cd = std::complex<double>;

struct GridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool is_pow2(int n) { return n >= 1 && (n & (n - 1)) == 0; }

// Uniform grid on [-L, L) treated as a torus of period 2L.
// n is a power of two, so spacing() * n == 2 * half_width exactly in
// binary floating point.
struct Grid1D {
  int n = 0;
  double half_width = 0.0;

  Grid1D() = default;
  Grid1D(int n_, double half_width_) : n(n_), half_width(half_width_) {
    if (n < 8 || !is_pow2(n)) throw GridError("Grid1D: n must be a power of two >= 8");
    if (!(half_width > 0.0)) throw GridError("Grid1D: half_width must be positive");
  }

  double spacing() const { return 2.0 * half_width / n; }
  double node(int j) const { return -half_width + spacing() * j; }

  // Frequencies representable on the torus are integer multiples of pi/L.
  double fourier_spacing() const { return M_PI / half_width; }
  // Frequency of FFT bin j in the usual wrap-around layout.
  int freq_index(int j) const { return j < n / 2 ? j : j - n; }

  bool compatible(const Grid1D& o, double tol = 1e-12) const {
    return n == o.n && std::abs(half_width - o.half_width) <= tol * half_width;
  }
};

// Spectral-parameter grid paired with an x-grid: lambda_m = m * pi / (2L),
// so that exp(2 i lambda x) is exactly torus-periodic and F_a is a DFT.
inline Grid1D dual_half_grid(const Grid1D& g) {
  return Grid1D(g.n, M_PI * g.n / (4.0 * g.half_width));
}

// Product grid for z = x1 + i x2 on [-L1, L1) x [-L2, L2); samples row-major
// with axis 1 outermost.
struct Grid2D {
  int n1 = 0, n2 = 0;
  double half_width1 = 0.0, half_width2 = 0.0;

  Grid2D() = default;
  Grid2D(int n1_, int n2_, double L1, double L2)
      : n1(n1_), n2(n2_), half_width1(L1), half_width2(L2) {
    if (n1 < 8 || !is_pow2(n1) || n2 < 8 || !is_pow2(n2))
      throw GridError("Grid2D: point counts must be powers of two >= 8");
    if (!(L1 > 0.0) || !(L2 > 0.0)) throw GridError("Grid2D: half-widths must be positive");
  }
  Grid2D(int n, double L) : Grid2D(n, n, L, L) {}

  std::size_t size() const { return std::size_t(n1) * n2; }
  double spacing1() const { return 2.0 * half_width1 / n1; }
  double spacing2() const { return 2.0 * half_width2 / n2; }
  double cell_area() const { return spacing1() * spacing2(); }
  double x1(int j) const { return -half_width1 + spacing1() * j; }
  double x2(int j) const { return -half_width2 + spacing2() * j; }
  cd node(int j1, int j2) const { return cd(x1(j1), x2(j2)); }

  // DFT dual lattice spacing per axis (multiplier frequencies).
  double fourier_spacing1() const { return M_PI / half_width1; }
  double fourier_spacing2() const { return M_PI / half_width2; }
  // Lattice of spectral parameters k: half the DFT spacing, so that the
  // phase e_k(z) = exp(i(kz + conj(kz))) is an exact lattice mode and the
  // antilinear transform composed with itself is the identity on samples.
  double k_spacing1() const { return M_PI / (2.0 * half_width1); }
  double k_spacing2() const { return M_PI / (2.0 * half_width2); }

  int freq_index1(int j) const { return j < n1 / 2 ? j : j - n1; }
  int freq_index2(int j) const { return j < n2 / 2 ? j : j - n2; }

  bool compatible(const Grid2D& o, double tol = 1e-12) const {
    return n1 == o.n1 && n2 == o.n2 &&
           std::abs(half_width1 - o.half_width1) <= tol * half_width1 &&
           std::abs(half_width2 - o.half_width2) <= tol * half_width2;
  }
};

// Grid carrying the k-lattice of `g` as a spatial grid (used when the roles
// of z and k are swapped, e.g. by the inverse scattering transform).
inline Grid2D dual_half_grid(const Grid2D& g) {
  return Grid2D(g.n1, g.n2, g.n1 * M_PI / (4.0 * g.half_width1),
                g.n2 * M_PI / (4.0 * g.half_width2));
}

}  // namespace ist
