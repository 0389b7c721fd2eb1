#pragma once

#include <functional>

#include "ist/field.hpp"

namespace ist {

// Every operator in this module is a Fourier multiplier on the torus; the
// zero mode is the one place where the line operator has no canonical
// discrete value, so specs carry it explicitly.
struct FourierMultiplierSpec1D {
  std::function<cd(double)> symbol;  // xi != 0
  cd zero_mode = cd(0.0, 0.0);
};

struct FourierMultiplierSpec2D {
  std::function<cd(double, double)> symbol;  // (xi1, xi2) != (0, 0)
  cd zero_mode = cd(0.0, 0.0);
};

ComplexField1D apply_multiplier(const FourierMultiplierSpec1D& spec, const ComplexField1D& f);
ComplexField2D apply_multiplier(const FourierMultiplierSpec2D& spec, const ComplexField2D& f);

enum class CauchySign { plus, minus };
enum class ZeroModePolicy {
  half_split,      // C+ gets 1/2, C- gets -1/2 at xi = 0 (default)
  assign_to_plus,  // C+ gets 1, C- gets 0 (for the idempotence checks)
};

// Boundary values of the Cauchy integral as half-line frequency cutoffs.
ComplexField1D cauchy_project(const ComplexField1D& f, CauchySign sign,
                              ZeroModePolicy policy = ZeroModePolicy::half_split);

// Solve dbar u = f (or d u = f with conjugate = true) on nonzero modes; the
// mean of u is set to zero.
ComplexField2D solid_cauchy(const ComplexField2D& f, bool conjugate = false);

ComplexField2D beurling(const ComplexField2D& f);

// Wirtinger derivative multipliers, used by tests and the DS II nonlinearity.
ComplexField2D dbar(const ComplexField2D& f);
ComplexField2D dz(const ComplexField2D& f);

// 1D: (F_a f)(lambda) = -int exp(-2 i x lambda) conj(f(x)) dx, sampled on the
// paired lambda grid (spacing pi/2L). Satisfies F_a(F_a f) = pi * f on samples.
ComplexField1D antilinear_fourier(const ComplexField1D& f);

// 2D: (F_a f)(k) = -(i/pi) int e_k(z) conj(f(z)) dz on the k-lattice
// (spacing pi/2L per axis). An exact involution on samples.
ComplexField2D antilinear_fourier(const ComplexField2D& f);

// Natural Fourier transform f_hat(k) = (1/pi) int e_k(z) f(z) dz on the same
// k-lattice; appears in the maximal-function bound for the scattering data.
ComplexField2D natural_fourier(const ComplexField2D& f);

// e_k(z) = exp(i(kz + conj(k) conj(z))) sampled on the grid. k must lie on
// the k-lattice so the phase is an exact lattice mode (checked).
ComplexField2D phase_ek(const Grid2D& g, cd k);
bool on_k_lattice(const Grid2D& g, cd k, double tol = 1e-9);

// Hardy-Littlewood maximal function surrogate: sup over the given radii of
// periodic disc (1D: interval) averages of |f|.
std::vector<double> maximal_function(const ComplexField1D& f, const std::vector<double>& radii);
std::vector<double> maximal_function(const ComplexField2D& f, const std::vector<double>& radii);

// Geometric ladder {h, 2h, 4h, ..., <= L/2}.
std::vector<double> default_radii(double spacing, double half_width);

}  // namespace ist
