#pragma once

#include <cmath>
#include <vector>

#include "ist/grid.hpp"

namespace ist {

struct FieldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ComplexField1D {
  Grid1D grid;
  std::vector<cd> v;

  ComplexField1D() = default;
  explicit ComplexField1D(const Grid1D& g) : grid(g), v(g.n, cd(0.0, 0.0)) {}
  ComplexField1D(const Grid1D& g, std::vector<cd> samples) : grid(g), v(std::move(samples)) {
    if (v.size() != std::size_t(g.n)) throw FieldError("ComplexField1D: sample count mismatch");
  }

  int n() const { return grid.n; }
  cd& operator[](int j) { return v[j]; }
  const cd& operator[](int j) const { return v[j]; }
};

struct ComplexField2D {
  Grid2D grid;
  std::vector<cd> v;  // row-major, axis 1 outermost

  ComplexField2D() = default;
  explicit ComplexField2D(const Grid2D& g) : grid(g), v(g.size(), cd(0.0, 0.0)) {}
  ComplexField2D(const Grid2D& g, std::vector<cd> samples) : grid(g), v(std::move(samples)) {
    if (v.size() != g.size()) throw FieldError("ComplexField2D: sample count mismatch");
  }

  cd& at(int j1, int j2) { return v[std::size_t(j1) * grid.n2 + j2]; }
  const cd& at(int j1, int j2) const { return v[std::size_t(j1) * grid.n2 + j2]; }
};

template <class Field>
bool all_finite(const Field& f) {
  for (const cd& z : f.v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

inline void require_finite(const ComplexField1D& f, const char* who) {
  if (!all_finite(f)) throw FieldError(std::string(who) + ": non-finite input samples");
}
inline void require_finite(const ComplexField2D& f, const char* who) {
  if (!all_finite(f)) throw FieldError(std::string(who) + ": non-finite input samples");
}

// Discrete L^2 norm with trapezoid cell weights (fixed summation order).
inline double norm_l2(const ComplexField1D& f) {
  double s = 0.0;
  for (const cd& z : f.v) s += std::norm(z);
  return std::sqrt(s * f.grid.spacing());
}
inline double norm_l2(const ComplexField2D& f) {
  double s = 0.0;
  for (const cd& z : f.v) s += std::norm(z);
  return std::sqrt(s * f.grid.cell_area());
}
inline double norm_l1(const ComplexField1D& f) {
  double s = 0.0;
  for (const cd& z : f.v) s += std::abs(z);
  return s * f.grid.spacing();
}
inline double norm_l1(const ComplexField2D& f) {
  double s = 0.0;
  for (const cd& z : f.v) s += std::abs(z);
  return s * f.grid.cell_area();
}
template <class Field>
double norm_sup(const Field& f) {
  double s = 0.0;
  for (const cd& z : f.v) s = std::max(s, std::abs(z));
  return s;
}

template <class Field>
double rel_l2_error(const Field& a, const Field& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) {
    num += std::norm(a.v[i] - b.v[i]);
    den += std::norm(b.v[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace ist
