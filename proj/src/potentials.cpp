#include "ist/potentials.hpp"

#include <cmath>

namespace ist {

PotentialFamily potential_family_from_string(const std::string& name) {
  if (name == "gaussian") return PotentialFamily::gaussian;
  if (name == "box") return PotentialFamily::box;
  if (name == "sech") return PotentialFamily::sech;
  throw std::runtime_error("unknown potential family: " + name);
}

std::string to_string(PotentialFamily f) {
  switch (f) {
    case PotentialFamily::gaussian: return "gaussian";
    case PotentialFamily::box: return "box";
    case PotentialFamily::sech: return "sech";
  }
  return "?";
}

cd evaluate(const PotentialSpec& s, double x) {
  const double u = x - s.center;
  double mag = 0.0;
  switch (s.family) {
    case PotentialFamily::gaussian:
      mag = s.amplitude * std::exp(-u * u / (2.0 * s.width * s.width));
      break;
    case PotentialFamily::box:
      mag = (u >= 0.0 && u < s.width) ? s.amplitude : 0.0;
      break;
    case PotentialFamily::sech:
      mag = s.amplitude / std::cosh(u / s.width);
      break;
  }
  if (s.chirp == 0.0) return cd(mag, 0.0);
  return mag * std::exp(cd(0.0, s.chirp * x));
}

Potential1D make_potential(const PotentialSpec& s, const Grid1D& g) {
  ComplexField1D f(g);
  for (int j = 0; j < g.n; ++j) f.v[j] = evaluate(s, g.node(j));
  Potential1D q(std::move(f), [s](double x) { return evaluate(s, x); });
  return q;
}

Potential2D make_potential_2d(const PotentialSpec& s, const Grid2D& g) {
  ComplexField2D f(g);
  for (int j1 = 0; j1 < g.n1; ++j1)
    for (int j2 = 0; j2 < g.n2; ++j2) {
      const double rr = std::hypot(g.x1(j1) - s.center, g.x2(j2) - s.center);
      PotentialSpec radial = s;
      radial.center = 0.0;
      radial.chirp = 0.0;
      f.at(j1, j2) = evaluate(radial, rr);
    }
  return Potential2D(std::move(f));
}

}  // namespace ist
