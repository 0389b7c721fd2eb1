#pragma once

#include "ist/dsii_scatter.hpp"
#include "ist/zs_direct.hpp"

namespace ist {

// Test-data families used by the experiment harness. Each carries its
// closed form so integrators can sample off the grid without ringing.
enum class PotentialFamily { gaussian, box, sech };

PotentialFamily potential_family_from_string(const std::string& name);
std::string to_string(PotentialFamily f);

struct PotentialSpec {
  PotentialFamily family = PotentialFamily::gaussian;
  double amplitude = 1.0;
  double width = 1.0;   // box: edge length, with the box supported on [0, width)
  double center = 0.0;
  double chirp = 0.0;   // optional phase exp(i chirp x) to make data complex
};

cd evaluate(const PotentialSpec& s, double x);
Potential1D make_potential(const PotentialSpec& s, const Grid1D& g);
Potential2D make_potential_2d(const PotentialSpec& s, const Grid2D& g);

}  // namespace ist
