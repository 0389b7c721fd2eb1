// Times the OpenMP kernels against their serial reference implementations
// and checks that the outputs agree bitwise.

#include <chrono>
#include <cstring>
#include <iostream>

#include "ist/dsii_scatter.hpp"
#include "ist/potentials.hpp"
#include "ist/rhp_inverse.hpp"

using namespace ist;

namespace {

double seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return seconds(t0);
}

bool same_bits(const std::vector<cd>& a, const std::vector<cd>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(cd)) == 0;
}

}  // namespace

int main() {
  std::cout << "kernel, serial_s, parallel_s, speedup, bitwise_equal\n";

  {
    const Grid1D xg(4096, 16.0);
    const Grid1D lg = dual_half_grid(xg);
    PotentialSpec ps;
    ps.amplitude = 0.8;
    Potential1D q = make_potential(ps, xg);
    TransitionData ts, tp;
    const double t_ser = timed([&] { ts = transition_data_serial(q, lg); });
    const double t_par = timed([&] { tp = transition_data(q, lg); });
    std::cout << "transition_data, " << t_ser << ", " << t_par << ", " << t_ser / t_par << ", "
              << (same_bits(ts.a, tp.a) && same_bits(ts.b, tp.b)) << "\n";

    ReflectionCoefficient r = reflection(ts);
    ReconstructionResult rs, rp;
    const double r_ser = timed([&] { rs = reconstruct_q_serial(r, xg); });
    const double r_par = timed([&] { rp = reconstruct_q(r, xg); });
    std::cout << "reconstruct_q, " << r_ser << ", " << r_par << ", " << r_ser / r_par << ", "
              << same_bits(rs.q.field.v, rp.q.field.v) << "\n";
  }

  {
    const Grid2D zg(64, 8.0);
    PotentialSpec ps;
    ps.amplitude = 0.5;
    Potential2D q = make_potential_2d(ps, zg);
    ScatteringOptions so;
    so.k_block = 32;
    DSIIScatteringData ss, sp;
    const double s_ser = timed([&] { ss = scattering_transform_serial(q, 1e-10, so); });
    const double s_par = timed([&] { sp = scattering_transform(q, 1e-10, so); });
    std::cout << "scattering_transform, " << s_ser << ", " << s_par << ", " << s_ser / s_par
              << ", " << same_bits(ss.s, sp.s) << "\n";
  }
  return 0;
}
