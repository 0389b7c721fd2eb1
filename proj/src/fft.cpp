#include "ist/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace ist::fft {
namespace {

std::mutex planner_mutex;

fftw_plan get_plan_1d(int n, int sign) {
  static std::map<std::pair<int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(planner_mutex);
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<cd> a(n), b(n);
  fftw_plan p = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                                 reinterpret_cast<fftw_complex*>(b.data()), sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache[key] = p;
  return p;
}

fftw_plan get_plan_2d(int n1, int n2, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(planner_mutex);
  auto key = std::make_tuple(n1, n2, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<cd> a(std::size_t(n1) * n2), b(std::size_t(n1) * n2);
  fftw_plan p = fftw_plan_dft_2d(n1, n2, reinterpret_cast<fftw_complex*>(a.data()),
                                 reinterpret_cast<fftw_complex*>(b.data()), sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache[key] = p;
  return p;
}

void exec(fftw_plan p, const cd* in, cd* out) {
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cd*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

void forward(const cd* in, cd* out, int n) { exec(get_plan_1d(n, FFTW_FORWARD), in, out); }
void inverse(const cd* in, cd* out, int n) { exec(get_plan_1d(n, FFTW_BACKWARD), in, out); }
void forward2(const cd* in, cd* out, int n1, int n2) {
  exec(get_plan_2d(n1, n2, FFTW_FORWARD), in, out);
}
void inverse2(const cd* in, cd* out, int n1, int n2) {
  exec(get_plan_2d(n1, n2, FFTW_BACKWARD), in, out);
}

std::vector<cd> forward(const std::vector<cd>& in, int n) {
  std::vector<cd> out(n);
  forward(in.data(), out.data(), n);
  return out;
}
std::vector<cd> inverse_normalized(const std::vector<cd>& in, int n) {
  std::vector<cd> out(n);
  inverse(in.data(), out.data(), n);
  const double s = 1.0 / n;
  for (cd& z : out) z *= s;
  return out;
}
std::vector<cd> forward2(const std::vector<cd>& in, int n1, int n2) {
  std::vector<cd> out(in.size());
  forward2(in.data(), out.data(), n1, n2);
  return out;
}
std::vector<cd> inverse2_normalized(const std::vector<cd>& in, int n1, int n2) {
  std::vector<cd> out(in.size());
  inverse2(in.data(), out.data(), n1, n2);
  const double s = 1.0 / (double(n1) * n2);
  for (cd& z : out) z *= s;
  return out;
}

}  // namespace ist::fft
