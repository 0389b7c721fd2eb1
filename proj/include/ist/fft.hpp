#pragma once

#include <complex>
#include <vector>

namespace ist {

using cd = std::complex<double>;

// Unnormalized DFT, FFTW sign conventions: forward multiplies by
// exp(-2 pi i j k / n). Plans are cached per size with FFTW_ESTIMATE |
// FFTW_UNALIGNED so results do not depend on buffer addresses or timing;
// plan creation is serialized, execution is reentrant.
namespace fft {

void forward(const cd* in, cd* out, int n);
void inverse(const cd* in, cd* out, int n);  // unnormalized; caller divides by n
void forward2(const cd* in, cd* out, int n1, int n2);
void inverse2(const cd* in, cd* out, int n1, int n2);

std::vector<cd> forward(const std::vector<cd>& in, int n);
std::vector<cd> inverse_normalized(const std::vector<cd>& in, int n);
std::vector<cd> forward2(const std::vector<cd>& in, int n1, int n2);
std::vector<cd> inverse2_normalized(const std::vector<cd>& in, int n1, int n2);

}  // namespace fft
}  // namespace ist
