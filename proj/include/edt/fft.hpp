#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "edt/types.hpp"

namespace edt {

/// Thin wrappers over FFTW complex transforms plus "centered" variants for
/// grids whose node j sits at (j - n/2) * dx and whose dual node k sits at
/// (k - n/2) * 2 pi / (n dx). Row-major storage throughout.
namespace fft {

inline void raw_dft(std::vector<cplx>& data, const std::vector<int>& dims,
                    int sign) {
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  if (n != data.size()) throw std::invalid_argument("raw_dft: size mismatch");
  fftw_plan plan = fftw_plan_dft(
      static_cast<int>(dims.size()), dims.data(),
      reinterpret_cast<fftw_complex*>(data.data()),
      reinterpret_cast<fftw_complex*>(data.data()),
      sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

/// Multiply entry (j0, j1, ...) by prod_d (-1)^{j_d}.
inline void checkerboard(std::vector<cplx>& data, const std::vector<int>& dims) {
  const std::size_t rank = dims.size();
  std::vector<int> idx(rank, 0);
  for (std::size_t lin = 0; lin < data.size(); ++lin) {
    int parity = 0;
    for (std::size_t d = 0; d < rank; ++d) parity += idx[d];
    if (parity & 1) data[lin] = -data[lin];
    for (std::size_t d = rank; d-- > 0;) {
      if (++idx[d] < dims[d]) break;
      idx[d] = 0;
    }
  }
}

/// Centered discrete transform
///   out(k) = sum_j in(j) exp(sign * i * xi_k . x_j)
/// with x_j = (j - n/2) dx and xi_k = (k - n/2) * 2 pi/(n dx) per axis.
/// No scale factor is applied; callers attach their convention.
inline std::vector<cplx> centered_dft(const std::vector<cplx>& in,
                                      const std::vector<int>& dims, int sign) {
  int half_sum = 0;
  for (int d : dims) {
    if (d % 2 != 0)
      throw std::invalid_argument("centered_dft: dimensions must be even");
    half_sum += d / 2;
  }
  std::vector<cplx> data = in;
  checkerboard(data, dims);
  raw_dft(data, dims, sign);
  checkerboard(data, dims);
  // constant phase exp(sign i pi sum_d n_d/2) = (-1)^{sum n_d/2} (even n)
  if (half_sum % 2 != 0)
    for (auto& v : data) v = -v;
  return data;
}

}  // namespace fft
}  // namespace edt
