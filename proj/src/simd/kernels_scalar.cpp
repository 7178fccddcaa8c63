#include <cmath>

#include "levy/simd/kernels.hpp"

namespace levy::simd {

namespace {

void cosine_series_scalar(std::span<const double> coeff, std::span<const double> freq, double start,
                          double step, std::span<double> out) {
  const std::size_t n = out.size();
  for (std::size_t m = 0; m < coeff.size(); ++m) {
    const double a = coeff[m];
    const double u = freq[m];
    const double cd = std::cos(step * u);
    const double sd = std::sin(step * u);
    for (std::size_t j0 = 0; j0 < n; j0 += kReseedInterval) {
      const double theta = (start + static_cast<double>(j0) * step) * u;
      double c = std::cos(theta);
      double s = std::sin(theta);
      const std::size_t j1 = std::min(n, j0 + kReseedInterval);
      for (std::size_t j = j0; j < j1; ++j) {
        out[j] += a * c;
        const double cn = c * cd - s * sd;
        s = s * cd + c * sd;
        c = cn;
      }
    }
  }
}

double dot_scalar(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void matvec_scalar(std::span<const double> rows, std::size_t n_cols, std::span<const double> x,
                   std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = dot_scalar(rows.subspan(i * n_cols, n_cols), x);
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", &cosine_series_scalar, &dot_scalar, &matvec_scalar};
  return table;
}

}  // namespace levy::simd
