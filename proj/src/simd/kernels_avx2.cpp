#include <immintrin.h>

#include <cmath>

#include "levy/simd/kernels.hpp"

namespace levy::simd {

namespace {

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void cosine_series_avx2(std::span<const double> coeff, std::span<const double> freq, double start,
                        double step, std::span<double> out) {
  const std::size_t n = out.size();
  const std::size_t nv = n - n % 4;
  double* o = out.data();
  for (std::size_t m = 0; m < coeff.size(); ++m) {
    const double u = freq[m];
    const __m256d a = _mm256_set1_pd(coeff[m]);
    // Lanes hold j, j+1, j+2, j+3 and advance by 4 * step per iteration.
    const __m256d cd = _mm256_set1_pd(std::cos(4.0 * step * u));
    const __m256d sd = _mm256_set1_pd(std::sin(4.0 * step * u));
    for (std::size_t j0 = 0; j0 < nv; j0 += kReseedInterval) {
      alignas(32) double c0[4];
      alignas(32) double s0[4];
      for (int l = 0; l < 4; ++l) {
        const double theta = (start + static_cast<double>(j0 + l) * step) * u;
        c0[l] = std::cos(theta);
        s0[l] = std::sin(theta);
      }
      __m256d c = _mm256_load_pd(c0);
      __m256d s = _mm256_load_pd(s0);
      const std::size_t j1 = std::min(nv, j0 + kReseedInterval);
      for (std::size_t j = j0; j < j1; j += 4) {
        _mm256_storeu_pd(o + j, _mm256_fmadd_pd(a, c, _mm256_loadu_pd(o + j)));
        const __m256d cn = _mm256_fmsub_pd(c, cd, _mm256_mul_pd(s, sd));
        s = _mm256_fmadd_pd(s, cd, _mm256_mul_pd(c, sd));
        c = cn;
      }
    }
    for (std::size_t j = nv; j < n; ++j) {
      o[j] += coeff[m] * std::cos((start + static_cast<double>(j) * step) * u);
    }
  }
}

double dot_avx2(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const double* pa = a.data();
  const double* pb = b.data();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 4), _mm256_loadu_pd(pb + i + 4), acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += pa[i] * pb[i];
  return acc;
}

void matvec_avx2(std::span<const double> rows, std::size_t n_cols, std::span<const double> x,
                 std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = dot_avx2(rows.subspan(i * n_cols, n_cols), x);
  }
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{"avx2", &cosine_series_avx2, &dot_avx2, &matvec_avx2};
  return table;
}

}  // namespace levy::simd
