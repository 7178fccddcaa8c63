#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and, on
// x86-64 builds, an AVX2+FMA variant; the variant is chosen once at runtime
// from CPUID. Setting LEVY_SIMD=scalar in the environment forces the scalar
// path.

#include <cstddef>
#include <span>

namespace levy::simd {

struct KernelTable {
  const char* name;

  /// out[j] += sum_m coeff[m] * cos((start + j * step) * freq[m]).
  /// Evaluated by an angle-addition recurrence reseeded from std::cos every
  /// kReseedInterval steps.
  void (*cosine_series)(std::span<const double> coeff, std::span<const double> freq,
                        double start, double step, std::span<double> out);

  double (*dot)(std::span<const double> a, std::span<const double> b);

  /// out[i] = sum_j rows[i * n_cols + j] * x[j].
  void (*matvec)(std::span<const double> rows, std::size_t n_cols, std::span<const double> x,
                 std::span<double> out);
};

inline constexpr std::size_t kReseedInterval = 256;

const KernelTable& scalar_kernels();
/// nullptr when the AVX2 variant was not built or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();
const KernelTable& active_kernels();

}  // namespace levy::simd
