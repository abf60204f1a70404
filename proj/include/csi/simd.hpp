#pragma once

#include <cstddef>
#include <string>

namespace csi {

// Batched numeric kernels with a scalar reference and an AVX2 variant. Both
// perform the same IEEE operations in the same order (no FMA contraction),
// so their results are bit-identical.
enum class Kernel { scalar, avx2 };

bool cpu_has_avx2();
// Initially the CSI_KERNEL environment value (scalar, avx2 or auto), else
// the best available.
Kernel active_kernel();
// Throws CapabilityError when AVX2 is requested on a CPU without it.
void set_active_kernel(Kernel k);
Kernel parse_kernel(const std::string& name);  // scalar, avx2, auto
std::string kernel_name(Kernel k);

// Structure-of-arrays batch for the Gauss kernel
//   (1/4pi) ((dp x dq) . (p - q)) / |p - q|^3.
struct GaussBatch {
  std::size_t n = 0;
  const double* p[3] = {};
  const double* q[3] = {};
  const double* dp[3] = {};
  const double* dq[3] = {};
  double* out = nullptr;
};

void gauss_kernel_batch(const GaussBatch& b, Kernel k);
inline void gauss_kernel_batch(const GaussBatch& b) { gauss_kernel_batch(b, active_kernel()); }

// Determinants of `count` dim x dim matrices stored lane-minor: entry (i, j)
// of matrix l is a[(i * dim + j) * count + l]. Gaussian elimination with
// partial pivoting (first strictly largest magnitude); `a` is overwritten.
void det_batch(int dim, std::size_t count, double* a, double* out, Kernel k);
inline void det_batch(int dim, std::size_t count, double* a, double* out) {
  det_batch(dim, count, a, out, active_kernel());
}

namespace simd_detail {
void gauss_kernel_scalar(const GaussBatch& b, std::size_t begin, std::size_t end);
void det_scalar(int dim, std::size_t count, double* a, double* out, std::size_t begin, std::size_t end);
void gauss_kernel_avx2(const GaussBatch& b);
void det_avx2(int dim, std::size_t count, double* a, double* out);
}  // namespace simd_detail

}  // namespace csi
