#include <immintrin.h>

#include "csi/simd.hpp"

namespace csi::simd_detail {

namespace {
constexpr double kInv4Pi = 0.079577471545947667884441881686257181;
}

void gauss_kernel_avx2(const GaussBatch& b) {
  const std::size_t n = b.n;
  const __m256d inv4pi = _mm256_set1_pd(kInv4Pi);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(b.p[0] + i), _mm256_loadu_pd(b.q[0] + i));
    __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(b.p[1] + i), _mm256_loadu_pd(b.q[1] + i));
    __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(b.p[2] + i), _mm256_loadu_pd(b.q[2] + i));
    __m256d ax = _mm256_loadu_pd(b.dp[0] + i), ay = _mm256_loadu_pd(b.dp[1] + i), az = _mm256_loadu_pd(b.dp[2] + i);
    __m256d bx = _mm256_loadu_pd(b.dq[0] + i), by = _mm256_loadu_pd(b.dq[1] + i), bz = _mm256_loadu_pd(b.dq[2] + i);
    __m256d cx = _mm256_sub_pd(_mm256_mul_pd(ay, bz), _mm256_mul_pd(az, by));
    __m256d cy = _mm256_sub_pd(_mm256_mul_pd(az, bx), _mm256_mul_pd(ax, bz));
    __m256d cz = _mm256_sub_pd(_mm256_mul_pd(ax, by), _mm256_mul_pd(ay, bx));
    __m256d num = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(cx, dx), _mm256_mul_pd(cy, dy)), _mm256_mul_pd(cz, dz));
    __m256d r2 = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)), _mm256_mul_pd(dz, dz));
    __m256d den = _mm256_mul_pd(r2, _mm256_sqrt_pd(r2));
    _mm256_storeu_pd(b.out + i, _mm256_div_pd(_mm256_mul_pd(inv4pi, num), den));
  }
  gauss_kernel_scalar(b, i, n);
}

void det_avx2(int dim, std::size_t count, double* a, double* out) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  auto ptr = [&](int i, int j, std::size_t l) { return a + (static_cast<std::size_t>(i) * dim + j) * count + l; };
  std::size_t l = 0;
  for (; l + 4 <= count; l += 4) {
    __m256d sign = one;
    __m256d singular = zero;  // all-ones lanes once a pivot column is zero
    for (int k = 0; k < dim; ++k) {
      __m256d best = _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(ptr(k, k, l)));
      __m256d piv = _mm256_set1_pd(k);
      for (int r = k + 1; r < dim; ++r) {
        __m256d v = _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(ptr(r, k, l)));
        __m256d gt = _mm256_cmp_pd(v, best, _CMP_GT_OQ);
        best = _mm256_blendv_pd(best, v, gt);
        piv = _mm256_blendv_pd(piv, _mm256_set1_pd(r), gt);
      }
      singular = _mm256_or_pd(singular, _mm256_cmp_pd(best, zero, _CMP_EQ_OQ));
      __m256d moved = _mm256_cmp_pd(piv, _mm256_set1_pd(k), _CMP_NEQ_OQ);
      sign = _mm256_blendv_pd(sign, _mm256_xor_pd(sign, sign_mask), moved);
      for (int r = k + 1; r < dim; ++r) {
        __m256d take = _mm256_cmp_pd(piv, _mm256_set1_pd(r), _CMP_EQ_OQ);
        if (_mm256_movemask_pd(take) == 0) continue;
        for (int j = 0; j < dim; ++j) {
          __m256d top = _mm256_loadu_pd(ptr(k, j, l));
          __m256d row = _mm256_loadu_pd(ptr(r, j, l));
          _mm256_storeu_pd(ptr(k, j, l), _mm256_blendv_pd(top, row, take));
          _mm256_storeu_pd(ptr(r, j, l), _mm256_blendv_pd(row, top, take));
        }
      }
      __m256d pivot = _mm256_loadu_pd(ptr(k, k, l));
      for (int i = k + 1; i < dim; ++i) {
        __m256d f = _mm256_div_pd(_mm256_loadu_pd(ptr(i, k, l)), pivot);
        for (int j = k + 1; j < dim; ++j) {
          __m256d v = _mm256_sub_pd(_mm256_loadu_pd(ptr(i, j, l)), _mm256_mul_pd(f, _mm256_loadu_pd(ptr(k, j, l))));
          _mm256_storeu_pd(ptr(i, j, l), v);
        }
      }
    }
    __m256d det = one;
    for (int k = 0; k < dim; ++k) det = _mm256_mul_pd(det, _mm256_loadu_pd(ptr(k, k, l)));
    det = _mm256_mul_pd(det, sign);
    _mm256_storeu_pd(out + l, _mm256_blendv_pd(det, zero, singular));
  }
  det_scalar(dim, count, a, out, l, count);
}

}  // namespace csi::simd_detail
