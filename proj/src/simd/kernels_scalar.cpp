#include <cmath>

#include "csi/simd.hpp"

namespace csi::simd_detail {

namespace {
constexpr double kInv4Pi = 0.079577471545947667884441881686257181;
}

void gauss_kernel_scalar(const GaussBatch& b, std::size_t begin, std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) {
    double dx = b.p[0][i] - b.q[0][i];
    double dy = b.p[1][i] - b.q[1][i];
    double dz = b.p[2][i] - b.q[2][i];
    double cx = b.dp[1][i] * b.dq[2][i] - b.dp[2][i] * b.dq[1][i];
    double cy = b.dp[2][i] * b.dq[0][i] - b.dp[0][i] * b.dq[2][i];
    double cz = b.dp[0][i] * b.dq[1][i] - b.dp[1][i] * b.dq[0][i];
    double num = cx * dx + cy * dy + cz * dz;
    double r2 = dx * dx + dy * dy + dz * dz;
    b.out[i] = (kInv4Pi * num) / (r2 * std::sqrt(r2));
  }
}

void det_scalar(int dim, std::size_t count, double* a, double* out, std::size_t begin, std::size_t end) {
  auto at = [&](int i, int j, std::size_t l) -> double& { return a[(static_cast<std::size_t>(i) * dim + j) * count + l]; };
  for (std::size_t l = begin; l < end; ++l) {
    double sign = 1.0;
    bool zero = false;
    for (int k = 0; k < dim; ++k) {
      int p = k;
      double best = std::fabs(at(k, k, l));
      for (int r = k + 1; r < dim; ++r) {
        double v = std::fabs(at(r, k, l));
        if (v > best) {
          best = v;
          p = r;
        }
      }
      if (best == 0.0) zero = true;
      if (p != k) {
        for (int j = 0; j < dim; ++j) std::swap(at(k, j, l), at(p, j, l));
        sign = -sign;
      }
      for (int i = k + 1; i < dim; ++i) {
        double f = at(i, k, l) / at(k, k, l);
        for (int j = k + 1; j < dim; ++j) at(i, j, l) = at(i, j, l) - f * at(k, j, l);
      }
    }
    double det = 1.0;
    for (int k = 0; k < dim; ++k) det = det * at(k, k, l);
    out[l] = zero ? 0.0 : det * sign;
  }
}

}  // namespace csi::simd_detail
