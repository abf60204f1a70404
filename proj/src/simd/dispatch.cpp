#include <atomic>
#include <cstdlib>

#include "csi/errors.hpp"
#include "csi/simd.hpp"

namespace csi {

namespace {

Kernel initial_kernel() {
  Kernel best = cpu_has_avx2() ? Kernel::avx2 : Kernel::scalar;
  const char* env = std::getenv("CSI_KERNEL");
  if (!env || std::string(env) == "auto") return best;
  std::string v(env);
  if (v == "scalar") return Kernel::scalar;
  if (v == "avx2" && cpu_has_avx2()) return Kernel::avx2;
  return best;
}

std::atomic<Kernel>& current() {
  static std::atomic<Kernel> k{initial_kernel()};
  return k;
}

}  // namespace

bool cpu_has_avx2() {
  static const bool has = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return has;
}

Kernel active_kernel() { return current().load(std::memory_order_relaxed); }

void set_active_kernel(Kernel k) {
  if (k == Kernel::avx2 && !cpu_has_avx2()) throw CapabilityError("this CPU does not support AVX2");
  current().store(k, std::memory_order_relaxed);
}

Kernel parse_kernel(const std::string& name) {
  if (name == "scalar") return Kernel::scalar;
  if (name == "avx2") return Kernel::avx2;
  if (name == "auto") return cpu_has_avx2() ? Kernel::avx2 : Kernel::scalar;
  throw InputError("unknown kernel '" + name + "' (expected scalar, avx2 or auto)");
}

std::string kernel_name(Kernel k) { return k == Kernel::avx2 ? "avx2" : "scalar"; }

void gauss_kernel_batch(const GaussBatch& b, Kernel k) {
  if (k == Kernel::avx2 && cpu_has_avx2())
    simd_detail::gauss_kernel_avx2(b);
  else
    simd_detail::gauss_kernel_scalar(b, 0, b.n);
}

void det_batch(int dim, std::size_t count, double* a, double* out, Kernel k) {
  if (dim <= 0) {
    for (std::size_t l = 0; l < count; ++l) out[l] = 1.0;
    return;
  }
  if (k == Kernel::avx2 && cpu_has_avx2())
    simd_detail::det_avx2(dim, count, a, out);
  else
    simd_detail::det_scalar(dim, count, a, out, 0, count);
}

}  // namespace csi
