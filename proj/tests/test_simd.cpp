#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "csi/errors.hpp"
#include "csi/simd.hpp"
#include "doctest.h"

using namespace csi;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

struct GaussData {
  std::vector<double> v[12];
  std::vector<double> out;
  GaussBatch batch() {
    GaussBatch b;
    b.n = out.size();
    for (int c = 0; c < 3; ++c) {
      b.p[c] = v[c].data();
      b.q[c] = v[3 + c].data();
      b.dp[c] = v[6 + c].data();
      b.dq[c] = v[9 + c].data();
    }
    b.out = out.data();
    return b;
  }
};

GaussData random_gauss(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  GaussData d;
  for (auto& col : d.v)
    for (std::size_t i = 0; i < n; ++i) col.push_back(g(rng));
  d.out.assign(n, 0.0);
  return d;
}

double det_reference(int dim, std::vector<std::vector<long double>> m) {
  long double det = 1;
  for (int k = 0; k < dim; ++k) {
    int p = k;
    for (int r = k + 1; r < dim; ++r)
      if (std::fabs(m[r][k]) > std::fabs(m[p][k])) p = r;
    if (m[p][k] == 0) return 0;
    if (p != k) {
      std::swap(m[p], m[k]);
      det = -det;
    }
    det *= m[k][k];
    for (int i = k + 1; i < dim; ++i) {
      long double f = m[i][k] / m[k][k];
      for (int j = k; j < dim; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return static_cast<double>(det);
}

}  // namespace

TEST_CASE("kernel names parse and round-trip") {
  CHECK(parse_kernel("scalar") == Kernel::scalar);
  CHECK(kernel_name(Kernel::scalar) == "scalar");
  CHECK(kernel_name(Kernel::avx2) == "avx2");
  CHECK_THROWS_AS(parse_kernel("sse9"), InputError);
  if (cpu_has_avx2()) CHECK(parse_kernel("auto") == Kernel::avx2);
}

TEST_CASE("gauss kernel matches the direct formula") {
  auto d = random_gauss(37, 3);
  gauss_kernel_batch(d.batch(), Kernel::scalar);
  for (std::size_t i = 0; i < d.out.size(); ++i) {
    double p[3], q[3], a[3], b[3];
    for (int c = 0; c < 3; ++c) {
      p[c] = d.v[c][i];
      q[c] = d.v[3 + c][i];
      a[c] = d.v[6 + c][i];
      b[c] = d.v[9 + c][i];
    }
    double x[3] = {p[0] - q[0], p[1] - q[1], p[2] - q[2]};
    double cr[3] = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    double want = (cr[0] * x[0] + cr[1] * x[1] + cr[2] * x[2]) / (4 * M_PI * r * r * r);
    CHECK(d.out[i] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("gauss kernel is antisymmetric under swapping the two points") {
  auto d = random_gauss(16, 5);
  gauss_kernel_batch(d.batch(), Kernel::scalar);
  auto swapped = d;
  for (int c = 0; c < 3; ++c) {
    std::swap(swapped.v[c], swapped.v[3 + c]);
    std::swap(swapped.v[6 + c], swapped.v[9 + c]);
  }
  gauss_kernel_batch(swapped.batch(), Kernel::scalar);
  // (dq x dp).(q - p) = (dp x dq).(p - q)
  for (std::size_t i = 0; i < d.out.size(); ++i) CHECK(swapped.out[i] == doctest::Approx(d.out[i]).epsilon(1e-12));
}

TEST_CASE("gauss kernel avx2 is bit-identical to scalar") {
  if (!cpu_has_avx2()) return;
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 64u, 1001u}) {
    auto a = random_gauss(n, 11 + n);
    auto b = a;
    gauss_kernel_batch(a.batch(), Kernel::scalar);
    gauss_kernel_batch(b.batch(), Kernel::avx2);
    for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(a.out[i], b.out[i]));
  }
}

TEST_CASE("batched determinant agrees with an extended-precision reference") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int dim : {1, 2, 3, 6, 9}) {
    const std::size_t count = 13;
    std::vector<double> a(static_cast<std::size_t>(dim) * dim * count), out(count);
    for (auto& x : a) x = g(rng);
    std::vector<std::vector<std::vector<long double>>> mats(count, std::vector<std::vector<long double>>(dim, std::vector<long double>(dim)));
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (std::size_t l = 0; l < count; ++l) mats[l][i][j] = a[(i * dim + j) * count + l];
    det_batch(dim, count, a.data(), out.data(), Kernel::scalar);
    for (std::size_t l = 0; l < count; ++l) CHECK(out[l] == doctest::Approx(det_reference(dim, mats[l])).epsilon(1e-10));
  }
}

TEST_CASE("batched determinant handles permutations and singular matrices") {
  // lane 0: swap matrix (det -1); lane 1: zero column (det 0); lane 2: identity; lane 3: diag(2,3)
  const std::size_t count = 5;
  std::vector<double> a(4 * count, 0.0), out(count);
  auto set = [&](int i, int j, std::size_t l, double v) { a[(i * 2 + j) * count + l] = v; };
  set(0, 1, 0, 1);
  set(1, 0, 0, 1);
  set(0, 1, 1, 4);
  set(1, 1, 1, 2);
  set(0, 0, 2, 1);
  set(1, 1, 2, 1);
  set(0, 0, 3, 2);
  set(1, 1, 3, 3);
  set(0, 0, 4, 1);
  set(1, 1, 4, 1);
  for (Kernel k : {Kernel::scalar, Kernel::avx2}) {
    if (k == Kernel::avx2 && !cpu_has_avx2()) continue;
    auto copy = a;
    det_batch(2, count, copy.data(), out.data(), k);
    CHECK(out[0] == -1.0);
    CHECK(out[1] == 0.0);
    CHECK(out[2] == 1.0);
    CHECK(out[3] == 6.0);
    CHECK(out[4] == 1.0);
  }
}

TEST_CASE("batched determinant avx2 is bit-identical to scalar") {
  if (!cpu_has_avx2()) return;
  std::mt19937_64 rng(19);
  std::normal_distribution<double> g;
  for (int dim : {1, 2, 4, 7, 12}) {
    for (std::size_t count : {1u, 4u, 6u, 33u}) {
      std::vector<double> a(static_cast<std::size_t>(dim) * dim * count);
      for (auto& x : a) x = g(rng);
      // a few exactly singular lanes
      if (count > 2)
        for (int i = 0; i < dim; ++i) a[(i * dim + 0) * count + 2] = 0.0;
      auto b = a;
      std::vector<double> oa(count), ob(count);
      det_batch(dim, count, a.data(), oa.data(), Kernel::scalar);
      det_batch(dim, count, b.data(), ob.data(), Kernel::avx2);
      for (std::size_t l = 0; l < count; ++l) CHECK(same_bits(oa[l], ob[l]));
    }
  }
}

TEST_CASE("active kernel can be switched") {
  Kernel before = active_kernel();
  set_active_kernel(Kernel::scalar);
  CHECK(active_kernel() == Kernel::scalar);
  set_active_kernel(before);
  CHECK(active_kernel() == before);
}
