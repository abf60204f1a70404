#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>

namespace csi {

// SplitMix64 finalizer; used to derive independent shard seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Per-shard random stream. The engine is seeded from (seed, shard) only, so
// a shard produces the same numbers whichever worker runs it.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t shard);
  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform in (0, 1).
  double open_uniform();
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Compensated summation.
struct KahanSum {
  double sum = 0;
  double carry = 0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

struct ShardAccumulator {
  KahanSum sum;
  KahanSum sum_sq;
  std::uint64_t count = 0;
  std::uint64_t rejected = 0;

  void add(double x) {
    sum.add(x);
    sum_sq.add(x * x);
    ++count;
  }
  // A sample whose contribution is dropped; it still counts as a draw.
  void reject() {
    ++count;
    ++rejected;
  }
  void merge(const ShardAccumulator& o);
};

struct MCEstimate {
  double value = 0;
  double std_error = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  int shards = 0;
  std::uint64_t rejected = 0;
  double wall_seconds = 0;

  double rejection_rate() const { return samples ? static_cast<double>(rejected) / samples : 0.0; }
};

// a + c*b with independent errors.
MCEstimate combine(const MCEstimate& a, double c, const MCEstimate& b);

struct MCOptions {
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 1;
  int shards = 0;   // 0: default_shards()
  int workers = 0;  // 0: hardware concurrency, capped at shards
};

// CSI_SHARDS from the environment, else 16.
int default_shards();
int resolve_shards(int requested);

// Draws `count` samples from the stream into the accumulator.
using ShardFn = std::function<void(Stream& stream, std::uint64_t count, ShardAccumulator& acc)>;

// Splits the samples over the shards, runs them on worker threads and
// merges the accumulators pairwise in shard order. The result depends on
// (seed, samples, shards) only.
MCEstimate run_mc(const MCOptions& opt, const ShardFn& fn);

// Throws ConvergenceError when the estimate is not finite.
void require_finite(const MCEstimate& e, const std::string& what);

}  // namespace csi
