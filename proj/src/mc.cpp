#include "csi/mc.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <vector>

#include "csi/errors.hpp"

namespace csi {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Stream::Stream(std::uint64_t seed, std::uint64_t shard) {
  std::uint64_t a = splitmix64(seed);
  std::uint64_t b = splitmix64(a ^ splitmix64(shard + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32), static_cast<std::uint32_t>(b),
                    static_cast<std::uint32_t>(b >> 32)};
  engine_.seed(seq);
}

double Stream::open_uniform() {
  double u;
  do u = uniform();
  while (u == 0.0);
  return u;
}

void ShardAccumulator::merge(const ShardAccumulator& o) {
  sum.add(o.sum.sum);
  sum.add(-o.sum.carry);
  sum_sq.add(o.sum_sq.sum);
  sum_sq.add(-o.sum_sq.carry);
  count += o.count;
  rejected += o.rejected;
}

MCEstimate combine(const MCEstimate& a, double c, const MCEstimate& b) {
  MCEstimate r = a;
  r.value = a.value + c * b.value;
  r.std_error = std::sqrt(a.std_error * a.std_error + c * c * b.std_error * b.std_error);
  r.samples = a.samples + b.samples;
  r.rejected = a.rejected + b.rejected;
  r.wall_seconds = a.wall_seconds + b.wall_seconds;
  return r;
}

int default_shards() {
  if (const char* env = std::getenv("CSI_SHARDS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 4096) return static_cast<int>(v);
  }
  return 16;
}

int resolve_shards(int requested) { return requested > 0 ? requested : default_shards(); }

MCEstimate run_mc(const MCOptions& opt, const ShardFn& fn) {
  if (opt.samples < 2) throw InputError("Monte Carlo needs at least 2 samples");
  const int shards = resolve_shards(opt.shards);
  int workers = opt.workers > 0 ? opt.workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, shards);

  auto start = std::chrono::steady_clock::now();
  std::vector<ShardAccumulator> acc(shards);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&]() {
    for (int s = next++; s < shards; s = next++) {
      if (failed) return;
      std::uint64_t count = opt.samples / shards + (static_cast<std::uint64_t>(s) < opt.samples % shards ? 1 : 0);
      try {
        Stream stream(opt.seed, static_cast<std::uint64_t>(s));
        fn(stream, count, acc[s]);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // pairwise merge in a fixed tree
  for (int width = 1; width < shards; width *= 2)
    for (int i = 0; i + width < shards; i += 2 * width) acc[i].merge(acc[i + width]);
  const ShardAccumulator& total = acc[0];

  MCEstimate e;
  e.samples = total.count;
  e.seed = opt.seed;
  e.shards = shards;
  e.rejected = total.rejected;
  const double n = static_cast<double>(total.count);
  e.value = total.sum.value() / n;
  double var = (total.sum_sq.value() - n * e.value * e.value) / (n - 1);
  e.std_error = std::sqrt(std::max(var, 0.0) / n);
  e.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return e;
}

void require_finite(const MCEstimate& e, const std::string& what) {
  if (!std::isfinite(e.value) || !std::isfinite(e.std_error))
    throw ConvergenceError(what + ": non-finite Monte Carlo estimate");
}

}  // namespace csi
