#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace dmpfem {

/// Pairwise (cascade) summation. The reduction tree depends only on the
/// length of the input, so results are reproducible for a fixed ordering.
double pairwise_sum(std::span<const double> values);

/// Worker count: DMPFEM_THREADS if set and positive, otherwise hardware
/// concurrency. Always >= 1.
unsigned worker_count();

/// Runs body(i) for i in [0, n) over contiguous chunks. body must only write
/// to slots owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// splitmix64 generator; small, seedable and identical on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace dmpfem
