#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>

namespace gq {

/// splitmix64 step; used to expand seeds into full-entropy state words.
std::uint64_t splitmix64(std::uint64_t& state);

/// xoshiro256++ with a per-stream state derived from (seed, stream). Distinct streams are
/// decorrelated by seeding splitmix64 with seed ^ f(stream), so path i's draws depend only
/// on (seed, i), never on thread layout.
class Rng {
  public:
    Rng(std::uint64_t seed, std::uint64_t stream);
    std::uint64_t next_u64();
    /// Uniform on (0, 1]; never 0, safe under log().
    double next_unit();

  private:
    std::array<std::uint64_t, 4> state_;
};

/// Standard normal sampler, 128-layer ziggurat over an Rng stream.
/// One u64 draw per sample on the fast path; exact tails via the Marsaglia fallback.
class NormalStream {
  public:
    NormalStream(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}
    double next();

  private:
    double fallback(std::int32_t hz, std::uint32_t layer);
    Rng rng_;
};

/// Deterministic pairwise sum: result depends only on values and their order,
/// not on accumulation chunking. O(n log n) error growth ~ O(log n) * eps.
double pairwise_sum(std::span<const double> values);

/// requested > 0 passes through; 0 resolves to the hardware thread count (min 1).
int resolve_threads(int requested);

/// Run body(i) for i in [0, n) on `threads` workers over contiguous chunks.
/// body must write results into per-index slots so output is chunking-independent.
void parallel_paths(long n, int threads, const std::function<void(long)>& body);

/// Adaptive Simpson on [a, b] with absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

}  // namespace gq
