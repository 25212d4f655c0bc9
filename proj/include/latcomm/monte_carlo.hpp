#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "latcomm/protocol.hpp"

namespace latcomm {

/// Default seed used by the CLI and the acceptance suite.
inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// Samples per independently seeded block. Block b always draws from
/// splitmix64(seed + b), so results do not depend on how blocks are spread
/// over workers.
inline constexpr std::uint64_t kSamplesPerBlock = 4096;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Uniform on the open interval (0, 1), on the grid (k + 1/2) 2^-53.
inline double open_unit(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

struct RunStats {
  std::uint64_t sample_count = 0;
  double mean_bits = 0.0;
  double mean_rounds = 0.0;
  double mean_messages = 0.0;
  std::uint64_t undecided = 0;
  std::uint64_t seed = kDefaultSeed;
};

namespace detail {

struct Tally {
  std::uint64_t bits = 0;
  std::uint64_t rounds = 0;
  std::uint64_t messages = 0;
  std::uint64_t undecided = 0;
};

/// Calls visit(x1, x2, transcript) for every sample of block `block`.
template <typename Visit>
void run_block(const ProtocolTree& tree, std::uint64_t seed, std::uint64_t block,
               std::uint64_t samples, Visit&& visit) {
  std::mt19937_64 rng(splitmix64(seed + block));
  const Rect& d = tree.domain();
  const std::uint64_t begin = block * kSamplesPerBlock;
  const std::uint64_t end = std::min(samples, begin + kSamplesPerBlock);
  for (std::uint64_t i = begin; i < end; ++i) {
    const double x1 = d.x_lo + open_unit(rng) * d.width();
    const double x2 = d.y_lo + open_unit(rng) * d.height();
    visit(x1, x2, run_protocol(tree, x1, x2));
  }
}

}  // namespace detail

/// Worker count from LATCOMM_THREADS, else the hardware concurrency.
inline unsigned default_worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LATCOMM_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

/// Runs the protocol on i.i.d. uniform inputs over its domain. Deterministic
/// in (samples, seed) for any worker count: per-block tallies are integers
/// and are merged by summation.
inline RunStats monte_carlo(const ProtocolTree& tree, std::uint64_t samples, std::uint64_t seed,
                            unsigned workers = 0) {
  if (samples == 0) throw std::invalid_argument("monte_carlo: samples must be at least 1");
  if (workers == 0) workers = default_worker_count();
  const std::uint64_t blocks = (samples + kSamplesPerBlock - 1) / kSamplesPerBlock;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, blocks));

  std::vector<detail::Tally> tallies(workers);
  auto work = [&](unsigned w) {
    detail::Tally& t = tallies[w];
    for (std::uint64_t b = w; b < blocks; b += workers) {
      detail::run_block(tree, seed, b, samples, [&](double, double, const Transcript& tr) {
        t.bits += tr.bits();
        t.rounds += tr.rounds();
        t.messages += tr.stopping_time();
        if (tr.output == Outcome::undecided) ++t.undecided;
      });
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  detail::Tally total;
  for (const auto& t : tallies) {
    total.bits += t.bits;
    total.rounds += t.rounds;
    total.messages += t.messages;
    total.undecided += t.undecided;
  }
  const auto n = static_cast<double>(samples);
  return {samples, static_cast<double>(total.bits) / n, static_cast<double>(total.rounds) / n,
          static_cast<double>(total.messages) / n, total.undecided, seed};
}

/// Replays the same samples as monte_carlo, in sample order.
inline void for_each_sample(const ProtocolTree& tree, std::uint64_t samples, std::uint64_t seed,
                            const std::function<void(double, double, const Transcript&)>& visit) {
  const std::uint64_t blocks = (samples + kSamplesPerBlock - 1) / kSamplesPerBlock;
  for (std::uint64_t b = 0; b < blocks; ++b) detail::run_block(tree, seed, b, samples, visit);
}

}  // namespace latcomm
