#pragma once

#include <cstdint>
#include <random>

namespace taexplore {

// What a random stream is used for. Each (run, purpose) pair owns one stream
// so results do not depend on the order in which streams are consumed.
enum class StreamPurpose : std::uint64_t {
  kInitState = 1,
  kDynamicsNoise = 2,
  kPolicySample = 3,
  kWeightInit = 4,
  kMinibatchShuffle = 5,
};

// SplitMix64 finalizer; used to derive well-separated engine seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed),
        stream_id_(stream_id),
        engine_(mix64(mix64(seed) ^ (stream_id * 0xd1342543de82ef95ULL + 1))) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Uniform on [0, 1).
  double uniform() { return std::generate_canonical<double, 53>(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() { return normal_(engine_); }
  bool coin() { return (engine_() >> 63) != 0; }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline RngStream make_stream(std::uint64_t master_seed, std::uint64_t run,
                             StreamPurpose purpose) {
  const std::uint64_t id =
      mix64(run * 0x100000001b3ULL + static_cast<std::uint64_t>(purpose));
  return RngStream(master_seed, id);
}

}  // namespace taexplore
