#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace papal {

// Counter-based generator: the n-th output is a SplitMix64 finalizer applied to
// key + n * golden-gamma, so a stream is fully described by (key, counter) and
// streams for distinct particles never share state.
class CounterStream {
 public:
  using result_type = std::uint64_t;

  CounterStream() = default;
  explicit CounterStream(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);

// Stream purposes; part of the derivation key so that e.g. the Langevin noise
// of a chain is independent of the minibatch indices drawn for the same chain.
enum class StreamTag : std::uint32_t {
  kPriorX = 1,
  kPriorY = 2,
  kChainX = 3,
  kChainY = 4,
  kSubsampleX = 5,
  kSubsampleY = 6,
  kPayoffNoise = 7,
  kOutput = 8,
  kBaseline = 9,
  kUser = 100,
};

struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t generation = 0;
  StreamTag tag = StreamTag::kUser;

  CounterStream stream(std::uint64_t index) const;
};

// Gaussian and uniform variates drawn from one particle's stream.
class ParticleRng {
 public:
  ParticleRng() = default;
  explicit ParticleRng(CounterStream s) : engine_(s) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  CounterStream& engine() { return engine_; }

 private:
  CounterStream engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace papal
