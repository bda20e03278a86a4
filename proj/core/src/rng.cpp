#include "papal/rng.hpp"

namespace papal {

namespace {
constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CounterStream::result_type CounterStream::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * kGoldenGamma);
}

CounterStream StreamKey::stream(std::uint64_t index) const {
  std::uint64_t k = mix64(seed + kGoldenGamma);
  k = mix64(k ^ (generation * 0xd1b54a32d192ed03ULL));
  k = mix64(k ^ (static_cast<std::uint64_t>(tag) * 0x8cb92ba72f3d8dd7ULL));
  k = mix64(k ^ (index * 0xaef17502108ef2d9ULL + 1));
  return CounterStream(k);
}

}  // namespace papal
