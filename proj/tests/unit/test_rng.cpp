#include <gtest/gtest.h>

#include <set>

#include "papal/rng.hpp"

using namespace papal;

TEST(Rng, SameKeySameSequence) {
  const StreamKey key{42, 3, StreamTag::kChainX};
  CounterStream a = key.stream(7);
  CounterStream b = key.stream(7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Rng, StreamsDifferAcrossEveryKeyField) {
  const StreamKey base{42, 3, StreamTag::kChainX};
  std::set<std::uint64_t> firsts;
  firsts.insert(base.stream(0)());
  firsts.insert(base.stream(1)());
  firsts.insert(StreamKey{43, 3, StreamTag::kChainX}.stream(0)());
  firsts.insert(StreamKey{42, 4, StreamTag::kChainX}.stream(0)());
  firsts.insert(StreamKey{42, 3, StreamTag::kChainY}.stream(0)());
  EXPECT_EQ(firsts.size(), 5u);
}

TEST(Rng, CounterAdvancesAndKeyIsStable) {
  CounterStream s(123);
  s();
  s();
  EXPECT_EQ(s.counter(), 2u);
  EXPECT_EQ(s.key(), 123u);
}

TEST(Rng, NormalDrawsHaveUnitMoments) {
  ParticleRng rng(StreamKey{1, 0, StreamTag::kUser}.stream(0));
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
}

TEST(Rng, UniformStaysInUnitInterval) {
  ParticleRng rng(StreamKey{9, 0, StreamTag::kUser}.stream(3));
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}
