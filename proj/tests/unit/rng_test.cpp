#include "roadrand/rng.hpp"

#include <gtest/gtest.h>

#include <set>

namespace roadrand {
namespace {

TEST(Rng, DocumentedBitStream) {
  // Reference values of SplitMix64 seeded with 0 (first three outputs).
  CounterRng rng(0);
  EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(rng.next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(rng.next(), 0x06C45D188009454FULL);
  EXPECT_EQ(rng.counter(), 3u);
}

TEST(Rng, UniformRangesAndBelow) {
  CounterRng rng(99);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(rng.below(7), 7u);
    const auto b = rng.between(-3, 3);
    ASSERT_GE(b, -3);
    ASSERT_LE(b, 3);
  }
  EXPECT_EQ(rng.below(1), 0u);
}

TEST(Rng, ImageSeedsDistinct) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 100000; ++i) seeds.insert(image_seed(42, i));
  EXPECT_EQ(seeds.size(), 100000u);
  EXPECT_NE(image_seed(1, 0), image_seed(2, 0));
}

TEST(Rng, SplitStreamsIndependentOfParentPosition) {
  CounterRng a(5);
  CounterRng b(5);
  b.next();
  EXPECT_EQ(a.split(3).next(), b.split(3).next());
  EXPECT_NE(a.split(3).next(), a.split(4).next());
}

}  // namespace
}  // namespace roadrand
