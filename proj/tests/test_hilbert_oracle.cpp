#include <gtest/gtest.h>

#include "cusp_atlas/hilbert_oracle.hpp"
#include "oracle/frozen_values.inc"
#include "support.hpp"

using namespace cusp_atlas;
using cusp_atlas::oracle::hilbert_oracle;
using cusp_atlas::oracle::hilbert_oracle_detailed;

TEST(HilbertOracle, Examples) {
  EXPECT_EQ(hilbert_oracle(1, 5, Place::prime(5)), 1);
  EXPECT_EQ(hilbert_oracle(-1, -1, Place::prime(2)), -1);
  EXPECT_EQ(hilbert_oracle(3, 7, Place::prime(7)), qform::hilbert_symbol(3, 7, Place::prime(7)));
  EXPECT_EQ(hilbert_oracle(7, 7, Place::prime(7)), -1);
  EXPECT_EQ(hilbert_oracle(-1, -1, Place::infinity()), -1);
  EXPECT_EQ(hilbert_oracle(-1, 3, Place::infinity()), 1);
}

TEST(HilbertOracle, DepthFollowsValuation) {
  const auto r = hilbert_oracle_detailed(-1, -1, Place::prime(2));
  EXPECT_EQ(r.depth, 2 * (1 + 2) + 1);
  EXPECT_FALSE(r.reduced_depth);
  const auto big = hilbert_oracle_detailed(13, 26, Place::prime(13));
  EXPECT_TRUE(big.reduced_depth);
  EXPECT_EQ(big.depth, 3);
}

TEST(HilbertOracle, NormalizesSquareFactors) {
  EXPECT_EQ(hilbert_oracle(4 * 7, 9 * 7, Place::prime(7)), hilbert_oracle(7, 7, Place::prime(7)));
}

TEST(HilbertOracle, AgreesWithFrozenBruteForce) {
  for (const auto& row : frozen::kHilbert) {
    ASSERT_EQ(hilbert_oracle(row.a, row.b, Place::prime(row.p)), row.value) << row.a << ", " << row.b << " at " << row.p;
  }
}

TEST(HilbertOracle, AgreesWithClosedFormUpToThirty) {
  const auto values = testing_support::squarefree_range(30);
  std::vector<Place> places{Place::infinity()};
  for (const Prime p : {2, 3, 5, 7, 11, 13}) places.push_back(Place::prime(p));
  for (const long a : values)
    for (const long b : values)
      for (const Place v : places)
        ASSERT_EQ(hilbert_oracle(a, b, v), qform::hilbert_symbol(a, b, v)) << a << ", " << b << " at " << v.to_string();
}
