#include <gtest/gtest.h>

#include "cusp_atlas/matrix.hpp"
#include "support.hpp"

using namespace cusp_atlas;

TEST(Matrix, IdentityAndProduct) {
  const RationalMatrix a{{1, 2}, {3, 4}};
  EXPECT_EQ(a * RationalMatrix::identity(2), a);
  EXPECT_EQ(a * a, (RationalMatrix{{7, 10}, {15, 22}}));
  EXPECT_EQ(a.transpose(), (RationalMatrix{{1, 3}, {2, 4}}));
}

TEST(Matrix, DeterminantAndInverse) {
  const RationalMatrix a{{2, 1, 0}, {1, 3, 1}, {0, 1, 4}};
  EXPECT_EQ(determinant(a), 18);
  const auto inv = inverse(a);
  ASSERT_TRUE(inv.has_value());
  EXPECT_EQ(a * *inv, RationalMatrix::identity(3));
  EXPECT_FALSE(inverse(RationalMatrix{{1, 2}, {2, 4}}).has_value());
  EXPECT_EQ(determinant(RationalMatrix{{0, 1}, {1, 0}}), -1);
}

TEST(Matrix, PowerAndBlocks) {
  const RationalMatrix j{{1, 1}, {0, 1}};
  EXPECT_EQ(power(j, 5), (RationalMatrix{{1, 5}, {0, 1}}));
  EXPECT_EQ(power(j, 0), RationalMatrix::identity(2));
  const RationalMatrix b = block_diagonal(j, RationalMatrix{{7}});
  EXPECT_EQ(b.rows(), 3u);
  EXPECT_EQ(b(2, 2), 7);
  EXPECT_EQ(b(0, 2), 0);
}

TEST(Matrix, ShapeMismatchThrows) {
  EXPECT_THROW(RationalMatrix(2, 3) * RationalMatrix(2, 3), std::invalid_argument);
  EXPECT_THROW((RationalMatrix{{1, 2}, {3}}), std::invalid_argument);
}

TEST(Matrix, RandomInverseRoundTrip) {
  testing_support::Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const RationalMatrix m = rng.invertible(4, 5);
    ASSERT_EQ(*inverse(m) * m, RationalMatrix::identity(4));
    ASSERT_EQ(determinant(m) * determinant(*inverse(m)), 1);
  }
}
