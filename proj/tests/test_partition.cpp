#include <gtest/gtest.h>

#include <random>

#include "latcomm/partition.hpp"
#include "oracles.hpp"
#include "random_partitions.hpp"

using namespace latcomm;

namespace {

LabeledPartition quarters() {
  return {{{{0.5, 1.0, 0.0, 0.5}, CellLabel::p},
           {{0.0, 0.5, 0.5, 1.0}, CellLabel::q},
           {{0.0, 0.5, 0.0, 0.5}, CellLabel::undecided},
           {{0.5, 1.0, 0.5, 1.0}, CellLabel::undecided}}};
}

}  // namespace

TEST(CellProbability, Examples) {
  EXPECT_EQ(cell_probability({0, 1, 0, 1}), 1.0);
  EXPECT_EQ(cell_probability({0.5, 1, 0, 0.5}), 0.25);
  EXPECT_EQ(cell_probability({0, 0.5, 0, 0.25}), 0.125);
}

TEST(PartitionEntropy, Examples) {
  EXPECT_DOUBLE_EQ(partition_entropy(quarters()), 2.0);
  const LabeledPartition example{{{{0.5, 1.0, 0.5, 1.0}, CellLabel::p},
                                  {{0.0, 0.5, 0.0, 1.0}, CellLabel::q},
                                  {{0.5, 1.0, 0.0, 0.5}, CellLabel::q}}};
  EXPECT_DOUBLE_EQ(partition_entropy(example), 1.5);
  EXPECT_EQ(partition_entropy({{{{0, 1, 0, 1}, CellLabel::undecided}}}), 0.0);
}

TEST(IsZeroError, Examples) {
  EXPECT_TRUE(is_zero_error(quarters(), TargetFunction::MinIndicator));
  EXPECT_FALSE(is_zero_error({{{{0, 1, 0, 1}, CellLabel::p}}}, TargetFunction::MinIndicator));
  const LabeledPartition vertex{{{{0.5, 1.0, 0.5, 1.0}, CellLabel::p},
                                 {{0.0, 0.5, 0.0, 1.0}, CellLabel::q},
                                 {{0.5, 1.0, 0.0, 0.5}, CellLabel::q}}};
  EXPECT_TRUE(is_zero_error(vertex, TargetFunction::Quadrant));
  EXPECT_FALSE(is_zero_error(vertex, TargetFunction::MinIndicator));
  // a q-cell reaching into x1 > x2 is an error
  EXPECT_FALSE(is_zero_error({{{{0.0, 0.6, 0.5, 1.0}, CellLabel::q}}}, TargetFunction::MinIndicator));
}

TEST(Validate, RejectsBadPartitions) {
  EXPECT_NO_THROW(validate(quarters()));
  auto gap = quarters();
  gap.cells.pop_back();
  EXPECT_THROW(validate(gap), std::invalid_argument);
  auto outside = quarters();
  outside.cells[0].rect.x_hi = 1.5;
  EXPECT_THROW(validate(outside), std::invalid_argument);
  auto empty = quarters();
  empty.cells.push_back({{0.3, 0.3, 0.0, 1.0}, CellLabel::p});
  EXPECT_THROW(validate(empty), std::invalid_argument);
}

TEST(AreaBelowDiagonal, MatchesSampling) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    const Rect r{std::min(a, b), std::max(a, b), std::min(c, d), std::max(c, d)};
    // midpoint grid count of x1 >= x2 inside r
    const int n = 300;
    long below = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double x = r.x_lo + (i + 0.5) * r.width() / n;
        const double y = r.y_lo + (j + 0.5) * r.height() / n;
        below += x >= y;
      }
    }
    EXPECT_NEAR(area_below_diagonal(r), r.area() * below / (n * n), 2.0 * r.area() / n + 1e-12);
  }
  EXPECT_DOUBLE_EQ(area_below_diagonal({0, 1, 0, 1}), 0.5);
  EXPECT_DOUBLE_EQ(area_below_diagonal({0.5, 1, 0, 0.5}), 0.25);
  EXPECT_DOUBLE_EQ(area_below_diagonal({0, 0.5, 0.5, 1}), 0.0);
}

TEST(RandomPartitions, AreValidAndZeroError) {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 200; ++i) {
    const auto part = testing_support::random_zero_error_partition(rng, 4);
    EXPECT_NO_THROW(validate(part));
    EXPECT_TRUE(is_zero_error(part, TargetFunction::MinIndicator));
  }
}

TEST(Labels, RoundTrip) {
  for (auto l : {CellLabel::p, CellLabel::q, CellLabel::undecided}) {
    EXPECT_EQ(label_from_string(to_string(l)), l);
  }
  EXPECT_THROW(label_from_string("x"), std::invalid_argument);
}
