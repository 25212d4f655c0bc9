#include <gtest/gtest.h>

#include <random>

#include "latcomm/majorization.hpp"
#include "oracles.hpp"
#include "random_partitions.hpp"

using namespace latcomm;

TEST(Majorizes, Examples) {
  const std::vector<double> a{0.5, 0.25, 0.25};
  const std::vector<double> b{1.0 / 3, 1.0 / 3, 1.0 / 3};
  EXPECT_TRUE(majorizes(a, b));
  EXPECT_TRUE(majorizes(a, a));
  EXPECT_FALSE(majorizes(b, a));
}

TEST(Majorizes, PadsShorterVectorWithZeros) {
  const std::vector<double> a{0.5, 0.5};
  const std::vector<double> b{0.25, 0.25, 0.25, 0.25};
  EXPECT_TRUE(majorizes(a, b));
  EXPECT_FALSE(majorizes(b, a));
}

TEST(Majorizes, RejectsDifferentTotals) {
  const std::vector<double> a{0.5, 0.5};
  const std::vector<double> b{0.5, 0.25};
  EXPECT_THROW(majorizes(a, b), std::invalid_argument);
}

TEST(Majorizes, AgreesWithOracleOnRandomPairs) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 5000; ++i) {
    const auto p = oracle::random_simplex(rng, 2 + i % 7);
    const auto q = oracle::random_simplex(rng, 2 + i % 7);
    EXPECT_EQ(majorizes(p, q), oracle::majorizes(p, q));
  }
}

TEST(Majorizes, SchurConcavityOfEntropy) {
  std::mt19937_64 rng(0x5EED);
  int checked = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto p = oracle::random_simplex(rng, 2 + i % 9);
    const auto q = oracle::robin_hood(rng, p, 1 + i % 5);
    ASSERT_TRUE(majorizes(p, q));
    EXPECT_LE(shannon_entropy(p), shannon_entropy(q) + 1e-12);
    ++checked;
  }
  EXPECT_EQ(checked, 10000);
}

namespace {

LabeledPartition traced_example() {
  return {{{{0.6, 0.9, 0.1, 0.4}, CellLabel::p},
           {{0.4, 0.6, 0.0, 0.4}, CellLabel::p},
           {{0.6, 0.9, 0.0, 0.1}, CellLabel::p},
           {{0.9, 1.0, 0.0, 0.4}, CellLabel::p},
           {{0.0, 0.4, 0.0, 0.4}, CellLabel::undecided},
           {{0.4, 1.0, 0.4, 1.0}, CellLabel::undecided},
           {{0.0, 0.4, 0.4, 1.0}, CellLabel::q}}};
}

}  // namespace

TEST(Readjust, ExtremalCellIsFixed) {
  const LabeledPartition part{{{{0.5, 1.0, 0.0, 0.5}, CellLabel::p},
                               {{0.0, 0.5, 0.5, 1.0}, CellLabel::q},
                               {{0.0, 0.5, 0.0, 0.5}, CellLabel::undecided},
                               {{0.5, 1.0, 0.5, 1.0}, CellLabel::undecided}}};
  const auto out = readjust_max_rectangle(part);
  ASSERT_EQ(out.cells.size(), part.cells.size());
  for (std::size_t i = 0; i < out.cells.size(); ++i) {
    EXPECT_EQ(out.cells[i].rect, part.cells[i].rect);
    EXPECT_EQ(out.cells[i].label, part.cells[i].label);
  }
}

TEST(Readjust, GrowsLargestCellIntoCornerSquare) {
  const auto in = traced_example();
  ASSERT_NO_THROW(validate(in));
  const auto out = readjust_max_rectangle(in);
  ASSERT_NO_THROW(validate(out));
  // the max cell [0.6,0.9]x[0.1,0.4] becomes [0.4,1]x[0,0.4]; its neighbours are swallowed
  EXPECT_EQ(out.cells[0].rect, (Rect{0.4, 1.0, 0.0, 0.4}));
  EXPECT_EQ(out.cells[0].label, CellLabel::p);
  EXPECT_EQ(out.cells.size(), 4u);
  EXPECT_TRUE(majorizes(out.probabilities(), in.probabilities()));
  EXPECT_LE(partition_entropy(out), partition_entropy(in));
  EXPECT_TRUE(is_zero_error(out, TargetFunction::MinIndicator));
}

TEST(Readjust, ClipsPartiallyCoveredCells) {
  const LabeledPartition in{{{{0.5, 1.0, 0.0, 0.5}, CellLabel::p},
                             {{0.0, 0.5, 0.5, 1.0}, CellLabel::q},
                             {{0.0, 0.25, 0.0, 0.25}, CellLabel::undecided},
                             {{0.25, 0.5, 0.25, 0.5}, CellLabel::undecided},
                             {{0.25, 0.5, 0.0, 0.25}, CellLabel::p},
                             {{0.0, 0.25, 0.25, 0.5}, CellLabel::q},
                             {{0.5, 0.75, 0.5, 0.75}, CellLabel::undecided},
                             {{0.75, 1.0, 0.75, 1.0}, CellLabel::undecided},
                             {{0.75, 1.0, 0.5, 0.6}, CellLabel::p},
                             {{0.75, 1.0, 0.6, 0.75}, CellLabel::p},
                             {{0.5, 0.75, 0.75, 1.0}, CellLabel::q}}};
  ASSERT_NO_THROW(validate(in));
  // p-cells of 0.25, 0.0625, 0.025 and 0.0375: the largest is already extremal
  const auto out = readjust_max_rectangle(in);
  EXPECT_EQ(out.cells.size(), in.cells.size());
  EXPECT_NO_THROW(validate(out));
}

TEST(Readjust, RefusesLShapedRemainders) {
  // growing to [0.5,1]x[0,0.5] would bite the corner out of the middle cell
  const LabeledPartition in{{{{0.7, 1.0, 0.2, 0.5}, CellLabel::p},
                             {{0.3, 0.7, 0.3, 0.7}, CellLabel::undecided}}};
  EXPECT_THROW(readjust_max_rectangle(in), std::invalid_argument);
  EXPECT_THROW(readjust_max_rectangle({{{{0, 1, 0, 1}, CellLabel::q}}}), std::invalid_argument);
}

TEST(Readjust, RandomPartitionsStayZeroErrorAndMajorize) {
  std::mt19937_64 rng(1234);
  for (int i = 0; i < 1000; ++i) {
    const auto in = testing_support::random_zero_error_partition(rng, 1 + i % 4);
    const auto out = readjust_max_rectangle(in);
    ASSERT_NO_THROW(validate(out));
    EXPECT_TRUE(is_zero_error(out, TargetFunction::MinIndicator));
    EXPECT_TRUE(oracle::majorizes(out.probabilities(), in.probabilities()));
    EXPECT_LE(partition_entropy(out), partition_entropy(in) + 1e-12);
    // the grown cell touches the diagonal and the corner (1, 0)
    const auto it = std::max_element(out.cells.begin(), out.cells.end(), [](const auto& a, const auto& b) {
      return a.label != CellLabel::p || (b.label == CellLabel::p && a.rect.area() < b.rect.area());
    });
    EXPECT_EQ(it->rect.x_hi, 1.0);
    EXPECT_EQ(it->rect.y_lo, 0.0);
    EXPECT_EQ(it->rect.x_lo, it->rect.y_hi);
  }
}
