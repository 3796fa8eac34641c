#include <gtest/gtest.h>

#include "visionkit/filters.hpp"
#include "visionkit/structuring_element.hpp"

namespace vk = visionkit;

TEST(StructuringElement, CrossIsTheDefault) {
  const auto se = vk::make_cross_3x3();
  EXPECT_EQ(se.count(), 5u);
  EXPECT_EQ(se.center(), (vk::Offset{1, 1}));
  EXPECT_TRUE(se.flat());
  EXPECT_FALSE(se.contains(0, 0));
  EXPECT_TRUE(se.contains(0, 1));
  EXPECT_EQ(se.reach(), (vk::Offset{1, 1}));
}

TEST(StructuringElement, EvenSizeAnchorsLowerRight) {
  const vk::StructuringElement se(2, 4, std::vector<bool>(8, true));
  EXPECT_EQ(se.center(), (vk::Offset{1, 2}));
  EXPECT_EQ(se.cells().front().offset, (vk::Offset{-1, -2}));
  EXPECT_EQ(se.cells().back().offset, (vk::Offset{0, 1}));
  EXPECT_EQ(se.reach(), (vk::Offset{1, 2}));
}

TEST(StructuringElement, ReflectNegatesOffsets) {
  const vk::StructuringElement se(2, 3, {true, false, false, false, true, true}, {5, 0, 0, 0, 1, 2});
  const auto r = se.reflect();
  ASSERT_EQ(r.count(), se.count());
  for (const auto& cell : se.cells()) {
    bool found = false;
    for (const auto& other : r.cells()) {
      if (other.offset == vk::Offset{-cell.offset.row, -cell.offset.col}) {
        found = true;
        EXPECT_EQ(other.weight, cell.weight);
      }
    }
    EXPECT_TRUE(found);
  }
  EXPECT_EQ(r.reflect(), se);
}

TEST(StructuringElement, Rejections) {
  try {
    vk::StructuringElement(2, 2, std::vector<bool>(4, false));
    FAIL();
  } catch (const vk::Error& e) {
    EXPECT_EQ(e.code(), vk::ErrorCode::EmptyStructuringElement);
  }
  EXPECT_THROW(vk::StructuringElement(2, 2, std::vector<bool>(3, true)), vk::Error);
  EXPECT_THROW(vk::StructuringElement(2, 2, std::vector<bool>(4, true), {1.0}), vk::Error);
  EXPECT_THROW(vk::StructuringElement(2, 2, std::vector<bool>(4, true), {}, vk::Offset{2, 0}), vk::Error);
}

TEST(StructuringElement, DiscAndBox) {
  EXPECT_EQ(vk::disc_se(1).count(), 5u);
  EXPECT_EQ(vk::disc_se(2).count(), 13u);
  EXPECT_EQ(vk::disc_se(10).rows(), 21u);
  EXPECT_EQ(vk::make_box(3).count(), 9u);
}

TEST(NeighborhoodCursor, ClampsAtBorders) {
  const auto img = vk::Image::from_values<std::uint8_t>({2, 3}, {1, 2, 3, 4, 5, 6});
  const auto se = vk::make_cross_3x3();
  auto cursor = vk::neighborhood_iter(img.view<std::uint8_t>(), se);
  // Cells in row-major order: up, left, center, right, down.
  std::vector<std::vector<int>> seen;
  for (; !cursor.done(); cursor.advance()) {
    std::vector<int> values;
    for (std::size_t j = 0; j < cursor.size(); ++j) values.push_back(cursor[j]);
    seen.push_back(values);
  }
  ASSERT_EQ(seen.size(), 6u);
  EXPECT_EQ(seen[0], (std::vector<int>{1, 1, 1, 2, 4}));
  EXPECT_EQ(seen[5], (std::vector<int>{3, 5, 6, 6, 6}));
}

TEST(NeighborhoodCursor, ResolveClamps) {
  EXPECT_EQ(vk::resolve(vk::BorderMode::ExtendNearest, -4, 9, {3, 5}), (vk::Position{0, 4}));
  EXPECT_EQ(vk::clamp_index(2, 5), 2u);
}
