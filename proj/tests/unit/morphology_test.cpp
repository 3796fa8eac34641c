#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "random_images.hpp"
#include "visionkit/filters.hpp"
#include "visionkit/morphology.hpp"

namespace vk = visionkit;
using vk::Image;
using vk::ScalarKind;

namespace {

Image run(void (*kernel)(const Image&, const vk::StructuringElement&, Image&), const Image& img,
          const vk::StructuringElement& se) {
  Image out(img.shape(), img.kind());
  kernel(img, se, out);
  return out;
}

}  // namespace

TEST(Morphology, WeightedElementsMatchOracle) {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 60; ++trial) {
    const auto se = vk_test::random_se(rng, true);
    const Image img = vk_test::random_u8(rng, {11, 13});
    EXPECT_TRUE(vk_oracle::grid_equals(vk_oracle::erode(img, se), vk::erode(img, se))) << trial;
    EXPECT_TRUE(vk_oracle::grid_equals(vk_oracle::dilate(img, se), vk::dilate(img, se))) << trial;
  }
}

TEST(Morphology, OtherKindsMatchOracle) {
  std::mt19937 rng(2);
  for (auto kind : {ScalarKind::U16, ScalarKind::I32, ScalarKind::F32, ScalarKind::F64}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto se = vk_test::random_se(rng, trial % 2 == 1);
      const Image img = vk::convert(vk_test::random_f64(rng, {9, 10}, 0.0, 60000.0), kind);
      EXPECT_TRUE(vk_oracle::grid_equals(vk_oracle::erode(img, se), vk::erode(img, se)));
      EXPECT_TRUE(vk_oracle::grid_equals(vk_oracle::dilate(img, se), vk::dilate(img, se)));
    }
  }
}

TEST(Morphology, SaturatesInsteadOfWrapping) {
  const vk::StructuringElement se(1, 3, {true, true, true}, {100, 0, 100});
  const Image img = Image::from_values<std::uint8_t>({1, 3}, {250, 10, 200});
  EXPECT_EQ(vk::dilate(img, se).to_vector<std::uint8_t>(), (std::vector<std::uint8_t>{255, 255, 255}));
  EXPECT_EQ(vk::erode(img, se).to_vector<std::uint8_t>(), (std::vector<std::uint8_t>{0, 10, 0}));
}

TEST(Morphology, FastAndGenericKernelsAgree) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 80; ++trial) {
    const auto se = trial % 3 == 0 ? vk::disc_se(1 + trial % 5) : vk_test::random_se(rng, trial % 2 == 0);
    const Image img = vk_test::random_u8(rng, {1 + static_cast<std::size_t>(trial % 23), 40});
    EXPECT_TRUE(vk::equal(run(vk::detail::erode_fast_u8, img, se), run(vk::detail::erode_generic, img, se)));
    EXPECT_TRUE(vk::equal(run(vk::detail::dilate_fast_u8, img, se), run(vk::detail::dilate_generic, img, se)));
  }
}

TEST(Morphology, OpenAndCloseAreIdempotentAndOrdered) {
  std::mt19937 rng(4);
  const std::vector<vk::StructuringElement> elements = {vk::make_cross_3x3(), vk::make_box(3), vk::make_box(4),
                                                        vk::disc_se(1), vk::disc_se(2), vk::disc_se(3)};
  for (int trial = 0; trial < 30; ++trial) {
    const auto& se = elements[static_cast<std::size_t>(trial) % elements.size()];
    const Image img = trial % 2 == 0 ? vk_test::random_u8(rng, {14, 12}) : vk_test::random_binary(rng, {14, 12});
    const Image o = vk::open(img, se);
    const Image c = vk::close(img, se);
    EXPECT_TRUE(vk::equal(vk::open(o, se), o)) << trial;
    EXPECT_TRUE(vk::equal(vk::close(c, se), c)) << trial;
    for (std::size_t r = 0; r < img.rows(); ++r) {
      for (std::size_t col = 0; col < img.cols(); ++col) {
        EXPECT_LE(o.value(r, col), img.value(r, col));
        EXPECT_GE(c.value(r, col), img.value(r, col));
      }
    }
  }
}

TEST(Morphology, OpeningIsAntiExtensiveAwayFromBorders) {
  // For arbitrary elements the clamped border breaks the adjunction, so
  // only pixels whose whole two-step neighborhood lies inside are checked.
  // Weighted elements are left out: saturation at 0 and 255 breaks the
  // ordering there.
  std::mt19937 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto se = vk_test::random_se(rng, false);
    const Image img = vk_test::random_u8(rng, {16, 16});
    const Image o = vk::open(img, se);
    const Image c = vk::close(img, se);
    const auto reach = se.reach();
    for (std::size_t r = 2 * static_cast<std::size_t>(reach.row); r + 2 * static_cast<std::size_t>(reach.row) < 16; ++r) {
      for (std::size_t col = 2 * static_cast<std::size_t>(reach.col); col + 2 * static_cast<std::size_t>(reach.col) < 16; ++col) {
        EXPECT_LE(o.value(r, col), img.value(r, col));
        EXPECT_GE(c.value(r, col), img.value(r, col));
      }
    }
  }
}

TEST(Morphology, DualityUnderComplement) {
  std::mt19937 rng(5);
  const auto se = vk::disc_se(2);
  const Image img = vk_test::random_u8(rng, {15, 15});
  Image inv = img.clone();
  auto v = inv.view<std::uint8_t>();
  for (std::size_t i = 0; i < inv.size(); ++i) v.data[i] = static_cast<std::uint8_t>(255 - v.data[i]);
  const Image e = vk::erode(img, se);
  const Image d = vk::dilate(inv, se.reflect());
  for (std::size_t r = 0; r < 15; ++r) {
    for (std::size_t c = 0; c < 15; ++c) EXPECT_EQ(e.value(r, c), 255.0 - d.value(r, c));
  }
}

TEST(Morphology, BinaryImagesStayBinary) {
  std::mt19937 rng(6);
  const Image img = vk_test::random_binary(rng, {20, 20});
  for (const Image& out : {vk::erode(img), vk::dilate(img), vk::open(img), vk::close(img)}) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double x = out.value(i / 20, i % 20);
      EXPECT_TRUE(x == 0.0 || x == 1.0);
    }
  }
}

TEST(Morphology, OutMayAliasInput) {
  std::mt19937 rng(7);
  const Image img = vk_test::random_u8(rng, {10, 10});
  Image inplace = img.clone();
  vk::erode(inplace, vk::disc_se(2), inplace);
  EXPECT_TRUE(vk::equal(inplace, vk::erode(img, vk::disc_se(2))));
  Image f = vk::convert(img, ScalarKind::F32);
  Image expected = vk::dilate(f);
  vk::dilate(f, vk::make_cross_3x3(), f);
  EXPECT_TRUE(vk::equal(f, expected));
}

TEST(Morphology, NonContiguousInputIsAccepted) {
  std::mt19937 rng(8);
  const Image img = vk_test::random_u8(rng, {12, 9});
  const Image strided = img.row_view(0, 6, 2);
  EXPECT_TRUE(vk::equal(vk::erode(strided), vk::erode(strided.clone())));
  EXPECT_TRUE(vk::equal(vk::dilate(strided), vk::dilate(strided.clone())));
}

TEST(Morphology, OutValidation) {
  const Image img = Image::filled<float>({4, 4}, 1.0f);
  Image wrong_kind({4, 4}, ScalarKind::U8);
  try {
    vk::erode(img, vk::make_cross_3x3(), wrong_kind);
    FAIL();
  } catch (const vk::Error& e) {
    EXPECT_EQ(e.code(), vk::ErrorCode::KindMismatch);
    EXPECT_NE(std::string(e.what()).find("out"), std::string::npos);
  }
  Image wrong_shape({4, 5}, ScalarKind::F32);
  EXPECT_THROW(vk::dilate(img, vk::make_cross_3x3(), wrong_shape), vk::Error);
  Image tall({8, 4}, ScalarKind::F32);
  Image strided = tall.row_view(0, 4, 2);
  try {
    vk::erode(img, vk::make_cross_3x3(), strided);
    FAIL();
  } catch (const vk::Error& e) {
    EXPECT_EQ(e.code(), vk::ErrorCode::NotContiguous);
  }
}
