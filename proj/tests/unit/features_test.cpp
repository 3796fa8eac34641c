#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "random_images.hpp"
#include "visionkit/features.hpp"

namespace vk = visionkit;
using vk::Image;
using vk::ScalarKind;

TEST(Cooccurrence, CountsSymmetricPairs) {
  const Image img = Image::from_values<std::uint8_t>({2, 3}, {0, 0, 1, 0, 2, 1});
  const auto m = vk::cooccurrence(img, vk::Direction::East);
  EXPECT_EQ(m.levels, 3u);
  EXPECT_EQ(m.pair_count, 4u);
  // Pairs (0,0) (0,1) (0,2) (2,1), each counted both ways over 8.
  EXPECT_DOUBLE_EQ(m(0, 0), 2.0 / 8.0);
  EXPECT_DOUBLE_EQ(m(0, 1), 1.0 / 8.0);
  EXPECT_DOUBLE_EQ(m(1, 0), 1.0 / 8.0);
  EXPECT_DOUBLE_EQ(m(1, 2), 1.0 / 8.0);
  EXPECT_EQ(m(1, 1), 0.0);
  const auto sw = vk::cooccurrence(img, vk::Direction::SouthWest);
  // South-west pairs: (0, 0) and (1, 2).
  EXPECT_EQ(sw.pair_count, 2u);
  EXPECT_DOUBLE_EQ(sw(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(sw(1, 2), 0.25);
  EXPECT_DOUBLE_EQ(sw(2, 1), 0.25);
}

TEST(Cooccurrence, Displacements) {
  EXPECT_EQ(vk::displacement(vk::Direction::East), (std::array<int, 2>{0, 1}));
  EXPECT_EQ(vk::displacement(vk::Direction::SouthEast), (std::array<int, 2>{1, 1}));
  EXPECT_EQ(vk::displacement(vk::Direction::South), (std::array<int, 2>{1, 0}));
  EXPECT_EQ(vk::displacement(vk::Direction::SouthWest), (std::array<int, 2>{1, -1}));
}

TEST(Haralick, MatchesDefinitionsPerDirection) {
  std::mt19937 rng(31);
  const Image img = vk_test::random_u8(rng, {15, 12}, 0, 9);
  const auto all = vk::haralick(img).values;
  ASSERT_EQ(all.size(), 4 * vk::kHaralickFeatures);
  const std::array<std::pair<int, int>, 4> d = {{{0, 1}, {1, 1}, {1, 0}, {1, -1}}};
  for (std::size_t k = 0; k < 4; ++k) {
    const auto want = vk_oracle::haralick_direction(img, d[k].first, d[k].second);
    const auto got = vk::haralick_from_matrix(vk::cooccurrence(img, vk::kAllDirections[k]));
    for (std::size_t i = 0; i < vk::kHaralickFeatures; ++i) {
      EXPECT_NEAR(got[i], want[i], 1e-9) << "direction " << k << " feature " << i;
      EXPECT_EQ(got[i], all[13 * k + i]);
    }
  }
}

TEST(Haralick, CheckerboardContrast) {
  Image img({6, 6}, ScalarKind::U8);
  for (std::size_t r = 0; r < 6; ++r) {
    for (std::size_t c = 0; c < 6; ++c) img.at<std::uint8_t>(r, c) = static_cast<std::uint8_t>((r + c) % 2);
  }
  const auto f = vk::haralick(img).values;
  EXPECT_DOUBLE_EQ(f[1], 1.0);        // east neighbors always differ
  EXPECT_DOUBLE_EQ(f[13 + 1], 0.0);   // diagonal neighbors never do
  EXPECT_DOUBLE_EQ(f[2], -1.0);       // perfectly anti-correlated
  EXPECT_DOUBLE_EQ(f[13 + 2], 1.0);
}

TEST(Haralick, SingleRowHasZeroBlocksForVerticalDirections) {
  const Image row = Image::from_values<std::uint8_t>({1, 4}, {0, 1, 2, 3});
  const auto f = vk::haralick(row).values;
  for (std::size_t i = 13; i < 52; ++i) EXPECT_EQ(f[i], 0.0) << i;
  EXPECT_GT(f[0], 0.0);
}

TEST(Haralick, Errors) {
  try {
    (void)vk::haralick(Image::filled<std::uint8_t>({1, 1}, 3));
    FAIL();
  } catch (const vk::Error& e) {
    EXPECT_EQ(e.code(), vk::ErrorCode::DegenerateImage);
  }
  EXPECT_THROW((void)vk::haralick(Image::filled<std::uint16_t>({4, 4}, 3)), vk::Error);
}

TEST(Zernike, OrderAndCount) {
  const Image blob = vk_test::gaussian_blob(32, 16.0, 16.0, 5.0, 0.0, 200.0);
  const auto z = vk::zernike_moments(blob, 12.0, 8).values;
  EXPECT_EQ(z.size(), 25u);
  // A00 of intensities normalized by their in-disk sum is 1/pi.
  EXPECT_NEAR(z[0], 1.0 / std::numbers::pi, 1e-12);
  const auto want = vk_oracle::zernike(blob, 12.0, 8);
  for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(z[i], want[i], 1e-9);
}

TEST(Zernike, InvariantToRotationAndToScaling) {
  std::mt19937 rng(32);
  const Image img = vk_test::random_u8(rng, {30, 30}, 1, 255);
  const auto a = vk::zernike_moments(img, 14.0, 6).values;
  Image twice = vk::convert(img, ScalarKind::F64);
  for (std::size_t i = 0; i < twice.size(); ++i) twice.view<double>().data[i] *= 2.0;
  const auto b = vk::zernike_moments(twice, 14.0, 6).values;
  const auto c = vk::zernike_moments(vk_test::rotate90(vk_test::rotate90(img)), 14.0, 6).values;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i], b[i], 1e-12);
    EXPECT_NEAR(a[i], c[i], 1e-9);
  }
}

TEST(Zernike, Errors) {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const vk::Error& e) {
      return e.code();
    }
    return vk::ErrorCode::Io;
  };
  const Image zero = Image::filled<std::uint8_t>({8, 8}, 0);
  EXPECT_EQ(code_of([&] { vk::zernike_moments(zero, 4.0, 4); }), vk::ErrorCode::ZeroImage);
  EXPECT_EQ(code_of([&] { vk::zernike_moments(Image::filled<std::uint8_t>({8, 8}, 1), -1.0, 4); }),
            vk::ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { vk::zernike_moments(Image::filled<std::uint8_t>({8, 8}, 1), 4.0, -2); }),
            vk::ErrorCode::InvalidArgument);
}

TEST(Lbp, UniformClasses) {
  EXPECT_EQ(vk::lbp_uniform_class(0b00000000, 8), 0u);
  EXPECT_EQ(vk::lbp_uniform_class(0b11111111, 8), 8u);
  EXPECT_EQ(vk::lbp_uniform_class(0b00111000, 8), 3u);
  EXPECT_EQ(vk::lbp_uniform_class(0b10000011, 8), 3u);
  EXPECT_EQ(vk::lbp_uniform_class(0b00101000, 8), 9u);
  for (std::uint32_t code = 0; code < 256; ++code) {
    EXPECT_EQ(vk::lbp_uniform_class(code, 8), vk_oracle::uniform_class(code, 8));
  }
}

TEST(Lbp, ConstantImageIsAllOnes) {
  const auto h = vk::lbp(Image::filled<std::uint8_t>({7, 7}, 40), 1.0, 8).values;
  ASSERT_EQ(h.size(), 10u);
  EXPECT_EQ(h[8], 1.0);
}

TEST(Lbp, RotationInvariantForQuarterTurns) {
  std::mt19937 rng(33);
  const Image img = vk_test::random_u8(rng, {16, 16});
  EXPECT_EQ(vk::lbp(img, 2.0, 8).values, vk::lbp(vk_test::rotate90(img), 2.0, 8).values);
}

TEST(Lbp, Errors) {
  const Image img = Image::filled<std::uint8_t>({4, 4}, 1);
  EXPECT_THROW((void)vk::lbp(img, 1.0, 2), vk::Error);
  EXPECT_THROW((void)vk::lbp(img, 0.5, 8), vk::Error);
}

TEST(Tas, AdjacencyHistogram) {
  // Plus sign: the center sees 4 white neighbors, each arm sees 3.
  const std::vector<std::uint8_t> plus = {0, 1, 0, 1, 1, 1, 0, 1, 0};
  const auto h = vk::adjacency_histogram(plus, {3, 3});
  EXPECT_DOUBLE_EQ(h[3], 0.8);
  EXPECT_DOUBLE_EQ(h[4], 0.2);
  const auto empty = vk::adjacency_histogram(std::vector<std::uint8_t>(9, 0), {3, 3});
  for (double v : empty) EXPECT_EQ(v, 0.0);
}

TEST(Tas, NeedsForeground) {
  try {
    (void)vk::tas(Image::filled<std::uint8_t>({5, 5}, 0));
    FAIL();
  } catch (const vk::Error& e) {
    EXPECT_EQ(e.code(), vk::ErrorCode::NoForeground);
  }
}

TEST(Tas, ThresholdsFollowTheForegroundMean) {
  // Two foreground levels, 60 and 140 (mean 100): [70, 130] selects
  // neither, [70, 255] and [100, 255] select the 140s.
  Image img = Image::filled<std::uint8_t>({6, 6}, 0);
  for (std::size_t c = 0; c < 6; ++c) {
    img.at<std::uint8_t>(1, c) = 60;
    img.at<std::uint8_t>(4, c) = 140;
  }
  const auto f = vk::tas(img).values;
  for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(f[i], 0.0);
  // The selected row is a 6-pixel line: 2 ends with 1 neighbor, 4 with 2.
  EXPECT_DOUBLE_EQ(f[9 + 1], 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(f[9 + 2], 4.0 / 6.0);
  EXPECT_EQ(std::vector<double>(f.begin() + 9, f.begin() + 18), std::vector<double>(f.begin() + 18, f.begin() + 27));
}
