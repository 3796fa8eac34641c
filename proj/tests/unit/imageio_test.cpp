#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include <unistd.h>

#include "random_images.hpp"
#include "visionkit/imageio.hpp"

namespace vk = visionkit;
namespace fs = std::filesystem;
using vk::Image;
using vk::ScalarKind;

namespace {

vk::ErrorCode decode_error(std::string_view bytes) {
  try {
    (void)vk::decode_pgm(bytes);
  } catch (const vk::Error& e) {
    return e.code();
  }
  return vk::ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Pgm, AsciiWithComments) {
  const Image img = vk::decode_pgm("P2\n# a comment\n3 2 # trailing\n9\n0 1 2\n3 4 9\n");
  EXPECT_EQ(img.kind(), ScalarKind::U8);
  EXPECT_EQ(img.shape(), (vk::Shape{2, 3}));
  EXPECT_EQ(img.to_vector<std::uint8_t>(), (std::vector<std::uint8_t>{0, 1, 2, 3, 4, 9}));
}

TEST(Pgm, BinarySixteenBitIsBigEndian) {
  const std::string bytes = std::string("P5 2 1 1000\n") + std::string("\x01\x02\x03\xe8", 4);
  const Image img = vk::decode_pgm(bytes);
  EXPECT_EQ(img.kind(), ScalarKind::U16);
  EXPECT_EQ(img.to_vector<std::uint16_t>(), (std::vector<std::uint16_t>{258, 1000}));
}

TEST(Pgm, RoundTripIsExact) {
  std::mt19937 rng(61);
  const Image u8 = vk_test::random_u8(rng, {7, 5});
  EXPECT_TRUE(vk::equal(vk::decode_pgm(vk::encode_pgm(u8)), u8));
  const Image u16 = vk::convert(vk_test::random_f64(rng, {4, 9}, 0.0, 65535.0), ScalarKind::U16);
  const std::string encoded = vk::encode_pgm(u16);
  EXPECT_EQ(encoded.substr(0, 13), "P5\n9 4\n65535\n");
  EXPECT_TRUE(vk::equal(vk::decode_pgm(encoded), u16));
  // A strided view is written by its visible rows.
  const Image view = u8.row_view(1, 3, 2);
  EXPECT_TRUE(vk::equal(vk::decode_pgm(vk::encode_pgm(view)), view.clone()));
}

TEST(Pgm, EncodeRejectsOtherKinds) {
  try {
    (void)vk::encode_pgm(Image::filled<double>({2, 2}, 1.0));
    FAIL();
  } catch (const vk::Error& e) {
    EXPECT_EQ(e.code(), vk::ErrorCode::KindMismatch);
  }
}

TEST(Pgm, MalformedInputs) {
  EXPECT_EQ(decode_error(""), vk::ErrorCode::Malformed);
  EXPECT_EQ(decode_error("P7 1 1 255\n0"), vk::ErrorCode::Malformed);
  EXPECT_EQ(decode_error("P5 2 2 255\n\x01\x02"), vk::ErrorCode::Malformed);
  EXPECT_EQ(decode_error("P2 2 1 5\n1 6\n"), vk::ErrorCode::Malformed);
  EXPECT_EQ(decode_error("P2 2 1 5\n1 x\n"), vk::ErrorCode::Malformed);
  EXPECT_EQ(decode_error("P5 1 1 70000\n\x00\x00\x00"), vk::ErrorCode::UnsupportedMaxval);
  try {
    (void)vk::decode_pgm("P5 2 2 255\n\x01\x02");
  } catch (const vk::Error& e) {
    EXPECT_NE(std::string(e.what()).find("byte offset"), std::string::npos);
  }
}

TEST(Ppm, RoundTripAndGrey) {
  vk::RgbImage rgb(1, 3);
  const std::uint8_t values[] = {255, 255, 255, 255, 0, 0, 10, 10, 10};
  std::copy(std::begin(values), std::end(values), rgb.data.begin());
  const std::string bytes = vk::encode_ppm(rgb);
  EXPECT_EQ(bytes.substr(0, 11), "P6\n3 1\n255\n");
  EXPECT_EQ(vk::decode_ppm(bytes), rgb);
  const Image grey = vk::as_grey(rgb);
  EXPECT_EQ(grey.kind(), ScalarKind::F64);
  EXPECT_NEAR(grey.value(0, 0), 255.0, 1e-12);
  EXPECT_NEAR(grey.value(0, 1), 76.245, 1e-12);
  EXPECT_NEAR(grey.value(0, 2), 10.0, 1e-12);
  const auto ascii = vk::decode_ppm("P3\n1 1\n255\n1 2 3\n");
  EXPECT_EQ(ascii.data, (std::vector<std::uint8_t>{1, 2, 3}));
  EXPECT_THROW((void)vk::decode_ppm("P6 1 1 65535\n\x00\x00\x00\x00\x00\x00"), vk::Error);
}

TEST(Files, ReadGreyDispatchesOnMagic) {
  const fs::path dir = fs::temp_directory_path() / ("visionkit_io_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const Image img = Image::from_values<std::uint8_t>({1, 2}, {5, 6});
  vk::write_pgm(img, dir / "a.pgm");
  EXPECT_TRUE(vk::equal(vk::read_grey(dir / "a.pgm"), img));
  vk::RgbImage rgb(1, 1);
  rgb.data = {0, 0, 255};
  vk::write_ppm(rgb, dir / "b.ppm");
  EXPECT_EQ(vk::read_ppm(dir / "b.ppm"), rgb);
  EXPECT_NEAR(vk::read_grey(dir / "b.ppm").value(0, 0), 0.114 * 255, 1e-12);
  try {
    (void)vk::read_pgm(dir / "missing.pgm");
    FAIL();
  } catch (const vk::Error& e) {
    EXPECT_EQ(e.code(), vk::ErrorCode::Io);
  }
  fs::remove_all(dir);
}
