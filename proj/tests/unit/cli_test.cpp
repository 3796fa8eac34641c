#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include <unistd.h>

#include "bench.hpp"
#include "cli.hpp"
#include "kmeans.hpp"
#include "random_images.hpp"
#include "visionkit/filters.hpp"
#include "visionkit/imageio.hpp"
#include "visionkit/morphology.hpp"
#include "visionkit/watershed.hpp"

namespace vk = visionkit;
namespace fs = std::filesystem;
using vk::Image;
using vk::ScalarKind;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("visionkit_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    std::mt19937 rng(71);
    input_ = vk_test::random_u8(rng, {24, 20});
    vk::write_pgm(input_, path("in.pgm"));
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return vk::cli::run(args, out_, err_);
  }

  fs::path dir_;
  Image input_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST_F(CliTest, ErodeDefaultsToTheCross) {
  ASSERT_EQ(run({"apply", "erode", path("in.pgm"), path("out.pgm")}), 0) << err_.str();
  EXPECT_TRUE(vk::equal(vk::read_pgm(path("out.pgm")), vk::erode(input_)));
}

TEST_F(CliTest, MedianRadiusMeansADisc) {
  ASSERT_EQ(run({"apply", "median", "--radius", "2", path("in.pgm"), path("out.pgm")}), 0) << err_.str();
  EXPECT_TRUE(vk::equal(vk::read_pgm(path("out.pgm")), vk::median_filter(input_, vk::disc_se(2))));
  ASSERT_EQ(run({"apply", "dilate", "--se", "box", "--radius", "1", path("in.pgm"), path("out.pgm")}), 0);
  EXPECT_TRUE(vk::equal(vk::read_pgm(path("out.pgm")), vk::dilate(input_, vk::make_box(3))));
}

TEST_F(CliTest, FloatResultsAreConverted) {
  ASSERT_EQ(run({"apply", "gaussian", "--sigma", "1.5", path("in.pgm"), path("out.pgm")}), 0) << err_.str();
  const Image want = vk::convert(vk::gaussian_filter(input_, 1.5), ScalarKind::U8);
  EXPECT_TRUE(vk::equal(vk::read_pgm(path("out.pgm")), want));
  ASSERT_EQ(run({"apply", "convolve", "--kernel", "1,2,1;2,4,2;1,2,1", path("in.pgm"), path("out.pgm")}), 0)
      << err_.str();
  EXPECT_EQ(vk::read_pgm(path("out.pgm")).kind(), ScalarKind::U16);
}

TEST_F(CliTest, Watershed) {
  Image markers = Image::filled<std::uint8_t>({24, 20}, 0);
  markers.at<std::uint8_t>(2, 2) = 1;
  markers.at<std::uint8_t>(20, 15) = 2;
  vk::write_pgm(markers, path("markers.pgm"));
  ASSERT_EQ(run({"apply", "cwatershed", "--markers", path("markers.pgm"), path("in.pgm"), path("out.pgm")}), 0)
      << err_.str();
  const Image want = vk::cwatershed(input_, vk::convert(markers, ScalarKind::I32));
  EXPECT_TRUE(vk::equal(vk::read_pgm(path("out.pgm")), vk::convert(want, ScalarKind::U8)));
  EXPECT_EQ(run({"apply", "cwatershed", path("in.pgm"), path("out.pgm")}), 2);
}

TEST_F(CliTest, FeatureOpsPrintOneValuePerLine) {
  ASSERT_EQ(run({"apply", "haralick", path("in.pgm")}), 0) << err_.str();
  std::istringstream lines(out_.str());
  std::vector<double> values;
  for (double v; lines >> v;) values.push_back(v);
  EXPECT_EQ(values.size(), 52u);
  ASSERT_EQ(run({"apply", "lbp", "--radius", "1", "--points", "8", path("in.pgm")}), 0) << err_.str();
  const std::string printed = out_.str();
  EXPECT_EQ(std::count(printed.begin(), printed.end(), '\n'), 10);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({"apply", "sharpen", path("in.pgm"), path("out.pgm")}), 2);
  EXPECT_FALSE(err_.str().empty());
  EXPECT_EQ(run({"apply", "erode", "--se", "star", path("in.pgm"), path("out.pgm")}), 2);
  EXPECT_EQ(run({"apply", "gaussian", "--sigma", "-1", path("in.pgm"), path("out.pgm")}), 2);
  EXPECT_EQ(run({"apply", "erode", path("missing.pgm"), path("out.pgm")}), 1);
  EXPECT_NE(err_.str().find("missing.pgm"), std::string::npos);
  EXPECT_EQ(run({"apply", "erode", path("in.pgm")}), 2);
  EXPECT_EQ(run({"apply", "haar", path("in.pgm"), path("out.pgm")}), 0);
  Image odd = Image::filled<std::uint8_t>({3, 4}, 1);
  vk::write_pgm(odd, path("odd.pgm"));
  EXPECT_EQ(run({"apply", "haar", path("odd.pgm"), path("out.pgm")}), 1);
  EXPECT_EQ(run({"frobnicate"}), 2);
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"--help"}), 0);
}

TEST_F(CliTest, SurfDemoNeedsPoints) {
  vk::write_pgm(Image::filled<std::uint8_t>({64, 64}, 9), path("flat.pgm"));
  EXPECT_EQ(run({"surf-demo", path("flat.pgm"), path("out.ppm")}), 1);
  EXPECT_NE(err_.str().find("no interest points"), std::string::npos);
}

TEST(ToWritable, KindRule) {
  const Image u16 = Image::filled<std::uint16_t>({1, 1}, 900);
  EXPECT_TRUE(vk::cli::to_writable(u16).shares_storage(u16));
  EXPECT_EQ(vk::cli::to_writable(Image::from_values<double>({1, 2}, {0.5, 255.0})).kind(), ScalarKind::U8);
  const Image wide = vk::cli::to_writable(Image::from_values<std::int32_t>({1, 3}, {-4, 256, 70000}));
  EXPECT_EQ(wide.to_vector<std::uint16_t>(), (std::vector<std::uint16_t>{0, 256, 65535}));
}

TEST(KMeans, EachVectorItsOwnCluster) {
  const std::vector<std::vector<double>> v = {{0, 0}, {5, 1}, {-3, 2}, {9, 9}};
  const auto km = vk::cli::demo_kmeans(v, 4, 1);
  EXPECT_EQ(km.inertia.back(), 0.0);
  std::vector<int> ids = km.assignments;
  std::sort(ids.begin(), ids.end());
  EXPECT_EQ(ids, (std::vector<int>{0, 1, 2, 3}));
}

TEST(KMeans, SeparatedBlobs) {
  std::mt19937 rng(72);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<std::vector<double>> v;
  for (int i = 0; i < 40; ++i) v.push_back({(i < 20 ? 0.0 : 10.0) + noise(rng), noise(rng)});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto km = vk::cli::demo_kmeans(v, 2, seed);
    for (int i = 0; i < 40; ++i) EXPECT_EQ(km.assignments[static_cast<std::size_t>(i)] == km.assignments[0], i < 20);
    for (std::size_t i = 1; i < km.inertia.size(); ++i) EXPECT_LE(km.inertia[i], km.inertia[i - 1]);
    EXPECT_LE(km.iterations, 100);
  }
}

TEST(KMeans, DeterministicAndValidated) {
  std::mt19937 rng(73);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> v(50, std::vector<double>(4));
  for (auto& x : v) {
    for (double& c : x) c = u(rng);
  }
  const auto a = vk::cli::demo_kmeans(v, 5, 99);
  const auto b = vk::cli::demo_kmeans(v, 5, 99);
  EXPECT_EQ(a.assignments, b.assignments);
  EXPECT_EQ(a.centers, b.centers);
  for (int id : a.assignments) EXPECT_TRUE(id >= 0 && id < 5);
  try {
    (void)vk::cli::demo_kmeans(v, 51, 0);
    FAIL();
  } catch (const vk::Error& e) {
    EXPECT_EQ(e.code(), vk::ErrorCode::TooFewVectors);
  }
  EXPECT_THROW((void)vk::cli::demo_kmeans(v, 0, 0), vk::Error);
  EXPECT_THROW((void)vk::cli::demo_kmeans({{1.0}, {1.0, 2.0}}, 1, 0), vk::Error);
}

TEST(Bench, SmallImageReport) {
  std::mt19937 rng(74);
  const Image img = vk_test::random_u8(rng, {64, 64});
  const Image ramp = Image::from_values<std::uint8_t>({1, 4}, {3, 200, 7, 9});
  EXPECT_EQ(vk::cli::max_scan(ramp), 200.0);
  const auto report = vk::cli::run_bench(img, 3, 0.001);
  ASSERT_EQ(report.rows.size(), 9u);
  EXPECT_GT(report.baseline_seconds, 0.0);
  EXPECT_EQ(report.repetitions, 3);
  const std::vector<std::string> names = {"erode", "dilate", "open", "median(2)", "median(10)",
                                          "sobel", "cwatershed", "daubechies(D4)", "haralick"};
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_EQ(report.rows[i].name, names[i]);
    EXPECT_GT(report.rows[i].multiple, 0.0);
    EXPECT_GT(report.rows[i].seconds, 0.0);
  }
  std::ostringstream machine, human;
  vk::cli::print_bench(report, machine, human);
  std::istringstream lines(machine.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    ++count;
    EXPECT_NE(line.find('\t'), std::string::npos);
  }
  EXPECT_EQ(count, 9);
  EXPECT_NE(human.str().find("erode"), std::string::npos);
}
