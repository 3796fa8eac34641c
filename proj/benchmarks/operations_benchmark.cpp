#include <benchmark/benchmark.h>

#include <random>

#include "visionkit/features.hpp"
#include "visionkit/filters.hpp"
#include "visionkit/morphology.hpp"
#include "visionkit/surf.hpp"
#include "visionkit/watershed.hpp"
#include "visionkit/wavelets.hpp"

using namespace visionkit;

namespace {

// Smooth texture plus noise; square side given by the benchmark argument.
Image textured(std::size_t side, ScalarKind kind = ScalarKind::U8) {
  std::mt19937 rng(7);
  std::normal_distribution<double> noise(0.0, 8.0);
  Image img({side, side}, ScalarKind::F64);
  auto v = img.view<double>();
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      v(r, c) = 128.0 + 60.0 * std::sin(c / 23.0) * std::cos(r / 31.0) + noise(rng);
    }
  }
  return convert(img, kind);
}

void set_pixels(benchmark::State& state) {
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_Erode(benchmark::State& state) {
  const Image img = textured(static_cast<std::size_t>(state.range(0)));
  Image out(img.shape(), img.kind());
  const auto se = make_cross_3x3();
  for (auto _ : state) benchmark::DoNotOptimize(erode(img, se, out));
  set_pixels(state);
}
BENCHMARK(BM_Erode)->Arg(512)->Arg(2048);

void BM_ErodeGeneric(benchmark::State& state) {
  const Image img = textured(static_cast<std::size_t>(state.range(0)));
  Image out(img.shape(), img.kind());
  const auto se = make_cross_3x3();
  for (auto _ : state) {
    detail::erode_generic(img, se, out);
    benchmark::ClobberMemory();
  }
  set_pixels(state);
}
BENCHMARK(BM_ErodeGeneric)->Arg(512);

void BM_Median(benchmark::State& state) {
  const Image img = textured(512);
  Image out(img.shape(), img.kind());
  const auto se = disc_se(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(median_filter(img, se, out));
}
BENCHMARK(BM_Median)->Arg(2)->Arg(10);

void BM_MedianSorting(benchmark::State& state) {
  const Image img = textured(512);
  Image out(img.shape(), img.kind());
  const auto se = disc_se(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    detail::median_filter_sorting(img, se, out);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_MedianSorting)->Arg(2)->Arg(10);

void BM_Gaussian(benchmark::State& state) {
  const Image img = textured(512);
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_filter(img, static_cast<double>(state.range(0))));
}
BENCHMARK(BM_Gaussian)->Arg(1)->Arg(4);

void BM_Sobel(benchmark::State& state) {
  const Image img = textured(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sobel(img, true));
  set_pixels(state);
}
BENCHMARK(BM_Sobel)->Arg(512)->Arg(2048);

void BM_Watershed(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const Image img = textured(side);
  Image markers({side, side}, ScalarKind::I32);
  std::int32_t label = 0;
  for (std::size_t r = 32; r < side; r += 64) {
    for (std::size_t c = 32; c < side; c += 64) markers.at<std::int32_t>(r, c) = ++label;
  }
  for (auto _ : state) benchmark::DoNotOptimize(cwatershed(img, markers));
  set_pixels(state);
}
BENCHMARK(BM_Watershed)->Arg(512)->Arg(2048);

void BM_DistanceTransform(benchmark::State& state) {
  const Image img = textured(512);
  Image binary({512, 512}, ScalarKind::U8);
  for (std::size_t r = 0; r < 512; ++r) {
    for (std::size_t c = 0; c < 512; ++c) binary.at<std::uint8_t>(r, c) = img.value(r, c) > 100.0 ? 1 : 0;
  }
  for (auto _ : state) benchmark::DoNotOptimize(distance_squared(binary));
}
BENCHMARK(BM_DistanceTransform);

void BM_Daubechies(benchmark::State& state) {
  const Image img = textured(512, ScalarKind::F64);
  for (auto _ : state) benchmark::DoNotOptimize(wavelet_forward(img, WaveletKind::D4));
}
BENCHMARK(BM_Daubechies);

void BM_Haralick(benchmark::State& state) {
  const Image img = textured(512);
  for (auto _ : state) benchmark::DoNotOptimize(haralick(img));
}
BENCHMARK(BM_Haralick);

void BM_Zernike(benchmark::State& state) {
  const Image img = textured(128);
  for (auto _ : state) benchmark::DoNotOptimize(zernike_moments(img, 64.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Zernike)->Arg(8)->Arg(12);

void BM_Lbp(benchmark::State& state) {
  const Image img = textured(256);
  for (auto _ : state) benchmark::DoNotOptimize(lbp(img, 1.0, 8));
}
BENCHMARK(BM_Lbp);

void BM_Surf(benchmark::State& state) {
  const Image img = textured(512);
  for (auto _ : state) benchmark::DoNotOptimize(surf(img, 4, 6, 2));
}
BENCHMARK(BM_Surf);

}  // namespace
BENCHMARK_MAIN();
