#include "bench.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <ostream>
#include <string>

#include "visionkit/features.hpp"
#include "visionkit/filters.hpp"
#include "visionkit/morphology.hpp"
#include "visionkit/watershed.hpp"
#include "visionkit/wavelets.hpp"

namespace visionkit::cli {
namespace {

using Clock = std::chrono::steady_clock;

volatile double g_sink = 0.0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double sample(const std::function<void()>& op, double min_seconds) {
  const auto start = Clock::now();
  long calls = 0;
  double elapsed = 0.0;
  do {
    op();
    ++calls;
    elapsed = seconds_since(start);
  } while (elapsed < min_seconds);
  return elapsed / static_cast<double>(calls);
}

double median(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  return n % 2 == 1 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
}

// One seed per 64x64 tile, labelled 1, 2, ...
Image grid_markers(Shape shape) {
  Image markers(shape, ScalarKind::I32);
  auto v = markers.view<std::int32_t>();
  std::int32_t label = 0;
  for (std::size_t r = 32; r < shape.rows; r += 64) {
    for (std::size_t c = 32; c < shape.cols; c += 64) v(r, c) = ++label;
  }
  if (label == 0) v(shape.rows / 2, shape.cols / 2) = 1;
  return markers;
}

// F64 copy cropped to even dimensions, as the wavelet transforms require.
Image even_f64(const Image& img) {
  const std::size_t rows = img.rows() - img.rows() % 2;
  const std::size_t cols = img.cols() - img.cols() % 2;
  Image out({rows, cols}, ScalarKind::F64);
  auto v = out.view<double>();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) v(r, c) = img.value(r, c);
  }
  return out;
}

}  // namespace

double max_scan(const Image& img) {
  return visit_kind(img.kind(), [&]<class T>(std::type_identity<T>) {
    const auto v = img.view<T>();
    T m = v(0, 0);
    for (std::size_t r = 0; r < v.rows; ++r) {
      const T* p = v.row(r);
      for (std::size_t c = 0; c < v.cols; ++c) m = std::max(m, p[c]);
    }
    return static_cast<double>(m);
  });
}

BenchReport run_bench(const Image& img, int repetitions, double min_sample_seconds) {
  if (img.empty()) throw Error(ErrorCode::InvalidArgument, "img: image is empty");
  if (repetitions < 1) {
    throw Error(ErrorCode::InvalidArgument, "repetitions: must be at least 1, got " + std::to_string(repetitions));
  }
  BenchReport report;
  report.shape = img.shape();
  report.kind = img.kind();
  report.repetitions = repetitions;
  const auto cross = make_cross_3x3();
  const auto disc2 = disc_se(2);
  const auto disc10 = disc_se(10);
  const Image markers = grid_markers(img.shape());
  Image out(img.shape(), img.kind());

  const std::vector<std::pair<std::string, std::function<void()>>> ops = {
      {"erode", [&] { erode(img, cross, out); }},
      {"dilate", [&] { dilate(img, cross, out); }},
      {"open", [&] { open(img, cross, out); }},
      {"median(2)", [&] { median_filter(img, disc2, out); }},
      {"median(10)", [&] { median_filter(img, disc10, out); }},
      {"sobel", [&] { g_sink = sobel(img, true).value(0, 0); }},
      {"cwatershed", [&] { g_sink = cwatershed(img, markers).value(0, 0); }},
      {"daubechies(D4)", [&] { g_sink = wavelet_forward(even_f64(img), WaveletKind::D4).value(0, 0); }},
      {"haralick", [&] { g_sink = haralick(img).values[0]; }},
  };
  // Each operation sample is paired with a baseline sample taken just before
  // it and the multiple is the median of the paired ratios, so a machine
  // whose speed drifts during the run still yields stable multiples.
  const auto baseline = [&] { g_sink = max_scan(img); };
  baseline();
  std::vector<double> baseline_samples;
  for (const auto& [name, op] : ops) {
    op();
    std::vector<double> seconds, ratios;
    for (int i = 0; i < repetitions; ++i) {
      const double b = sample(baseline, min_sample_seconds);
      const double t = sample(op, min_sample_seconds);
      baseline_samples.push_back(b);
      seconds.push_back(t);
      ratios.push_back(t / b);
    }
    report.rows.push_back({name, median(seconds), median(ratios)});
  }
  report.baseline_seconds = median(baseline_samples);
  return report;
}

void print_bench(const BenchReport& report, std::ostream& machine, std::ostream& human) {
  for (const auto& row : report.rows) machine << row.name << '\t' << row.multiple << '\n';

  human << "image " << to_string(report.shape) << ' ' << to_string(report.kind) << ", median of "
        << report.repetitions << " samples\n";
  human << "baseline (max scan): " << std::scientific << std::setprecision(3) << report.baseline_seconds
        << " s\n";
  human << std::left << std::setw(16) << "operation" << std::right << std::setw(12) << "multiple"
        << std::setw(14) << "seconds" << '\n';
  for (const auto& row : report.rows) {
    human << std::left << std::setw(16) << row.name << std::right << std::fixed << std::setprecision(1)
          << std::setw(12) << row.multiple << std::scientific << std::setprecision(3) << std::setw(14)
          << row.seconds << '\n';
  }
  human << std::defaultfloat;
}

}  // namespace visionkit::cli
