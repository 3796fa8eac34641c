#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "visionkit/image.hpp"

namespace visionkit::cli {

struct BenchRow {
  std::string name;
  double seconds = 0.0;   // median over repetitions
  double multiple = 0.0;  // median of per-sample ratios to the baseline
};

struct BenchReport {
  std::vector<BenchRow> rows;
  double baseline_seconds = 0.0;
  Shape shape;
  ScalarKind kind = ScalarKind::U8;
  int repetitions = 0;
};

/// Maximum pixel value, the unit every benchmark row is expressed in.
double max_scan(const Image& img);

/// Times erode, dilate, open, median(2), median(10), sobel, cwatershed,
/// daubechies(D4) and haralick against the max-scan baseline. Each sample
/// repeats its operation for at least `min_sample_seconds` and keeps the
/// per-call mean. Every operation sample is paired with a baseline sample
/// taken just before it; a row's multiple is the median of its paired
/// ratios and its time the median of its samples.
BenchReport run_bench(const Image& img, int repetitions = 5, double min_sample_seconds = 0.02);

/// "name<TAB>multiple" lines to `machine`, an aligned table to `human`.
void print_bench(const BenchReport& report, std::ostream& machine, std::ostream& human);

}  // namespace visionkit::cli
