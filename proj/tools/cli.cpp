#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "bench.hpp"
#include "kmeans.hpp"
#include "visionkit/features.hpp"
#include "visionkit/filters.hpp"
#include "visionkit/imageio.hpp"
#include "visionkit/morphology.hpp"
#include "visionkit/polygon.hpp"
#include "visionkit/watershed.hpp"
#include "visionkit/wavelets.hpp"

namespace visionkit::cli {
namespace {

const std::vector<std::string> kImageOps = {"erode",    "dilate",    "open",     "close",      "median",
                                            "gaussian", "sobel",     "convolve", "cwatershed", "distance",
                                            "haar",     "daubechies", "convexhull"};
const std::vector<std::string> kFeatureOps = {"haralick", "zernike", "lbp", "tas", "pftas"};

// Flag combinations CLI11 cannot check by itself; reported as exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ApplyFlags {
  std::string op;
  std::string input;
  std::string output;
  std::optional<std::string> se;
  std::optional<double> radius;
  double sigma = 1.0;
  std::optional<std::string> kernel;
  std::optional<std::string> markers;
  int order = 4;
  int degree = 8;
  int points = 8;
  bool just_filter = false;
};

bool is_feature_op(const std::string& op) {
  return std::find(kFeatureOps.begin(), kFeatureOps.end(), op) != kFeatureOps.end();
}

int integral_radius(double radius) {
  if (radius < 1.0 || radius != std::floor(radius) || radius > 1000.0) {
    throw UsageError("--radius must be a positive integer for structuring elements");
  }
  return static_cast<int>(radius);
}

StructuringElement structuring_element(const ApplyFlags& f) {
  // A bare --radius asks for a disc, as in "median --radius 2".
  const std::string name = f.se.value_or(f.radius ? "disc" : "cross");
  if (name == "cross") return make_cross_3x3();
  const int radius = integral_radius(f.radius.value_or(1.0));
  if (name == "box") return make_box(static_cast<std::size_t>(2 * radius + 1));
  return disc_se(radius);
}

// "1,2,1;2,4,2;1,2,1": rows separated by ';', values by ','.
Kernel parse_kernel(const std::string& text) {
  std::vector<double> values;
  std::size_t rows = 0, cols = 0;
  std::stringstream rows_in(text);
  std::string row;
  while (std::getline(rows_in, row, ';')) {
    std::stringstream cells(row);
    std::string cell;
    std::size_t n = 0;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw UsageError("--kernel: '" + cell + "' is not a number");
      }
      ++n;
    }
    if (rows > 0 && n != cols) throw UsageError("--kernel: rows have different lengths");
    cols = n;
    ++rows;
  }
  if (rows == 0 || cols == 0) throw UsageError("--kernel: empty kernel");
  return Kernel(rows, cols, std::move(values));
}

WaveletKind daubechies_kind(int order) {
  switch (order) {
    case 4: return WaveletKind::D4;
    case 6: return WaveletKind::D6;
    case 8: return WaveletKind::D8;
    default: throw UsageError("--order must be 4, 6 or 8");
  }
}

Image apply_image_op(const ApplyFlags& f, const Image& img) {
  const std::string& op = f.op;
  if (op == "erode") return erode(img, structuring_element(f));
  if (op == "dilate") return dilate(img, structuring_element(f));
  if (op == "open") return open(img, structuring_element(f));
  if (op == "close") return close(img, structuring_element(f));
  if (op == "median") return median_filter(img, structuring_element(f));
  if (op == "gaussian") return gaussian_filter(img, f.sigma);
  if (op == "sobel") return sobel(img, f.just_filter);
  if (op == "convolve") {
    if (!f.kernel) throw UsageError("convolve needs --kernel");
    return convolve(img, parse_kernel(*f.kernel));
  }
  if (op == "cwatershed") {
    if (!f.markers) throw UsageError("cwatershed needs --markers");
    return cwatershed(img, convert(read_grey(*f.markers), ScalarKind::I32), structuring_element(f));
  }
  if (op == "distance") return distance_squared(img);
  if (op == "haar") return wavelet_forward(convert(img, ScalarKind::F64), WaveletKind::Haar);
  if (op == "daubechies") return wavelet_forward(convert(img, ScalarKind::F64), daubechies_kind(f.order));
  return convex_hull(img);
}

FeatureVector apply_feature_op(const ApplyFlags& f, const Image& img) {
  if (f.op == "haralick") return haralick(img.kind() == ScalarKind::U8 ? img : convert(img, ScalarKind::U8));
  if (f.op == "zernike") {
    const double radius = f.radius.value_or(static_cast<double>(std::min(img.rows(), img.cols())) / 2.0);
    return zernike_moments(img, radius, f.degree);
  }
  if (f.op == "lbp") return lbp(img, f.radius.value_or(1.0), f.points);
  if (f.op == "tas") return tas(img);
  return pftas(img);
}

int cmd_apply(const ApplyFlags& f, std::ostream& out) {
  if (is_feature_op(f.op)) {
    if (!f.output.empty()) throw UsageError(f.op + " prints to standard output and takes no output path");
    const FeatureVector v = apply_feature_op(f, read_grey(f.input));
    out << std::setprecision(17);
    for (double x : v.values) out << x << '\n';
    return 0;
  }
  if (f.output.empty()) throw UsageError(f.op + " needs an output path");
  write_pgm(to_writable(apply_image_op(f, read_grey(f.input))), f.output);
  return 0;
}

int cmd_bench(const std::string& input, int reps, std::ostream& out, std::ostream& err) {
  Image img = read_grey(input);
  if (img.kind() != ScalarKind::U8) img = convert(img, ScalarKind::U8);
  print_bench(run_bench(img, reps), out, err);
  return 0;
}

int cmd_surf_demo(const std::string& input, const std::string& output, int k, std::uint64_t seed,
                  int max_points, std::ostream& out, std::ostream& err) {
  const Image img = convert(read_grey(input), ScalarKind::U8);
  const auto points = surf(img, 4, 6, 2);
  if (points.empty()) {
    err << "error: no interest points found in " << input << '\n';
    return 1;
  }
  std::vector<std::vector<double>> descriptors;
  descriptors.reserve(points.size());
  for (const auto& p : points) descriptors.emplace_back(p.descriptor.begin(), p.descriptor.end());
  const int clusters = std::min<int>(k, static_cast<int>(points.size()));
  const KMeansResult km = demo_kmeans(descriptors, clusters, seed);

  const auto shown = std::min<std::size_t>(static_cast<std::size_t>(max_points), points.size());
  const std::vector<int> ids(km.assignments.begin(), km.assignments.begin() + static_cast<std::ptrdiff_t>(shown));
  write_ppm(show_surf(img, std::span(points.data(), shown), ids, kDemoPalette), output);
  out << points.size() << " interest points, " << clusters << " clusters, " << shown << " drawn\n";
  return 0;
}

}  // namespace

Image to_writable(const Image& img) {
  if (img.kind() == ScalarKind::U8 || img.kind() == ScalarKind::U16) return img;
  bool fits = true;
  for (std::size_t r = 0; r < img.rows() && fits; ++r) {
    for (std::size_t c = 0; c < img.cols() && fits; ++c) {
      const double v = img.value(r, c);
      fits = v >= 0.0 && v <= 255.0;
    }
  }
  return convert(img, fits ? ScalarKind::U8 : ScalarKind::U16);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Image processing and SURF demo tool", "visionkit"};
  app.require_subcommand(1);

  ApplyFlags flags;
  std::vector<std::string> all_ops = kImageOps;
  all_ops.insert(all_ops.end(), kFeatureOps.begin(), kFeatureOps.end());
  auto* apply = app.add_subcommand("apply", "Run one operation on an image");
  apply->add_option("op", flags.op, "Operation")->required()->check(CLI::IsMember(all_ops));
  apply->add_option("input", flags.input, "Input PGM or PPM")->required();
  apply->add_option("output", flags.output, "Output PGM (image operations only)");
  apply->add_option("--se", flags.se, "Structuring element")->check(CLI::IsMember({"cross", "box", "disc"}));
  apply->add_option("--radius", flags.radius, "Disc or box radius; zernike and lbp radius")
      ->check(CLI::PositiveNumber);
  apply->add_option("--sigma", flags.sigma, "Gaussian standard deviation")->check(CLI::PositiveNumber);
  apply->add_option("--kernel", flags.kernel, "Convolution kernel, e.g. \"1,2,1;2,4,2;1,2,1\"");
  apply->add_option("--markers", flags.markers, "Marker image for cwatershed");
  apply->add_option("--order", flags.order, "Daubechies order (4, 6 or 8)");
  apply->add_option("--degree", flags.degree, "Zernike degree")->check(CLI::Range(0, 64));
  apply->add_option("--points", flags.points, "LBP sample count")->check(CLI::Range(1, 32));
  apply->add_flag("--just-filter", flags.just_filter, "sobel: write the gradient magnitude");

  std::string bench_input;
  int reps = 5;
  auto* bench = app.add_subcommand("bench", "Time operations as multiples of a max-scan");
  bench->add_option("--reps", reps, "Samples per operation")->check(CLI::Range(1, 1000));
  bench->add_option("input", bench_input, "Input PGM or PPM")->required();

  std::string demo_input, demo_output;
  int k = 5, max_points = 64;
  std::uint64_t seed = 0;
  auto* demo = app.add_subcommand("surf-demo", "Detect, cluster and draw SURF points");
  demo->add_option("--k", k, "Number of clusters")->check(CLI::Range(1, 1000));
  demo->add_option("--seed", seed, "k-means seed");
  demo->add_option("--max-points", max_points, "Points to draw")->check(CLI::Range(1, 1 << 20));
  demo->add_option("input", demo_input, "Input PGM or PPM")->required();
  demo->add_option("output", demo_output, "Output PPM")->required();

  auto usage = [&]() -> std::string {
    for (auto* sub : {apply, bench, demo}) {
      if (sub->parsed()) return sub->help();
    }
    return app.help();
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << usage();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << usage();
    return 2;
  }

  try {
    if (apply->parsed()) return cmd_apply(flags, out);
    if (bench->parsed()) return cmd_bench(bench_input, reps, out, err);
    return cmd_surf_demo(demo_input, demo_output, k, seed, max_points, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << usage();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace visionkit::cli
