#include "kmeans.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "visionkit/error.hpp"

namespace visionkit::cli {
namespace {

constexpr int kMaxIterations = 100;
constexpr double kRelativeTolerance = 1e-6;

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::vector<std::vector<double>> seed_centers(const std::vector<std::vector<double>>& vectors, int k,
                                              std::mt19937_64& rng) {
  const std::size_t n = vectors.size();
  std::vector<std::vector<double>> centers;
  std::vector<bool> chosen(n, false);
  std::size_t first = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  centers.push_back(vectors[first]);
  chosen[first] = true;
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  while (centers.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(vectors[i], centers.back()));
      total += d2[i];
    }
    std::size_t pick = n;
    if (total > 0.0) {
      // Inverse-CDF draw so the result depends only on the engine output.
      const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (d2[i] > 0.0 && u < acc) {
          pick = i;
          break;
        }
      }
      if (pick == n) {
        for (std::size_t i = n; i-- > 0;) {
          if (d2[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    } else {
      // Every remaining vector duplicates a center.
      for (std::size_t i = 0; i < n && pick == n; ++i) {
        if (!chosen[i]) pick = i;
      }
    }
    chosen[pick] = true;
    centers.push_back(vectors[pick]);
  }
  return centers;
}

}  // namespace

KMeansResult demo_kmeans(const std::vector<std::vector<double>>& vectors, int k, std::uint64_t seed) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k: must be at least 1, got " + std::to_string(k));
  if (static_cast<std::size_t>(k) > vectors.size()) {
    throw Error(ErrorCode::TooFewVectors, "vectors: k = " + std::to_string(k) + " exceeds the " +
                                              std::to_string(vectors.size()) + " input vectors");
  }
  const std::size_t dim = vectors.front().size();
  for (const auto& v : vectors) {
    if (v.size() != dim) throw Error(ErrorCode::LengthMismatch, "vectors: all vectors must have the same length");
  }

  std::mt19937_64 rng(seed);
  KMeansResult result;
  result.centers = seed_centers(vectors, k, rng);
  result.assignments.assign(vectors.size(), 0);

  for (int iter = 0; iter < kMaxIterations; ++iter) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = squared_distance(vectors[i], result.centers[static_cast<std::size_t>(c)]);
        if (d < best) {
          best = d;
          result.assignments[i] = c;
        }
      }
      inertia += best;
    }
    result.inertia.push_back(inertia);
    result.iterations = iter + 1;

    if (result.inertia.size() >= 2) {
      const double prev = result.inertia[result.inertia.size() - 2];
      if (prev - inertia <= kRelativeTolerance * prev) break;
    }
    if (inertia == 0.0 || iter + 1 == kMaxIterations) break;

    std::vector<std::vector<double>> sums(static_cast<std::size_t>(k), std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      const auto c = static_cast<std::size_t>(result.assignments[i]);
      ++counts[c];
      for (std::size_t j = 0; j < dim; ++j) sums[c][j] += vectors[i][j];
    }
    for (std::size_t c = 0; c < sums.size(); ++c) {
      if (counts[c] == 0) continue;  // an empty cluster keeps its center
      for (std::size_t j = 0; j < dim; ++j) result.centers[c][j] = sums[c][j] / static_cast<double>(counts[c]);
    }
  }
  return result;
}

}  // namespace visionkit::cli
