#pragma once

#include <cstdint>
#include <vector>

namespace visionkit::cli {

struct KMeansResult {
  std::vector<int> assignments;               // one per input vector, in [0, k)
  std::vector<std::vector<double>> centers;   // k centers
  std::vector<double> inertia;                // after each assignment step
  int iterations = 0;
};

/// Lloyd's algorithm with k-means++ seeding. Stops after 100 iterations or
/// once the relative change in inertia drops below 1e-6. Deterministic for a
/// given seed. Throws TooFewVectors when k exceeds the number of vectors.
KMeansResult demo_kmeans(const std::vector<std::vector<double>>& vectors, int k, std::uint64_t seed);

}  // namespace visionkit::cli
