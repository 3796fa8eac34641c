#include "visionkit/watershed.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

namespace visionkit {
namespace {

struct NeighborStep {
  std::ptrdiff_t dr;
  std::ptrdiff_t dc;
};

// FIFO buckets indexed by an integer surface value. Popping the front of the
// lowest nonempty bucket yields exactly the (value, insertion) order of a
// stable priority queue. Every pixel is pushed exactly once, so bucket sizes
// are known up front from the level histogram and all buckets share one
// flat array. A two-level bitmap finds the next nonempty bucket when the
// current one drains.
class BucketQueue {
 public:
  BucketQueue(std::size_t levels, const std::vector<std::size_t>& histogram)
      : head_(levels), tail_(levels), bits_((levels + 63) / 64, 0), summary_((bits_.size() + 63) / 64, 0),
        current_(levels), levels_(levels) {
    std::size_t start = 0;
    for (std::size_t l = 0; l < levels; ++l) {
      head_[l] = tail_[l] = start;
      start += histogram[l];
    }
    slots_.resize(start);
  }

  void push(std::size_t level, std::uint32_t pos) {
    slots_[tail_[level]++] = pos;
    bits_[level / 64] |= std::uint64_t{1} << (level % 64);
    summary_[level / 4096] |= std::uint64_t{1} << ((level / 64) % 64);
    if (level < current_) current_ = level;
  }

  /// False once every bucket is drained.
  bool pop(std::uint32_t& pos) {
    if (current_ == levels_ || head_[current_] == tail_[current_]) {
      if (!advance()) return false;
    }
    pos = slots_[head_[current_]++];
    return true;
  }

 private:
  // Buckets can drain while a lower level is current, so stale bits are
  // cleared here as they are found.
  bool advance() {
    for (;;) {
      if (current_ < levels_) {
        const std::size_t w = current_ / 64;
        bits_[w] &= ~(std::uint64_t{1} << (current_ % 64));
        if (bits_[w] == 0) summary_[w / 64] &= ~(std::uint64_t{1} << (w % 64));
      }
      std::size_t s = 0;
      while (s < summary_.size() && summary_[s] == 0) ++s;
      if (s == summary_.size()) {
        current_ = levels_;
        return false;
      }
      const std::size_t w = s * 64 + static_cast<std::size_t>(std::countr_zero(summary_[s]));
      current_ = w * 64 + static_cast<std::size_t>(std::countr_zero(bits_[w]));
      if (head_[current_] != tail_[current_]) return true;
    }
  }

  std::vector<std::uint32_t> slots_;
  std::vector<std::size_t> head_;
  std::vector<std::size_t> tail_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint64_t> summary_;
  std::size_t current_;
  std::size_t levels_;
};

template <Scalar T>
class HeapQueue {
 public:
  explicit HeapQueue(const std::vector<T>& level) : level_(level) {}

  void push(std::uint32_t pos) { heap_.push({level_[pos], seq_++, pos}); }
  bool pop(std::uint32_t& pos) {
    if (heap_.empty()) return false;
    pos = heap_.top().pos;
    heap_.pop();
    return true;
  }

 private:
  struct Entry {
    T value;
    std::uint64_t seq;
    std::uint32_t pos;
    bool operator>(const Entry& o) const {
      return value > o.value || (value == o.value && seq > o.seq);
    }
  };
  const std::vector<T>& level_;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
  std::uint64_t seq_ = 0;
};

// Surface and labels copied into buffers with a border as wide as the
// neighborhood reach. Border labels are -1, so they count as claimed and the
// flood needs no bounds checks.
template <Scalar T>
struct PaddedGrid {
  std::size_t pad_r;
  std::size_t pad_c;
  std::size_t cols;  // padded width
  std::vector<T> level;
  std::vector<std::int32_t> label;
};

template <Scalar T>
PaddedGrid<T> make_grid(ImageView<const T> surface, ImageView<std::int32_t> markers,
                        const std::vector<NeighborStep>& steps) {
  PaddedGrid<T> g{};
  for (const auto& s : steps) {
    g.pad_r = std::max(g.pad_r, static_cast<std::size_t>(std::abs(s.dr)));
    g.pad_c = std::max(g.pad_c, static_cast<std::size_t>(std::abs(s.dc)));
  }
  g.cols = surface.cols + 2 * g.pad_c;
  const std::size_t rows = surface.rows + 2 * g.pad_r;
  if (rows * g.cols > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::InvalidArgument, "surface: too many pixels for watershed");
  }
  g.level.assign(rows * g.cols, T{});
  g.label.assign(rows * g.cols, -1);
  for (std::size_t r = 0; r < surface.rows; ++r) {
    const std::size_t base = (r + g.pad_r) * g.cols + g.pad_c;
    std::copy(surface.row(r), surface.row(r) + surface.cols, g.level.begin() + static_cast<std::ptrdiff_t>(base));
    std::copy(markers.row(r), markers.row(r) + markers.cols, g.label.begin() + static_cast<std::ptrdiff_t>(base));
  }
  return g;
}

// N > 0 fixes the neighbor count at compile time.
template <std::size_t N, class Queue, class Push>
void flood(std::vector<std::int32_t>& label, const std::vector<std::ptrdiff_t>& deltas,
           const std::vector<std::uint32_t>& seeds, Queue& queue, Push push) {
  std::int32_t* lab = label.data();
  const std::ptrdiff_t* d = deltas.data();
  const std::size_t count = N > 0 ? N : deltas.size();
  for (const std::uint32_t pos : seeds) push(pos);
  std::uint32_t pos = 0;
  while (queue.pop(pos)) {
    const std::int32_t l = lab[pos];
    for (std::size_t k = 0; k < count; ++k) {
      const auto npos = static_cast<std::uint32_t>(static_cast<std::ptrdiff_t>(pos) + d[k]);
      if (lab[npos] == 0) {
        lab[npos] = l;
        push(npos);
      }
    }
  }
}

template <class Queue, class Push>
void flood_any(std::vector<std::int32_t>& label, const std::vector<std::ptrdiff_t>& deltas,
               const std::vector<std::uint32_t>& seeds, Queue& queue, Push push) {
  switch (deltas.size()) {
    case 4: flood<4>(label, deltas, seeds, queue, push); break;
    case 8: flood<8>(label, deltas, seeds, queue, push); break;
    default: flood<0>(label, deltas, seeds, queue, push); break;
  }
}

template <Scalar T>
void run_watershed(ImageView<const T> surface, ImageView<std::int32_t> labels,
                   const std::vector<NeighborStep>& steps) {
  PaddedGrid<T> g = make_grid<T>(surface, labels, steps);
  std::vector<std::ptrdiff_t> deltas;
  for (const auto& s : steps) deltas.push_back(s.dr * static_cast<std::ptrdiff_t>(g.cols) + s.dc);
  std::vector<std::uint32_t> seeds;
  for (std::size_t i = 0; i < g.label.size(); ++i) {
    if (g.label[i] > 0) seeds.push_back(static_cast<std::uint32_t>(i));
  }

  if constexpr (std::is_same_v<T, std::uint8_t> || std::is_same_v<T, std::uint16_t>) {
    const std::size_t levels = std::size_t{std::numeric_limits<T>::max()} + 1;
    std::vector<std::size_t> histogram(levels, 0);
    for (std::size_t i = 0; i < g.label.size(); ++i) {
      if (g.label[i] >= 0) ++histogram[g.level[i]];
    }
    BucketQueue queue(levels, histogram);
    flood_any(g.label, deltas, seeds, queue, [&](std::uint32_t pos) { queue.push(g.level[pos], pos); });
  } else {
    HeapQueue<T> queue(g.level);
    flood_any(g.label, deltas, seeds, queue, [&](std::uint32_t pos) { queue.push(pos); });
  }

  for (std::size_t r = 0; r < labels.rows; ++r) {
    const auto first = g.label.begin() + static_cast<std::ptrdiff_t>((r + g.pad_r) * g.cols + g.pad_c);
    std::copy(first, first + static_cast<std::ptrdiff_t>(labels.cols), labels.row(r));
  }
}

}  // namespace

Image cwatershed(const Image& surface, const Image& markers, const StructuringElement& se) {
  if (surface.empty()) throw Error(ErrorCode::InvalidArgument, "surface: image is empty");
  markers.require_kind(ScalarKind::I32, "markers");
  if (surface.shape() != markers.shape()) {
    throw Error(ErrorCode::ShapeMismatch, "markers: expected shape " + to_string(surface.shape()) +
                                              " (same as surface), got " + to_string(markers.shape()));
  }

  Image labels = markers.clone();
  const auto lv = labels.view<std::int32_t>();
  bool any = false;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (lv.data[i] < 0) {
      throw Error(ErrorCode::InvalidArgument, "markers: labels must be non-negative, found " +
                                                  std::to_string(lv.data[i]));
    }
    any = any || lv.data[i] != 0;
  }
  if (!any) throw Error(ErrorCode::NoMarkers, "markers: no nonzero marker pixel");

  std::vector<NeighborStep> steps;
  for (const auto& cell : se.cells()) {
    if (cell.offset.row != 0 || cell.offset.col != 0) steps.push_back({cell.offset.row, cell.offset.col});
  }

  visit_kind(surface.kind(), [&]<class T>(std::type_identity<T>) {
    const auto sv = surface.view<T>();
    if constexpr (std::is_floating_point_v<T>) {
      for (std::size_t r = 0; r < sv.rows; ++r) {
        for (std::size_t c = 0; c < sv.cols; ++c) {
          if (std::isnan(sv(r, c))) {
            throw Error(ErrorCode::InvalidArgument, "surface: NaN at (" + std::to_string(r) + ", " +
                                                        std::to_string(c) + ")");
          }
        }
      }
    }
    run_watershed<T>(sv, lv, steps);
  });
  return labels;
}

namespace {

// One-dimensional squared distance transform of a sampled function. Infinite
// samples contribute no parabola; if all are infinite the output is too.
void distance_1d(const double* f, std::size_t n, double* d, std::vector<std::size_t>& v,
                 std::vector<double>& z) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::ptrdiff_t k = -1;
  for (std::size_t q = 0; q < n; ++q) {
    if (f[q] == inf) continue;
    const double fq = f[q] + static_cast<double>(q) * static_cast<double>(q);
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -inf;
      z[1] = inf;
      continue;
    }
    double s = 0;
    for (;;) {
      const std::size_t p = v[static_cast<std::size_t>(k)];
      s = (fq - (f[p] + static_cast<double>(p) * static_cast<double>(p))) /
          (2.0 * static_cast<double>(q) - 2.0 * static_cast<double>(p));
      if (s > z[static_cast<std::size_t>(k)]) break;
      --k;
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = s;
    z[static_cast<std::size_t>(k) + 1] = inf;
  }
  if (k < 0) {
    for (std::size_t q = 0; q < n; ++q) d[q] = inf;
    return;
  }
  std::size_t j = 0;
  for (std::size_t q = 0; q < n; ++q) {
    while (z[j + 1] < static_cast<double>(q)) ++j;
    const double dq = static_cast<double>(q) - static_cast<double>(v[j]);
    d[q] = dq * dq + f[v[j]];
  }
}

}  // namespace

Image distance_squared(const Image& binary) {
  if (binary.empty()) throw Error(ErrorCode::InvalidArgument, "binary: image is empty");
  const std::size_t rows = binary.rows();
  const std::size_t cols = binary.cols();
  constexpr double inf = std::numeric_limits<double>::infinity();

  std::vector<double> grid(rows * cols);
  bool has_background = false;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const bool fg = binary.value(r, c) != 0.0;
      grid[r * cols + c] = fg ? inf : 0.0;
      has_background = has_background || !fg;
    }
  }
  if (!has_background) {
    throw Error(ErrorCode::AllForeground,
                "binary: no background (zero) pixel, distance is undefined");
  }

  const std::size_t n = std::max(rows, cols);
  std::vector<std::size_t> v(n);
  std::vector<double> z(n + 1);
  std::vector<double> line(n);
  std::vector<double> result(n);

  for (std::size_t r = 0; r < rows; ++r) {
    double* row = grid.data() + r * cols;
    distance_1d(row, cols, result.data(), v, z);
    std::copy(result.begin(), result.begin() + static_cast<std::ptrdiff_t>(cols), row);
  }
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) line[r] = grid[r * cols + c];
    distance_1d(line.data(), rows, result.data(), v, z);
    for (std::size_t r = 0; r < rows; ++r) grid[r * cols + c] = result[r];
  }

  constexpr std::size_t exact_int_limit = std::size_t{1} << 15;
  if (rows <= exact_int_limit && cols <= exact_int_limit) {
    Image out(binary.shape(), ScalarKind::I32);
    auto ov = out.view<std::int32_t>();
    for (std::size_t i = 0; i < grid.size(); ++i) ov.data[i] = static_cast<std::int32_t>(grid[i]);
    return out;
  }
  return Image::from_values<double>(binary.shape(), grid);
}

}  // namespace visionkit
