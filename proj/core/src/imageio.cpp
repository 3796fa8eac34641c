#include "visionkit/imageio.hpp"

#include <cctype>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <sstream>

namespace visionkit {
namespace {

[[noreturn]] void malformed(std::size_t offset, const std::string& what) {
  throw Error(ErrorCode::Malformed, "netpbm: " + what + " at byte offset " + std::to_string(offset));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::size_t offset() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ >= bytes_.size(); }

  std::string_view magic() {
    if (bytes_.size() < 2 || bytes_[0] != 'P') malformed(0, "missing magic number");
    pos_ = 2;
    return bytes_.substr(0, 2);
  }

  // Whitespace and '#' comments, then a decimal token.
  std::uint64_t header_number(const char* what) {
    skip_space_and_comments();
    return number(what);
  }

  // Exactly one whitespace byte separates the header from a binary raster.
  void single_whitespace() {
    if (at_end() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      malformed(pos_, "expected whitespace before raster");
    }
    ++pos_;
  }

  std::uint64_t ascii_sample() {
    skip_space_and_comments();
    return number("sample");
  }

  std::uint8_t byte() {
    if (at_end()) malformed(pos_, "truncated raster");
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }

 private:
  void skip_space_and_comments() {
    while (!at_end()) {
      const char ch = bytes_[pos_];
      if (ch == '#') {
        while (!at_end() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::uint64_t number(const char* what) {
    if (at_end()) malformed(pos_, std::string("unexpected end of data reading ") + what);
    if (!std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      malformed(pos_, std::string("expected a decimal ") + what);
    }
    std::uint64_t v = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      v = v * 10 + static_cast<std::uint64_t>(bytes_[pos_] - '0');
      if (v > (std::uint64_t{1} << 40)) malformed(pos_, std::string(what) + " is too large");
      ++pos_;
    }
    return v;
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

struct Header {
  bool binary;
  std::size_t rows;
  std::size_t cols;
  std::uint64_t maxval;
};

Header parse_header(Reader& in, char ascii, char binary, const char* format) {
  const std::string_view m = in.magic();
  if (m[1] != ascii && m[1] != binary) {
    malformed(1, std::string("not a ") + format + " file (magic P" + std::string(1, m[1]) + ")");
  }
  Header h{};
  h.binary = m[1] == binary;
  const std::size_t width_at = in.offset();
  h.cols = static_cast<std::size_t>(in.header_number("width"));
  h.rows = static_cast<std::size_t>(in.header_number("height"));
  if (h.cols == 0 || h.rows == 0) malformed(width_at, "zero image dimension");
  const std::size_t maxval_at = in.offset();
  h.maxval = in.header_number("maxval");
  if (h.maxval == 0) malformed(maxval_at, "maxval must be positive");
  if (h.binary) in.single_whitespace();
  return h;
}

std::uint64_t checked_sample(std::uint64_t v, std::uint64_t maxval, std::size_t offset) {
  if (v > maxval) malformed(offset, "sample " + std::to_string(v) + " exceeds maxval " + std::to_string(maxval));
  return v;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (f.bad()) throw Error(ErrorCode::Io, "error reading '" + path.string() + "'");
  return bytes;
}

void dump(const std::string& bytes, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  f.flush();
  if (!f) throw Error(ErrorCode::Io, "error writing '" + path.string() + "'");
}

}  // namespace

Image decode_pgm(std::string_view bytes) {
  Reader in(bytes);
  const Header h = parse_header(in, '2', '5', "PGM");
  if (h.maxval > 65535) {
    throw Error(ErrorCode::UnsupportedMaxval, "maxval " + std::to_string(h.maxval) + " exceeds 65535");
  }
  const bool wide = h.maxval > 255;
  Image img({h.rows, h.cols}, wide ? ScalarKind::U16 : ScalarKind::U8);
  const std::size_t n = h.rows * h.cols;
  auto sample = [&]() -> std::uint64_t {
    const std::size_t at = in.offset();
    if (!h.binary) return checked_sample(in.ascii_sample(), h.maxval, at);
    std::uint64_t v = in.byte();
    if (wide) v = (v << 8) | in.byte();
    return checked_sample(v, h.maxval, at);
  };
  if (wide) {
    auto* d = img.view<std::uint16_t>().data;
    for (std::size_t i = 0; i < n; ++i) d[i] = static_cast<std::uint16_t>(sample());
  } else {
    auto* d = img.view<std::uint8_t>().data;
    for (std::size_t i = 0; i < n; ++i) d[i] = static_cast<std::uint8_t>(sample());
  }
  return img;
}

Image read_pgm(const std::filesystem::path& path) { return decode_pgm(slurp(path)); }

std::string encode_pgm(const Image& img) {
  if (img.kind() != ScalarKind::U8 && img.kind() != ScalarKind::U16) {
    throw Error(ErrorCode::KindMismatch, std::string("img: PGM holds U8 or U16 samples, got ") + std::string(to_string(img.kind())));
  }
  const bool wide = img.kind() == ScalarKind::U16;
  std::string out = "P5\n" + std::to_string(img.cols()) + " " + std::to_string(img.rows()) + "\n" +
                    (wide ? "65535" : "255") + "\n";
  out.reserve(out.size() + img.size() * (wide ? 2 : 1));
  for (std::size_t r = 0; r < img.rows(); ++r) {
    for (std::size_t c = 0; c < img.cols(); ++c) {
      if (wide) {
        const std::uint16_t v = img.at<std::uint16_t>(r, c);
        out.push_back(static_cast<char>(v >> 8));
        out.push_back(static_cast<char>(v & 0xFF));
      } else {
        out.push_back(static_cast<char>(img.at<std::uint8_t>(r, c)));
      }
    }
  }
  return out;
}

void write_pgm(const Image& img, const std::filesystem::path& path) { dump(encode_pgm(img), path); }

RgbImage decode_ppm(std::string_view bytes) {
  Reader in(bytes);
  const Header h = parse_header(in, '3', '6', "PPM");
  if (h.maxval > 255) {
    throw Error(ErrorCode::UnsupportedMaxval, "PPM maxval " + std::to_string(h.maxval) + " exceeds 255");
  }
  RgbImage rgb(h.rows, h.cols);
  for (auto& v : rgb.data) {
    const std::size_t at = in.offset();
    v = static_cast<std::uint8_t>(checked_sample(h.binary ? in.byte() : in.ascii_sample(), h.maxval, at));
  }
  return rgb;
}

RgbImage read_ppm(const std::filesystem::path& path) { return decode_ppm(slurp(path)); }

std::string encode_ppm(const RgbImage& img) {
  if (img.rows == 0 || img.cols == 0 || img.data.size() != img.rows * img.cols * 3) {
    throw Error(ErrorCode::ShapeMismatch, "img: RGB buffer does not match its dimensions");
  }
  std::string out = "P6\n" + std::to_string(img.cols) + " " + std::to_string(img.rows) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.data.data()), img.data.size());
  return out;
}

void write_ppm(const RgbImage& img, const std::filesystem::path& path) { dump(encode_ppm(img), path); }

Image as_grey(const RgbImage& rgb) {
  Image out({rgb.rows, rgb.cols}, ScalarKind::F64);
  auto* d = out.view<double>().data;
  for (std::size_t i = 0; i < rgb.rows * rgb.cols; ++i) {
    const std::uint8_t* p = rgb.data.data() + 3 * i;
    d[i] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
  }
  return out;
}

Image read_grey(const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '3' || bytes[1] == '6')) {
    return as_grey(decode_ppm(bytes));
  }
  return decode_pgm(bytes);
}

}  // namespace visionkit
