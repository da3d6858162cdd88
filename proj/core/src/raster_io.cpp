#include "pmsgp/raster_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace pmsgp {
namespace {

constexpr std::array<char, 4> kDepthMagic{'P', 'M', 'D', 'I'};
constexpr std::array<char, 4> kMaskMagic{'P', 'M', 'B', 'M'};
// Reject absurd headers before allocating.
constexpr std::uint32_t kMaxSide = 1u << 15;

void put_u32(std::ostream& os, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                              static_cast<unsigned char>((v >> 8) & 0xff),
                              static_cast<unsigned char>((v >> 16) & 0xff),
                              static_cast<unsigned char>((v >> 24) & 0xff)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw Error(Errc::kParse, "truncated raster header");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_header(std::ostream& os, const std::array<char, 4>& magic, int w, int h) {
  os.write(magic.data(), 4);
  put_u32(os, static_cast<std::uint32_t>(w));
  put_u32(os, static_cast<std::uint32_t>(h));
  put_u32(os, 0);
}

std::pair<int, int> read_header(std::istream& is, const std::array<char, 4>& magic) {
  std::array<char, 4> got{};
  if (!is.read(got.data(), 4)) throw Error(Errc::kParse, "truncated raster header");
  if (got != magic) {
    throw Error(Errc::kParse, "bad raster magic, expected " + std::string(magic.data(), 4));
  }
  const std::uint32_t w = get_u32(is);
  const std::uint32_t h = get_u32(is);
  const std::uint32_t reserved = get_u32(is);
  if (reserved != 0) throw Error(Errc::kParse, "raster reserved header field must be 0");
  if (w == 0 || h == 0 || w > kMaxSide || h > kMaxSide) {
    throw Error(Errc::kParse, "raster dimensions out of range");
  }
  return {static_cast<int>(w), static_cast<int>(h)};
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::kIo, "cannot open " + path.string() + " for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::kIo, "cannot open " + path.string());
  return is;
}

}  // namespace

void write_depth(std::ostream& os, const DepthImage& img) {
  write_header(os, kDepthMagic, img.width(), img.height());
  for (float v : img.values()) put_u32(os, std::bit_cast<std::uint32_t>(v));
}

DepthImage read_depth(std::istream& is) {
  const auto [w, h] = read_header(is, kDepthMagic);
  DepthImage img(w, h, 0.0f);
  for (float& v : img.values()) {
    v = std::bit_cast<float>(get_u32(is));
    if (!std::isfinite(v) || v < 0.0f) throw Error(Errc::kParse, "depth payload must be finite and >= 0");
  }
  return img;
}

void write_mask(std::ostream& os, const BinaryMask& mask) {
  write_header(os, kMaskMagic, mask.width(), mask.height());
  for (std::uint8_t v : mask.values()) os.put(v ? 1 : 0);
}

BinaryMask read_mask(std::istream& is) {
  const auto [w, h] = read_header(is, kMaskMagic);
  BinaryMask mask(w, h, 0);
  for (std::uint8_t& v : mask.values()) {
    const int c = is.get();
    if (c == std::char_traits<char>::eof()) throw Error(Errc::kParse, "truncated mask payload");
    if (c > 1) throw Error(Errc::kParse, "mask payload bytes must be 0 or 1");
    v = static_cast<std::uint8_t>(c);
  }
  return mask;
}

void save_depth(const std::filesystem::path& path, const DepthImage& img) {
  auto os = open_out(path);
  write_depth(os, img);
}

DepthImage load_depth(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_depth(is);
}

void save_mask(const std::filesystem::path& path, const BinaryMask& mask) {
  auto os = open_out(path);
  write_mask(os, mask);
}

BinaryMask load_mask(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_mask(is);
}

}  // namespace pmsgp
