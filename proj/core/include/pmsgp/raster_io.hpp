#pragma once

#include <filesystem>
#include <iosfwd>

#include "pmsgp/imaging.hpp"

namespace pmsgp {

// Depth rasters: 16-byte header ("PMDI", u32 LE width, u32 LE height, u32 reserved = 0)
// followed by width * height little-endian float32 meters, row-major.
// Masks use magic "PMBM" and one byte (0/1) per pixel.

void write_depth(std::ostream& os, const DepthImage& img);
DepthImage read_depth(std::istream& is);
void write_mask(std::ostream& os, const BinaryMask& mask);
BinaryMask read_mask(std::istream& is);

void save_depth(const std::filesystem::path& path, const DepthImage& img);
DepthImage load_depth(const std::filesystem::path& path);
void save_mask(const std::filesystem::path& path, const BinaryMask& mask);
BinaryMask load_mask(const std::filesystem::path& path);

}  // namespace pmsgp
