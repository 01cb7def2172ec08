#pragma once

// Raster file formats: PFM (float), PGM/PPM (8-bit), OBJ height fields.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "normint/domain.hpp"
#include "normint/raster.hpp"

namespace normint {

using Rgb = std::array<std::uint8_t, 3>;

/// Grayscale "Pf". Rows are stored bottom-to-top; a negative scale means
/// little-endian. Throws IoError on malformed input.
Raster<float> read_pfm(const std::filesystem::path& path);
Raster<float> read_pfm(std::istream& in);
/// Always written little-endian (scale −1).
void write_pfm(const std::filesystem::path& path, const Raster<float>& r);
void write_pfm(std::ostream& out, const Raster<float>& r);

Raster<double> to_double(const Raster<float>& r);
Raster<float> to_float(const Raster<double>& r);

/// Binary P5 with maxval ≤ 255.
Raster<std::uint8_t> read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const Raster<std::uint8_t>& r);

/// Binary P6 with maxval 255.
Raster<Rgb> read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const Raster<Rgb>& r);

/// Mask from a P5 image: value > 127 is inside.
DomainMask read_mask(const std::filesystem::path& path);
void write_mask(const std::filesystem::path& path, const DomainMask& mask);

/// Height-field mesh over the inside pixels: vertex (v, −u, z) per pixel,
/// two triangles per fully inside 2×2 block, one when exactly three corners
/// are inside.
void write_obj(std::ostream& out, const Raster<double>& z, const DomainMask& mask);
void write_obj(const std::filesystem::path& path, const Raster<double>& z,
               const DomainMask& mask);

}  // namespace normint
