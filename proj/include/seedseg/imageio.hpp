#pragma once

#include <filesystem>

#include "seedseg/image.hpp"

namespace seedseg {

// Decodes a JPEG/PNG/TIFF file (extension decides the codec, case-insensitive).
// Grayscale, palette and alpha sources are promoted to plain RGB; alpha is
// discarded. Throws FileNotFound, UnsupportedFormat or CorruptImage.
RgbImage load_image(const std::filesystem::path& path);

// True for the extensions load_image accepts.
bool is_supported_image(const std::filesystem::path& path);

// Writes a lossless 8-bit grayscale PNG, foreground = 255, background = 0.
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

// Reads an 8-bit mask PNG back; any value > 127 counts as foreground.
BinaryMask load_mask(const std::filesystem::path& path);

// Lossless RGB writers (PNG for pipeline outputs, TIFF exists so TIFF input
// decoding is testable without binary fixtures).
void save_image_png(const RgbImage& img, const std::filesystem::path& path);
void save_image_tiff(const RgbImage& img, const std::filesystem::path& path);

// Lossy JPEG writer, used to exercise the JPEG decode path and chroma noise.
void save_image_jpeg(const RgbImage& img, const std::filesystem::path& path, int quality = 90);

} // namespace seedseg
