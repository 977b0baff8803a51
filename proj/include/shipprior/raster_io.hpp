/**
 * @file raster_io.hpp
 * @brief Grayscale raster files: PGM/PPM (8/16-bit), PNG (8/16-bit) and multi-frame PFM.
 */
#pragma once

#include "shipprior/core.hpp"
#include "shipprior/sse.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace shipprior::io {

/// Unreadable or malformed input file.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Interleaved integer samples, 1 or 3 channels, 8 or 16 bits.
struct Raster {
    int width = 0;
    int height = 0;
    int channels = 1;
    int bit_depth = 8;
    std::vector<std::uint16_t> samples;
};

/// Reads PNG (gray or RGB) or PNM (P2/P5/P6), sniffed by content.
Raster read_raster(const std::filesystem::path& path);

/// Writes PNG for .png, PGM/PPM (P5/P6) otherwise.
void write_raster(const std::filesystem::path& path, const Raster& raster);

GrayImage to_gray(const Raster& raster);
Raster from_gray(const GrayImage& img, int bit_depth);  // rounds, clamps to the depth's range

/// Single-channel files only.
GrayImage load_gray(const std::filesystem::path& path);
SceneMask load_scene_mask(const std::filesystem::path& path);

/// 16-bit raster of round(min(C, 65535)).
Raster prior_raster(const PriorMap& prior);
/// 3-channel 8-bit raster (I, C', C''), every channel clamped to [0, 255].
Raster encoded_raster(const EncodedPrior& enc);
/// Indexed 8-bit raster: 0 Unknown, 1 Positive, 2 Negative.
Raster trimap_raster(const Trimap& t);

/// Concatenated grayscale PFM frames ("Pf", little-endian, bottom row first).
void write_pfm_frames(const std::filesystem::path& path, const std::vector<GrayImage>& frames);
std::vector<GrayImage> read_pfm_frames(const std::filesystem::path& path);

bool is_raster_path(const std::filesystem::path& path);

}  // namespace shipprior::io
