#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "roadrand/labelmap.hpp"

namespace roadrand::image_io {

// 8-bit palette PNG whose pixel index is the class id. `colors` fills the
// PLTE chunk (index -> colour); missing entries are written black.
void write_label_png(const std::filesystem::path& path,
                     const labelmap::LabelMap& label,
                     const std::vector<Rgb>& colors);

// Accepts 8-bit palette or 8-bit grayscale PNGs and returns raw indices.
labelmap::LabelMap read_label_png(const std::filesystem::path& path);

void write_rgb_png(const std::filesystem::path& path,
                   const labelmap::RgbImage& image);

// Accepts 8-bit RGB, RGBA (alpha dropped), gray and palette PNGs.
labelmap::RgbImage read_rgb_png(const std::filesystem::path& path);

}  // namespace roadrand::image_io
