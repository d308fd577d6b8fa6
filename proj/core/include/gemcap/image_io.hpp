#pragma once

#include <string>

#include "gemcap/tensor.hpp"

namespace gemcap {

/// Writes an RGB image tensor [3,h,w] with values in [0,1] as an 8-bit
/// PNG; each value is quantized by round(v*255).
void write_png(const std::string& path, const Tensor& image);

/// Reads an 8-bit PNG back into a [3,h,w] tensor in [0,1]. Grayscale and
/// RGBA files are accepted (expanded / alpha-dropped).
Tensor read_png(const std::string& path);

} // namespace gemcap
