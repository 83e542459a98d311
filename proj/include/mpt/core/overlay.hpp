#pragma once

#include <span>

#include "mpt/core/image.hpp"
#include "mpt/core/records.hpp"

namespace mpt {

/// Fixed colour per identity, independent of run or frame.
Rgb id_color(int id);

/// Draws each record's box outline (2 px) in its id colour and the id in a
/// 3x5 digit font just above it, clipped to the frame.
void draw_overlay(Frame& frame, std::span<const GtRecord> records);

}  // namespace mpt
