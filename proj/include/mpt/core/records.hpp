#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mpt/core/geometry.hpp"

namespace mpt {

/// Detector output for one frame. Frame indices are 1-based.
struct Detection {
  BoundingBox box;
  double score = 1.0;
  int frame = 1;
};

/// One line of a MOTChallenge-style annotation or result file.
///
/// Ground truth uses conf in {0,1} and class_id in [1,27]; tracker output
/// stores the tracker score in conf and may leave the class unknown (0, written as -1).
struct GtRecord {
  int frame = 1;
  int id = 1;
  BoundingBox box{0, 0, 1, 1};
  double conf = 1.0;
  int class_id = 0;
  double visibility = 1.0;

  bool operator==(const GtRecord&) const = default;
};

struct SequenceMeta {
  std::string name;
  int fps = 25;
  int width = 0;
  int height = 0;
  int length = 0;
  int background_id = 1;
  std::uint64_t seed = 0;
};

/// Records of a single frame, in file order.
std::vector<GtRecord> records_in_frame(const std::vector<GtRecord>& records, int frame);

/// Highest frame index that appears in `records` (0 for an empty list).
int last_frame(const std::vector<GtRecord>& records);

}  // namespace mpt
