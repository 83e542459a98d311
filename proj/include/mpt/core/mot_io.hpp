#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "mpt/core/records.hpp"

namespace mpt {

/// Parse `frame,id,x,y,w,h[,conf[,class[,visibility]]]` lines.
///
/// Missing conf defaults to 1, missing or -1 class to 0 (unknown), missing
/// visibility to 1.0. Blank lines are skipped. The result is sorted by (frame, id).
/// Throws ParseError (with line number) on malformed lines and ValidationError on
/// duplicate (frame, id) pairs.
std::vector<GtRecord> parse_mot(std::string_view text);
std::vector<GtRecord> parse_mot(std::istream& in);

/// Canonical text: one LF-terminated line per record ordered by (frame, id),
/// box fields rounded half-up to integers, unknown class written as -1.
std::string serialize_mot(const std::vector<GtRecord>& records);

std::vector<GtRecord> read_mot_file(const std::filesystem::path& path);
void write_mot_file(const std::filesystem::path& path, const std::vector<GtRecord>& records);

/// Shortest decimal form used for the real-valued columns (conf, visibility).
std::string format_real(double v);

}  // namespace mpt
