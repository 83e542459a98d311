#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mpt/core/records.hpp"

namespace mpt {

/// Background presets are numbered 1..14: 1..7 blue ("b1".."b7"), 8..14 white ("w1".."w7").
inline constexpr int kBackgroundCount = 14;
std::string background_label(int background_id);
/// Inverse of background_label; std::nullopt for unknown labels.
std::optional<int> background_from_label(const std::string& label);

/// Directory name of a sequence: "<label>-<seq_idx two digits>", e.g. "b3-07".
std::string sequence_name(int background_id, int seq_idx);
/// Alternating split: odd sequence indices train, even test.
std::string split_for_index(int seq_idx);

/// MOTChallenge seqinfo.ini text.
std::string serialize_seqinfo(const SequenceMeta& meta, const std::string& im_dir = "img1",
                              const std::string& im_ext = ".png");
SequenceMeta parse_seqinfo(const std::string& text);

/// Location of one sequence on disk.
struct SequenceDir {
  std::filesystem::path path;
  std::string split;
  SequenceMeta meta;

  std::filesystem::path image_path(int frame) const;
  std::filesystem::path gt_path() const { return path / "gt" / "gt.txt"; }
};

/// Enumerates `<root>/<split>/<name>/seqinfo.ini`, sorted by (split, name).
/// `split` filters to "train" or "test"; "all" keeps both.
std::vector<SequenceDir> list_sequences(const std::filesystem::path& root, const std::string& split = "all");

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Stable 64-bit FNV-1a digest, used for manifest checksums.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

}  // namespace mpt
