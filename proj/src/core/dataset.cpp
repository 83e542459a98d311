#include "mpt/core/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "mpt/core/error.hpp"
#include "mpt/core/species.hpp"

namespace mpt {

std::string_view species_name(int class_id) {
  if (class_id < 1 || class_id > kSpeciesCount) {
    throw ValidationError("species class id out of range: " + std::to_string(class_id));
  }
  return kSpeciesNames[static_cast<std::size_t>(class_id - 1)];
}

std::string background_label(int background_id) {
  if (background_id < 1 || background_id > kBackgroundCount) {
    throw ValidationError("background id must be in [1,14], got " + std::to_string(background_id));
  }
  return background_id <= 7 ? "b" + std::to_string(background_id) : "w" + std::to_string(background_id - 7);
}

std::optional<int> background_from_label(const std::string& label) {
  for (int id = 1; id <= kBackgroundCount; ++id) {
    if (background_label(id) == label) return id;
  }
  return std::nullopt;
}

std::string sequence_name(int background_id, int seq_idx) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d", seq_idx);
  return background_label(background_id) + "-" + buf;
}

std::string split_for_index(int seq_idx) { return seq_idx % 2 == 1 ? "train" : "test"; }

std::string serialize_seqinfo(const SequenceMeta& meta, const std::string& im_dir, const std::string& im_ext) {
  std::ostringstream out;
  out << "[Sequence]\n"
      << "name=" << meta.name << "\n"
      << "imDir=" << im_dir << "\n"
      << "frameRate=" << meta.fps << "\n"
      << "seqLength=" << meta.length << "\n"
      << "imWidth=" << meta.width << "\n"
      << "imHeight=" << meta.height << "\n"
      << "imExt=" << im_ext << "\n";
  return out.str();
}

SequenceMeta parse_seqinfo(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '[' || line[0] == ';' || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", line_no);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto get_int = [&](const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("seqinfo missing key '" + key + "'", 0);
    try {
      return std::stoi(it->second);
    } catch (const std::exception&) {
      throw ParseError("seqinfo key '" + key + "' is not an integer", 0);
    }
  };
  SequenceMeta meta;
  meta.name = kv.count("name") ? kv["name"] : "";
  meta.fps = get_int("frameRate");
  meta.length = get_int("seqLength");
  meta.width = get_int("imWidth");
  meta.height = get_int("imHeight");
  const auto dash = meta.name.find('-');
  if (const auto bg = background_from_label(meta.name.substr(0, dash))) meta.background_id = *bg;
  return meta;
}

std::filesystem::path SequenceDir::image_path(int frame) const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06d.png", frame);
  return path / "img1" / buf;
}

std::vector<SequenceDir> list_sequences(const std::filesystem::path& root, const std::string& split) {
  namespace fs = std::filesystem;
  if (split != "all" && split != "train" && split != "test") {
    throw ValidationError("split must be train, test or all, got '" + split + "'");
  }
  if (!fs::is_directory(root)) throw IoError("dataset root is not a directory", root.string());
  std::vector<SequenceDir> out;
  for (const std::string s : {"test", "train"}) {
    if (split != "all" && split != s) continue;
    const fs::path dir = root / s;
    if (!fs::is_directory(dir)) continue;
    for (const auto& entry : fs::directory_iterator(dir)) {
      const fs::path info = entry.path() / "seqinfo.ini";
      if (!entry.is_directory() || !fs::exists(info)) continue;
      SequenceDir seq;
      seq.path = entry.path();
      seq.split = s;
      try {
        seq.meta = parse_seqinfo(read_text_file(info));
      } catch (const ParseError& e) {
        throw e.with_context(info.string());
      }
      if (seq.meta.name.empty()) seq.meta.name = entry.path().filename().string();
      out.push_back(std::move(seq));
    }
  }
  std::sort(out.begin(), out.end(), [](const SequenceDir& a, const SequenceDir& b) {
    return std::tie(a.split, a.meta.name) < std::tie(b.split, b.meta.name);
  });
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file", path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create file", path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed", path.string());
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace mpt
