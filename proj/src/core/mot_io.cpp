#include "mpt/core/mot_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <utility>

#include "mpt/core/error.hpp"

namespace mpt {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double to_number(std::string_view field, int line_no, int column) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw ParseError("field " + std::to_string(column + 1) + " is not a number: '" + std::string(field) + "'",
                     line_no);
  }
  return value;
}

int to_integer(double v, const char* what, int line_no) {
  if (v != std::floor(v) || std::abs(v) > 2.0e9) {
    throw ParseError(std::string(what) + " must be an integer", line_no);
  }
  return static_cast<int>(v);
}

GtRecord parse_line(std::string_view line, int line_no) {
  std::vector<double> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::string_view part = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    fields.push_back(to_number(part, line_no, static_cast<int>(fields.size())));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (fields.size() < 6) {
    throw ParseError("expected at least 6 comma-separated fields, got " + std::to_string(fields.size()), line_no);
  }

  GtRecord rec;
  rec.frame = to_integer(fields[0], "frame", line_no);
  rec.id = to_integer(fields[1], "id", line_no);
  if (rec.frame < 1) throw ParseError("frame index must be >= 1", line_no);
  if (rec.id < 1) throw ParseError("id must be >= 1", line_no);
  try {
    rec.box = BoundingBox(fields[2], fields[3], fields[4], fields[5]);
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), line_no);
  }
  rec.conf = fields.size() > 6 ? fields[6] : 1.0;
  if (fields.size() > 7) {
    const int cls = to_integer(fields[7], "class", line_no);
    rec.class_id = cls < 0 ? 0 : cls;
  }
  rec.visibility = fields.size() > 8 ? fields[8] : 1.0;
  return rec;
}

void sort_and_check(std::vector<GtRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const GtRecord& a, const GtRecord& b) {
    return std::pair(a.frame, a.id) < std::pair(b.frame, b.id);
  });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].frame == records[i - 1].frame && records[i].id == records[i - 1].id) {
      throw ValidationError("duplicate (frame, id) = (" + std::to_string(records[i].frame) + ", " +
                            std::to_string(records[i].id) + ")");
    }
  }
}

}  // namespace

std::vector<GtRecord> parse_mot(std::string_view text) {
  std::vector<GtRecord> records;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    ++line_no;
    const std::string_view line = trim(raw);
    if (!line.empty()) records.push_back(parse_line(line, line_no));
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  sort_and_check(records);
  return records;
}

std::vector<GtRecord> parse_mot(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_mot(std::string_view(text));
}

std::string format_real(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string serialize_mot(const std::vector<GtRecord>& records) {
  std::vector<const GtRecord*> order;
  order.reserve(records.size());
  for (const auto& r : records) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(), [](const GtRecord* a, const GtRecord* b) {
    return std::pair(a->frame, a->id) < std::pair(b->frame, b->id);
  });

  std::string out;
  out.reserve(records.size() * 32);
  for (const GtRecord* r : order) {
    const long long w = std::max(1LL, round_half_up(r->box.w()));
    const long long h = std::max(1LL, round_half_up(r->box.h()));
    out += std::to_string(r->frame);
    out += ',';
    out += std::to_string(r->id);
    out += ',';
    out += std::to_string(round_half_up(r->box.x()));
    out += ',';
    out += std::to_string(round_half_up(r->box.y()));
    out += ',';
    out += std::to_string(w);
    out += ',';
    out += std::to_string(h);
    out += ',';
    out += format_real(r->conf);
    out += ',';
    out += r->class_id > 0 ? std::to_string(r->class_id) : std::string("-1");
    out += ',';
    out += format_real(r->visibility);
    out += '\n';
  }
  return out;
}

std::vector<GtRecord> read_mot_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open MOT file", path.string());
  try {
    return parse_mot(in);
  } catch (const ParseError& e) {
    throw e.with_context(path.string());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_mot_file(const std::filesystem::path& path, const std::vector<GtRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create MOT file", path.string());
  const std::string text = serialize_mot(records);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed", path.string());
}

std::vector<GtRecord> records_in_frame(const std::vector<GtRecord>& records, int frame) {
  std::vector<GtRecord> out;
  for (const auto& r : records) {
    if (r.frame == frame) out.push_back(r);
  }
  return out;
}

int last_frame(const std::vector<GtRecord>& records) {
  int last = 0;
  for (const auto& r : records) last = std::max(last, r.frame);
  return last;
}

}  // namespace mpt
