#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mpt/core/dataset.hpp"
#include "mpt/core/error.hpp"
#include "mpt/core/mot_io.hpp"
#include "mpt/core/parallel.hpp"
#include "mpt/metrics/metrics.hpp"

namespace mpt::metrics {

using nlohmann::json;

Summary Summary::of(const ClearMot& c, const IdScores& id) {
  Summary s;
  s.fp = c.fp;
  s.fn = c.fn;
  s.idsw = c.idsw;
  s.gt_total = c.gt_total;
  s.idtp = id.idtp;
  s.idfp = id.idfp;
  s.idfn = id.idfn;
  s.mota = c.mota;
  s.idf1 = id.idf1;
  return s;
}

Summary Summary::pool(std::span<const Summary> parts) {
  Summary s;
  for (const Summary& p : parts) {
    s.fp += p.fp;
    s.fn += p.fn;
    s.idsw += p.idsw;
    s.gt_total += p.gt_total;
    s.idtp += p.idtp;
    s.idfp += p.idfp;
    s.idfn += p.idfn;
  }
  s.mota = mota_from_counts(s.fp, s.fn, s.idsw, s.gt_total);
  s.idf1 = idf1_from_counts(s.idtp, s.idfp, s.idfn);
  return s;
}

EvalReport build_report(std::vector<SequenceScore> sequences) {
  EvalReport r;
  std::sort(sequences.begin(), sequences.end(),
            [](const SequenceScore& a, const SequenceScore& b) { return a.name < b.name; });
  std::map<int, std::vector<Summary>> groups;
  std::vector<Summary> all;
  for (const SequenceScore& s : sequences) {
    groups[s.background_id].push_back(s.summary);
    all.push_back(s.summary);
  }
  for (const auto& [bg, parts] : groups) r.per_background.emplace_back(background_label(bg), Summary::pool(parts));
  r.aggregate = Summary::pool(all);
  r.per_sequence = std::move(sequences);
  return r;
}

namespace {

json summary_json(const Summary& s) {
  return {{"mota", s.mota}, {"idf1", s.idf1},         {"idsw", s.idsw}, {"fp", s.fp},     {"fn", s.fn},
          {"gt_total", s.gt_total}, {"idtp", s.idtp}, {"idfp", s.idfp}, {"idfn", s.idfn}};
}

}  // namespace

std::string EvalReport::to_json() const {
  json j;
  j["aggregate"] = summary_json(aggregate);
  json bg = json::object();
  for (const auto& [label, s] : per_background) bg[label] = summary_json(s);
  j["per_background"] = bg;
  json seqs = json::array();
  for (const SequenceScore& s : per_sequence) {
    json e = summary_json(s.summary);
    e["name"] = s.name;
    e["background"] = background_label(s.background_id);
    seqs.push_back(e);
  }
  j["per_sequence"] = seqs;
  return j.dump(2) + "\n";
}

std::string EvalReport::to_table() const {
  std::vector<std::pair<std::string, Summary>> rows = per_background;
  rows.emplace_back("Average", aggregate);
  return format_table(rows, "Background");
}

EvalReport evaluate_dataset(const std::filesystem::path& dataset_root, const std::filesystem::path& results_root,
                            const std::string& split, int jobs) {
  const std::vector<SequenceDir> dirs = list_sequences(dataset_root, split);
  if (dirs.empty()) throw IoError("no sequences found", dataset_root.string());
  for (const SequenceDir& d : dirs) {
    const auto p = results_root / (d.meta.name + ".txt");
    if (!std::filesystem::exists(p)) throw IoError("missing result file for sequence " + d.meta.name, p.string());
  }
  std::vector<SequenceScore> scores(dirs.size());
  parallel_for(dirs.size(), jobs, [&](std::size_t i) {
    const SequenceDir& d = dirs[i];
    const auto gt = read_mot_file(d.gt_path());
    const auto pred = read_mot_file(results_root / (d.meta.name + ".txt"));
    scores[i].name = d.meta.name;
    scores[i].background_id = d.meta.background_id;
    scores[i].summary = Summary::of(compute_clearmot(gt, pred), compute_id_scores(gt, pred));
  });
  return build_report(std::move(scores));
}

std::string format_mota_cell(double mota) {
  if (mota <= 0.0) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * mota);
  return buf;
}

std::string format_table(const std::vector<std::pair<std::string, Summary>>& rows, const std::string& first_header) {
  std::vector<std::array<std::string, 6>> cells;
  cells.push_back({first_header, "MOTA", "IDF1", "IDs", "FP", "FN"});
  for (const auto& [name, s] : rows) {
    char idf1[32];
    std::snprintf(idf1, sizeof(idf1), "%.1f", 100.0 * s.idf1);
    cells.push_back({name, format_mota_cell(s.mota), idf1, std::to_string(s.idsw), std::to_string(s.fp),
                     std::to_string(s.fn)});
  }
  std::array<std::size_t, 6> width{};
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < 6; ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < 6; ++c) {
      if (c == 0) {
        out << row[c] << std::string(width[c] - row[c].size(), ' ');
      } else {
        out << "  " << std::string(width[c] - row[c].size(), ' ') << row[c];
      }
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace mpt::metrics
