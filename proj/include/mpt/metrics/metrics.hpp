#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mpt/core/records.hpp"

namespace mpt::metrics {

/// A gt box and a prediction correspond when IoU >= this.
inline constexpr double kIouThreshold = 0.5;

/// Identity bookkeeping carried between frames.
struct MatchState {
  std::map<int, int> previous;      ///< gt id -> pred id matched in the previous frame
  std::map<int, int> last_matched;  ///< gt id -> pred id of its most recent match
};

struct FrameMatch {
  std::vector<std::pair<int, int>> matches;  ///< (gt id, pred id), sorted by gt id
  int fp = 0;
  int fn = 0;
  int idsw = 0;
};

/// CLEAR matching of one frame. Pairs from the previous frame that still reach
/// IoU >= 0.5 are kept; the rest are matched by a maximum-cardinality,
/// minimum-(1 - IoU) assignment among pairs with IoU >= 0.5. A switch is a gt id
/// whose pred id differs from the one it was last matched to. Updates `state`.
FrameMatch match_frame(MatchState& state, std::span<const GtRecord> gt, std::span<const GtRecord> pred);

struct ClearMot {
  double mota = 0.0;  ///< 1 - (fp + fn + idsw) / max(gt_total, 1)
  long fp = 0;
  long fn = 0;
  long idsw = 0;
  long gt_total = 0;
  long matches = 0;
};

double mota_from_counts(long fp, long fn, long idsw, long gt_total);

ClearMot compute_clearmot(const std::vector<GtRecord>& gt, const std::vector<GtRecord>& pred);

struct IdScores {
  double idf1 = 0.0;  ///< 2 idtp / (2 idtp + idfp + idfn); 1 when there are no boxes at all
  long idtp = 0;
  long idfp = 0;
  long idfn = 0;
};

double idf1_from_counts(long idtp, long idfp, long idfn);

/// Global one-to-one identity matching maximising the number of frames in which
/// matched identities overlap at IoU >= 0.5, solved exactly with the assignment
/// solver on the (G + P) x (P + G) IDFP + IDFN cost construction.
IdScores compute_id_scores(const std::vector<GtRecord>& gt, const std::vector<GtRecord>& pred);
double compute_idf1(const std::vector<GtRecord>& gt, const std::vector<GtRecord>& pred);

/// Pooled counts for a set of sequences.
struct Summary {
  double mota = 0.0;
  double idf1 = 0.0;
  long fp = 0;
  long fn = 0;
  long idsw = 0;
  long gt_total = 0;
  long idtp = 0;
  long idfp = 0;
  long idfn = 0;

  static Summary of(const ClearMot& c, const IdScores& id);
  /// Sums the counts and recomputes both ratios from them.
  static Summary pool(std::span<const Summary> parts);
};

struct SequenceScore {
  std::string name;
  int background_id = 1;
  Summary summary;
};

struct EvalReport {
  Summary aggregate;                     ///< pooled over every sequence
  std::vector<SequenceScore> per_sequence;  ///< sorted by name
  /// Pooled per background label ("b1".."b7", "w1".."w7"), in that order.
  std::vector<std::pair<std::string, Summary>> per_background;

  double mota() const { return aggregate.mota; }
  double idf1() const { return aggregate.idf1; }

  std::string to_json() const;
  /// Per-background rows followed by an "Average" row.
  std::string to_table() const;
};

EvalReport build_report(std::vector<SequenceScore> sequences);

/// Scores `<results_root>/<name>.txt` against every sequence under
/// `dataset_root` (filtered by split). A missing result file is an IoError.
EvalReport evaluate_dataset(const std::filesystem::path& dataset_root, const std::filesystem::path& results_root,
                            const std::string& split = "all", int jobs = 1);

/// Percentages with one decimal in MOTA, IDF1, IDs, FP, FN order. A MOTA at or
/// below zero is printed as '-'.
std::string format_table(const std::vector<std::pair<std::string, Summary>>& rows,
                         const std::string& first_header = "Sequence");
std::string format_mota_cell(double mota);

}  // namespace mpt::metrics
