#include <algorithm>
#include <map>
#include <set>

#include "mpt/metrics/metrics.hpp"
#include "mpt/trackers/assignment.hpp"

namespace mpt::metrics {

namespace {

std::map<int, std::vector<GtRecord>> by_frame(const std::vector<GtRecord>& records) {
  std::map<int, std::vector<GtRecord>> out;
  for (const GtRecord& r : records) out[r.frame].push_back(r);
  return out;
}

}  // namespace

FrameMatch match_frame(MatchState& state, std::span<const GtRecord> gt, std::span<const GtRecord> pred) {
  std::map<int, const GtRecord*> gt_by_id, pred_by_id;
  for (const GtRecord& g : gt) gt_by_id[g.id] = &g;
  for (const GtRecord& p : pred) pred_by_id[p.id] = &p;

  FrameMatch out;
  std::set<int> used_gt, used_pred;
  for (const auto& [g, p] : state.previous) {
    const auto gi = gt_by_id.find(g);
    const auto pi = pred_by_id.find(p);
    if (gi == gt_by_id.end() || pi == pred_by_id.end()) continue;
    if (iou(gi->second->box, pi->second->box) < kIouThreshold) continue;
    out.matches.emplace_back(g, p);
    used_gt.insert(g);
    used_pred.insert(p);
  }

  std::vector<const GtRecord*> rows, cols;
  for (const auto& [id, r] : gt_by_id) {
    if (!used_gt.count(id)) rows.push_back(r);
  }
  for (const auto& [id, r] : pred_by_id) {
    if (!used_pred.count(id)) cols.push_back(r);
  }
  if (!rows.empty() && !cols.empty()) {
    // Inadmissible pairs cost more than any set of admissible ones, so the
    // solver first maximises the number of admissible pairs.
    const double big = 10.0 * static_cast<double>(rows.size() + cols.size() + 1);
    Eigen::MatrixXd cost(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < cols.size(); ++j) {
        const double v = iou(rows[i]->box, cols[j]->box);
        cost(i, j) = v >= kIouThreshold ? 1.0 - v : big;
      }
    }
    for (const auto& [i, j] : trackers::hungarian_assign(cost).pairs) {
      if (cost(i, j) < big) out.matches.emplace_back(rows[i]->id, cols[j]->id);
    }
  }
  std::sort(out.matches.begin(), out.matches.end());

  for (const auto& [g, p] : out.matches) {
    const auto last = state.last_matched.find(g);
    if (last != state.last_matched.end() && last->second != p) ++out.idsw;
    state.last_matched[g] = p;
  }
  state.previous.clear();
  for (const auto& [g, p] : out.matches) state.previous[g] = p;
  out.fp = static_cast<int>(pred_by_id.size() - out.matches.size());
  out.fn = static_cast<int>(gt_by_id.size() - out.matches.size());
  return out;
}

double mota_from_counts(long fp, long fn, long idsw, long gt_total) {
  return 1.0 - static_cast<double>(fp + fn + idsw) / static_cast<double>(std::max(gt_total, 1L));
}

ClearMot compute_clearmot(const std::vector<GtRecord>& gt, const std::vector<GtRecord>& pred) {
  const auto gt_frames = by_frame(gt);
  const auto pred_frames = by_frame(pred);
  std::set<int> frames;
  for (const auto& [f, _] : gt_frames) frames.insert(f);
  for (const auto& [f, _] : pred_frames) frames.insert(f);

  ClearMot out;
  MatchState state;
  static const std::vector<GtRecord> none;
  for (const int f : frames) {
    const auto gi = gt_frames.find(f);
    const auto pi = pred_frames.find(f);
    const auto& g = gi == gt_frames.end() ? none : gi->second;
    const auto& p = pi == pred_frames.end() ? none : pi->second;
    const FrameMatch m = match_frame(state, g, p);
    out.fp += m.fp;
    out.fn += m.fn;
    out.idsw += m.idsw;
    out.matches += static_cast<long>(m.matches.size());
    out.gt_total += static_cast<long>(g.size());
  }
  out.mota = mota_from_counts(out.fp, out.fn, out.idsw, out.gt_total);
  return out;
}

double idf1_from_counts(long idtp, long idfp, long idfn) {
  const long denom = 2 * idtp + idfp + idfn;
  return denom == 0 ? 1.0 : 2.0 * static_cast<double>(idtp) / static_cast<double>(denom);
}

IdScores compute_id_scores(const std::vector<GtRecord>& gt, const std::vector<GtRecord>& pred) {
  std::map<int, int> gidx, pidx;
  for (const GtRecord& r : gt) gidx.try_emplace(r.id, static_cast<int>(gidx.size()));
  for (const GtRecord& r : pred) pidx.try_emplace(r.id, static_cast<int>(pidx.size()));
  const int G = static_cast<int>(gidx.size());
  const int P = static_cast<int>(pidx.size());

  std::vector<long> n_gt(G, 0), n_pred(P, 0);
  for (const GtRecord& r : gt) ++n_gt[gidx[r.id]];
  for (const GtRecord& r : pred) ++n_pred[pidx[r.id]];

  // Frames in which gt identity g and predicted identity p overlap.
  std::vector<long> co(static_cast<std::size_t>(G) * P, 0);
  const auto pred_frames = by_frame(pred);
  for (const GtRecord& g : gt) {
    const auto it = pred_frames.find(g.frame);
    if (it == pred_frames.end()) continue;
    for (const GtRecord& p : it->second) {
      if (iou(g.box, p.box) >= kIouThreshold) ++co[static_cast<std::size_t>(gidx[g.id]) * P + pidx[p.id]];
    }
  }

  IdScores out;
  const long total_gt = static_cast<long>(gt.size());
  const long total_pred = static_cast<long>(pred.size());
  if (G > 0 && P > 0) {
    const double forbid = static_cast<double>(total_gt + total_pred + 1);
    const int n = G + P;
    Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(n, n);
    for (int g = 0; g < G; ++g) {
      for (int p = 0; p < P; ++p) {
        const long c = co[static_cast<std::size_t>(g) * P + p];
        cost(g, p) = static_cast<double>((n_pred[p] - c) + (n_gt[g] - c));
      }
      for (int k = 0; k < G; ++k) cost(g, P + k) = k == g ? static_cast<double>(n_gt[g]) : forbid;
    }
    for (int p = 0; p < P; ++p) {
      for (int k = 0; k < P; ++k) cost(G + k, p) = k == p ? static_cast<double>(n_pred[p]) : forbid;
    }
    for (const auto& [r, c] : trackers::hungarian_assign(cost).pairs) {
      if (r < G && c < P) out.idtp += co[static_cast<std::size_t>(r) * P + c];
    }
  }
  out.idfn = total_gt - out.idtp;
  out.idfp = total_pred - out.idtp;
  out.idf1 = idf1_from_counts(out.idtp, out.idfp, out.idfn);
  return out;
}

double compute_idf1(const std::vector<GtRecord>& gt, const std::vector<GtRecord>& pred) {
  return compute_id_scores(gt, pred).idf1;
}

}  // namespace mpt::metrics
