#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "mpt/core/dataset.hpp"
#include "mpt/core/error.hpp"
#include "mpt/core/mot_io.hpp"
#include "mpt/core/random.hpp"
#include "mpt/metrics/metrics.hpp"

namespace mpt::metrics {
namespace {

GtRecord rec(int frame, int id, double x, double y, double w = 10, double h = 10) {
  GtRecord r;
  r.frame = frame;
  r.id = id;
  r.box = BoundingBox(x, y, w, h);
  return r;
}

// Every one-to-one partial matching of admissible pairs, by recursion over gt rows.
void enumerate_matchings(const std::vector<GtRecord>& gt, const std::vector<GtRecord>& pred, std::size_t row,
                         std::vector<char>& used, double cost, int count, int& best_count, double& best_cost) {
  if (row == gt.size()) {
    if (count > best_count || (count == best_count && cost < best_cost - 1e-12)) {
      best_count = count;
      best_cost = cost;
    }
    return;
  }
  enumerate_matchings(gt, pred, row + 1, used, cost, count, best_count, best_cost);
  for (std::size_t j = 0; j < pred.size(); ++j) {
    const double v = iou(gt[row].box, pred[j].box);
    if (used[j] || v < kIouThreshold) continue;
    used[j] = 1;
    enumerate_matchings(gt, pred, row + 1, used, cost + 1.0 - v, count + 1, best_count, best_cost);
    used[j] = 0;
  }
}

TEST(MatchFrame, FreshFrameIsMaxCardinalityMinCost) {
  Rng rng(4);
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<GtRecord> gt, pred;
    const int g = uniform_int(rng, 0, 5);
    const int p = uniform_int(rng, 0, 5);
    for (int k = 0; k < g; ++k) gt.push_back(rec(1, k + 1, uniform(rng, 0, 20), uniform(rng, 0, 20)));
    for (int k = 0; k < p; ++k) pred.push_back(rec(1, k + 10, uniform(rng, 0, 20), uniform(rng, 0, 20)));
    MatchState state;
    const FrameMatch m = match_frame(state, gt, pred);

    std::vector<char> used(pred.size(), 0);
    int best_count = -1;
    double best_cost = 0.0;
    enumerate_matchings(gt, pred, 0, used, 0.0, 0, best_count, best_cost);
    ASSERT_EQ(static_cast<int>(m.matches.size()), best_count) << trial;
    double cost = 0.0;
    for (const auto& [gi, pi] : m.matches) {
      const double v = iou(gt[gi - 1].box, pred[pi - 10].box);
      EXPECT_GE(v, kIouThreshold);
      cost += 1.0 - v;
    }
    EXPECT_NEAR(cost, best_cost, 1e-9) << trial;
    EXPECT_EQ(m.fp, p - best_count);
    EXPECT_EQ(m.fn, g - best_count);
    EXPECT_EQ(m.idsw, 0);
  }
}

TEST(MatchFrame, PreviousCorrespondenceIsKeptWhileValid) {
  MatchState state;
  const std::vector<GtRecord> gt1{rec(1, 1, 0, 0)};
  match_frame(state, gt1, std::vector<GtRecord>{rec(1, 7, 0, 0)});
  // Pred 8 fits gt 1 better, but 7 still reaches IoU 0.5 (overlap 8x10 / 120 = 0.67).
  const FrameMatch m = match_frame(state, std::vector<GtRecord>{rec(2, 1, 0, 0)},
                                   std::vector<GtRecord>{rec(2, 7, 2, 0), rec(2, 8, 0, 0)});
  ASSERT_EQ(m.matches.size(), 1u);
  EXPECT_EQ(m.matches[0].second, 7);
  EXPECT_EQ(m.idsw, 0);
  EXPECT_EQ(m.fp, 1);
}

TEST(ClearMot, SwappedIdentitiesCountTwoSwitches) {
  std::vector<GtRecord> gt, pred;
  for (int f = 1; f <= 10; ++f) {
    gt.push_back(rec(f, 1, 0, 0));
    gt.push_back(rec(f, 2, 100, 0));
    const bool swapped = f > 5;
    pred.push_back(rec(f, swapped ? 2 : 1, 0, 0));
    pred.push_back(rec(f, swapped ? 1 : 2, 100, 0));
  }
  const ClearMot m = compute_clearmot(gt, pred);
  EXPECT_EQ(m.idsw, 2);
  EXPECT_EQ(m.fp, 0);
  EXPECT_EQ(m.fn, 0);
  EXPECT_EQ(m.gt_total, 20);
  EXPECT_DOUBLE_EQ(m.mota, 1.0 - 2.0 / 20.0);
}

TEST(ClearMot, SwitchCountsAgainstLastMatchAfterAGap) {
  std::vector<GtRecord> gt, pred;
  for (int f = 1; f <= 6; ++f) gt.push_back(rec(f, 1, 0, 0));
  pred.push_back(rec(1, 5, 0, 0));
  pred.push_back(rec(2, 5, 0, 0));
  // Frames 3 and 4 unmatched, then a new id.
  pred.push_back(rec(5, 6, 0, 0));
  pred.push_back(rec(6, 6, 0, 0));
  const ClearMot m = compute_clearmot(gt, pred);
  EXPECT_EQ(m.idsw, 1);
  EXPECT_EQ(m.fn, 2);
  EXPECT_EQ(m.matches, 4);
}

TEST(ClearMot, PerfectAndEmpty) {
  std::vector<GtRecord> gt;
  for (int f = 1; f <= 5; ++f) gt.push_back(rec(f, 1, f, f));
  EXPECT_DOUBLE_EQ(compute_clearmot(gt, gt).mota, 1.0);
  const ClearMot empty = compute_clearmot(gt, {});
  EXPECT_DOUBLE_EQ(empty.mota, 0.0);
  EXPECT_EQ(empty.fn, 5);
  // False positives alone drive MOTA negative.
  std::vector<GtRecord> pred = gt;
  for (int f = 1; f <= 5; ++f) {
    pred.push_back(rec(f, 2, 200, 200));
    pred.push_back(rec(f, 3, 300, 300));
  }
  EXPECT_DOUBLE_EQ(compute_clearmot(gt, pred).mota, 1.0 - 10.0 / 5.0);
  EXPECT_DOUBLE_EQ(compute_clearmot({}, {}).mota, 1.0);
}

TEST(IdScores, SplitTrajectoryGivesHalf) {
  std::vector<GtRecord> gt, pred;
  for (int f = 1; f <= 10; ++f) {
    gt.push_back(rec(f, 1, 0, 0));
    pred.push_back(rec(f, f <= 5 ? 1 : 2, 0, 0));
  }
  const IdScores s = compute_id_scores(gt, pred);
  EXPECT_EQ(s.idtp, 5);
  EXPECT_EQ(s.idfp, 5);
  EXPECT_EQ(s.idfn, 5);
  EXPECT_DOUBLE_EQ(s.idf1, 0.5);
}

// Maximum total co-occurrence over all partial injections of gt ids into pred ids.
long brute_idtp(const std::vector<std::vector<long>>& co) {
  const std::size_t G = co.size();
  const std::size_t P = G ? co[0].size() : 0;
  std::vector<char> used(P, 0);
  std::function<long(std::size_t)> rec_fn = [&](std::size_t g) -> long {
    if (g == G) return 0;
    long best = rec_fn(g + 1);
    for (std::size_t p = 0; p < P; ++p) {
      if (used[p]) continue;
      used[p] = 1;
      best = std::max(best, co[g][p] + rec_fn(g + 1));
      used[p] = 0;
    }
    return best;
  };
  return rec_fn(0);
}

TEST(IdScores, MatchesBruteForceOnRandomTracks) {
  Rng rng(12);
  for (int trial = 0; trial < 150; ++trial) {
    const int G = uniform_int(rng, 1, 4);
    const int P = uniform_int(rng, 1, 5);
    const int frames = uniform_int(rng, 3, 12);
    std::vector<GtRecord> gt, pred;
    // Objects sit on a coarse lattice so overlaps are frequent but not universal.
    for (int f = 1; f <= frames; ++f) {
      for (int g = 0; g < G; ++g) {
        if (uniform(rng, 0, 1) < 0.85) gt.push_back(rec(f, g + 1, 8 * uniform_int(rng, 0, 2), 0));
      }
      for (int p = 0; p < P; ++p) {
        if (uniform(rng, 0, 1) < 0.7) pred.push_back(rec(f, p + 1, 8 * uniform_int(rng, 0, 2) + uniform(rng, -2, 2), 0));
      }
    }
    std::vector<std::vector<long>> co(G, std::vector<long>(P, 0));
    for (const GtRecord& g : gt) {
      for (const GtRecord& p : pred) {
        if (p.frame == g.frame && iou(g.box, p.box) >= kIouThreshold) ++co[g.id - 1][p.id - 1];
      }
    }
    // Ids that never appear are absent from the solver's view; they contribute nothing.
    const IdScores s = compute_id_scores(gt, pred);
    EXPECT_EQ(s.idtp, brute_idtp(co)) << trial;
    EXPECT_EQ(s.idfn, static_cast<long>(gt.size()) - s.idtp);
    EXPECT_EQ(s.idfp, static_cast<long>(pred.size()) - s.idtp);
    EXPECT_DOUBLE_EQ(s.idf1, idf1_from_counts(s.idtp, s.idfp, s.idfn));
  }
}

TEST(IdScores, EmptyCases) {
  EXPECT_DOUBLE_EQ(compute_idf1({}, {}), 1.0);
  EXPECT_DOUBLE_EQ(compute_idf1({rec(1, 1, 0, 0)}, {}), 0.0);
  EXPECT_DOUBLE_EQ(compute_idf1({}, {rec(1, 1, 0, 0)}), 0.0);
}

Summary summary(long fp, long fn, long idsw, long gt, long idtp, long idfp, long idfn) {
  ClearMot c;
  c.fp = fp;
  c.fn = fn;
  c.idsw = idsw;
  c.gt_total = gt;
  c.mota = mota_from_counts(fp, fn, idsw, gt);
  IdScores i;
  i.idtp = idtp;
  i.idfp = idfp;
  i.idfn = idfn;
  i.idf1 = idf1_from_counts(idtp, idfp, idfn);
  return Summary::of(c, i);
}

TEST(Summary, PoolingUsesCountsNotMeansOfRatios) {
  const std::vector<Summary> parts{summary(1, 1, 0, 10, 8, 2, 2), summary(50, 10, 5, 100, 60, 40, 40)};
  const Summary s = Summary::pool(parts);
  EXPECT_EQ(s.gt_total, 110);
  // By hand: 1 - (51 + 11 + 5) / 110, and 2*68 / (2*68 + 42 + 42).
  EXPECT_DOUBLE_EQ(s.mota, 1.0 - 67.0 / 110.0);
  EXPECT_DOUBLE_EQ(s.idf1, 136.0 / 220.0);
  EXPECT_NE(s.mota, 0.5 * (parts[0].mota + parts[1].mota));
}

TEST(Report, GroupsByBackgroundAndSortsSequences) {
  std::vector<SequenceScore> seqs{{"w2-01", 9, summary(0, 0, 0, 10, 10, 0, 0)},
                                  {"b1-02", 1, summary(5, 0, 0, 10, 5, 5, 5)},
                                  {"b1-01", 1, summary(0, 5, 0, 10, 5, 0, 5)}};
  const EvalReport r = build_report(seqs);
  ASSERT_EQ(r.per_sequence.size(), 3u);
  EXPECT_EQ(r.per_sequence[0].name, "b1-01");
  ASSERT_EQ(r.per_background.size(), 2u);
  EXPECT_EQ(r.per_background[0].first, "b1");
  EXPECT_EQ(r.per_background[1].first, "w2");
  EXPECT_DOUBLE_EQ(r.per_background[0].second.mota, 0.5);
  EXPECT_DOUBLE_EQ(r.mota(), 1.0 - 10.0 / 30.0);

  const std::string table = r.to_table();
  EXPECT_NE(table.find("Background"), std::string::npos);
  EXPECT_NE(table.find("Average"), std::string::npos);
  EXPECT_NE(table.find("100.0"), std::string::npos);
}

TEST(Report, NonPositiveMotaRendersAsDashButJsonKeepsTheValue) {
  EXPECT_EQ(format_mota_cell(0.0), "-");
  EXPECT_EQ(format_mota_cell(-0.35), "-");
  EXPECT_EQ(format_mota_cell(0.536), "53.6");
  EXPECT_EQ(format_mota_cell(1.0), "100.0");

  const EvalReport r = build_report({{"b3-01", 3, summary(30, 0, 0, 10, 10, 30, 0)}});
  EXPECT_DOUBLE_EQ(r.mota(), -2.0);
  const auto table = r.to_table();
  EXPECT_NE(table.find(" -  "), std::string::npos) << table;
  EXPECT_EQ(table.find("-200"), std::string::npos);
  const auto j = nlohmann::json::parse(r.to_json());
  EXPECT_DOUBLE_EQ(j["aggregate"]["mota"].get<double>(), -2.0);
  EXPECT_DOUBLE_EQ(j["per_background"]["b3"]["mota"].get<double>(), -2.0);
  EXPECT_EQ(j["per_sequence"][0]["name"], "b3-01");
}

TEST(Report, TableColumnsAreAligned) {
  const std::string t = format_table({{"x", summary(1, 2, 3, 10, 5, 1, 1)}, {"longer", summary(0, 0, 0, 4, 4, 0, 0)}});
  std::vector<std::size_t> lengths;
  std::size_t start = 0;
  while (start < t.size()) {
    const std::size_t end = t.find('\n', start);
    lengths.push_back(end - start);
    start = end + 1;
  }
  ASSERT_EQ(lengths.size(), 3u);
  EXPECT_EQ(lengths[0], lengths[1]);
  EXPECT_EQ(lengths[1], lengths[2]);
  EXPECT_EQ(t.substr(0, t.find('\n')).find("Sequence"), 0u);
}

class DatasetEval : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = std::filesystem::temp_directory_path() /
            ("mpt_metrics_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::remove_all(root_);
    for (const auto& [split, bg, idx] : {std::tuple{"train", 1, 1}, std::tuple{"test", 8, 2}}) {
      SequenceMeta meta;
      meta.name = sequence_name(bg, idx);
      meta.width = 100;
      meta.height = 100;
      meta.length = 3;
      meta.background_id = bg;
      const auto dir = root_ / "data" / split / meta.name;
      std::filesystem::create_directories(dir / "gt");
      write_text_file(dir / "seqinfo.ini", serialize_seqinfo(meta));
      std::vector<GtRecord> gt;
      for (int f = 1; f <= 3; ++f) gt.push_back(rec(f, 1, 10, 10));
      write_mot_file(dir / "gt" / "gt.txt", gt);
      std::filesystem::create_directories(root_ / "res");
      // The second sequence misses its last frame.
      if (bg == 8) gt.pop_back();
      write_mot_file(root_ / "res" / (meta.name + ".txt"), gt);
    }
  }
  void TearDown() override { std::filesystem::remove_all(root_); }
  std::filesystem::path root_;
};

TEST_F(DatasetEval, ScoresEverySequence) {
  const EvalReport all = evaluate_dataset(root_ / "data", root_ / "res", "all", 2);
  ASSERT_EQ(all.per_sequence.size(), 2u);
  EXPECT_EQ(all.aggregate.fn, 1);
  EXPECT_DOUBLE_EQ(all.mota(), 1.0 - 1.0 / 6.0);
  const EvalReport train = evaluate_dataset(root_ / "data", root_ / "res", "train");
  ASSERT_EQ(train.per_sequence.size(), 1u);
  EXPECT_DOUBLE_EQ(train.mota(), 1.0);
}

TEST_F(DatasetEval, MissingResultFileIsAnIoError) {
  std::filesystem::remove(root_ / "res" / (sequence_name(8, 2) + ".txt"));
  EXPECT_THROW(evaluate_dataset(root_ / "data", root_ / "res"), IoError);
  EXPECT_THROW(evaluate_dataset(root_ / "nowhere", root_ / "res"), IoError);
}

}  // namespace
}  // namespace mpt::metrics
