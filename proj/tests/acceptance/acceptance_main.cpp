// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mpt/core/dataset.hpp"
#include "mpt/core/mot_io.hpp"
#include "mpt/core/random.hpp"
#include "mpt/features/features.hpp"
#include "mpt/metrics/metrics.hpp"
#include "mpt/similarity/similarity.hpp"
#include "mpt/synthgen/synthgen.hpp"
#include "mpt/trackers/assignment.hpp"
#include "mpt/trackers/pipeline.hpp"

namespace fs = std::filesystem;
using namespace mpt;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

void progress(const std::string& msg) {
  std::fprintf(stderr, "[acceptance] %s\n", msg.c_str());
  std::fflush(stderr);
}

// ---------------------------------------------------------------------------
// 1. Metric oracle equivalence

struct BruteClear {
  long fp = 0, fn = 0, idsw = 0, gt_total = 0;
};

// Best matching among admissible pairs: most pairs, then least total 1 - IoU.
void best_matching(const std::vector<GtRecord>& g, const std::vector<GtRecord>& p, std::size_t row,
                   std::vector<char>& used, std::vector<std::pair<int, int>>& cur, double cost,
                   std::vector<std::pair<int, int>>& best, double& best_cost) {
  if (row == g.size()) {
    if (cur.size() > best.size() || (cur.size() == best.size() && cost < best_cost)) {
      best = cur;
      best_cost = cost;
    }
    return;
  }
  best_matching(g, p, row + 1, used, cur, cost, best, best_cost);
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double v = iou(g[row].box, p[j].box);
    if (used[j] || v < metrics::kIouThreshold) continue;
    used[j] = 1;
    cur.emplace_back(g[row].id, p[j].id);
    best_matching(g, p, row + 1, used, cur, cost + (1.0 - v), best, best_cost);
    cur.pop_back();
    used[j] = 0;
  }
}

BruteClear brute_clear(const std::vector<GtRecord>& gt, const std::vector<GtRecord>& pred) {
  std::set<int> frames;
  for (const auto& r : gt) frames.insert(r.frame);
  for (const auto& r : pred) frames.insert(r.frame);
  BruteClear out;
  std::map<int, int> prev, last;
  for (const int f : frames) {
    const auto g = records_in_frame(gt, f);
    const auto p = records_in_frame(pred, f);
    std::map<int, const GtRecord*> gid, pid;
    for (const auto& r : g) gid[r.id] = &r;
    for (const auto& r : p) pid[r.id] = &r;
    std::vector<std::pair<int, int>> matches;
    std::set<int> used_g, used_p;
    for (const auto& [gi, pi] : prev) {
      if (!gid.count(gi) || !pid.count(pi)) continue;
      if (iou(gid[gi]->box, pid[pi]->box) < metrics::kIouThreshold) continue;
      matches.emplace_back(gi, pi);
      used_g.insert(gi);
      used_p.insert(pi);
    }
    std::vector<GtRecord> rg, rp;
    for (const auto& r : g) {
      if (!used_g.count(r.id)) rg.push_back(r);
    }
    for (const auto& r : p) {
      if (!used_p.count(r.id)) rp.push_back(r);
    }
    std::vector<char> used(rp.size(), 0);
    std::vector<std::pair<int, int>> cur, best;
    double best_cost = 0.0;
    best_matching(rg, rp, 0, used, cur, 0.0, best, best_cost);
    matches.insert(matches.end(), best.begin(), best.end());
    prev.clear();
    for (const auto& [gi, pi] : matches) {
      if (last.count(gi) && last[gi] != pi) ++out.idsw;
      last[gi] = pi;
      prev[gi] = pi;
    }
    out.fp += static_cast<long>(p.size() - matches.size());
    out.fn += static_cast<long>(g.size() - matches.size());
    out.gt_total += static_cast<long>(g.size());
  }
  return out;
}

long brute_idtp(const std::vector<GtRecord>& gt, const std::vector<GtRecord>& pred) {
  std::vector<int> gids, pids;
  for (const auto& r : gt) gids.push_back(r.id);
  for (const auto& r : pred) pids.push_back(r.id);
  std::sort(gids.begin(), gids.end());
  gids.erase(std::unique(gids.begin(), gids.end()), gids.end());
  std::sort(pids.begin(), pids.end());
  pids.erase(std::unique(pids.begin(), pids.end()), pids.end());
  std::vector<std::vector<long>> co(gids.size(), std::vector<long>(pids.size(), 0));
  for (const auto& g : gt) {
    for (const auto& p : pred) {
      if (g.frame != p.frame || iou(g.box, p.box) < metrics::kIouThreshold) continue;
      const auto gi = std::lower_bound(gids.begin(), gids.end(), g.id) - gids.begin();
      const auto pi = std::lower_bound(pids.begin(), pids.end(), p.id) - pids.begin();
      ++co[static_cast<std::size_t>(gi)][static_cast<std::size_t>(pi)];
    }
  }
  std::vector<char> used(pids.size(), 0);
  std::function<long(std::size_t)> rec = [&](std::size_t g) -> long {
    if (g == gids.size()) return 0;
    long best = rec(g + 1);
    for (std::size_t p = 0; p < pids.size(); ++p) {
      if (used[p]) continue;
      used[p] = 1;
      best = std::max(best, co[g][p] + rec(g + 1));
      used[p] = 0;
    }
    return best;
  };
  return rec(0);
}

// Ground truth random walks plus a tracker-like output: jittered boxes,
// occasional misses, identity swaps and spurious boxes.
void random_scenario(Rng& rng, std::vector<GtRecord>& gt, std::vector<GtRecord>& pred) {
  const int ids = uniform_int(rng, 1, 5);
  const int frames = uniform_int(rng, 1, 10);
  std::vector<double> x(ids), y(ids), w(ids), h(ids);
  std::vector<int> label(ids);
  for (int i = 0; i < ids; ++i) {
    x[i] = uniform(rng, 0, 60);
    y[i] = uniform(rng, 0, 60);
    w[i] = uniform(rng, 8, 20);
    h[i] = uniform(rng, 8, 20);
    label[i] = 10 + i;
  }
  int next_label = 20;
  for (int f = 1; f <= frames; ++f) {
    if (uniform(rng, 0, 1) < 0.2 && ids > 1) std::swap(label[0], label[static_cast<std::size_t>(uniform_int(rng, 1, ids - 1))]);
    if (uniform(rng, 0, 1) < 0.1) label[static_cast<std::size_t>(uniform_int(rng, 0, ids - 1))] = next_label++;
    int boxes = 0;
    for (int i = 0; i < ids; ++i) {
      x[i] += uniform(rng, -4, 4);
      y[i] += uniform(rng, -4, 4);
      if (uniform(rng, 0, 1) < 0.15) continue;
      gt.push_back({f, i + 1, BoundingBox(x[i], y[i], w[i], h[i]), 1.0, 1, 1.0});
      if (uniform(rng, 0, 1) < 0.2 || boxes >= 6) continue;
      const double j = uniform(rng, 0, 5);
      pred.push_back({f, label[i], BoundingBox(x[i] + uniform(rng, -j, j), y[i] + uniform(rng, -j, j), w[i], h[i]),
                      1.0, 0, 1.0});
      ++boxes;
    }
    for (int k = uniform_int(rng, 0, 2); k > 0 && boxes < 6; --k, ++boxes) {
      pred.push_back({f, next_label++, BoundingBox(uniform(rng, 0, 60), uniform(rng, 0, 60), 12, 12), 0.5, 0, 1.0});
    }
  }
}

Outcome criterion_metric_oracle() {
  Stopwatch sw;
  Rng rng(derive_seed(1, 1));
  int mismatches = 0;
  for (int s = 0; s < 200; ++s) {
    std::vector<GtRecord> gt, pred;
    random_scenario(rng, gt, pred);
    const auto c = metrics::compute_clearmot(gt, pred);
    const auto id = metrics::compute_id_scores(gt, pred);
    const BruteClear b = brute_clear(gt, pred);
    const long idtp = brute_idtp(gt, pred);
    const long idfp = static_cast<long>(pred.size()) - idtp;
    const long idfn = static_cast<long>(gt.size()) - idtp;
    const double mota = 1.0 - static_cast<double>(b.fp + b.fn + b.idsw) / static_cast<double>(std::max(b.gt_total, 1L));
    const long denom = 2 * idtp + idfp + idfn;
    const double idf1 = denom == 0 ? 1.0 : 2.0 * static_cast<double>(idtp) / static_cast<double>(denom);
    const bool ok = c.fp == b.fp && c.fn == b.fn && c.idsw == b.idsw && c.gt_total == b.gt_total && id.idtp == idtp &&
                    id.idfp == idfp && id.idfn == idfn && std::abs(c.mota - mota) <= 1e-12 &&
                    std::abs(id.idf1 - idf1) <= 1e-12;
    if (!ok) ++mismatches;
  }
  const double t = sw.seconds();
  return {mismatches == 0 && t < 30.0,
          std::to_string(200 - mismatches) + "/200 scenarios match the brute-force oracle, " + fmt("%.1f s", t)};
}

// ---------------------------------------------------------------------------
// 2. Assignment optimality

double exhaustive_min(const Eigen::MatrixXd& m) {
  const int r = static_cast<int>(m.rows());
  const int c = static_cast<int>(m.cols());
  const int n = std::max(r, c);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    // perm maps rows to columns; indices beyond the matrix are dummies. Summed in row order.
    double s = 0.0;
    for (int i = 0; i < r; ++i) {
      const int j = perm[static_cast<std::size_t>(i)];
      if (j < c) s += m(i, j);
    }
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Outcome criterion_assignment() {
  Stopwatch sw;
  Rng rng(derive_seed(1, 2));
  int exact = 0;
  for (int k = 0; k < 500; ++k) {
    const int r = uniform_int(rng, 1, 7);
    const int c = uniform_int(rng, 1, 7);
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < c; ++j) m(i, j) = k % 2 == 0 ? uniform_int(rng, 0, 9) : uniform(rng, 0.0, 1.0);
    }
    const auto a = trackers::hungarian_assign(m);
    if (static_cast<int>(a.pairs.size()) == std::min(r, c) && a.total_cost(m) == exhaustive_min(m)) ++exact;
  }
  const double t = sw.seconds();
  return {exact == 500 && t < 10.0, std::to_string(exact) + "/500 exact optima, " + fmt("%.1f s", t)};
}

// ---------------------------------------------------------------------------
// 4. Generator shape and determinism, 3. perfect tracking on the result

std::vector<fs::path> relative_files(const fs::path& root) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out.push_back(fs::relative(e.path(), root));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool same_bytes(const fs::path& a, const fs::path& b) {
  if (fs::file_size(a) != fs::file_size(b)) return false;
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  return std::equal(std::istreambuf_iterator<char>(fa), {}, std::istreambuf_iterator<char>(fb));
}

Outcome criterion_generator(const fs::path& work, fs::path& dataset) {
  const synth::ScenarioConfig cfg;
  const fs::path a = work / "gen_jobs1";
  const fs::path b = work / "gen_jobs4";
  fs::remove_all(a);
  fs::remove_all(b);
  Stopwatch s1;
  const auto ma = synth::generate_benchmark(cfg, a, 1);
  const double t1 = s1.seconds();
  progress("generated 140 sequences with jobs=1 in " + fmt("%.0f s", t1));
  Stopwatch s2;
  const auto mb = synth::generate_benchmark(cfg, b, 4);
  const double t2 = s2.seconds();
  progress("generated 140 sequences with jobs=4 in " + fmt("%.0f s", t2));

  const auto seqs = list_sequences(a);
  bool fps_ok = !seqs.empty();
  for (const auto& s : seqs) fps_ok = fps_ok && s.meta.fps == 25 && s.meta.width == 640 && s.meta.height == 480;
  const auto fa = relative_files(a);
  const auto fb = relative_files(b);
  bool identical = fa == fb && ma.to_csv() == mb.to_csv();
  for (std::size_t i = 0; identical && i < fa.size(); ++i) identical = same_bytes(a / fa[i], b / fa[i]);
  fs::remove_all(b);
  dataset = a;

  const bool ok = ma.entries.size() == 140 && seqs.size() == 140 && fps_ok && identical && t1 < 300.0 && t2 < 300.0;
  std::ostringstream d;
  d << seqs.size() << " sequences, frameRate 25: " << (fps_ok ? "yes" : "no") << ", " << fa.size()
    << " files byte-identical across jobs 1/4: " << (identical ? "yes" : "no") << ", " << fmt("%.0f s", t1) << " / "
    << fmt("%.0f s", t2);
  return {ok, d.str()};
}

Outcome criterion_perfect_tracking(const fs::path& work, const fs::path& dataset) {
  const fs::path res = work / "gt_as_results";
  fs::remove_all(res);
  fs::create_directories(res);
  const auto seqs = list_sequences(dataset);
  for (const auto& s : seqs) fs::copy_file(s.gt_path(), res / (s.meta.name + ".txt"));
  const auto report = metrics::evaluate_dataset(dataset, res, "all", 1);
  int perfect = 0;
  for (const auto& s : report.per_sequence) {
    const auto& m = s.summary;
    if (m.mota == 1.0 && m.idf1 == 1.0 && m.fp == 0 && m.fn == 0 && m.idsw == 0) ++perfect;
  }
  fs::remove_all(res);
  const int n = static_cast<int>(report.per_sequence.size());
  return {n > 0 && perfect == n, std::to_string(perfect) + "/" + std::to_string(n) + " sequences perfect"};
}

// ---------------------------------------------------------------------------
// 5. Render-back consistency

// Opaque bounds of a sprite re-rasterised from its recorded pose: every frame
// pixel near the sprite samples the raster at its nearest source pixel.
struct Bounds {
  int x0 = std::numeric_limits<int>::max(), y0 = std::numeric_limits<int>::max();
  int x1 = std::numeric_limits<int>::min(), y1 = std::numeric_limits<int>::min();
  bool any = false;
};

Bounds rendered_bounds(const synth::SpriteAsset& sprite, const synth::MotionState& st, int W, int H) {
  const RgbaImage& src = sprite.raster;
  const double c = std::cos(st.angle), s = std::sin(st.angle);
  const double scx = 0.5 * (src.width() - 1), scy = 0.5 * (src.height() - 1);
  const double reach = 0.5 * std::hypot(src.width(), src.height()) + 2.0;
  Bounds b;
  const int ylo = std::max(0, static_cast<int>(std::floor(st.position.y - reach)));
  const int yhi = std::min(H - 1, static_cast<int>(std::ceil(st.position.y + reach)));
  const int xlo = std::max(0, static_cast<int>(std::floor(st.position.x - reach)));
  const int xhi = std::min(W - 1, static_cast<int>(std::ceil(st.position.x + reach)));
  for (int y = ylo; y <= yhi; ++y) {
    for (int x = xlo; x <= xhi; ++x) {
      // Rotate the frame offset back into raster coordinates.
      const double dx = x - st.position.x, dy = y - st.position.y;
      const long u = std::lround(std::floor(scx + c * dx + s * dy + 0.5));
      const long v = std::lround(std::floor(scy - s * dx + c * dy + 0.5));
      if (u < 0 || v < 0 || u >= src.width() || v >= src.height()) continue;
      if (src.pixel(static_cast<int>(u), static_cast<int>(v))[3] < kOpaqueAlpha) continue;
      b.any = true;
      b.x0 = std::min(b.x0, x);
      b.y0 = std::min(b.y0, y);
      b.x1 = std::max(b.x1, x);
      b.y1 = std::max(b.y1, y);
    }
  }
  return b;
}

Outcome criterion_render_back() {
  const synth::ScenarioConfig cfg;
  const auto lib = synth::procedural_sprite_library();
  Rng rng(derive_seed(1, 5));
  long boxes = 0, agree = 0;
  for (int k = 0; k < 10; ++k) {
    const int bg = uniform_int(rng, 1, kBackgroundCount);
    const auto seq = synth::generate_sequence_streamed(cfg, synth::background_preset(bg), rng(), lib, nullptr);
    std::map<int, std::size_t> actor_of;
    for (std::size_t a = 0; a < seq.trace.actor_ids.size(); ++a) {
      if (seq.trace.actor_ids[a] > 0) actor_of[seq.trace.actor_ids[a]] = a;
    }
    for (const GtRecord& r : seq.gt) {
      const std::size_t a = actor_of.at(r.id);
      const Bounds b = rendered_bounds(*seq.trace.sprites[a], seq.trace.states[static_cast<std::size_t>(r.frame - 1)][a],
                                      cfg.width, cfg.height);
      ++boxes;
      if (!b.any) continue;
      const bool ok = std::abs(r.box.x() - b.x0) <= 1.0 && std::abs(r.box.y() - b.y0) <= 1.0 &&
                      std::abs(r.box.right() - 1 - b.x1) <= 1.0 && std::abs(r.box.bottom() - 1 - b.y1) <= 1.0;
      if (ok) ++agree;
    }
  }
  return {boxes > 0 && agree == boxes, std::to_string(agree) + "/" + std::to_string(boxes) + " boxes within 1 px per edge"};
}

// ---------------------------------------------------------------------------
// 6. Offset recovery

Frame crop(const Frame& f, int x0, int y0, int w, int h) {
  Frame out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) out.set(x, y, f.at(x0 + x, y0 + y));
  }
  return out;
}

Outcome criterion_offset_recovery() {
  synth::ScenarioConfig cfg;
  cfg.frame_count_range = {1, 1};
  const auto lib = synth::procedural_sprite_library();
  Rng rng(derive_seed(1, 6));
  const int margin = 32;
  const int W = cfg.width - 2 * margin, H = cfg.height - 2 * margin;
  long total = 0, good = 0;
  for (int s = 0; s < 40; ++s) {
    const auto seq = synth::generate_sequence(cfg, synth::background_preset(1 + s % kBackgroundCount), rng(), lib);
    const int dx = uniform_int(rng, -32, 32), dy = uniform_int(rng, -32, 32);
    // Frame t sees the scene at the margin; frame t+1 sees it moved by (dx, dy).
    const Frame a = crop(seq.frames[0], margin, margin, W, H);
    const Frame b = crop(seq.frames[0], margin - dx, margin - dy, W, H);
    const auto pa = features::normalize(features::extract_pyramid(a));
    const auto pb = features::normalize(features::extract_pyramid(b));
    for (const GtRecord& r : seq.gt) {
      const Point2 c{r.box.center().x - margin, r.box.center().y - margin};
      // Interior: the target and its shifted copy stay at least 40 px from the border.
      const double lo = 40.0;
      if (c.x < lo || c.y < lo || c.x > W - lo || c.y > H - lo) continue;
      if (c.x + dx < lo || c.y + dy < lo || c.x + dx > W - lo || c.y + dy > H - lo) continue;
      ++total;
      const Point2 off = similarity::predict_offset(similarity::compute_volume(pa, pb, c).fused);
      if (std::hypot(off.x - dx, off.y - dy) <= 8.0) ++good;
    }
  }
  const double rate = total ? static_cast<double>(good) / static_cast<double>(total) : 0.0;
  return {total >= 100 && rate >= 0.95,
          std::to_string(good) + "/" + std::to_string(total) + " interior targets within 8 px (" +
              fmt("%.1f%%", 100.0 * rate) + ")"};
}

// ---------------------------------------------------------------------------
// 7. Near-oracle tracking

Outcome criterion_near_oracle() {
  Stopwatch sw;
  synth::ScenarioConfig cfg;
  cfg.frame_count_range = {100, 100};
  const auto lib = synth::procedural_sprite_library();
  double mota = 0.0, idf1 = 0.0;
  for (int s = 0; s < 10; ++s) {
    const auto seq = synth::generate_sequence(cfg, synth::background_preset(1 + (3 * s) % kBackgroundCount),
                                              derive_seed(7, static_cast<std::uint64_t>(s)), lib);
    trackers::PipelineConfig pc;  // DSFT with both modules, noiseless oracle detections
    const auto r = trackers::run_sequence({seq.meta, trackers::memory_source(seq.frames), seq.gt}, pc);
    mota += metrics::compute_clearmot(seq.gt, r.tracks).mota;
    idf1 += metrics::compute_idf1(seq.gt, r.tracks);
  }
  mota /= 10.0;
  idf1 /= 10.0;
  const double t = sw.seconds();
  return {mota >= 0.95 && idf1 >= 0.90 && t < 300.0,
          "mean MOTA " + fmt("%.3f", mota) + ", IDF1 " + fmt("%.3f", idf1) + ", " + fmt("%.0f s", t)};
}

// ---------------------------------------------------------------------------
// 8, 9. Ablation direction and comparison with SORT

struct PairedRuns {
  // [config][seed]; configs are the four schemes followed by SORT.
  std::vector<std::vector<double>> mota, idf1;
};

PairedRuns ablation_runs(int seeds) {
  synth::ScenarioConfig cfg;
  cfg.frame_count_range = {40, 40};
  cfg.sprite_count_range = {8, 15};
  cfg.speed_range = {4.0, 10.0};
  const auto lib = synth::procedural_sprite_library();
  trackers::PipelineConfig base;
  base.detector.kind = trackers::DetectorKind::Blob;
  std::vector<trackers::PipelineConfig> configs;
  for (const auto& s : trackers::ablation_schemes()) configs.push_back(trackers::scheme_config(base, s));
  trackers::PipelineConfig sort = base;
  sort.tracker = trackers::TrackerKind::Sort;
  configs.push_back(sort);

  // The two densest impurity levels of each background family.
  const int backgrounds[] = {6, 7, 13, 14};
  PairedRuns out;
  out.mota.assign(configs.size(), {});
  out.idf1.assign(configs.size(), {});
  for (int s = 0; s < seeds; ++s) {
    const auto seq = synth::generate_sequence(cfg, synth::background_preset(backgrounds[s % 4]),
                                              derive_seed(99, static_cast<std::uint64_t>(s)), lib);
    const auto runs = trackers::run_configs({seq.meta, trackers::memory_source(seq.frames), seq.gt}, configs);
    for (std::size_t k = 0; k < configs.size(); ++k) {
      out.mota[k].push_back(metrics::compute_clearmot(seq.gt, runs[k].tracks).mota);
      out.idf1[k].push_back(metrics::compute_idf1(seq.gt, runs[k].tracks));
    }
    progress("ablation seed " + std::to_string(s + 1) + "/" + std::to_string(seeds));
  }
  return out;
}

struct Paired {
  double mean_gain = 0.0;
  int wins = 0;
  int n = 0;
  bool holds() const { return mean_gain > 0.0 && wins >= (7 * n + 9) / 10; }
  std::string str() const { return fmt("%+.4f", mean_gain) + " (" + std::to_string(wins) + "/" + std::to_string(n) + ")"; }
};

Paired paired(const std::vector<double>& better, const std::vector<double>& worse) {
  Paired p;
  p.n = static_cast<int>(better.size());
  for (int i = 0; i < p.n; ++i) {
    p.mean_gain += better[i] - worse[i];
    if (better[i] > worse[i]) ++p.wins;
  }
  p.mean_gain /= std::max(p.n, 1);
  return p;
}

Outcome criterion_ablation(const PairedRuns& r) {
  const Paired dcm = paired(r.mota[1], r.mota[0]);
  const Paired mfsf = paired(r.idf1[2], r.idf1[0]);
  bool ok = dcm.holds() && mfsf.holds();
  std::ostringstream d;
  d << "+DCM MOTA " << dcm.str() << "; +MFSF IDF1 " << mfsf.str() << "; +both";
  for (int k = 0; k < 3; ++k) {
    const Paired m = paired(r.mota[3], r.mota[static_cast<std::size_t>(k)]);
    const Paired i = paired(r.idf1[3], r.idf1[static_cast<std::size_t>(k)]);
    ok = ok && m.holds() && i.holds();
    d << " vs S" << k + 1 << " MOTA " << m.str() << " IDF1 " << i.str() << (k < 2 ? "," : "");
  }
  return {ok, d.str()};
}

Outcome criterion_vs_sort(const PairedRuns& r) {
  const double dsft = std::accumulate(r.mota[3].begin(), r.mota[3].end(), 0.0) / static_cast<double>(r.mota[3].size());
  const double sort = std::accumulate(r.mota[4].begin(), r.mota[4].end(), 0.0) / static_cast<double>(r.mota[4].size());
  return {r.mota[3].size() >= 10 && dsft >= sort,
          "mean MOTA DSFT " + fmt("%.3f", dsft) + " vs SORT " + fmt("%.3f", sort) + " over " +
              std::to_string(r.mota[3].size()) + " seeds"};
}

// ---------------------------------------------------------------------------
// 10. Rendering rule

// MOTA cell of the row whose first column is `label`.
std::string mota_cell(const std::string& table, const std::string& label) {
  std::istringstream in(table);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string first, mota;
    row >> first >> mota;
    if (first == label) return mota;
  }
  return "";
}

Outcome criterion_rendering() {
  std::vector<GtRecord> gt, flood;
  for (int f = 1; f <= 4; ++f) {
    gt.push_back({f, 1, BoundingBox(10, 10, 20, 20), 1.0, 1, 1.0});
    for (int k = 0; k < 3; ++k) flood.push_back({f, 10 + k, BoundingBox(100 + 30 * k, 100, 20, 20), 0.5, 0, 1.0});
  }
  const auto summary = [&](const std::vector<GtRecord>& pred) {
    return metrics::Summary::of(metrics::compute_clearmot(gt, pred), metrics::compute_id_scores(gt, pred));
  };
  const metrics::EvalReport report = metrics::build_report(
      {{"b1-01", 1, summary(flood)}, {"b2-01", 2, summary({})}, {"b3-01", 3, summary(gt)}});
  const std::string table = report.to_table();
  const auto j = nlohmann::json::parse(report.to_json());
  const double negative = j["per_background"]["b1"]["mota"].get<double>();
  const double zero = j["per_background"]["b2"]["mota"].get<double>();
  const bool ok = mota_cell(table, "b1") == "-" && mota_cell(table, "b2") == "-" && mota_cell(table, "b3") == "100.0" &&
                  negative == -3.0 && zero == 0.0;
  return {ok, "table MOTA cells b1 '" + mota_cell(table, "b1") + "', b2 '" + mota_cell(table, "b2") + "', b3 '" +
                  mota_cell(table, "b3") + "'; JSON keeps " + fmt("%g", negative) + " and " + fmt("%g", zero)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::string work_dir = (fs::temp_directory_path() / "mpt_acceptance").string();
  std::vector<int> only;
  std::vector<int> expect_fail;
  app.add_option("--work-dir", work_dir, "Scratch directory for generated data");
  app.add_option("--only", only, "Run only these criteria");
  app.add_option("--expect-fail", expect_fail, "Criteria known to fail; reported but not fatal");
  CLI11_PARSE(app, argc, argv);

  const fs::path work(work_dir);
  fs::create_directories(work);
  const auto wanted = [&](int n) { return only.empty() || std::count(only.begin(), only.end(), n) > 0; };

  std::map<int, Outcome> results;
  const auto run = [&](int n, const std::function<Outcome()>& fn) {
    if (!wanted(n)) return;
    progress("criterion " + std::to_string(n));
    try {
      results[n] = fn();
    } catch (const std::exception& e) {
      results[n] = {false, std::string("exception: ") + e.what()};
    }
  };

  run(1, criterion_metric_oracle);
  run(2, criterion_assignment);
  fs::path dataset;
  run(4, [&] { return criterion_generator(work, dataset); });
  run(3, [&] {
    if (dataset.empty()) {
      // Criterion 3 on its own still needs the generated benchmark.
      dataset = work / "gen_jobs1";
      synth::generate_benchmark(synth::ScenarioConfig{}, dataset, 1);
    }
    return criterion_perfect_tracking(work, dataset);
  });
  if (!dataset.empty()) fs::remove_all(dataset);
  run(5, criterion_render_back);
  run(6, criterion_offset_recovery);
  run(7, criterion_near_oracle);
  if (wanted(8) || wanted(9)) {
    PairedRuns paired_runs;
    try {
      paired_runs = ablation_runs(10);
    } catch (const std::exception& e) {
      for (const int n : {8, 9}) {
        if (wanted(n)) results[n] = {false, std::string("exception: ") + e.what()};
      }
    }
    if (!paired_runs.mota.empty()) {
      run(8, [&] { return criterion_ablation(paired_runs); });
      run(9, [&] { return criterion_vs_sort(paired_runs); });
    }
  }
  run(10, criterion_rendering);

  int unexpected = 0;
  for (const auto& [n, o] : results) {
    const bool expected = std::count(expect_fail.begin(), expect_fail.end(), n) > 0;
    std::printf("Criterion %d: %s  %s%s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                !o.pass && expected ? "  [known failure]" : "");
    if (!o.pass && !expected) ++unexpected;
  }
  std::fflush(stdout);
  return unexpected == 0 ? 0 : 1;
}
