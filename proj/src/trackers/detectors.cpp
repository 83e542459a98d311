#include "mpt/trackers/detectors.hpp"

#include <algorithm>
#include <cstdlib>

#include "mpt/core/error.hpp"

namespace mpt::trackers {

void OracleNoiseConfig::validate() const {
  if (!(p_fn >= 0.0 && p_fn <= 1.0)) throw ValidationError("p_fn must be in [0,1]");
  if (!(p_fp >= 0.0)) throw ValidationError("p_fp must be >= 0");
  if (!(jitter_sigma >= 0.0)) throw ValidationError("jitter_sigma must be >= 0");
  if (!(high_min >= 0.0 && high_min <= high_max && high_max <= 1.0)) {
    throw ValidationError("high score band must satisfy 0 <= high_min <= high_max <= 1");
  }
  if (!(low_min >= 0.0 && low_min <= low_max && low_max <= 1.0)) {
    throw ValidationError("low score band must satisfy 0 <= low_min <= low_max <= 1");
  }
  if (!(spurious_size_min >= 1.0 && spurious_size_min <= spurious_size_max)) {
    throw ValidationError("spurious size range must satisfy 1 <= min <= max");
  }
}

void DetectorConfig::validate() const {
  oracle.validate();
  if (blob.diff_threshold < 0 || blob.diff_threshold > 255) throw ValidationError("diff_threshold must be in [0,255]");
  if (blob.min_area < 1) throw ValidationError("min_area must be >= 1");
}

std::vector<Detection> oracle_noise_detector(std::span<const GtRecord> gt_frame_records, int frame, int width,
                                             int height, Rng& rng, const OracleNoiseConfig& cfg) {
  std::vector<Detection> out;
  std::bernoulli_distribution miss(cfg.p_fn);
  std::normal_distribution<double> jitter(0.0, cfg.jitter_sigma > 0.0 ? cfg.jitter_sigma : 1.0);
  for (const GtRecord& g : gt_frame_records) {
    if (miss(rng)) continue;
    BoundingBox box = g.box;
    if (cfg.jitter_sigma > 0.0) {
      const double x1 = g.box.x() + jitter(rng);
      const double y1 = g.box.y() + jitter(rng);
      const double x2 = std::max(x1 + 1.0, g.box.right() + jitter(rng));
      const double y2 = std::max(y1 + 1.0, g.box.bottom() + jitter(rng));
      box = BoundingBox::from_corners(x1, y1, x2, y2);
    }
    const double score = cfg.high_max - (cfg.high_max - cfg.high_min) * (1.0 - iou(box, g.box));
    out.push_back({box, score, frame});
  }
  if (cfg.p_fp > 0.0) {
    const int n = std::poisson_distribution<int>(cfg.p_fp)(rng);
    for (int k = 0; k < n; ++k) {
      const double w = std::min(uniform(rng, cfg.spurious_size_min, cfg.spurious_size_max), double(width));
      const double h = std::min(uniform(rng, cfg.spurious_size_min, cfg.spurious_size_max), double(height));
      const double x = uniform(rng, 0.0, width - w);
      const double y = uniform(rng, 0.0, height - h);
      out.push_back({BoundingBox(x, y, w, h), uniform(rng, cfg.low_min, cfg.low_max), frame});
    }
  }
  return out;
}

std::vector<Detection> blob_detector(const Frame& frame, const Frame& background_model, const BlobConfig& cfg) {
  if (!frame.same_size(background_model)) throw ShapeError("blob detector: frame and background sizes differ");
  const int W = frame.width();
  const int H = frame.height();
  const auto a = frame.bytes();
  const auto b = background_model.bytes();
  const std::size_t n = static_cast<std::size_t>(W) * H;
  std::vector<std::uint8_t> diff(n);
  for (std::size_t i = 0; i < n; ++i) {
    int d = 0;
    for (std::size_t c = 0; c < 3; ++c) d = std::max(d, std::abs(int(a[3 * i + c]) - int(b[3 * i + c])));
    diff[i] = static_cast<std::uint8_t>(d);
  }

  std::vector<Detection> out;
  std::vector<char> seen(n, 0);
  std::vector<int> stack;
  for (int y0 = 0; y0 < H; ++y0) {
    for (int x0 = 0; x0 < W; ++x0) {
      const std::size_t start = static_cast<std::size_t>(y0) * W + x0;
      if (seen[start] || diff[start] <= cfg.diff_threshold) continue;
      seen[start] = 1;
      stack.assign(1, static_cast<int>(start));
      int minx = x0, maxx = x0, miny = y0, maxy = y0;
      long area = 0;
      double sum = 0.0;
      while (!stack.empty()) {
        const int idx = stack.back();
        stack.pop_back();
        const int x = idx % W;
        const int y = idx / W;
        ++area;
        sum += diff[static_cast<std::size_t>(idx)];
        minx = std::min(minx, x);
        maxx = std::max(maxx, x);
        miny = std::min(miny, y);
        maxy = std::max(maxy, y);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx;
            const int ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= W || ny >= H) continue;
            const std::size_t j = static_cast<std::size_t>(ny) * W + nx;
            if (seen[j] || diff[j] <= cfg.diff_threshold) continue;
            seen[j] = 1;
            stack.push_back(static_cast<int>(j));
          }
        }
      }
      if (area < cfg.min_area) continue;
      out.push_back({BoundingBox(minx, miny, maxx - minx + 1, maxy - miny + 1), sum / area / 255.0, frame.index()});
    }
  }
  return out;
}

std::vector<int> background_sample_indices(int count, int max_samples) {
  std::vector<int> idx;
  if (count <= 0 || max_samples <= 0) return idx;
  const int k = std::min(count, max_samples);
  for (int i = 0; i < k; ++i) {
    idx.push_back(k == 1 ? 0 : static_cast<int>((static_cast<long long>(i) * (count - 1)) / (k - 1)));
  }
  return idx;
}

Frame estimate_background(std::span<const Frame> frames, int max_samples) {
  if (frames.empty()) throw ValidationError("background estimate needs at least one frame");
  const std::vector<int> idx = background_sample_indices(static_cast<int>(frames.size()), max_samples);
  const Frame& first = frames[static_cast<std::size_t>(idx.front())];
  for (const int i : idx) {
    if (!frames[static_cast<std::size_t>(i)].same_size(first)) throw ValidationError("frames differ in size");
  }
  Frame out(first.width(), first.height());
  const std::size_t n = out.bytes().size();
  std::vector<std::uint8_t> column(idx.size());
  const std::size_t mid = (idx.size() - 1) / 2;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t k = 0; k < idx.size(); ++k) column[k] = frames[static_cast<std::size_t>(idx[k])].bytes()[p];
    std::nth_element(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(mid), column.end());
    out.bytes()[p] = column[mid];
  }
  return out;
}

}  // namespace mpt::trackers
