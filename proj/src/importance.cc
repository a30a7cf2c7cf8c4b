#include "nfc/importance.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nfc/bitstream.h"
#include "nfc/entropy.h"

namespace nfc {

MaskedMapSet MaskSet(const QuantizedMapSet& q,
                     const ImportanceMapSet& importance, int bit_depth) {
  if (!(q.shape() == importance.shape())) {
    throw InvalidArgument("quantized shape " + ToString(q.shape()) +
                          " differs from importance shape " +
                          ToString(importance.shape()));
  }
  std::vector<uint8_t> out(q.values().size());
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = ApplyMask(q.values()[i], importance.values()[i], bit_depth);
  }
  return MaskedMapSet(q.shape(), std::move(out));
}

double RateEstimate(const ImportanceMapSet& importance) {
  return static_cast<double>(std::accumulate(
      importance.values().begin(), importance.values().end(), uint64_t{0}));
}

ImportanceMapSet FullImportance(const MapShape& shape, int bit_depth) {
  return ImportanceMapSet(
      shape, std::vector<uint8_t>(shape.size(), static_cast<uint8_t>(bit_depth)));
}

namespace {

// log2(1 + a * 2^d) per sample, where a is the local standard deviation.
std::vector<double> ActivityBits(const FeatureMapSet& features, int bit_depth) {
  const MapShape& s = features.shape();
  const double levels = static_cast<double>(1 << bit_depth);
  std::vector<double> out(s.size());
  for (uint32_t c = 0; c < s.channels; ++c) {
    for (uint32_t y = 0; y < s.height; ++y) {
      for (uint32_t x = 0; x < s.width; ++x) {
        std::array<double, 9> window;
        int n = 0;
        for (int dy = -1; dy <= 1; ++dy) {
          const uint32_t ny = static_cast<uint32_t>(
              std::clamp<int64_t>(int64_t{y} + dy, 0, s.height - 1));
          for (int dx = -1; dx <= 1; ++dx) {
            const uint32_t nx = static_cast<uint32_t>(
                std::clamp<int64_t>(int64_t{x} + dx, 0, s.width - 1));
            window[n++] = features.at(c, ny, nx);
          }
        }
        // Two passes, so a constant window yields exactly zero.
        double mean = 0.0;
        for (double v : window) mean += v;
        mean /= 9.0;
        double var = 0.0;
        for (double v : window) var += (v - mean) * (v - mean);
        var /= 9.0;
        out[s.index(c, y, x)] = std::log2(1.0 + std::sqrt(var) * levels);
      }
    }
  }
  return out;
}

ImportanceMapSet AllocationAt(const MapShape& shape,
                              const std::vector<double>& activity_bits,
                              double scale, int bit_depth) {
  std::vector<uint8_t> m(activity_bits.size());
  for (size_t i = 0; i < m.size(); ++i) {
    const double r = std::round(scale * activity_bits[i]);
    m[i] = static_cast<uint8_t>(std::clamp(r, 1.0, double(bit_depth)));
  }
  return ImportanceMapSet(shape, std::move(m));
}

double SaturatingScale(const std::vector<double>& activity_bits,
                       int bit_depth) {
  double smallest = std::numeric_limits<double>::infinity();
  for (double b : activity_bits) {
    if (b > 0.0) smallest = std::min(smallest, b);
  }
  if (std::isinf(smallest)) return 0.0;
  // round(scale * b) >= d  <=>  scale * b >= d - 0.5
  return (bit_depth - 0.5) / smallest;
}

}  // namespace

ImportanceMapSet HeuristicImportance(const FeatureMapSet& features,
                                     double scale, int bit_depth) {
  if (!(scale >= 0.0)) {
    throw InvalidArgument("importance scale must be >= 0");
  }
  return AllocationAt(features.shape(), ActivityBits(features, bit_depth),
                      scale, bit_depth);
}

double SaturatingScale(const FeatureMapSet& features, int bit_depth) {
  return SaturatingScale(ActivityBits(features, bit_depth), bit_depth);
}

void CheckRateControlConfig(const RateControlConfig& config) {
  if (!(config.target_bpp > 0.0)) {
    throw InvalidArgument("target bpp must be > 0");
  }
  if (!(config.tolerance > 0.0)) {
    throw InvalidArgument("bpp tolerance must be > 0");
  }
  if (config.max_iterations < 0) {
    throw InvalidArgument("max iterations must be >= 0");
  }
}

RateControlResult RateControl(const FeatureMapSet& features,
                              const QuantizedMapSet& q,
                              const RateControlConfig& config,
                              const CodecParams& params,
                              uint64_t pixel_count) {
  CheckParams(params);
  CheckRateControlConfig(config);
  if (pixel_count == 0) throw InvalidArgument("pixel count must be > 0");
  if (!(features.shape() == q.shape())) {
    throw InvalidArgument("feature and quantized shapes differ");
  }
  const int d = params.bit_depth;
  const MapShape& shape = q.shape();

  auto evaluate = [&](ImportanceMapSet importance, double scale) {
    RateControlResult r;
    r.masked = MaskSet(q, importance, d);
    r.payload = EncodeMaps(r.masked, params);
    r.bpp = BitsPerPixel(kContainerHeaderSize + r.payload.size(), pixel_count);
    r.importance = std::move(importance);
    r.scale = scale;
    return r;
  };

  const std::vector<double> activity = ActivityBits(features, d);
  const double s_max = SaturatingScale(activity, d);
  const double limit = config.target_bpp + config.tolerance;

  RateControlResult full = evaluate(FullImportance(shape, d), s_max);
  if (full.bpp <= config.target_bpp) return full;

  RateControlResult floor = evaluate(AllocationAt(shape, activity, 0.0, d), 0.0);
  if (floor.bpp > limit) {
    floor.unreachable = true;
    return floor;
  }
  if (floor.bpp > config.target_bpp) return floor;

  // The floor is at or below the target, so an allocation that does not
  // exceed it always exists and tolerance overshoot is never needed.
  // Every scale below 1.5 / max(activity) rounds to the floor allocation.
  // Above that the bisection runs on log(scale): near-constant windows can
  // push s_max many orders of magnitude past the useful range.
  RateControlResult best = std::move(floor);
  const double max_bits = *std::max_element(activity.begin(), activity.end());
  double lo = max_bits > 0.0 ? 1.5 / max_bits : s_max;
  double hi = s_max;
  int evaluations = 0;
  while (lo < hi && evaluations < config.max_iterations &&
         best.bpp < config.target_bpp - config.tolerance) {
    const double mid = std::sqrt(lo * hi);
    RateControlResult r = evaluate(AllocationAt(shape, activity, mid, d), mid);
    ++evaluations;
    if (r.bpp <= config.target_bpp) {
      lo = mid;
      if (r.bpp > best.bpp) best = std::move(r);
    } else {
      hi = mid;
    }
  }
  best.evaluations = evaluations;
  return best;
}

}  // namespace nfc
