// Importance masking, the importance-sum rate proxy, a local-activity
// importance heuristic and bisection rate control against a bpp target.

#ifndef NFC_IMPORTANCE_H_
#define NFC_IMPORTANCE_H_

#include <cstdint>
#include <vector>

#include "nfc/model.h"

namespace nfc {

// Keeps the `kept` most significant of `bit_depth` bits of q.
inline uint8_t ApplyMask(uint8_t q, int kept, int bit_depth) {
  const int drop = bit_depth - kept;
  return static_cast<uint8_t>((q >> drop) << drop);
}

// Throws InvalidArgument on a shape mismatch.
MaskedMapSet MaskSet(const QuantizedMapSet& q,
                     const ImportanceMapSet& importance, int bit_depth);

// Sum of all importance values.
double RateEstimate(const ImportanceMapSet& importance);

// Every sample keeps all bit_depth bits.
ImportanceMapSet FullImportance(const MapShape& shape, int bit_depth);

// Per sample: a = standard deviation of the edge-replicated 3x3
// neighborhood in its channel, m = clamp(round(scale * log2(1 + a * 2^d)),
// 1, d).
ImportanceMapSet HeuristicImportance(const FeatureMapSet& features,
                                     double scale, int bit_depth);

struct RateControlConfig {
  double target_bpp = 0.15;
  double tolerance = 0.005;
  int max_iterations = 20;
};

void CheckRateControlConfig(const RateControlConfig& config);

struct RateControlResult {
  ImportanceMapSet importance;
  MaskedMapSet masked;
  std::vector<uint8_t> payload;
  double bpp = 0.0;     // container bits (header included) per pixel
  double scale = 0.0;   // heuristic scale of the chosen allocation
  int evaluations = 0;  // bisection steps taken
  bool unreachable = false;  // even the all-1 allocation exceeds the target
};

// Picks the heuristic scale whose actually coded container size comes
// closest to the target from below. An allocation above the target is used
// only if it is within the tolerance and nothing at or below the target
// exists. If the all-1 floor exceeds target + tolerance, returns the floor
// with `unreachable` set.
RateControlResult RateControl(const FeatureMapSet& features,
                              const QuantizedMapSet& q,
                              const RateControlConfig& config,
                              const CodecParams& params, uint64_t pixel_count);

// Smallest heuristic scale at which every sample with non-zero activity
// keeps all bits; 0 if no sample has activity.
double SaturatingScale(const FeatureMapSet& features, int bit_depth);

}  // namespace nfc

#endif  // NFC_IMPORTANCE_H_
