// Bitplane coding of masked feature maps over an adaptive binary range
// coder.
//
// Each feature map is coded MSB plane first. While every plane seen so far
// has been all zero, a per-map flag says whether the current plane is all
// zero too. Once a plane is non-zero, blocks of block_size x block_size
// samples are visited in raster order: an insignificant block first codes
// whether it holds a 1 in this plane, and a significant block codes each of
// its samples, as a significance bit until the sample's first 1 and as a
// refinement bit afterwards. Flags reset per map; contexts live for the
// whole payload.

#ifndef NFC_ENTROPY_H_
#define NFC_ENTROPY_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "nfc/errors.h"
#include "nfc/model.h"

namespace nfc {

// Laplace-smoothed adaptive bit statistics: p(1) = (c1 + 1) / (c0 + c1 + 2).
// Both counts are halved before an update once their sum reaches 1024.
class ContextModel {
 public:
  static constexpr uint32_t kHalvingThreshold = 1024;

  uint32_t zeros() const { return c0_; }
  uint32_t ones() const { return c1_; }
  double p1() const { return (c1_ + 1.0) / (c0_ + c1_ + 2.0); }

  void Update(int bit);

 private:
  uint32_t c0_ = 0;
  uint32_t c1_ = 0;
};

// Byte-oriented range coder: 64-bit low with a pending carry chain, 32-bit
// range renormalized whenever it drops below 2^24.
class RangeEncoder {
 public:
  static constexpr uint32_t kTop = 1u << 24;

  void Encode(int bit, ContextModel& ctx);
  // Flushes the coder; the encoder must not be used afterwards.
  std::vector<uint8_t> Finish();

  uint32_t range() const { return range_; }

 private:
  void ShiftLow();

  uint64_t low_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  uint8_t cache_ = 0;
  uint64_t cache_size_ = 1;
  std::vector<uint8_t> out_;
};

// Mirror of RangeEncoder. Throws CodecError(kTruncated) when it needs bytes
// past the end of the input and CodecError(kCorruptPayload) when the input
// cannot have come from RangeEncoder.
class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const uint8_t> data);

  int Decode(ContextModel& ctx);

  // Bytes consumed so far.
  size_t position() const { return pos_; }

 private:
  uint8_t NextByte();

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
  uint32_t code_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
};

enum class ContextId : uint8_t {
  kAllZeroPlane = 0,
  kBlockSignificance = 1,
  kSampleSignificance0 = 2,  // no significant 4-neighbor
  kSampleSignificance1 = 3,  // one
  kSampleSignificance2 = 4,  // two or more
  kRefinement = 5,
};
inline constexpr int kContextCount = 6;

struct ContextSet {
  std::array<ContextModel, kContextCount> models;
  ContextModel& operator[](ContextId id) {
    return models[static_cast<int>(id)];
  }
};

// One coded binary decision, for encoder/decoder trace comparison.
struct CodedDecision {
  ContextId context;
  uint8_t bit;
  uint32_t c0_before;
  uint32_t c1_before;
  bool operator==(const CodedDecision&) const = default;
};
using DecisionTrace = std::vector<CodedDecision>;

// `masked` must satisfy Validate(masked, params). The shape and params are
// not stored in the payload.
std::vector<uint8_t> EncodeMaps(const MaskedMapSet& masked,
                                const CodecParams& params,
                                DecisionTrace* trace = nullptr);

// Bytes after the last one the decoder needs are ignored. Throws CodecError
// on truncated or corrupt payloads and InvalidArgument on invalid params.
MaskedMapSet DecodeMaps(std::span<const uint8_t> payload,
                        const CodecParams& params, const MapShape& shape,
                        DecisionTrace* trace = nullptr);

// Upper bound on samples DecodeMaps will allocate for.
inline constexpr size_t kMaxDecodedSamples = size_t{1} << 30;

}  // namespace nfc

#endif  // NFC_ENTROPY_H_
