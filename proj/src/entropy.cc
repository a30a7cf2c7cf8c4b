#include "nfc/entropy.h"

#include <algorithm>
#include <string>

namespace nfc {

void ContextModel::Update(int bit) {
  if (c0_ + c1_ >= kHalvingThreshold) {
    c0_ /= 2;
    c1_ /= 2;
  }
  if (bit) {
    ++c1_;
  } else {
    ++c0_;
  }
}

namespace {

// Size of the interval assigned to a zero bit.
uint32_t ZeroBound(uint32_t range, const ContextModel& ctx) {
  const uint32_t total = ctx.zeros() + ctx.ones() + 2;
  return (range / total) * (ctx.zeros() + 1);
}

}  // namespace

void RangeEncoder::Encode(int bit, ContextModel& ctx) {
  const uint32_t bound = ZeroBound(range_, ctx);
  if (bit) {
    low_ += bound;
    range_ -= bound;
  } else {
    range_ = bound;
  }
  ctx.Update(bit);
  while (range_ < kTop) {
    range_ <<= 8;
    ShiftLow();
  }
}

void RangeEncoder::ShiftLow() {
  if (static_cast<uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
    const uint8_t carry = static_cast<uint8_t>(low_ >> 32);
    uint8_t pending = cache_;
    do {
      out_.push_back(static_cast<uint8_t>(pending + carry));
      pending = 0xFF;
    } while (--cache_size_ != 0);
    cache_ = static_cast<uint8_t>(low_ >> 24);
  }
  ++cache_size_;
  low_ = (low_ & 0x00FFFFFFu) << 8;
}

std::vector<uint8_t> RangeEncoder::Finish() {
  for (int i = 0; i < 5; ++i) ShiftLow();
  return std::move(out_);
}

RangeDecoder::RangeDecoder(std::span<const uint8_t> data) : data_(data) {
  // The encoder's first byte is its initial (empty) cache.
  if (NextByte() != 0) {
    throw CodecError(ErrorCode::kCorruptPayload,
                     "range coder stream must start with a zero byte");
  }
  for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | NextByte();
  if (code_ >= range_) {
    throw CodecError(ErrorCode::kCorruptPayload, "range coder code overflow");
  }
}

uint8_t RangeDecoder::NextByte() {
  if (pos_ >= data_.size()) {
    throw CodecError(ErrorCode::kTruncated,
                     "payload ends after " + std::to_string(data_.size()) +
                         " bytes");
  }
  return data_[pos_++];
}

int RangeDecoder::Decode(ContextModel& ctx) {
  const uint32_t bound = ZeroBound(range_, ctx);
  int bit;
  if (code_ < bound) {
    range_ = bound;
    bit = 0;
  } else {
    code_ -= bound;
    range_ -= bound;
    bit = 1;
  }
  ctx.Update(bit);
  while (range_ < RangeEncoder::kTop) {
    range_ <<= 8;
    code_ = (code_ << 8) | NextByte();
    if (code_ >= range_) {
      throw CodecError(ErrorCode::kCorruptPayload,
                       "range coder code overflow at byte " +
                           std::to_string(pos_));
    }
  }
  return bit;
}

namespace {

// Adapts RangeEncoder/RangeDecoder to one "code this decision" call. The
// encoder codes `bit` and returns it; the decoder ignores it and returns
// what it decoded.
class EncodingCoder {
 public:
  static constexpr bool kEncoding = true;
  explicit EncodingCoder(DecisionTrace* trace) : trace_(trace) {}

  int Code(ContextSet& contexts, ContextId id, int bit) {
    ContextModel& ctx = contexts[id];
    if (trace_) {
      trace_->push_back({id, static_cast<uint8_t>(bit), ctx.zeros(),
                         ctx.ones()});
    }
    encoder_.Encode(bit, ctx);
    return bit;
  }
  std::vector<uint8_t> Finish() { return encoder_.Finish(); }

 private:
  RangeEncoder encoder_;
  DecisionTrace* trace_;
};

class DecodingCoder {
 public:
  static constexpr bool kEncoding = false;
  DecodingCoder(std::span<const uint8_t> payload, DecisionTrace* trace)
      : decoder_(payload), trace_(trace) {}

  int Code(ContextSet& contexts, ContextId id, int /*bit*/) {
    ContextModel& ctx = contexts[id];
    const uint32_t c0 = ctx.zeros(), c1 = ctx.ones();
    const int bit = decoder_.Decode(ctx);
    if (trace_) trace_->push_back({id, static_cast<uint8_t>(bit), c0, c1});
    return bit;
  }

 private:
  RangeDecoder decoder_;
  DecisionTrace* trace_;
};

ContextId SignificanceContext(int significant_neighbors) {
  switch (std::min(significant_neighbors, 2)) {
    case 0:
      return ContextId::kSampleSignificance0;
    case 1:
      return ContextId::kSampleSignificance1;
    default:
      return ContextId::kSampleSignificance2;
  }
}

// Walks every decision of the bitplane scheme. When encoding, `values` is
// read; when decoding it starts zeroed and receives the decoded bits.
template <class Coder, class Sample>
void CodeBitplanes(Coder& coder, const MapShape& shape,
                   const CodecParams& params, Sample* values) {
  const uint32_t h = shape.height;
  const uint32_t w = shape.width;
  const uint32_t bs = static_cast<uint32_t>(params.block_size);
  const uint32_t blocks_y = (h + bs - 1) / bs;
  const uint32_t blocks_x = (w + bs - 1) / bs;
  const size_t plane = shape.plane_size();

  ContextSet contexts;
  std::vector<uint8_t> block_flag(static_cast<size_t>(blocks_y) * blocks_x);
  std::vector<uint8_t> sample_flag(plane);

  auto significant_neighbors = [&](uint32_t y, uint32_t x) {
    const uint8_t* s = sample_flag.data();
    int n = 0;
    if (y > 0) n += s[(y - 1) * w + x];
    if (y + 1 < h) n += s[(y + 1) * w + x];
    if (x > 0) n += s[y * w + x - 1];
    if (x + 1 < w) n += s[y * w + x + 1];
    return n;
  };

  for (uint32_t c = 0; c < shape.channels; ++c) {
    Sample* map = values + c * plane;
    std::fill(block_flag.begin(), block_flag.end(), 0);
    std::fill(sample_flag.begin(), sample_flag.end(), 0);
    int all_zero_so_far = 1;

    for (int k = params.bit_depth - 1; k >= 0; --k) {
      const uint8_t mask = static_cast<uint8_t>(1u << k);

      if (all_zero_so_far) {
        int plane_zero = 1;
        if constexpr (Coder::kEncoding) {
          plane_zero = std::none_of(map, map + plane,
                                    [mask](uint8_t v) { return v & mask; });
        }
        plane_zero = coder.Code(contexts, ContextId::kAllZeroPlane, plane_zero);
        if (plane_zero) continue;
        all_zero_so_far = 0;
      }

      for (uint32_t by = 0; by < blocks_y; ++by) {
        const uint32_t y0 = by * bs;
        const uint32_t y1 = std::min(y0 + bs, h);
        for (uint32_t bx = 0; bx < blocks_x; ++bx) {
          const uint32_t x0 = bx * bs;
          const uint32_t x1 = std::min(x0 + bs, w);
          uint8_t& block = block_flag[static_cast<size_t>(by) * blocks_x + bx];

          if (!block) {
            int any_one = 0;
            if constexpr (Coder::kEncoding) {
              for (uint32_t y = y0; y < y1 && !any_one; ++y) {
                for (uint32_t x = x0; x < x1; ++x) {
                  if (map[y * w + x] & mask) {
                    any_one = 1;
                    break;
                  }
                }
              }
            }
            block = static_cast<uint8_t>(
                coder.Code(contexts, ContextId::kBlockSignificance, any_one));
          }
          if (!block) continue;

          for (uint32_t y = y0; y < y1; ++y) {
            for (uint32_t x = x0; x < x1; ++x) {
              const size_t i = static_cast<size_t>(y) * w + x;
              const int actual = (map[i] & mask) ? 1 : 0;
              int bit;
              if (!sample_flag[i]) {
                bit = coder.Code(contexts,
                                 SignificanceContext(significant_neighbors(y, x)),
                                 actual);
                if (bit) sample_flag[i] = 1;
              } else {
                bit = coder.Code(contexts, ContextId::kRefinement, actual);
              }
              if constexpr (!Coder::kEncoding) {
                if (bit) map[i] |= mask;
              }
            }
          }
        }
      }
    }
  }
}

}  // namespace

std::vector<uint8_t> EncodeMaps(const MaskedMapSet& masked,
                                const CodecParams& params,
                                DecisionTrace* trace) {
  CheckParams(params);
  if (masked.shape().size() == 0) return {};
  if (auto violation = Validate(masked, params)) {
    throw InvalidArgument("cannot encode masked maps: " + violation->message);
  }
  EncodingCoder coder(trace);
  CodeBitplanes(coder, masked.shape(), params, masked.values().data());
  return coder.Finish();
}

MaskedMapSet DecodeMaps(std::span<const uint8_t> payload,
                        const CodecParams& params, const MapShape& shape,
                        DecisionTrace* trace) {
  CheckParams(params);
  if (shape.size() == 0) return MaskedMapSet(shape, {});
  if (shape.channels != static_cast<uint32_t>(params.channels)) {
    throw InvalidArgument("shape has " + std::to_string(shape.channels) +
                          " channels, params expect " +
                          std::to_string(params.channels));
  }
  if (shape.height != 0 && shape.width != 0 &&
      shape.plane_size() > kMaxDecodedSamples / shape.channels) {
    throw InvalidArgument("shape " + ToString(shape) + " is too large");
  }
  std::vector<uint8_t> values(shape.size(), 0);
  DecodingCoder coder(payload, trace);
  CodeBitplanes(coder, shape, params, values.data());
  return MaskedMapSet(shape, std::move(values));
}

}  // namespace nfc
