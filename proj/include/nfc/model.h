// Core value types shared by the codec: RGB images, feature/quantized/
// importance/masked map sets and the codec parameters.

#ifndef NFC_MODEL_H_
#define NFC_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nfc/errors.h"

namespace nfc {

// Largest feature value admitted by the half-open [0,1) convention.
inline constexpr float kMaxFeature = 1.0f - 1.0f / 65536.0f;

inline constexpr int kMaxBitDepth = 8;

enum class TransformId : uint8_t {
  kIdentity = 0,
  kBlockCosine = 1,        // sign-split AC channels
  kBlockCosineOffset = 2,  // mid-range offset for every coefficient
  kExternal = 255,  // features supplied through an FMAP file
};

class ImageBuffer {
 public:
  ImageBuffer() = default;
  // Filled with `fill` in every sample.
  ImageBuffer(uint32_t width, uint32_t height, uint8_t fill = 0);
  // Throws InvalidArgument unless pixels.size() == width * height * 3.
  ImageBuffer(uint32_t width, uint32_t height, std::vector<uint8_t> pixels);

  uint32_t width() const { return width_; }
  uint32_t height() const { return height_; }
  size_t sample_count() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  uint8_t at(uint32_t x, uint32_t y, int c) const {
    return pixels_[(static_cast<size_t>(y) * width_ + x) * 3 + c];
  }
  const std::vector<uint8_t>& pixels() const { return pixels_; }

  bool operator==(const ImageBuffer&) const = default;

 private:
  uint32_t width_ = 0;
  uint32_t height_ = 0;
  std::vector<uint8_t> pixels_;
};

// Channels outermost, then rows, then columns. Every module (the entropy
// coder in particular) relies on this linearization.
struct MapShape {
  uint32_t channels = 0;
  uint32_t height = 0;
  uint32_t width = 0;

  size_t plane_size() const { return static_cast<size_t>(height) * width; }
  size_t size() const { return plane_size() * channels; }
  size_t index(uint32_t c, uint32_t y, uint32_t x) const {
    return (static_cast<size_t>(c) * height + y) * width + x;
  }
  bool operator==(const MapShape&) const = default;
};

std::string ToString(const MapShape& shape);

// Encoder output z; every value lies in [0, 1).
class FeatureMapSet {
 public:
  FeatureMapSet() = default;
  // Throws InvalidArgument on length mismatch or a value outside [0,1).
  FeatureMapSet(MapShape shape, std::vector<float> values);

  const MapShape& shape() const { return shape_; }
  float at(uint32_t c, uint32_t y, uint32_t x) const {
    return values_[shape_.index(c, y, x)];
  }
  const std::vector<float>& values() const { return values_; }

  bool operator==(const FeatureMapSet&) const = default;

 private:
  MapShape shape_;
  std::vector<float> values_;
};

// Integer-valued map set. The tag keeps quantized, importance and masked
// sets from being mixed up at call sites; their value ranges depend on the
// bit depth and are checked by Validate().
template <class Tag>
class IntegerMapSet {
 public:
  IntegerMapSet() = default;
  IntegerMapSet(MapShape shape, std::vector<uint8_t> values)
      : shape_(shape), values_(std::move(values)) {
    if (values_.size() != shape_.size()) {
      throw InvalidArgument("map set of shape " + ToString(shape_) + " given " +
                            std::to_string(values_.size()) + " values");
    }
  }

  const MapShape& shape() const { return shape_; }
  uint8_t at(uint32_t c, uint32_t y, uint32_t x) const {
    return values_[shape_.index(c, y, x)];
  }
  const std::vector<uint8_t>& values() const { return values_; }

  bool operator==(const IntegerMapSet&) const = default;

 private:
  MapShape shape_;
  std::vector<uint8_t> values_;
};

struct QuantizedTag {};
struct ImportanceTag {};
struct MaskedTag {};

using QuantizedMapSet = IntegerMapSet<QuantizedTag>;    // q in [0, 2^d - 1]
using ImportanceMapSet = IntegerMapSet<ImportanceTag>;  // m in [1, d]
using MaskedMapSet = IntegerMapSet<MaskedTag>;          // multiples of 2^(d-m)

struct CodecParams {
  int bit_depth = 4;
  int block_size = 4;
  int channels = 16;
  TransformId transform = TransformId::kBlockCosine;
};

// Throws InvalidArgument if any CodecParams invariant fails.
void CheckParams(const CodecParams& params);

struct Coordinate {
  uint32_t channel = 0;
  uint32_t row = 0;
  uint32_t column = 0;
  bool operator==(const Coordinate&) const = default;
};

struct Violation {
  Coordinate where;
  std::string message;
};

// Each returns the first violated invariant in (c, y, x) order, or nullopt.
// A channel count differing from params.channels is reported at (0, 0, 0).
std::optional<Violation> Validate(const QuantizedMapSet& set,
                                  const CodecParams& params);
std::optional<Violation> Validate(const ImportanceMapSet& set,
                                  const CodecParams& params);
// Range check only; the divisibility invariant needs the governing map.
std::optional<Violation> Validate(const MaskedMapSet& set,
                                  const CodecParams& params);
std::optional<Violation> Validate(const MaskedMapSet& set,
                                  const ImportanceMapSet& importance,
                                  const CodecParams& params);

}  // namespace nfc

#endif  // NFC_MODEL_H_
