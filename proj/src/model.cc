#include "nfc/model.h"

namespace nfc {

ImageBuffer::ImageBuffer(uint32_t width, uint32_t height, uint8_t fill)
    : width_(width),
      height_(height),
      pixels_(static_cast<size_t>(width) * height * 3, fill) {}

ImageBuffer::ImageBuffer(uint32_t width, uint32_t height,
                         std::vector<uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != static_cast<size_t>(width_) * height_ * 3) {
    throw InvalidArgument("image " + std::to_string(width_) + "x" +
                          std::to_string(height_) + " given " +
                          std::to_string(pixels_.size()) + " samples");
  }
}

std::string ToString(const MapShape& shape) {
  return std::to_string(shape.channels) + "x" + std::to_string(shape.height) +
         "x" + std::to_string(shape.width);
}

FeatureMapSet::FeatureMapSet(MapShape shape, std::vector<float> values)
    : shape_(shape), values_(std::move(values)) {
  if (values_.size() != shape_.size()) {
    throw InvalidArgument("feature set of shape " + ToString(shape_) +
                          " given " + std::to_string(values_.size()) +
                          " values");
  }
  for (size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0f && values_[i] < 1.0f)) {
      throw InvalidArgument("feature value " + std::to_string(values_[i]) +
                            " at index " + std::to_string(i) +
                            " outside [0,1)");
    }
  }
}

void CheckParams(const CodecParams& params) {
  if (params.bit_depth < 1 || params.bit_depth > kMaxBitDepth) {
    throw InvalidArgument("bit depth must be in [1,8], got " +
                          std::to_string(params.bit_depth));
  }
  if (params.block_size < 1) {
    throw InvalidArgument("block size must be >= 1, got " +
                          std::to_string(params.block_size));
  }
  if (params.channels < 1) {
    throw InvalidArgument("channel count must be >= 1, got " +
                          std::to_string(params.channels));
  }
}

namespace {

Coordinate CoordinateOf(const MapShape& shape, size_t index) {
  const size_t plane = shape.plane_size();
  const size_t in_plane = index % plane;
  return {static_cast<uint32_t>(index / plane),
          static_cast<uint32_t>(in_plane / shape.width),
          static_cast<uint32_t>(in_plane % shape.width)};
}

template <class Tag>
std::optional<Violation> CheckChannels(const IntegerMapSet<Tag>& set,
                                       const CodecParams& params) {
  if (set.shape().channels != static_cast<uint32_t>(params.channels)) {
    return Violation{{}, "set has " + std::to_string(set.shape().channels) +
                             " channels, params expect " +
                             std::to_string(params.channels)};
  }
  return std::nullopt;
}

// First value outside [lo, hi].
template <class Tag>
std::optional<Violation> CheckRange(const IntegerMapSet<Tag>& set, int lo,
                                    int hi, const char* what) {
  const auto& v = set.values();
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] < lo || v[i] > hi) {
      return Violation{CoordinateOf(set.shape(), i),
                       std::string(what) + " " + std::to_string(v[i]) +
                           " outside [" + std::to_string(lo) + "," +
                           std::to_string(hi) + "]"};
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Violation> Validate(const QuantizedMapSet& set,
                                  const CodecParams& params) {
  if (auto v = CheckChannels(set, params)) return v;
  return CheckRange(set, 0, (1 << params.bit_depth) - 1, "quantized value");
}

std::optional<Violation> Validate(const ImportanceMapSet& set,
                                  const CodecParams& params) {
  if (auto v = CheckChannels(set, params)) return v;
  return CheckRange(set, 1, params.bit_depth, "importance");
}

std::optional<Violation> Validate(const MaskedMapSet& set,
                                  const CodecParams& params) {
  if (auto v = CheckChannels(set, params)) return v;
  return CheckRange(set, 0, (1 << params.bit_depth) - 1, "masked value");
}

std::optional<Violation> Validate(const MaskedMapSet& set,
                                  const ImportanceMapSet& importance,
                                  const CodecParams& params) {
  if (auto v = Validate(set, params)) return v;
  if (auto v = Validate(importance, params)) return v;
  if (!(set.shape() == importance.shape())) {
    return Violation{{}, "masked shape " + ToString(set.shape()) +
                             " differs from importance shape " +
                             ToString(importance.shape())};
  }
  const auto& values = set.values();
  const auto& kept = importance.values();
  for (size_t i = 0; i < values.size(); ++i) {
    const int step = 1 << (params.bit_depth - kept[i]);
    if (values[i] % step != 0) {
      return Violation{CoordinateOf(set.shape(), i),
                       "masked value " + std::to_string(values[i]) +
                           " is not a multiple of " + std::to_string(step)};
    }
  }
  return std::nullopt;
}

}  // namespace nfc
