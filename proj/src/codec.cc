#include "nfc/codec.h"

#include <string>

#include "nfc/entropy.h"
#include "nfc/quantizer.h"

namespace nfc {

namespace {

EncodeResult CodeFeatures(const FeatureMapSet& features,
                          const EncodeOptions& options,
                          ContainerHeader header, uint64_t pixel_count) {
  const CodecParams params{options.bit_depth, options.block_size,
                           static_cast<int>(features.shape().channels),
                           header.transform};
  CheckParams(params);
  if (params.channels > 255) {
    throw InvalidArgument("at most 255 channels fit the container, got " +
                          std::to_string(params.channels));
  }
  if (options.block_size > 255) {
    throw InvalidArgument("block size must be <= 255");
  }
  header.channels = static_cast<uint8_t>(params.channels);
  header.bit_depth = static_cast<uint8_t>(params.bit_depth);
  header.block_size = static_cast<uint8_t>(params.block_size);

  const QuantizedMapSet q = QuantizeSet(features, params.bit_depth);
  EncodeResult result;
  std::vector<uint8_t> payload;
  if (options.full_importance) {
    result.importance = FullImportance(q.shape(), params.bit_depth);
    result.masked = MaskSet(q, result.importance, params.bit_depth);
    payload = EncodeMaps(result.masked, params);
  } else {
    RateControlResult rc =
        RateControl(features, q, options.rate, params, pixel_count);
    result.importance = std::move(rc.importance);
    result.masked = std::move(rc.masked);
    result.unreachable = rc.unreachable;
    result.evaluations = rc.evaluations;
    payload = std::move(rc.payload);
  }
  result.file = WriteContainer(header, payload);
  result.bpp = BitsPerPixel(result.file.size(), pixel_count);
  return result;
}

}  // namespace

EncodeResult EncodeImage(const ImageBuffer& image,
                         const EncodeOptions& options) {
  const Analysis analysis = Analyze(image, options.transform);
  ContainerHeader header;
  header.orig_width = image.width();
  header.orig_height = image.height();
  header.padded_width = analysis.padded_width;
  header.padded_height = analysis.padded_height;
  header.transform = options.transform.id;
  header.kept_coeffs = options.transform.id == TransformId::kIdentity
                           ? 0
                           : static_cast<uint8_t>(options.transform.kept_coeffs);
  return CodeFeatures(analysis.features, options, header,
                      uint64_t{image.width()} * image.height());
}

EncodeResult EncodeFeatures(const FeatureMapSet& features,
                            const EncodeOptions& options, uint32_t pixel_width,
                            uint32_t pixel_height) {
  if (features.shape().size() == 0) {
    throw InvalidArgument("cannot encode an empty feature set");
  }
  if (pixel_width == 0 || pixel_height == 0) {
    throw InvalidArgument("pixel dimensions must be positive");
  }
  ContainerHeader header;
  header.orig_width = pixel_width;
  header.orig_height = pixel_height;
  header.padded_width = features.shape().width;
  header.padded_height = features.shape().height;
  header.transform = TransformId::kExternal;
  header.kept_coeffs = 0;
  return CodeFeatures(features, options, header,
                      uint64_t{pixel_width} * pixel_height);
}

DecodedFile DecodeFile(std::span<const uint8_t> file) {
  const Container container = ReadContainer(file);
  const ContainerHeader& h = container.header;
  const CodecParams params = ParamsOf(h);
  const MaskedMapSet masked =
      DecodeMaps(container.payload, params, FeatureShapeOf(h));
  FeatureMapSet features = DequantizeSet(masked, params.bit_depth);
  if (h.transform == TransformId::kExternal) {
    return {h, std::move(features)};
  }
  TransformConfig config{h.transform, h.kept_coeffs};
  return {h, Synthesize(features, config, h.orig_width, h.orig_height)};
}

}  // namespace nfc
