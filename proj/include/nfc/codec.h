// End-to-end encode/decode pipelines built from the codec modules:
//   image:    analyze -> quantize -> rate control -> mask -> code -> container
//   features: quantize -> rate control -> mask -> code -> container
// and the reverse for decoding.

#ifndef NFC_CODEC_H_
#define NFC_CODEC_H_

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "nfc/bitstream.h"
#include "nfc/importance.h"
#include "nfc/model.h"
#include "nfc/transform.h"

namespace nfc {

struct EncodeOptions {
  int bit_depth = 4;
  int block_size = 4;
  TransformConfig transform;
  RateControlConfig rate;
  // Skip rate control and keep every bit (m = d everywhere).
  bool full_importance = false;
};

struct EncodeResult {
  std::vector<uint8_t> file;  // complete .nfc container
  double bpp = 0.0;           // file bits per original pixel
  bool unreachable = false;   // target below the all-1 allocation floor
  int evaluations = 0;
  ImportanceMapSet importance;
  MaskedMapSet masked;
};

// Throws InvalidArgument for invalid options or an empty image.
EncodeResult EncodeImage(const ImageBuffer& image, const EncodeOptions& options);

// Codes externally produced features. The pixel dimensions only enter the
// bpp accounting and are stored as the container's original size; the
// feature size is stored as its padded size. options.transform is ignored.
EncodeResult EncodeFeatures(const FeatureMapSet& features,
                            const EncodeOptions& options, uint32_t pixel_width,
                            uint32_t pixel_height);

struct DecodedFile {
  ContainerHeader header;
  // An image for transforms 0 and 1, dequantized features for external
  // features.
  std::variant<ImageBuffer, FeatureMapSet> content;
};

// Throws CodecError for container or payload errors.
DecodedFile DecodeFile(std::span<const uint8_t> file);

}  // namespace nfc

#endif  // NFC_CODEC_H_
