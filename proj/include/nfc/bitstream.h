// The .nfc container: a fixed big-endian header followed by the entropy
// payload.
//
//   offset size field
//        0    4 magic "NFC1"
//        4    1 version (0x01)
//        5    4 orig_width
//        9    4 orig_height
//       13    4 padded_width
//       17    4 padded_height
//       21    1 channels
//       22    1 bit depth d
//       23    1 block_size
//       24    1 transform_id
//       25    1 kept_coeffs K
//       26    8 payload_len
//       34      payload

#ifndef NFC_BITSTREAM_H_
#define NFC_BITSTREAM_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "nfc/errors.h"
#include "nfc/model.h"

namespace nfc {

inline constexpr std::array<uint8_t, 4> kContainerMagic = {'N', 'F', 'C', '1'};
inline constexpr uint8_t kContainerVersion = 0x01;
inline constexpr size_t kContainerHeaderSize = 34;

struct ContainerHeader {
  uint32_t orig_width = 0;
  uint32_t orig_height = 0;
  uint32_t padded_width = 0;
  uint32_t padded_height = 0;
  uint8_t channels = 0;
  uint8_t bit_depth = 0;
  uint8_t block_size = 0;
  TransformId transform = TransformId::kBlockCosine;
  uint8_t kept_coeffs = 0;

  bool operator==(const ContainerHeader&) const = default;
};

struct Container {
  ContainerHeader header;
  std::vector<uint8_t> payload;
};

// Throws CodecError(kFieldOutOfRange) if a field is invalid: zero
// dimensions or channels, d outside [1,8], zero block size, or an unknown
// transform id.
std::vector<uint8_t> WriteContainer(const ContainerHeader& header,
                                    std::span<const uint8_t> payload);

// Throws CodecError with kTruncated, kBadMagic, kUnsupportedVersion,
// kLengthMismatch or kFieldOutOfRange.
Container ReadContainer(std::span<const uint8_t> bytes);

// Total file bits over the original pixel count, header included.
double BitsPerPixel(size_t file_bytes, uint64_t pixel_count);

// Codec parameters and feature shape a header describes.
CodecParams ParamsOf(const ContainerHeader& header);
MapShape FeatureShapeOf(const ContainerHeader& header);

}  // namespace nfc

#endif  // NFC_BITSTREAM_H_
