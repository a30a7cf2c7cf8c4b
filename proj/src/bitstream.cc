#include "nfc/bitstream.h"

#include <algorithm>
#include <string>

#include "nfc/transform.h"

namespace nfc {

namespace {

void PutU32(std::vector<uint8_t>& out, uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<uint8_t>(v >> shift));
  }
}

void PutU64(std::vector<uint8_t>& out, uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<uint8_t>(v >> shift));
  }
}

uint64_t GetBigEndian(std::span<const uint8_t> bytes) {
  uint64_t v = 0;
  for (uint8_t b : bytes) v = (v << 8) | b;
  return v;
}

[[noreturn]] void OutOfRange(const std::string& what) {
  throw CodecError(ErrorCode::kFieldOutOfRange, what);
}

void CheckHeader(const ContainerHeader& h) {
  if (h.orig_width == 0 || h.orig_height == 0) OutOfRange("zero image size");
  if (h.padded_width == 0 || h.padded_height == 0) {
    OutOfRange("zero padded size");
  }
  if (h.channels == 0) OutOfRange("zero channels");
  if (h.bit_depth < 1 || h.bit_depth > kMaxBitDepth) {
    OutOfRange("bit depth " + std::to_string(h.bit_depth) +
               " outside [1,8]");
  }
  if (h.block_size == 0) OutOfRange("zero block size");
  switch (h.transform) {
    case TransformId::kIdentity:
      if (h.channels != 3) OutOfRange("identity transform needs 3 channels");
      if (h.padded_width != h.orig_width || h.padded_height != h.orig_height) {
        OutOfRange("identity transform cannot pad");
      }
      break;
    case TransformId::kBlockCosine:
    case TransformId::kBlockCosineOffset: {
      if (h.kept_coeffs < 1 || h.kept_coeffs > kDctCoeffs) {
        OutOfRange("kept coefficients " + std::to_string(h.kept_coeffs) +
                   " outside [1,64]");
      }
      const TransformConfig config{h.transform, h.kept_coeffs};
      if (h.channels != config.channels()) {
        OutOfRange("transform " + std::to_string(static_cast<int>(h.transform)) +
                   " with K=" + std::to_string(h.kept_coeffs) + " needs " +
                   std::to_string(config.channels()) + " channels");
      }
      if (h.padded_width != PaddedSize(h.orig_width) ||
          h.padded_height != PaddedSize(h.orig_height)) {
        OutOfRange("padded size is not the next multiple of 8");
      }
      break;
    }
    case TransformId::kExternal:
      break;
    default:
      OutOfRange("unknown transform id " +
                 std::to_string(static_cast<int>(h.transform)));
  }
}

}  // namespace

std::vector<uint8_t> WriteContainer(const ContainerHeader& header,
                                    std::span<const uint8_t> payload) {
  CheckHeader(header);
  std::vector<uint8_t> out;
  out.reserve(kContainerHeaderSize + payload.size());
  out.insert(out.end(), kContainerMagic.begin(), kContainerMagic.end());
  out.push_back(kContainerVersion);
  PutU32(out, header.orig_width);
  PutU32(out, header.orig_height);
  PutU32(out, header.padded_width);
  PutU32(out, header.padded_height);
  out.push_back(header.channels);
  out.push_back(header.bit_depth);
  out.push_back(header.block_size);
  out.push_back(static_cast<uint8_t>(header.transform));
  out.push_back(header.kept_coeffs);
  PutU64(out, payload.size());
  out.resize(kContainerHeaderSize + payload.size());
  std::copy(payload.begin(), payload.end(), out.begin() + kContainerHeaderSize);
  return out;
}

Container ReadContainer(std::span<const uint8_t> bytes) {
  const size_t magic_len = std::min(bytes.size(), kContainerMagic.size());
  if (!std::equal(bytes.begin(), bytes.begin() + magic_len,
                  kContainerMagic.begin())) {
    throw CodecError(ErrorCode::kBadMagic, "not an NFC1 container");
  }
  if (bytes.size() < 5) {
    throw CodecError(ErrorCode::kTruncated,
                     "container ends inside magic or version");
  }
  if (bytes[4] != kContainerVersion) {
    throw CodecError(ErrorCode::kUnsupportedVersion,
                     "container version " + std::to_string(bytes[4]) +
                         " is not supported");
  }
  if (bytes.size() < kContainerHeaderSize) {
    throw CodecError(ErrorCode::kTruncated,
                     "container header needs " +
                         std::to_string(kContainerHeaderSize) + " bytes, got " +
                         std::to_string(bytes.size()));
  }
  Container c;
  ContainerHeader& h = c.header;
  h.orig_width = static_cast<uint32_t>(GetBigEndian(bytes.subspan(5, 4)));
  h.orig_height = static_cast<uint32_t>(GetBigEndian(bytes.subspan(9, 4)));
  h.padded_width = static_cast<uint32_t>(GetBigEndian(bytes.subspan(13, 4)));
  h.padded_height = static_cast<uint32_t>(GetBigEndian(bytes.subspan(17, 4)));
  h.channels = bytes[21];
  h.bit_depth = bytes[22];
  h.block_size = bytes[23];
  h.transform = static_cast<TransformId>(bytes[24]);
  h.kept_coeffs = bytes[25];
  const uint64_t payload_len = GetBigEndian(bytes.subspan(26, 8));

  const uint64_t available = bytes.size() - kContainerHeaderSize;
  if (payload_len > available) {
    throw CodecError(ErrorCode::kTruncated,
                     "payload declares " + std::to_string(payload_len) +
                         " bytes, only " + std::to_string(available) +
                         " present");
  }
  if (payload_len < available) {
    throw CodecError(ErrorCode::kLengthMismatch,
                     std::to_string(available - payload_len) +
                         " bytes follow the declared payload");
  }
  CheckHeader(h);
  c.payload.assign(bytes.begin() + kContainerHeaderSize, bytes.end());
  return c;
}

double BitsPerPixel(size_t file_bytes, uint64_t pixel_count) {
  return static_cast<double>(file_bytes) * 8.0 /
         static_cast<double>(pixel_count);
}

CodecParams ParamsOf(const ContainerHeader& header) {
  return {header.bit_depth, header.block_size, header.channels,
          header.transform};
}

MapShape FeatureShapeOf(const ContainerHeader& header) {
  switch (header.transform) {
    case TransformId::kIdentity:
      return {3, header.orig_height, header.orig_width};
    case TransformId::kBlockCosine:
    case TransformId::kBlockCosineOffset:
      return {header.channels, header.padded_height / kDctSize,
              header.padded_width / kDctSize};
    default:
      return {header.channels, header.padded_height, header.padded_width};
  }
}

}  // namespace nfc
