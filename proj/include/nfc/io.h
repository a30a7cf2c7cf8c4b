// File formats: binary PPM (P6, maxval 255) and the FMAP feature-map file.
//
// FMAP layout: "FMAP", version byte 0x01, C, fh, fw as big-endian u32, then
// C * fh * fw little-endian IEEE-754 binary32 values in (c, y, x) order.

#ifndef NFC_IO_H_
#define NFC_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nfc/errors.h"
#include "nfc/model.h"

namespace nfc {

// Throws CodecError(kMalformed) on syntax errors, unsupported maxval or
// missing pixel data.
ImageBuffer ParsePpm(std::span<const uint8_t> bytes);
std::vector<uint8_t> SerializePpm(const ImageBuffer& image);

// Raw FMAP contents. Values are not range checked here.
struct FeatureFile {
  MapShape shape;
  std::vector<float> values;
};

// Throws CodecError(kMalformed) on bad magic/version or a size mismatch.
FeatureFile ParseFmap(std::span<const uint8_t> bytes);
std::vector<uint8_t> SerializeFmap(const MapShape& shape,
                                   std::span<const float> values);

// Turns file values into a FeatureMapSet: finite values are clamped into
// [0, 1 - 2^-16]; NaN or infinities throw CodecError(kMalformed).
FeatureMapSet ToFeatureMapSet(const FeatureFile& file);

// Throw CodecError(kIo) on failure.
std::vector<uint8_t> ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path,
               std::span<const uint8_t> bytes);

}  // namespace nfc

#endif  // NFC_IO_H_
