// Deterministic analysis/synthesis transforms that turn an RGB image into a
// feature map set in [0,1) and back, plus the [-1,1] normalization contract.
//
// Transform 0 (identity) exposes the three normalized color planes directly.
// The block-cosine transforms pad each plane to a multiple of 8 by edge
// replication, apply an orthonormal 8x8 DCT per block and keep the first K
// coefficients in zigzag order; every channel is (H/8) x (W/8).
//
// Coefficients map into [0,1) through fixed, input-independent constants;
// an orthonormal 8x8 DCT of samples in [-1,1] has |coef| <= 8.
//   Transform 1 (sign split): the DC of each plane maps to (c + 8) / 16.
//     Each AC coefficient occupies two channels holding max(c, 0) / 8 and
//     max(-c, 0) / 8, so a zero coefficient is zero in every bitplane and
//     masking shrinks magnitudes toward zero. C = 6K - 3.
//   Transform 2 (offset): every coefficient maps to (c + 8) / 16 in channel
//     3k + p. C = 3K.
// Channel order for transform 1 is the three DC channels, then for each AC
// coefficient k = 1..K-1 and plane p the pair (positive, negative).

#ifndef NFC_TRANSFORM_H_
#define NFC_TRANSFORM_H_

#include <array>
#include <cstdint>
#include <vector>

#include "nfc/model.h"

namespace nfc {

inline constexpr int kDctSize = 8;
inline constexpr int kDctCoeffs = kDctSize * kDctSize;

inline constexpr double kCoeffOffset = 8.0;
inline constexpr double kCoeffScale = 1.0 / 16.0;
inline constexpr double kMagnitudeScale = 1.0 / 8.0;

struct TransformConfig {
  TransformId id = TransformId::kBlockCosine;
  int kept_coeffs = 6;

  // Number of feature channels the transform produces.
  int channels() const;
};

// Source of one block-cosine feature channel.
struct CoefficientChannel {
  int coeff;  // zigzag position
  int plane;  // color plane
  int sign;   // 0: offset mapping; +1 / -1: positive / negative part
};

// Channel order of a block-cosine transform; empty for other transforms.
std::vector<CoefficientChannel> ChannelLayout(const TransformConfig& config);

// Feature value of a coefficient under a channel's mapping, before clamping,
// and its inverse.
double CoefficientToFeature(double coeff, int sign);
double FeatureToCoefficient(double z, int sign);

// Throws InvalidArgument for an unsupported id or K outside [1, 64].
void CheckTransformConfig(const TransformConfig& config);

// Three real-valued color planes, row-major.
struct PlaneSet {
  uint32_t width = 0;
  uint32_t height = 0;
  std::array<std::vector<double>, 3> planes;
};

// v / 127.5 - 1 per sample.
PlaneSet Normalize(const ImageBuffer& image);
// round((v + 1) * 127.5), clamped to [0, 255].
ImageBuffer Denormalize(const PlaneSet& planes);

struct Analysis {
  FeatureMapSet features;
  uint32_t padded_width = 0;
  uint32_t padded_height = 0;
};

// Throws InvalidArgument on an empty image or invalid config.
Analysis Analyze(const ImageBuffer& image, const TransformConfig& config);

// Inverse of Analyze up to quantization and clipping; crops the padding back
// to width x height. Throws InvalidArgument when the feature shape cannot
// come from an image of that size under `config`.
ImageBuffer Synthesize(const FeatureMapSet& features,
                       const TransformConfig& config, uint32_t width,
                       uint32_t height);

// Zigzag scan position -> raster index within an 8x8 block.
const std::array<int, kDctCoeffs>& ZigzagOrder();

// Rounds `size` up to the next multiple of 8.
uint32_t PaddedSize(uint32_t size);

}  // namespace nfc

#endif  // NFC_TRANSFORM_H_
