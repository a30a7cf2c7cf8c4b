#include "nfc/transform.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace nfc {

namespace {

// cos(k * pi / 16) for k = 0..8, spelled out so the basis does not depend on
// the platform's libm.
constexpr double kCosTable[9] = {
    1.0,
    0.9807852804032304,
    0.9238795325112867,
    0.8314696123025452,
    0.7071067811865476,
    0.5555702330196023,
    0.38268343236508984,
    0.19509032201612833,
    0.0,
};
constexpr double kDcNorm = 0.3535533905932738;  // sqrt(1/8)
constexpr double kAcNorm = 0.5;                 // sqrt(2/8)

// cos(n * pi / 16) for any n >= 0.
double CosSixteenth(int n) {
  n %= 32;
  if (n > 16) n = 32 - n;
  if (n > 8) return -kCosTable[16 - n];
  return kCosTable[n];
}

using Basis = std::array<std::array<double, kDctSize>, kDctSize>;

// basis[u][x] = alpha(u) * cos((2x + 1) u pi / 16)
const Basis& DctBasis() {
  static const Basis basis = [] {
    Basis b{};
    for (int u = 0; u < kDctSize; ++u) {
      const double alpha = u == 0 ? kDcNorm : kAcNorm;
      for (int x = 0; x < kDctSize; ++x) {
        b[u][x] = alpha * CosSixteenth((2 * x + 1) * u);
      }
    }
    return b;
  }();
  return basis;
}

using Block = std::array<double, kDctCoeffs>;

Block ForwardDct(const Block& in) {
  const Basis& b = DctBasis();
  Block rows{};
  for (int y = 0; y < kDctSize; ++y) {
    for (int u = 0; u < kDctSize; ++u) {
      double acc = 0.0;
      for (int x = 0; x < kDctSize; ++x) acc += b[u][x] * in[y * kDctSize + x];
      rows[y * kDctSize + u] = acc;
    }
  }
  Block out{};
  for (int v = 0; v < kDctSize; ++v) {
    for (int u = 0; u < kDctSize; ++u) {
      double acc = 0.0;
      for (int y = 0; y < kDctSize; ++y) acc += b[v][y] * rows[y * kDctSize + u];
      out[v * kDctSize + u] = acc;
    }
  }
  return out;
}

Block InverseDct(const Block& in) {
  const Basis& b = DctBasis();
  Block cols{};
  for (int y = 0; y < kDctSize; ++y) {
    for (int u = 0; u < kDctSize; ++u) {
      double acc = 0.0;
      for (int v = 0; v < kDctSize; ++v) acc += b[v][y] * in[v * kDctSize + u];
      cols[y * kDctSize + u] = acc;
    }
  }
  Block out{};
  for (int y = 0; y < kDctSize; ++y) {
    for (int x = 0; x < kDctSize; ++x) {
      double acc = 0.0;
      for (int u = 0; u < kDctSize; ++u) acc += b[u][x] * cols[y * kDctSize + u];
      out[y * kDctSize + x] = acc;
    }
  }
  return out;
}

float ClampFeature(double z) {
  return static_cast<float>(std::clamp(z, 0.0, static_cast<double>(kMaxFeature)));
}

}  // namespace

const std::array<int, kDctCoeffs>& ZigzagOrder() {
  static const std::array<int, kDctCoeffs> order = [] {
    std::array<int, kDctCoeffs> zz{};
    int x = 0, y = 0;
    for (int i = 0; i < kDctCoeffs; ++i) {
      zz[i] = y * kDctSize + x;
      if ((x + y) % 2 == 0) {  // moving up-right
        if (x == kDctSize - 1) {
          ++y;
        } else if (y == 0) {
          ++x;
        } else {
          ++x;
          --y;
        }
      } else {  // moving down-left
        if (y == kDctSize - 1) {
          ++x;
        } else if (x == 0) {
          ++y;
        } else {
          --x;
          ++y;
        }
      }
    }
    return zz;
  }();
  return order;
}

uint32_t PaddedSize(uint32_t size) {
  return (size + kDctSize - 1) / kDctSize * kDctSize;
}

int TransformConfig::channels() const {
  switch (id) {
    case TransformId::kBlockCosine:
      return 6 * kept_coeffs - 3;
    case TransformId::kBlockCosineOffset:
      return 3 * kept_coeffs;
    default:
      return 3;
  }
}

std::vector<CoefficientChannel> ChannelLayout(const TransformConfig& config) {
  std::vector<CoefficientChannel> layout;
  if (config.id == TransformId::kBlockCosineOffset) {
    for (int k = 0; k < config.kept_coeffs; ++k) {
      for (int p = 0; p < 3; ++p) layout.push_back({k, p, 0});
    }
  } else if (config.id == TransformId::kBlockCosine) {
    for (int p = 0; p < 3; ++p) layout.push_back({0, p, 0});
    for (int k = 1; k < config.kept_coeffs; ++k) {
      for (int p = 0; p < 3; ++p) {
        layout.push_back({k, p, +1});
        layout.push_back({k, p, -1});
      }
    }
  }
  return layout;
}

double CoefficientToFeature(double coeff, int sign) {
  if (sign == 0) return (coeff + kCoeffOffset) * kCoeffScale;
  return std::max(sign * coeff, 0.0) * kMagnitudeScale;
}

double FeatureToCoefficient(double z, int sign) {
  if (sign == 0) return z / kCoeffScale - kCoeffOffset;
  return sign * z / kMagnitudeScale;
}

void CheckTransformConfig(const TransformConfig& config) {
  switch (config.id) {
    case TransformId::kIdentity:
      return;
    case TransformId::kBlockCosine:
    case TransformId::kBlockCosineOffset:
      if (config.kept_coeffs < 1 || config.kept_coeffs > kDctCoeffs) {
        throw InvalidArgument("kept coefficients must be in [1,64], got " +
                              std::to_string(config.kept_coeffs));
      }
      return;
    default:
      throw InvalidArgument("transform " +
                            std::to_string(static_cast<int>(config.id)) +
                            " has no image analysis");
  }
}

PlaneSet Normalize(const ImageBuffer& image) {
  PlaneSet out;
  out.width = image.width();
  out.height = image.height();
  const size_t n = static_cast<size_t>(image.width()) * image.height();
  const auto& px = image.pixels();
  for (int c = 0; c < 3; ++c) {
    out.planes[c].resize(n);
    for (size_t i = 0; i < n; ++i) out.planes[c][i] = px[i * 3 + c] / 127.5 - 1.0;
  }
  return out;
}

ImageBuffer Denormalize(const PlaneSet& planes) {
  const size_t n = static_cast<size_t>(planes.width) * planes.height;
  std::vector<uint8_t> px(n * 3);
  for (int c = 0; c < 3; ++c) {
    for (size_t i = 0; i < n; ++i) {
      const double v = std::round((planes.planes[c][i] + 1.0) * 127.5);
      px[i * 3 + c] = static_cast<uint8_t>(std::clamp(v, 0.0, 255.0));
    }
  }
  return ImageBuffer(planes.width, planes.height, std::move(px));
}

Analysis Analyze(const ImageBuffer& image, const TransformConfig& config) {
  if (image.empty()) throw InvalidArgument("cannot analyze an empty image");
  CheckTransformConfig(config);
  const PlaneSet planes = Normalize(image);
  const uint32_t w = image.width();
  const uint32_t h = image.height();

  if (config.id == TransformId::kIdentity) {
    std::vector<float> z(planes.planes[0].size() * 3);
    const size_t n = planes.planes[0].size();
    for (int c = 0; c < 3; ++c) {
      for (size_t i = 0; i < n; ++i) {
        z[c * n + i] = ClampFeature((planes.planes[c][i] + 1.0) / 2.0);
      }
    }
    return {FeatureMapSet({3, h, w}, std::move(z)), w, h};
  }

  const uint32_t pw = PaddedSize(w);
  const uint32_t ph = PaddedSize(h);
  const uint32_t fw = pw / kDctSize;
  const uint32_t fh = ph / kDctSize;
  const std::vector<CoefficientChannel> layout = ChannelLayout(config);
  const MapShape shape{static_cast<uint32_t>(layout.size()), fh, fw};
  std::vector<float> z(shape.size());
  const auto& zigzag = ZigzagOrder();

  for (int p = 0; p < 3; ++p) {
    const std::vector<double>& plane = planes.planes[p];
    for (uint32_t by = 0; by < fh; ++by) {
      for (uint32_t bx = 0; bx < fw; ++bx) {
        Block block;
        for (int y = 0; y < kDctSize; ++y) {
          const uint32_t sy = std::min(by * kDctSize + y, h - 1);
          for (int x = 0; x < kDctSize; ++x) {
            const uint32_t sx = std::min(bx * kDctSize + x, w - 1);
            block[y * kDctSize + x] = plane[static_cast<size_t>(sy) * w + sx];
          }
        }
        const Block coeffs = ForwardDct(block);
        for (size_t c = 0; c < layout.size(); ++c) {
          const CoefficientChannel& ch = layout[c];
          if (ch.plane != p) continue;
          z[shape.index(static_cast<uint32_t>(c), by, bx)] = ClampFeature(
              CoefficientToFeature(coeffs[zigzag[ch.coeff]], ch.sign));
        }
      }
    }
  }
  return {FeatureMapSet(shape, std::move(z)), pw, ph};
}

ImageBuffer Synthesize(const FeatureMapSet& features,
                       const TransformConfig& config, uint32_t width,
                       uint32_t height) {
  CheckTransformConfig(config);
  const MapShape& shape = features.shape();
  if (width == 0 || height == 0) {
    throw InvalidArgument("cannot synthesize an empty image");
  }

  if (config.id == TransformId::kIdentity) {
    if (!(shape == MapShape{3, height, width})) {
      throw InvalidArgument("identity features of shape " + ToString(shape) +
                            " do not match a " + std::to_string(width) + "x" +
                            std::to_string(height) + " image");
    }
    PlaneSet planes{width, height, {}};
    const size_t n = shape.plane_size();
    for (int c = 0; c < 3; ++c) {
      planes.planes[c].resize(n);
      for (size_t i = 0; i < n; ++i) {
        planes.planes[c][i] = 2.0 * features.values()[c * n + i] - 1.0;
      }
    }
    return Denormalize(planes);
  }

  const uint32_t pw = PaddedSize(width);
  const uint32_t ph = PaddedSize(height);
  const std::vector<CoefficientChannel> layout = ChannelLayout(config);
  const MapShape expected{static_cast<uint32_t>(layout.size()), ph / kDctSize,
                          pw / kDctSize};
  if (!(shape == expected)) {
    throw InvalidArgument("block-cosine features of shape " + ToString(shape) +
                          " do not match expected " + ToString(expected));
  }

  PlaneSet planes{width, height, {}};
  const auto& zigzag = ZigzagOrder();
  for (int p = 0; p < 3; ++p) {
    std::vector<double>& plane = planes.planes[p];
    plane.assign(static_cast<size_t>(width) * height, 0.0);
    for (uint32_t by = 0; by < shape.height; ++by) {
      for (uint32_t bx = 0; bx < shape.width; ++bx) {
        Block coeffs{};
        for (size_t c = 0; c < layout.size(); ++c) {
          const CoefficientChannel& ch = layout[c];
          if (ch.plane != p) continue;
          coeffs[zigzag[ch.coeff]] += FeatureToCoefficient(
              features.at(static_cast<uint32_t>(c), by, bx), ch.sign);
        }
        const Block block = InverseDct(coeffs);
        for (int y = 0; y < kDctSize; ++y) {
          const uint32_t sy = by * kDctSize + y;
          if (sy >= height) break;
          for (int x = 0; x < kDctSize; ++x) {
            const uint32_t sx = bx * kDctSize + x;
            if (sx >= width) break;
            plane[static_cast<size_t>(sy) * width + sx] = block[y * kDctSize + x];
          }
        }
      }
    }
  }
  return Denormalize(planes);
}

}  // namespace nfc
