#include "nfc/quantizer.h"

#include <algorithm>
#include <cmath>

namespace nfc {

uint8_t HardQuantize(double z, int bit_depth) {
  const int levels = 1 << bit_depth;
  if (!(z > 0.0)) return 0;  // also maps NaN to 0
  const double scaled = std::floor(z * levels);
  return static_cast<uint8_t>(std::min<double>(scaled, levels - 1));
}

double Dequantize(int q, int bit_depth) {
  return (q + 0.5) / static_cast<double>(1 << bit_depth);
}

namespace {

// Weights exp(-|t - i|) shifted by the largest exponent, which belongs to
// the level nearest to t.
void SoftWeights(double t, int levels, std::vector<double>* weights) {
  weights->resize(levels);
  double peak = -INFINITY;
  for (int i = 0; i < levels; ++i) peak = std::max(peak, -std::abs(t - i));
  for (int i = 0; i < levels; ++i) {
    (*weights)[i] = std::exp(-std::abs(t - i) - peak);
  }
}

}  // namespace

double SoftQuantize(double z, int bit_depth) {
  const int levels = 1 << bit_depth;
  std::vector<double> w;
  SoftWeights(z * levels, levels, &w);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < levels; ++i) {
    num += i * w[i];
    den += w[i];
  }
  return num / den;
}

double SoftQuantizeGrad(double z, int bit_depth) {
  const int levels = 1 << bit_depth;
  const double t = z * levels;
  std::vector<double> w;
  SoftWeights(t, levels, &w);
  // With p_i the normalized weights and s_i = sign(t - i), d/dt of the
  // soft value is -Cov_p(s, i).
  double den = 0.0, mean_i = 0.0, mean_s = 0.0, mean_si = 0.0;
  for (int i = 0; i < levels; ++i) {
    const double s = t >= i ? 1.0 : -1.0;
    den += w[i];
    mean_i += w[i] * i;
    mean_s += w[i] * s;
    mean_si += w[i] * s * i;
  }
  mean_i /= den;
  mean_s /= den;
  mean_si /= den;
  return -(mean_si - mean_s * mean_i) * levels;
}

QuantizedMapSet QuantizeSet(const FeatureMapSet& features, int bit_depth) {
  std::vector<uint8_t> q(features.values().size());
  std::transform(features.values().begin(), features.values().end(), q.begin(),
                 [bit_depth](float z) { return HardQuantize(z, bit_depth); });
  return QuantizedMapSet(features.shape(), std::move(q));
}

FeatureMapSet DequantizeSet(const MaskedMapSet& masked, int bit_depth) {
  std::vector<float> z(masked.values().size());
  std::transform(masked.values().begin(), masked.values().end(), z.begin(),
                 [bit_depth](uint8_t v) {
                   return static_cast<float>(Dequantize(v, bit_depth));
                 });
  return FeatureMapSet(masked.shape(), std::move(z));
}

}  // namespace nfc
