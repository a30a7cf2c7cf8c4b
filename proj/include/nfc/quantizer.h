// Uniform scalar quantization of features in [0,1) to d-bit integers, its
// midpoint reconstruction, and the differentiable soft relaxation used when
// gradients have to flow through the quantizer.

#ifndef NFC_QUANTIZER_H_
#define NFC_QUANTIZER_H_

#include <cstdint>
#include <vector>

#include "nfc/model.h"

namespace nfc {

// floor(z * 2^d). Inputs >= 1 clamp to 2^d - 1 and inputs < 0 to 0, so
// floating drift at the open bound never aborts an encode.
uint8_t HardQuantize(double z, int bit_depth);

// Midpoint of the fine quantization cell: (q + 0.5) / 2^d.
double Dequantize(int q, int bit_depth);

// Soft assignment over the 2^d levels with weights exp(-|z*2^d - i|).
// The result is in level units, i.e. in [0, 2^d - 1].
double SoftQuantize(double z, int bit_depth);

// d SoftQuantize / dz. Where z*2^d hits a level exactly, the right-hand
// derivative is returned.
double SoftQuantizeGrad(double z, int bit_depth);

QuantizedMapSet QuantizeSet(const FeatureMapSet& features, int bit_depth);

// Reconstructs features from masked values; every output is a cell midpoint.
FeatureMapSet DequantizeSet(const MaskedMapSet& masked, int bit_depth);

}  // namespace nfc

#endif  // NFC_QUANTIZER_H_
