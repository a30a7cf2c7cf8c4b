// Distortion metrics and the rate-distortion loss.

#ifndef NFC_METRICS_H_
#define NFC_METRICS_H_

#include <cstdint>
#include <span>

#include "nfc/model.h"

namespace nfc {

// Sum of squared sample differences and the number of samples compared.
struct ErrorTotals {
  double sum_squared_error = 0.0;
  uint64_t sample_count = 0;
};

// Throws InvalidArgument unless both images have the same dimensions.
ErrorTotals SquaredError(const ImageBuffer& a, const ImageBuffer& b);

// Mean over all H x W x 3 samples of the squared difference.
double Mse(const ImageBuffer& a, const ImageBuffer& b);

// PSNR (peak 255) of the corpus-wide MSE: total squared error over total
// samples. Returns +infinity when the pooled MSE is zero. Throws
// InvalidArgument on an empty list or a zero sample count.
double PooledPsnr(std::span<const ErrorTotals> per_image);

// PSNR (peak 255) of a single MSE; +infinity at zero.
double PsnrFromMse(double mse);

inline constexpr int kMsSsimScales = 5;
inline constexpr int kSsimWindow = 11;

// Multi-scale SSIM averaged over R, G and B. Five scales need
// min(W, H) >= 176; smaller images use the scales that fit an 11-sample
// window, with the weights renormalized. Throws InvalidArgument on a shape
// mismatch or when min(W, H) < 11.
double MsSsim(const ImageBuffer& a, const ImageBuffer& b);

// Number of scales MsSsim uses for an image of this size (0 if too small).
int MsSsimScaleCount(uint32_t width, uint32_t height);

enum class SsimTerm {
  kLiteral,    // MS-SSIM enters the loss as is
  kOneMinus,   // 1 - MS-SSIM enters the loss
};

struct LossParams {
  double lambda = 0.01;
  double sigma1_sq = 1.0;
  double sigma2_sq = 1.0;
  SsimTerm ssim_term = SsimTerm::kLiteral;
};

// Throws InvalidArgument unless both variances are positive and lambda is
// finite and non-negative.
void CheckLossParams(const LossParams& params);

// lambda * importance_sum + mse / (2 s1) + ssim / (2 s2) + ln s1 + ln s2,
// where s1, s2 are the variances and ssim is MS-SSIM or 1 - MS-SSIM.
double RateDistortionLoss(double mse, double ms_ssim, double importance_sum,
                          const LossParams& params);

}  // namespace nfc

#endif  // NFC_METRICS_H_
