#include "nfc/metrics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace nfc {

namespace {

void CheckSameShape(const ImageBuffer& a, const ImageBuffer& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw InvalidArgument(
        "image sizes differ: " + std::to_string(a.width()) + "x" +
        std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
        std::to_string(b.height()));
  }
}

}  // namespace

ErrorTotals SquaredError(const ImageBuffer& a, const ImageBuffer& b) {
  CheckSameShape(a, b);
  ErrorTotals t;
  const auto& pa = a.pixels();
  const auto& pb = b.pixels();
  // Integer accumulation is exact; squared 8-bit errors fit easily in 64 bits.
  uint64_t sse = 0;
  for (size_t i = 0; i < pa.size(); ++i) {
    const int64_t diff = int64_t{pa[i]} - int64_t{pb[i]};
    sse += static_cast<uint64_t>(diff * diff);
  }
  t.sum_squared_error = static_cast<double>(sse);
  t.sample_count = pa.size();
  return t;
}

double Mse(const ImageBuffer& a, const ImageBuffer& b) {
  const ErrorTotals t = SquaredError(a, b);
  if (t.sample_count == 0) throw InvalidArgument("cannot compare empty images");
  return t.sum_squared_error / static_cast<double>(t.sample_count);
}

double PsnrFromMse(double mse) {
  if (mse <= 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double PooledPsnr(std::span<const ErrorTotals> per_image) {
  if (per_image.empty()) throw InvalidArgument("no images to pool");
  double sse = 0.0;
  uint64_t count = 0;
  for (const ErrorTotals& t : per_image) {
    if (t.sample_count == 0) throw InvalidArgument("image with zero samples");
    sse += t.sum_squared_error;
    count += t.sample_count;
  }
  return PsnrFromMse(sse / static_cast<double>(count));
}

namespace {

constexpr std::array<double, kMsSsimScales> kScaleWeights = {
    0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
constexpr double kGaussianSigma = 1.5;
constexpr double kC1 = (0.01 * 255) * (0.01 * 255);
constexpr double kC2 = (0.03 * 255) * (0.03 * 255);

struct Plane {
  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<double> v;
  double at(uint32_t x, uint32_t y) const { return v[size_t{y} * width + x]; }
};

const std::array<double, kSsimWindow>& GaussianWindow() {
  static const std::array<double, kSsimWindow> window = [] {
    std::array<double, kSsimWindow> w{};
    double sum = 0.0;
    for (int i = 0; i < kSsimWindow; ++i) {
      const double t = i - kSsimWindow / 2;
      w[i] = std::exp(-t * t / (2.0 * kGaussianSigma * kGaussianSigma));
      sum += w[i];
    }
    for (double& x : w) x /= sum;
    return w;
  }();
  return window;
}

// Separable Gaussian filter, valid region only.
Plane Filter(const Plane& in) {
  const auto& g = GaussianWindow();
  const uint32_t ow = in.width - kSsimWindow + 1;
  const uint32_t oh = in.height - kSsimWindow + 1;
  Plane rows{ow, in.height, std::vector<double>(size_t{ow} * in.height)};
  for (uint32_t y = 0; y < in.height; ++y) {
    for (uint32_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kSsimWindow; ++k) acc += g[k] * in.at(x + k, y);
      rows.v[size_t{y} * ow + x] = acc;
    }
  }
  Plane out{ow, oh, std::vector<double>(size_t{ow} * oh)};
  for (uint32_t y = 0; y < oh; ++y) {
    for (uint32_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kSsimWindow; ++k) acc += g[k] * rows.at(x, y + k);
      out.v[size_t{y} * ow + x] = acc;
    }
  }
  return out;
}

Plane Product(const Plane& a, const Plane& b) {
  Plane out{a.width, a.height, std::vector<double>(a.v.size())};
  for (size_t i = 0; i < a.v.size(); ++i) out.v[i] = a.v[i] * b.v[i];
  return out;
}

Plane Downsample(const Plane& in) {
  const uint32_t ow = in.width / 2;
  const uint32_t oh = in.height / 2;
  Plane out{ow, oh, std::vector<double>(size_t{ow} * oh)};
  for (uint32_t y = 0; y < oh; ++y) {
    for (uint32_t x = 0; x < ow; ++x) {
      out.v[size_t{y} * ow + x] =
          0.25 * (in.at(2 * x, 2 * y) + in.at(2 * x + 1, 2 * y) +
                  in.at(2 * x, 2 * y + 1) + in.at(2 * x + 1, 2 * y + 1));
    }
  }
  return out;
}

struct SsimMeans {
  double contrast_structure = 0.0;
  double ssim = 0.0;
};

SsimMeans SsimAtScale(const Plane& x, const Plane& y) {
  const Plane mu_x = Filter(x);
  const Plane mu_y = Filter(y);
  const Plane xx = Filter(Product(x, x));
  const Plane yy = Filter(Product(y, y));
  const Plane xy = Filter(Product(x, y));
  double cs_sum = 0.0, ssim_sum = 0.0;
  for (size_t i = 0; i < mu_x.v.size(); ++i) {
    const double mx = mu_x.v[i], my = mu_y.v[i];
    const double var_x = xx.v[i] - mx * mx;
    const double var_y = yy.v[i] - my * my;
    const double cov = xy.v[i] - mx * my;
    const double cs = (2.0 * cov + kC2) / (var_x + var_y + kC2);
    const double l = (2.0 * mx * my + kC1) / (mx * mx + my * my + kC1);
    cs_sum += cs;
    ssim_sum += l * cs;
  }
  const double n = static_cast<double>(mu_x.v.size());
  return {cs_sum / n, ssim_sum / n};
}

double MsSsimPlane(Plane x, Plane y, int scales) {
  double weight_sum = 0.0;
  for (int j = 0; j < scales; ++j) weight_sum += kScaleWeights[j];
  double result = 1.0;
  for (int j = 0; j < scales; ++j) {
    const SsimMeans m = SsimAtScale(x, y);
    const double w = kScaleWeights[j] / weight_sum;
    // Negative means (anti-correlated content) are clamped to zero so the
    // fractional power stays real.
    const double term = j + 1 == scales ? m.ssim : m.contrast_structure;
    result *= std::pow(std::max(term, 0.0), w);
    if (j + 1 < scales) {
      x = Downsample(x);
      y = Downsample(y);
    }
  }
  return result;
}

Plane ChannelOf(const ImageBuffer& img, int c) {
  Plane p{img.width(), img.height(), std::vector<double>(
                                         size_t{img.width()} * img.height())};
  const auto& px = img.pixels();
  for (size_t i = 0; i < p.v.size(); ++i) p.v[i] = px[i * 3 + c];
  return p;
}

}  // namespace

int MsSsimScaleCount(uint32_t width, uint32_t height) {
  uint32_t side = std::min(width, height);
  int scales = 0;
  while (scales < kMsSsimScales && side >= static_cast<uint32_t>(kSsimWindow)) {
    ++scales;
    side /= 2;
  }
  return scales;
}

double MsSsim(const ImageBuffer& a, const ImageBuffer& b) {
  CheckSameShape(a, b);
  const int scales = MsSsimScaleCount(a.width(), a.height());
  if (scales == 0) {
    throw InvalidArgument("image too small for MS-SSIM (needs 11x11)");
  }
  double sum = 0.0;
  for (int c = 0; c < 3; ++c) {
    sum += MsSsimPlane(ChannelOf(a, c), ChannelOf(b, c), scales);
  }
  return sum / 3.0;
}

void CheckLossParams(const LossParams& params) {
  if (!(params.sigma1_sq > 0.0) || !(params.sigma2_sq > 0.0)) {
    throw InvalidArgument("loss variances must be positive");
  }
  if (!(params.lambda >= 0.0) || std::isinf(params.lambda)) {
    throw InvalidArgument("loss lambda must be finite and non-negative");
  }
}

double RateDistortionLoss(double mse, double ms_ssim, double importance_sum,
                          const LossParams& params) {
  CheckLossParams(params);
  const double ssim_term =
      params.ssim_term == SsimTerm::kLiteral ? ms_ssim : 1.0 - ms_ssim;
  const double distortion = mse / (2.0 * params.sigma1_sq) +
                            ssim_term / (2.0 * params.sigma2_sq) +
                            std::log(params.sigma1_sq) +
                            std::log(params.sigma2_sq);
  return params.lambda * importance_sum + distortion;
}

}  // namespace nfc
