#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "nfc/bitstream.h"
#include "nfc/entropy.h"
#include "nfc/importance.h"
#include "nfc/quantizer.h"
#include "nfc/transform.h"
#include "synthetic_images.h"

namespace nfc {
namespace {

using testing::Uniform;

// Average ranks, ties sharing the mean rank.
std::vector<double> Ranks(const std::vector<double>& v) {
  std::vector<size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    for (size_t k = i; k <= j; ++k) rank[order[k]] = (i + j) / 2.0;
    i = j + 1;
  }
  return rank;
}

double Spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = Ranks(a), rb = Ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

FeatureMapSet RandomFeatures(MapShape shape, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<float> v(shape.size());
  for (float& x : v) x = static_cast<float>(Uniform(rng) * kMaxFeature);
  return FeatureMapSet(shape, std::move(v));
}

TEST_CASE("apply mask examples") {
  CHECK(ApplyMask(13, 2, 4) == 12);
  CHECK(ApplyMask(13, 4, 4) == 13);
  CHECK(ApplyMask(7, 1, 4) == 0);
  CHECK(ApplyMask(15, 3, 4) == 14);
  CHECK(ApplyMask(255, 1, 8) == 128);
}

TEST_CASE("apply mask properties") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20000; ++i) {
    const int d = 1 + static_cast<int>(rng() % 8);
    const int m = 1 + static_cast<int>(rng() % d);
    const uint8_t q = static_cast<uint8_t>(rng() % (1u << d));
    const uint8_t z = ApplyMask(q, m, d);
    CHECK(ApplyMask(z, m, d) == z);
    CHECK(z % (1 << (d - m)) == 0);
    CHECK(q - z < (1 << (d - m)));
    CHECK(z <= q);
    if (m < d) CHECK(q - ApplyMask(q, m + 1, d) <= q - z);
  }
}

TEST_CASE("mask set") {
  const MapShape shape{2, 3, 5};
  std::mt19937_64 rng(2);
  std::vector<uint8_t> qv(shape.size()), mv(shape.size());
  for (auto& v : qv) v = static_cast<uint8_t>(rng() % 16);
  for (auto& v : mv) v = static_cast<uint8_t>(1 + rng() % 4);
  const QuantizedMapSet q(shape, qv);
  CHECK(MaskSet(q, FullImportance(shape, 4), 4).values() == qv);

  const QuantizedMapSet top(shape, std::vector<uint8_t>(shape.size(), 15));
  const MaskedMapSet kept_top =
      MaskSet(top, ImportanceMapSet(shape, std::vector<uint8_t>(shape.size(), 1)), 4);
  for (uint8_t v : kept_top.values()) CHECK(v == 8);

  const ImportanceMapSet imp(shape, mv);
  const MaskedMapSet masked = MaskSet(q, imp, 4);
  CHECK_FALSE(Validate(masked, imp, CodecParams{4, 4, 2}).has_value());
  CHECK_THROWS_AS(MaskSet(q, FullImportance({2, 5, 3}, 4), 4), InvalidArgument);
}

TEST_CASE("rate estimate") {
  CHECK(RateEstimate(ImportanceMapSet({16, 8, 8}, std::vector<uint8_t>(1024, 1))) ==
        1024);
  CHECK(RateEstimate(FullImportance({16, 8, 8}, 4)) == 4096);
  std::mt19937_64 rng(3);
  std::vector<uint8_t> m(3 * 7 * 9);
  for (auto& v : m) v = static_cast<uint8_t>(1 + rng() % 8);
  long long sum = 0;
  for (uint8_t v : m) sum += v;
  const ImportanceMapSet imp({3, 7, 9}, m);
  CHECK(RateEstimate(imp) == sum);
  // Strictly increasing under a single increment.
  m[17] = m[17] == 8 ? 7 : m[17];
  const double before = RateEstimate(ImportanceMapSet({3, 7, 9}, m));
  ++m[17];
  CHECK(RateEstimate(ImportanceMapSet({3, 7, 9}, m)) == before + 1);
}

TEST_CASE("heuristic importance edge cases") {
  const FeatureMapSet constant({2, 6, 6}, std::vector<float>(72, 0.37f));
  for (double scale : {0.0, 1.0, 1e6}) {
    const ImportanceMapSet imp = HeuristicImportance(constant, scale, 4);
    for (uint8_t m : imp.values()) CHECK(m == 1);
  }
  const FeatureMapSet noisy = RandomFeatures({2, 6, 6}, 4);
  const ImportanceMapSet zero = HeuristicImportance(noisy, 0.0, 4);
  for (uint8_t m : zero.values()) CHECK(m == 1);
  const ImportanceMapSet large = HeuristicImportance(noisy, 1e3, 4);
  for (uint8_t m : large.values()) CHECK(m == 4);
  const double s = SaturatingScale(noisy, 4);
  CHECK(s > 0.0);
  const ImportanceMapSet saturated = HeuristicImportance(noisy, s, 4);
  for (uint8_t m : saturated.values()) CHECK(m == 4);
  CHECK_THROWS_AS(HeuristicImportance(noisy, -1.0, 4), InvalidArgument);
}

TEST_CASE("heuristic importance matches a direct evaluation") {
  const MapShape shape{1, 5, 4};
  const FeatureMapSet f = RandomFeatures(shape, 5);
  const int d = 4;
  const double scale = 0.8;
  const ImportanceMapSet imp = HeuristicImportance(f, scale, d);
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 4; ++x) {
      std::vector<double> w;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          w.push_back(f.at(0, std::clamp(y + dy, 0, 4), std::clamp(x + dx, 0, 3)));
        }
      }
      const double mean = std::accumulate(w.begin(), w.end(), 0.0) / 9;
      double var = 0;
      for (double v : w) var += (v - mean) * (v - mean);
      const double a = std::sqrt(var / 9);
      const double m =
          std::clamp(std::round(scale * std::log2(1 + a * 16)), 1.0, 4.0);
      CHECK(imp.at(0, y, x) == m);
    }
  }
}

struct ImageFeatures {
  FeatureMapSet features;
  QuantizedMapSet q;
  CodecParams params;
  uint64_t pixels;
};

ImageFeatures FeaturesOf(const ImageBuffer& img) {
  const TransformConfig config;
  Analysis a = Analyze(img, config);
  QuantizedMapSet q = QuantizeSet(a.features, 4);
  const CodecParams params{4, 4, config.channels(), config.id};
  return {std::move(a.features), std::move(q), params,
          uint64_t{img.width()} * img.height()};
}

TEST_CASE("rate control: absurdly high target keeps every bit") {
  const auto f = FeaturesOf(testing::NaturalImage(64, 48, 1));
  const RateControlResult r =
      RateControl(f.features, f.q, {10.0, 0.005, 20}, f.params, f.pixels);
  CHECK_FALSE(r.unreachable);
  CHECK(r.importance == FullImportance(f.q.shape(), 4));
  CHECK(r.masked.values() == f.q.values());
  CHECK(r.bpp <= 10.0);
}

TEST_CASE("rate control: target below the floor") {
  const auto f = FeaturesOf(testing::NaturalImage(64, 48, 2));
  const RateControlResult r =
      RateControl(f.features, f.q, {1e-4, 0.005, 20}, f.params, f.pixels);
  CHECK(r.unreachable);
  for (uint8_t m : r.importance.values()) CHECK(m == 1);
  const MaskedMapSet floor = MaskSet(f.q, r.importance, 4);
  CHECK(r.masked == floor);
  CHECK(r.bpp == BitsPerPixel(kContainerHeaderSize + EncodeMaps(floor, f.params).size(),
                              f.pixels));
}

TEST_CASE("rate control: 0.15 bpp lands within tolerance") {
  // Seed chosen so that keeping every bit overshoots the target.
  const auto f = FeaturesOf(testing::NaturalImage(256, 256, 21));
  const RateControlConfig cfg;
  const RateControlResult full =
      RateControl(f.features, f.q, {100.0, 0.005, 20}, f.params, f.pixels);
  REQUIRE(full.bpp > cfg.target_bpp);
  const RateControlResult r = RateControl(f.features, f.q, cfg, f.params, f.pixels);
  CHECK_FALSE(r.unreachable);
  CHECK(r.evaluations > 0);
  CHECK(r.evaluations <= cfg.max_iterations);
  CHECK(r.bpp <= cfg.target_bpp);
  CHECK(r.bpp >= cfg.target_bpp - cfg.tolerance);
  CHECK(r.importance == HeuristicImportance(f.features, r.scale, 4));
  CHECK(r.payload == EncodeMaps(r.masked, f.params));
}

TEST_CASE("coded bits rise with the heuristic scale") {
  const auto f = FeaturesOf(testing::NaturalImage(256, 256, 21));
  std::vector<double> scales, bits;
  for (int i = 0; i < 20; ++i) {
    // Past about 8 nearly every sample is saturated and the size flattens out.
    const double s = 0.2 * std::pow(40.0, i / 19.0);
    const MaskedMapSet masked =
        MaskSet(f.q, HeuristicImportance(f.features, s, 4), 4);
    scales.push_back(s);
    bits.push_back(8.0 * EncodeMaps(masked, f.params).size());
  }
  CHECK(Spearman(scales, bits) >= 0.9);
}

TEST_CASE("rate control config validation") {
  CHECK_THROWS_AS(CheckRateControlConfig({0.0, 0.005, 20}), InvalidArgument);
  CHECK_THROWS_AS(CheckRateControlConfig({0.15, 0.0, 20}), InvalidArgument);
  CHECK_THROWS_AS(CheckRateControlConfig({0.15, 0.005, -1}), InvalidArgument);
}

}  // namespace
}  // namespace nfc
