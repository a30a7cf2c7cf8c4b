#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "nfc/quantizer.h"
#include "nfc/transform.h"
#include "synthetic_images.h"

namespace nfc {
namespace {

int MaxAbsDiff(const ImageBuffer& a, const ImageBuffer& b) {
  int worst = 0;
  for (size_t i = 0; i < a.pixels().size(); ++i) {
    worst = std::max(worst, std::abs(int{a.pixels()[i]} - int{b.pixels()[i]}));
  }
  return worst;
}

ImageBuffer Gray(uint32_t w, uint32_t h, uint8_t v) { return ImageBuffer(w, h, v); }

TEST_CASE("normalize examples") {
  const ImageBuffer img(3, 1, std::vector<uint8_t>{0, 255, 128, 0, 0, 0, 0, 0, 0});
  const PlaneSet p = Normalize(img);
  CHECK(p.planes[0][0] == -1.0);
  CHECK(p.planes[1][0] == 1.0);
  CHECK(p.planes[2][0] == doctest::Approx(128 / 127.5 - 1).epsilon(1e-15));
  CHECK(p.planes[2][0] == doctest::Approx(0.00392).epsilon(1e-3));
}

TEST_CASE("denormalize examples") {
  PlaneSet p{3, 1, {}};
  p.planes[0] = {-1.2, 0.0, 1.0};
  p.planes[1] = {5.0, -1.0, 0.9999};
  p.planes[2] = {0.0, 0.0, 0.0};
  const ImageBuffer img = Denormalize(p);
  CHECK(img.at(0, 0, 0) == 0);
  CHECK(img.at(1, 0, 0) == 128);
  CHECK(img.at(2, 0, 0) == 255);
  CHECK(img.at(0, 0, 1) == 255);
  CHECK(img.at(1, 0, 1) == 0);
  CHECK(img.at(2, 0, 1) == 255);
}

TEST_CASE("denormalize inverts normalize for every level") {
  std::vector<uint8_t> px(256 * 3);
  for (int v = 0; v < 256; ++v) px[v * 3] = px[v * 3 + 1] = px[v * 3 + 2] = v;
  const ImageBuffer img(256, 1, px);
  CHECK(Denormalize(Normalize(img)) == img);
  CHECK(Denormalize(Normalize(testing::NoiseImage(37, 29, 3))) ==
        testing::NoiseImage(37, 29, 3));
}

TEST_CASE("zigzag order starts like the JPEG scan") {
  const auto& zz = ZigzagOrder();
  const int expected[] = {0, 1, 8, 16, 9, 2, 3, 10, 17, 24, 32, 25, 18, 11, 4, 5};
  for (int i = 0; i < 16; ++i) CHECK(zz[i] == expected[i]);
  CHECK(zz[63] == 63);
  std::vector<bool> seen(64);
  for (int r : zz) seen[r] = true;
  CHECK(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
}

TEST_CASE("transform config") {
  CHECK(TransformConfig{TransformId::kBlockCosine, 6}.channels() == 33);
  CHECK(TransformConfig{TransformId::kBlockCosine, 1}.channels() == 3);
  CHECK(TransformConfig{TransformId::kBlockCosineOffset, 6}.channels() == 18);
  CHECK(TransformConfig{TransformId::kIdentity, 6}.channels() == 3);
  CHECK_THROWS_AS(CheckTransformConfig({TransformId::kBlockCosine, 0}),
                  InvalidArgument);
  CHECK_THROWS_AS(CheckTransformConfig({TransformId::kBlockCosine, 65}),
                  InvalidArgument);
  CHECK_THROWS_AS(CheckTransformConfig({TransformId::kExternal, 6}),
                  InvalidArgument);
  for (auto id : {TransformId::kBlockCosine, TransformId::kBlockCosineOffset}) {
    for (int k = 1; k <= 64; ++k) {
      const TransformConfig config{id, k};
      CHECK(static_cast<int>(ChannelLayout(config).size()) == config.channels());
    }
  }
}

TEST_CASE("identity analysis clamps at the open bound") {
  const Analysis a = Analyze(Gray(2, 2, 255), {TransformId::kIdentity, 0});
  CHECK(a.features.shape() == MapShape{3, 2, 2});
  for (float v : a.features.values()) CHECK(v == kMaxFeature);
  const Analysis b = Analyze(Gray(2, 2, 0), {TransformId::kIdentity, 0});
  for (float v : b.features.values()) CHECK(v == 0.0f);
}

TEST_CASE("identity round trip is exact") {
  const TransformConfig id{TransformId::kIdentity, 0};
  for (uint64_t seed = 0; seed < 4; ++seed) {
    const ImageBuffer img = testing::NoiseImage(23 + seed, 17, seed);
    CHECK(Synthesize(Analyze(img, id).features, id, img.width(), img.height()) ==
          img);
  }
}

TEST_CASE("all-zero identity features give a black image") {
  const FeatureMapSet zero({3, 5, 4}, std::vector<float>(60, 0.0f));
  CHECK(Synthesize(zero, {TransformId::kIdentity, 0}, 4, 5) == Gray(4, 5, 0));
}

TEST_CASE("constant gray: offset layout puts AC at mid-range") {
  const Analysis a = Analyze(Gray(16, 8, 77), {TransformId::kBlockCosineOffset, 6});
  const MapShape& s = a.features.shape();
  CHECK(s == MapShape{18, 1, 2});
  for (uint32_t c = 3; c < s.channels; ++c) {
    for (uint32_t x = 0; x < 2; ++x) {
      CHECK(a.features.at(c, 0, x) == doctest::Approx(0.5).epsilon(1e-9));
      CHECK(HardQuantize(a.features.at(c, 0, x), 4) == 8);
    }
  }
  // DC of a constant block is 8 * normalized value.
  CHECK(a.features.at(0, 0, 0) ==
        doctest::Approx((8 * (77 / 127.5 - 1) + 8) / 16).epsilon(1e-6));
}

TEST_CASE("constant gray: sign-split layout puts AC at zero") {
  const Analysis a = Analyze(Gray(8, 8, 200), {TransformId::kBlockCosine, 6});
  CHECK(a.features.shape() == MapShape{33, 1, 1});
  for (uint32_t c = 3; c < 33; ++c) {
    CHECK(a.features.at(c, 0, 0) < 1e-9);
    CHECK(HardQuantize(a.features.at(c, 0, 0), 8) == 0);
  }
}

TEST_CASE("sign split routes each AC sign to its own channel") {
  // Left half bright, right half dark: the first horizontal AC term is
  // positive in plane 0 and negative in plane 1.
  std::vector<uint8_t> px(8 * 8 * 3);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      px[(y * 8 + x) * 3 + 0] = x < 4 ? 255 : 0;
      px[(y * 8 + x) * 3 + 1] = x < 4 ? 0 : 255;
    }
  }
  const TransformConfig config{TransformId::kBlockCosine, 2};
  const Analysis a = Analyze(ImageBuffer(8, 8, px), config);
  const auto layout = ChannelLayout(config);
  REQUIRE(layout.size() == 9);
  for (size_t c = 3; c < layout.size(); ++c) {
    const float v = a.features.at(c, 0, 0);
    const bool expect_nonzero = (layout[c].plane == 0 && layout[c].sign > 0) ||
                                (layout[c].plane == 1 && layout[c].sign < 0);
    CHECK((v > 0.1f) == expect_nonzero);
    if (!expect_nonzero) CHECK(v < 1e-9f);
  }
}

TEST_CASE("K=64 round trip within one gray level") {
  for (auto id : {TransformId::kBlockCosine, TransformId::kBlockCosineOffset}) {
    const TransformConfig config{id, 64};
    for (uint64_t seed = 0; seed < 3; ++seed) {
      const ImageBuffer img = seed == 0 ? testing::NoiseImage(35, 21, seed)
                                        : testing::NaturalImage(64, 40, seed);
      const Analysis a = Analyze(img, config);
      CHECK(a.padded_width == PaddedSize(img.width()));
      const ImageBuffer back =
          Synthesize(a.features, config, img.width(), img.height());
      CHECK(MaxAbsDiff(img, back) <= 1);
    }
  }
}

TEST_CASE("DC only reconstructs the 8x8 box average") {
  const ImageBuffer img = testing::NaturalImage(45, 30, 9);
  const TransformConfig config{TransformId::kBlockCosine, 1};
  const ImageBuffer dc =
      Synthesize(Analyze(img, config).features, config, img.width(), img.height());
  int exact = 0, total = 0;
  for (uint32_t by = 0; by < 4; ++by) {
    for (uint32_t bx = 0; bx < 6; ++bx) {
      for (int c = 0; c < 3; ++c) {
        int sum = 0;  // over the edge-replicated block
        for (uint32_t y = 0; y < 8; ++y) {
          for (uint32_t x = 0; x < 8; ++x) {
            sum += img.at(std::min(bx * 8 + x, img.width() - 1),
                          std::min(by * 8 + y, img.height() - 1), c);
          }
        }
        const double mean = sum / 64.0;
        for (uint32_t y = by * 8; y < std::min(by * 8 + 8, img.height()); ++y) {
          for (uint32_t x = bx * 8; x < std::min(bx * 8 + 8, img.width()); ++x) {
            const int got = dc.at(x, y, c);
            CHECK(std::fabs(got - mean) <= 0.5 + 1e-6);
            exact += got == static_cast<int>(std::round(mean));
            ++total;
          }
        }
      }
    }
  }
  // Only ties at .5 may round either way.
  CHECK(exact >= total * 9 / 10);
}

TEST_CASE("synthesize rejects inconsistent shapes") {
  const FeatureMapSet f({33, 2, 2}, std::vector<float>(132, 0.5f));
  CHECK_NOTHROW(Synthesize(f, {TransformId::kBlockCosine, 6}, 16, 9));
  CHECK_THROWS_AS(Synthesize(f, {TransformId::kBlockCosine, 6}, 17, 9),
                  InvalidArgument);
  CHECK_THROWS_AS(Synthesize(f, {TransformId::kBlockCosine, 5}, 16, 16),
                  InvalidArgument);
  CHECK_THROWS_AS(Synthesize(f, {TransformId::kIdentity, 0}, 2, 2),
                  InvalidArgument);
  CHECK_THROWS_AS(Analyze(ImageBuffer(), {}), InvalidArgument);
}

}  // namespace
}  // namespace nfc
