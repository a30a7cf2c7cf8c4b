#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <string>

#include "nfc/io.h"
#include "synthetic_images.h"

namespace nfc {
namespace {

std::vector<uint8_t> Bytes(const std::string& s) {
  return std::vector<uint8_t>(s.begin(), s.end());
}

ErrorCode ErrorOf(auto&& fn) {
  try {
    fn();
  } catch (const CodecError& e) {
    return e.code();
  }
  FAIL("no error");
  return ErrorCode::kIo;
}

TEST_CASE("ppm round trip") {
  const ImageBuffer img = testing::NoiseImage(13, 7, 1);
  const auto bytes = SerializePpm(img);
  CHECK(std::string(bytes.begin(), bytes.begin() + 11) == "P6\n13 7\n255");
  CHECK(ParsePpm(bytes) == img);
}

TEST_CASE("ppm header comments and whitespace") {
  auto bytes = Bytes("P6 # made by hand\n2\t1\n# maxval next\n255\n");
  for (int i = 0; i < 6; ++i) bytes.push_back(static_cast<uint8_t>(10 * i));
  const ImageBuffer img = ParsePpm(bytes);
  CHECK(img.width() == 2);
  CHECK(img.height() == 1);
  CHECK(img.at(1, 0, 2) == 50);
}

TEST_CASE("ppm raster may begin with a whitespace-valued byte") {
  auto bytes = Bytes("P6\n1 1\n255\n");
  bytes.insert(bytes.end(), {'\n', ' ', '#'});
  const ImageBuffer img = ParsePpm(bytes);
  CHECK(img.at(0, 0, 0) == '\n');
  CHECK(img.at(0, 0, 2) == '#');
}

TEST_CASE("malformed ppm") {
  auto raster = [](std::string header, size_t n) {
    auto b = Bytes(header);
    b.resize(b.size() + n, 7);
    return b;
  };
  CHECK(ErrorOf([&] { ParsePpm(raster("P3\n1 1\n255\n", 3)); }) == ErrorCode::kMalformed);
  CHECK(ErrorOf([&] { ParsePpm(raster("P6\n1 1\n65535\n", 6)); }) ==
        ErrorCode::kMalformed);
  CHECK(ErrorOf([&] { ParsePpm(raster("P6\n2 2\n255\n", 11)); }) ==
        ErrorCode::kMalformed);
  CHECK(ErrorOf([&] { ParsePpm(raster("P6\n0 2\n255\n", 0)); }) ==
        ErrorCode::kMalformed);
  CHECK(ErrorOf([&] { ParsePpm(raster("P6\n-1 2\n255\n", 6)); }) ==
        ErrorCode::kMalformed);
  CHECK(ErrorOf([&] { ParsePpm(Bytes("P6\n1 1")); }) == ErrorCode::kMalformed);
  CHECK(ErrorOf([&] { ParsePpm(Bytes("P6\n1 1\n255")); }) == ErrorCode::kMalformed);
  CHECK(ErrorOf([&] { ParsePpm(Bytes("")); }) == ErrorCode::kMalformed);
}

TEST_CASE("fmap round trip and layout") {
  const MapShape shape{2, 1, 3};
  const std::vector<float> values = {0.0f, 0.25f, 0.5f, 0.75f, 0.125f, 1.5f};
  const auto bytes = SerializeFmap(shape, values);
  REQUIRE(bytes.size() == 17 + 24);
  CHECK(std::memcmp(bytes.data(), "FMAP", 4) == 0);
  CHECK(bytes[4] == 1);
  CHECK(bytes[8] == 2);   // channels, big-endian
  CHECK(bytes[12] == 1);  // height
  CHECK(bytes[16] == 3);  // width
  // 0.25f = 0x3E800000, little-endian.
  CHECK(bytes[21] == 0x00);
  CHECK(bytes[23] == 0x80);
  CHECK(bytes[24] == 0x3E);
  const FeatureFile f = ParseFmap(bytes);
  CHECK(f.shape == shape);
  CHECK(f.values == values);
}

TEST_CASE("malformed fmap") {
  const auto good = SerializeFmap({1, 2, 2}, std::vector<float>(4, 0.5f));
  auto magic = good;
  magic[0] = 'X';
  CHECK(ErrorOf([&] { ParseFmap(magic); }) == ErrorCode::kMalformed);
  auto version = good;
  version[4] = 2;
  CHECK(ErrorOf([&] { ParseFmap(version); }) == ErrorCode::kMalformed);
  auto shorter = good;
  shorter.pop_back();
  CHECK(ErrorOf([&] { ParseFmap(shorter); }) == ErrorCode::kMalformed);
  auto longer = good;
  longer.insert(longer.end(), 4, 0);
  CHECK(ErrorOf([&] { ParseFmap(longer); }) == ErrorCode::kMalformed);
  auto hostile = good;
  for (int i = 5; i < 17; ++i) hostile[i] = 0xFF;
  CHECK(ErrorOf([&] { ParseFmap(hostile); }) == ErrorCode::kMalformed);
  CHECK(ErrorOf([&] { ParseFmap(std::span(good.data(), 10)); }) ==
        ErrorCode::kMalformed);
}

TEST_CASE("fmap values become features") {
  FeatureFile f{{1, 1, 4}, {-0.5f, 0.3f, 1.0f, 7.0f}};
  const FeatureMapSet set = ToFeatureMapSet(f);
  CHECK(set.values() == std::vector<float>{0.0f, 0.3f, kMaxFeature, kMaxFeature});
  f.values[1] = std::numeric_limits<float>::quiet_NaN();
  CHECK(ErrorOf([&] { ToFeatureMapSet(f); }) == ErrorCode::kMalformed);
  f.values[1] = std::numeric_limits<float>::infinity();
  CHECK(ErrorOf([&] { ToFeatureMapSet(f); }) == ErrorCode::kMalformed);
}

TEST_CASE("file helpers") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "nfc_io_test";
  fs::create_directories(dir);
  const std::vector<uint8_t> data = {1, 2, 3, 0, 255};
  WriteFile(dir / "x.bin", data);
  CHECK(ReadFile(dir / "x.bin") == data);
  CHECK(ErrorOf([&] { ReadFile(dir / "missing.bin"); }) == ErrorCode::kIo);
  CHECK(ErrorOf([&] { ReadFile(dir); }) == ErrorCode::kIo);
  CHECK(ErrorOf([&] { WriteFile(dir / "no" / "such" / "x.bin", data); }) ==
        ErrorCode::kIo);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace nfc
