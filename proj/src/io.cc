#include "nfc/io.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace nfc {

namespace {

[[noreturn]] void Malformed(const std::string& what) {
  throw CodecError(ErrorCode::kMalformed, what);
}

class PpmTokenizer {
 public:
  explicit PpmTokenizer(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  // Next whitespace-delimited header token; '#' starts a comment.
  std::string Token() {
    SkipSpaceAndComments();
    std::string token;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) &&
           bytes_[pos_] != '#') {
      token.push_back(static_cast<char>(bytes_[pos_++]));
    }
    if (token.empty()) Malformed("PPM header ends early");
    return token;
  }

  uint32_t Number() {
    const std::string t = Token();
    if (t.size() > 9 ||
        !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(c); })) {
      Malformed("bad PPM header number '" + t + "'");
    }
    return static_cast<uint32_t>(std::stoul(t));
  }

  // Exactly one whitespace byte separates maxval from the raster.
  size_t RasterStart() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      Malformed("PPM header not followed by whitespace");
    }
    return pos_ + 1;
  }

 private:
  void SkipSpaceAndComments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

void PutU32BigEndian(std::vector<uint8_t>& out, uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<uint8_t>(v >> shift));
  }
}

uint32_t GetU32BigEndian(const uint8_t* p) {
  return (uint32_t{p[0]} << 24) | (uint32_t{p[1]} << 16) |
         (uint32_t{p[2]} << 8) | uint32_t{p[3]};
}

constexpr char kFmapMagic[4] = {'F', 'M', 'A', 'P'};
constexpr uint8_t kFmapVersion = 0x01;
constexpr size_t kFmapHeaderSize = 17;

}  // namespace

ImageBuffer ParsePpm(std::span<const uint8_t> bytes) {
  PpmTokenizer tok(bytes);
  if (tok.Token() != "P6") Malformed("not a binary PPM (P6)");
  const uint32_t width = tok.Number();
  const uint32_t height = tok.Number();
  const uint32_t maxval = tok.Number();
  if (width == 0 || height == 0) Malformed("PPM has zero size");
  if (maxval != 255) {
    Malformed("PPM maxval " + std::to_string(maxval) + " unsupported");
  }
  const size_t start = tok.RasterStart();
  const size_t needed = size_t{width} * height * 3;
  if (bytes.size() - start < needed) {
    Malformed("PPM raster has " + std::to_string(bytes.size() - start) +
              " bytes, needs " + std::to_string(needed));
  }
  return ImageBuffer(width, height,
                     std::vector<uint8_t>(bytes.begin() + start,
                                          bytes.begin() + start + needed));
}

std::vector<uint8_t> SerializePpm(const ImageBuffer& image) {
  const std::string header = "P6\n" + std::to_string(image.width()) + " " +
                             std::to_string(image.height()) + "\n255\n";
  std::vector<uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.pixels().begin(), image.pixels().end());
  return out;
}

FeatureFile ParseFmap(std::span<const uint8_t> bytes) {
  if (bytes.size() < kFmapHeaderSize ||
      std::memcmp(bytes.data(), kFmapMagic, 4) != 0) {
    Malformed("not an FMAP file");
  }
  if (bytes[4] != kFmapVersion) {
    Malformed("FMAP version " + std::to_string(bytes[4]) + " unsupported");
  }
  FeatureFile f;
  f.shape.channels = GetU32BigEndian(bytes.data() + 5);
  f.shape.height = GetU32BigEndian(bytes.data() + 9);
  f.shape.width = GetU32BigEndian(bytes.data() + 13);
  const size_t available = (bytes.size() - kFmapHeaderSize) / 4;
  // Compare without overflowing on hostile sizes.
  const uint64_t plane = uint64_t{f.shape.height} * f.shape.width;
  if ((bytes.size() - kFmapHeaderSize) % 4 != 0 ||
      (f.shape.channels != 0 && plane > available / f.shape.channels) ||
      plane * f.shape.channels != available) {
    Malformed("FMAP of shape " + ToString(f.shape) + " carries " +
              std::to_string(bytes.size() - kFmapHeaderSize) + " data bytes");
  }
  f.values.resize(available);
  const uint8_t* p = bytes.data() + kFmapHeaderSize;
  for (size_t i = 0; i < available; ++i, p += 4) {
    const uint32_t bits = uint32_t{p[0]} | (uint32_t{p[1]} << 8) |
                          (uint32_t{p[2]} << 16) | (uint32_t{p[3]} << 24);
    f.values[i] = std::bit_cast<float>(bits);
  }
  return f;
}

std::vector<uint8_t> SerializeFmap(const MapShape& shape,
                                   std::span<const float> values) {
  if (values.size() != shape.size()) {
    throw InvalidArgument("FMAP shape " + ToString(shape) + " given " +
                          std::to_string(values.size()) + " values");
  }
  std::vector<uint8_t> out(kFmapMagic, kFmapMagic + 4);
  out.push_back(kFmapVersion);
  PutU32BigEndian(out, shape.channels);
  PutU32BigEndian(out, shape.height);
  PutU32BigEndian(out, shape.width);
  out.reserve(out.size() + values.size() * 4);
  for (float v : values) {
    const uint32_t bits = std::bit_cast<uint32_t>(v);
    for (int shift = 0; shift < 32; shift += 8) {
      out.push_back(static_cast<uint8_t>(bits >> shift));
    }
  }
  return out;
}

FeatureMapSet ToFeatureMapSet(const FeatureFile& file) {
  std::vector<float> z(file.values.size());
  for (size_t i = 0; i < z.size(); ++i) {
    const float v = file.values[i];
    if (!std::isfinite(v)) {
      Malformed("non-finite FMAP value at index " + std::to_string(i));
    }
    z[i] = std::clamp(v, 0.0f, kMaxFeature);
  }
  return FeatureMapSet(file.shape, std::move(z));
}

std::vector<uint8_t> ReadFile(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw CodecError(ErrorCode::kIo, "not a readable file: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw CodecError(ErrorCode::kIo, "cannot open " + path.string());
  }
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (in.bad()) throw CodecError(ErrorCode::kIo, "cannot read " + path.string());
  return bytes;
}

void WriteFile(const std::filesystem::path& path,
               std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw CodecError(ErrorCode::kIo, "cannot create " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CodecError(ErrorCode::kIo, "cannot write " + path.string());
}

}  // namespace nfc
