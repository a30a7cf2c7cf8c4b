#include "nfc/cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nfc/codec.h"
#include "nfc/io.h"
#include "nfc/metrics.h"

namespace nfc::cli {

namespace {

namespace fs = std::filesystem;

class MismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CodingFlags {
  int bit_depth = 4;
  int block_size = 4;
  double target_bpp = 0.15;
  double tolerance = 0.005;
  int max_iterations = 20;
  bool full_importance = false;
};

struct EncodeFlags {
  std::string input;
  std::string output;
  CodingFlags coding;
  int transform = 1;
  int kept_coeffs = 6;
  std::string loss = "literal";
  double lambda = 0.01;
  double sigma1_sq = 1.0;
  double sigma2_sq = 1.0;
};

struct FeaturesFlags {
  std::string input;
  std::string output;
  CodingFlags coding;
  uint32_t width = 0;
  uint32_t height = 0;
};

struct DecodeFlags {
  std::string input;
  std::string output;
};

struct EvalFlags {
  std::string originals;
  std::string others;
  std::string report;
};

constexpr const char* kExitCodeHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  1  internal error\n"
    "  2  bad command line or parameter value\n"
    "  3  file cannot be read or written\n"
    "  4  malformed PPM/FMAP input or invalid .nfc header\n"
    "  5  truncated input\n"
    "  6  corrupt .nfc payload\n"
    "  7  eval directories do not pair up";

void AddCodingOptions(CLI::App* cmd, CodingFlags& f) {
  cmd->add_option("-d,--bit-depth", f.bit_depth, "Quantizer bit depth d")
      ->capture_default_str()
      ->check(CLI::Range(1, kMaxBitDepth));
  cmd->add_option("--block-size", f.block_size,
                  "Block size for significance coding")
      ->capture_default_str()
      ->check(CLI::Range(1, 255));
  cmd->add_option("--target-bpp", f.target_bpp, "Target bits per pixel")
      ->capture_default_str();
  cmd->add_option("--tolerance", f.tolerance,
                  "Accepted bpp shortfall below the target")
      ->capture_default_str();
  cmd->add_option("--max-iterations", f.max_iterations,
                  "Rate-control bisection steps")
      ->capture_default_str();
  cmd->add_flag("--full-importance", f.full_importance,
                "Keep every bit (m = d) and skip rate control");
}

EncodeOptions ToOptions(const CodingFlags& f) {
  EncodeOptions o;
  o.bit_depth = f.bit_depth;
  o.block_size = f.block_size;
  o.rate.target_bpp = f.target_bpp;
  o.rate.tolerance = f.tolerance;
  o.rate.max_iterations = f.max_iterations;
  o.full_importance = f.full_importance;
  return o;
}

std::string FormatDouble(double v, const char* fmt = "%.6f") {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

void ReportRate(const EncodeResult& r, const CodingFlags& f,
                const std::string& output, std::ostream& err) {
  err << "wrote " << output << ": " << r.file.size() << " bytes, "
      << FormatDouble(r.bpp, "%.4f") << " bpp";
  if (f.full_importance) {
    err << " (full importance)\n";
  } else {
    err << " (target " << FormatDouble(f.target_bpp, "%g") << ", "
        << r.evaluations << " bisection steps)\n";
  }
  if (r.unreachable) {
    err << "warning: target " << FormatDouble(f.target_bpp, "%g")
        << " bpp is below the all-1 importance floor; wrote the floor at "
        << FormatDouble(r.bpp, "%.4f") << " bpp\n";
  }
}

int CmdEncode(const EncodeFlags& f, std::ostream& err) {
  LossParams loss{f.lambda, f.sigma1_sq, f.sigma2_sq,
                  f.loss == "one-minus" ? SsimTerm::kOneMinus
                                        : SsimTerm::kLiteral};
  CheckLossParams(loss);
  EncodeOptions options = ToOptions(f.coding);
  options.transform = {static_cast<TransformId>(f.transform), f.kept_coeffs};

  const ImageBuffer image = ParsePpm(ReadFile(f.input));
  const EncodeResult r = EncodeImage(image, options);
  WriteFile(f.output, r.file);
  ReportRate(r, f.coding, f.output, err);

  const auto decoded = std::get<ImageBuffer>(DecodeFile(r.file).content);
  const double mse = Mse(image, decoded);
  err << "PSNR " << FormatDouble(PsnrFromMse(mse), "%.2f") << " dB";
  if (MsSsimScaleCount(image.width(), image.height()) > 0) {
    const double msssim = MsSsim(image, decoded);
    err << ", MS-SSIM " << FormatDouble(msssim, "%.4f") << ", loss "
        << FormatDouble(
               RateDistortionLoss(mse, msssim, RateEstimate(r.importance), loss),
               "%.4f");
  }
  err << "\n";
  return kExitOk;
}

int CmdFeatures(const FeaturesFlags& f, std::ostream& err) {
  const FeatureMapSet features = ToFeatureMapSet(ParseFmap(ReadFile(f.input)));
  const MapShape& s = features.shape();
  // Without explicit pixel dimensions each sample stands for an 8x8 block.
  const uint32_t width = f.width != 0 ? f.width : s.width * 8;
  const uint32_t height = f.height != 0 ? f.height : s.height * 8;
  const EncodeResult r =
      EncodeFeatures(features, ToOptions(f.coding), width, height);
  WriteFile(f.output, r.file);
  ReportRate(r, f.coding, f.output, err);
  return kExitOk;
}

int CmdDecode(const DecodeFlags& f, std::ostream& err) {
  const DecodedFile decoded = DecodeFile(ReadFile(f.input));
  if (const auto* image = std::get_if<ImageBuffer>(&decoded.content)) {
    WriteFile(f.output, SerializePpm(*image));
    err << "wrote " << f.output << ": " << image->width() << "x"
        << image->height() << " PPM\n";
  } else {
    const auto& features = std::get<FeatureMapSet>(decoded.content);
    WriteFile(f.output, SerializeFmap(features.shape(), features.values()));
    err << "wrote " << f.output << ": " << ToString(features.shape())
        << " FMAP\n";
  }
  return kExitOk;
}

// Regular files in `dir` with one of the given extensions, keyed by stem.
std::map<std::string, fs::path> FilesByStem(
    const fs::path& dir, const std::vector<std::string>& extensions) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw CodecError(ErrorCode::kIo, "not a directory: " + dir.string());
  }
  std::map<std::string, fs::path> files;
  for (const auto& ext : extensions) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (!entry.is_regular_file() || entry.path().extension() != ext) continue;
      files.emplace(entry.path().stem().string(), entry.path());
    }
  }
  return files;
}

struct EvalRow {
  std::string name;
  std::optional<double> bpp;
  ErrorTotals totals;
  std::optional<double> msssim;
};

EvalRow EvaluatePair(const std::string& name, const fs::path& original,
                     const fs::path& other) {
  const ImageBuffer a = ParsePpm(ReadFile(original));
  EvalRow row{name, std::nullopt, {}, std::nullopt};
  ImageBuffer b;
  if (other.extension() == ".nfc") {
    const std::vector<uint8_t> bytes = ReadFile(other);
    DecodedFile decoded = DecodeFile(bytes);
    auto* image = std::get_if<ImageBuffer>(&decoded.content);
    if (image == nullptr) {
      throw MismatchError(other.string() + " holds features, not an image");
    }
    b = std::move(*image);
    row.bpp = BitsPerPixel(bytes.size(), uint64_t{a.width()} * a.height());
  } else {
    b = ParsePpm(ReadFile(other));
  }
  if (a.width() != b.width() || a.height() != b.height()) {
    throw MismatchError(name + ": original is " + std::to_string(a.width()) +
                        "x" + std::to_string(a.height()) + ", other is " +
                        std::to_string(b.width()) + "x" +
                        std::to_string(b.height()));
  }
  row.totals = SquaredError(a, b);
  if (MsSsimScaleCount(a.width(), a.height()) > 0) row.msssim = MsSsim(a, b);
  return row;
}

int CmdEval(const EvalFlags& f, std::ostream& err) {
  const auto originals = FilesByStem(f.originals, {".ppm"});
  // A compressed file takes precedence over a decoded one of the same stem.
  const auto others = FilesByStem(f.others, {".nfc", ".ppm"});
  if (originals.empty()) {
    throw MismatchError("no .ppm images in " + f.originals);
  }
  for (const auto& [stem, path] : others) {
    if (!originals.contains(stem)) {
      throw MismatchError(path.string() + " has no original");
    }
  }

  std::vector<EvalRow> rows;
  for (const auto& [stem, path] : originals) {
    const auto it = others.find(stem);
    if (it == others.end()) {
      throw MismatchError(path.string() + " has no counterpart in " + f.others);
    }
    rows.push_back(EvaluatePair(stem, path, it->second));
  }

  std::string csv = "name,bpp,mse,msssim\n";
  std::vector<ErrorTotals> totals;
  double msssim_sum = 0.0;
  int msssim_count = 0;
  for (const EvalRow& row : rows) {
    const double mse =
        row.totals.sum_squared_error / static_cast<double>(row.totals.sample_count);
    csv += row.name + "," + (row.bpp ? FormatDouble(*row.bpp) : "-") + "," +
           FormatDouble(mse) + "," +
           (row.msssim ? FormatDouble(*row.msssim) : "-") + "\n";
    totals.push_back(row.totals);
    if (row.msssim) {
      msssim_sum += *row.msssim;
      ++msssim_count;
    }
  }
  const double pooled = PooledPsnr(totals);
  const std::string mean_msssim =
      msssim_count > 0 ? FormatDouble(msssim_sum / msssim_count) : "-";
  csv += "POOLED,-," + FormatDouble(pooled) + "," + mean_msssim + "\n";
  WriteFile(f.report, std::span(reinterpret_cast<const uint8_t*>(csv.data()),
                                csv.size()));
  err << rows.size() << " images, pooled PSNR "
      << FormatDouble(pooled, "%.2f") << " dB, mean MS-SSIM " << mean_msssim
      << "\n";
  return kExitOk;
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo:
      return kExitIo;
    case ErrorCode::kTruncated:
      return kExitTruncated;
    case ErrorCode::kCorruptPayload:
      return kExitCorrupt;
    default:
      return kExitFormat;
  }
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Bitplane codec for images and feature maps", "nfc"};
  app.footer(kExitCodeHelp);
  app.require_subcommand(1);

  EncodeFlags enc;
  CLI::App* encode = app.add_subcommand("encode", "Compress a PPM image");
  encode->add_option("input", enc.input, "Input PPM")->required();
  encode->add_option("output", enc.output, "Output .nfc")->required();
  AddCodingOptions(encode, enc.coding);
  encode->add_option("--transform", enc.transform,
                     "0 identity, 1 sign-split block cosine, "
                     "2 offset block cosine")
      ->capture_default_str()
      ->check(CLI::IsMember({0, 1, 2}));
  encode->add_option("-K,--kept-coeffs", enc.kept_coeffs,
                     "Zigzag DCT coefficients kept per block")
      ->capture_default_str()
      ->check(CLI::Range(1, 64));
  encode->add_option("--loss", enc.loss,
                     "MS-SSIM term of the reported loss")
      ->capture_default_str()
      ->check(CLI::IsMember({"literal", "one-minus"}));
  encode->add_option("--lambda", enc.lambda, "Rate weight of the loss")
      ->capture_default_str();
  encode->add_option("--sigma1-sq", enc.sigma1_sq, "MSE variance of the loss")
      ->capture_default_str();
  encode->add_option("--sigma2-sq", enc.sigma2_sq,
                     "MS-SSIM variance of the loss")
      ->capture_default_str();

  DecodeFlags dec;
  CLI::App* decode = app.add_subcommand(
      "decode", "Decompress .nfc to PPM (or FMAP for coded features)");
  decode->add_option("input", dec.input, "Input .nfc")->required();
  decode->add_option("output", dec.output, "Output PPM or FMAP")->required();

  EvalFlags ev;
  CLI::App* eval = app.add_subcommand(
      "eval", "Compare original PPMs with reconstructions or .nfc files");
  eval->add_option("originals", ev.originals, "Directory of original PPMs")
      ->required();
  eval->add_option("others", ev.others,
                   "Directory of reconstructed PPMs or .nfc files")
      ->required();
  eval->add_option("report", ev.report, "Output CSV")->required();

  FeaturesFlags feat;
  CLI::App* features =
      app.add_subcommand("features", "Compress an FMAP feature-map file");
  features->add_option("input", feat.input, "Input FMAP")->required();
  features->add_option("output", feat.output, "Output .nfc")->required();
  AddCodingOptions(features, feat.coding);
  features->add_option("--width", feat.width,
                       "Pixel width for bpp accounting (default 8 * fw)");
  features->add_option("--height", feat.height,
                       "Pixel height for bpp accounting (default 8 * fh)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*encode) return CmdEncode(enc, err);
    if (*decode) return CmdDecode(dec, err);
    if (*eval) return CmdEval(ev, err);
    return CmdFeatures(feat, err);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CodecError& e) {
    err << "error: " << ToString(e.code()) << ": " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const MismatchError& e) {
    err << "error: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace nfc::cli
