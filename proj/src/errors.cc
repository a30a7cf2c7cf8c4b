#include "nfc/errors.h"

namespace nfc {

const char* ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo:
      return "i/o error";
    case ErrorCode::kMalformed:
      return "malformed input";
    case ErrorCode::kBadMagic:
      return "bad magic";
    case ErrorCode::kUnsupportedVersion:
      return "unsupported version";
    case ErrorCode::kLengthMismatch:
      return "length mismatch";
    case ErrorCode::kTruncated:
      return "truncated input";
    case ErrorCode::kFieldOutOfRange:
      return "field out of range";
    case ErrorCode::kCorruptPayload:
      return "corrupt payload";
  }
  return "unknown error";
}

}  // namespace nfc
