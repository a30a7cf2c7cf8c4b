#ifndef NFC_ERRORS_H_
#define NFC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace nfc {

// Thrown by constructors and operations on invariant violations (shape,
// range, configuration).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ErrorCode {
  kIo,                  // unreadable or unwritable file
  kMalformed,           // PPM/FMAP syntax or content error
  kBadMagic,            // container does not start with "NFC1"
  kUnsupportedVersion,  // container version byte is not 0x01
  kLengthMismatch,      // bytes follow the declared payload
  kTruncated,           // input ends before the declared data
  kFieldOutOfRange,     // header field cannot be represented or is invalid
  kCorruptPayload,      // arithmetic decoder reached an impossible state
};

const char* ToString(ErrorCode code);

// Errors raised while reading or writing external data.
class CodecError : public std::runtime_error {
 public:
  CodecError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nfc

#endif  // NFC_ERRORS_H_
