// Command-line front end: encode, decode, eval and features subcommands.

#ifndef NFC_CLI_H_
#define NFC_CLI_H_

#include <ostream>

namespace nfc::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,    // unexpected failure
  kExitUsage = 2,       // bad command line or parameter value
  kExitIo = 3,          // unreadable input or unwritable output
  kExitFormat = 4,      // malformed PPM/FMAP or invalid container header
  kExitTruncated = 5,   // input ends before the declared data
  kExitCorrupt = 6,     // entropy payload cannot be decoded
  kExitMismatch = 7,    // eval directories do not pair up
};

// Runs the tool with argv[0] as the program name. Normal output goes to
// `out`, diagnostics and summaries to `err`.
int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace nfc::cli

#endif  // NFC_CLI_H_
