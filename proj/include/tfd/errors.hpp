#pragma once
// Error taxonomy shared by the library and the CLI exit-code mapping.

#include <stdexcept>
#include <string>

namespace tfd {

enum class Errc {
  usage,       // bad flags / bad config / bad arguments
  decode,      // container unreadable, truncated, or empty
  quality,     // clip rejected by the quality filter
  track,       // face tracking failed (too few detections)
  model,       // shape mismatch, incompatible weights, divergence
  io,          // filesystem read/write failures
  parse,       // malformed persisted artifact (manifest/report/archive)
  input,       // invalid in-process arguments (length mismatch, empty set)
  infeasible,  // split constraints cannot be satisfied
  undefined,   // metric undefined for the given inputs (single class, T'<2)
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

// CLI contract: success=0, usage=1, decode=2, face-track=3, model=4, I/O=5.
inline int exit_code(Errc c) {
  switch (c) {
    case Errc::usage:
    case Errc::input:
    case Errc::infeasible:
    case Errc::undefined:
      return 1;
    case Errc::decode:
    case Errc::quality:
      return 2;
    case Errc::track:
      return 3;
    case Errc::model:
      return 4;
    case Errc::io:
    case Errc::parse:
      return 5;
  }
  return 1;
}

}  // namespace tfd
