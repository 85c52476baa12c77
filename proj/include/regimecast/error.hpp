#pragma once

#include <stdexcept>
#include <string>

namespace regimecast {

// Every failure the library reports carries one of these codes so callers
// (the CLI in particular) can branch without parsing messages.
enum class Errc {
  FileNotFound,
  SeriesNotFound,
  InternalGap,
  MalformedDate,
  NonPositiveLevel,
  TooShort,
  OutOfRange,
  NonConvergence,
  DegenerateSample,
  InsufficientHistory,
  ZeroMass,
  NoFeasibleBandwidth,
  LabelDegeneracy,
  SingularR,
  NonStationaryBelief,
  MissingPersona,
  EmptyText,
  InvalidArgument,
  Io,
};

const char* errc_name(Errc c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace regimecast
