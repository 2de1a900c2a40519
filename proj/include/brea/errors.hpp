#pragma once

#include <stdexcept>
#include <string>

namespace brea {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroInverse : Error {
  ZeroInverse() : Error("field inverse of zero") {}
};

struct LengthMismatch : Error {
  using Error::Error;
};

struct OutOfRange : Error {
  using Error::Error;
};

struct OverflowViolation : Error {
  using Error::Error;
};

struct BadParams : Error {
  using Error::Error;
};

struct DuplicateTheta : Error {
  using Error::Error;
};
using DuplicatePoints = DuplicateTheta;

struct NoGroupFound : Error {
  using Error::Error;
};

struct RadiusViolated : Error {
  using Error::Error;
};

// Decoding failed inside the admissible radius: no polynomial of the target
// degree explains enough of the present entries.
struct DecodeFailure : Error {
  int agreements;  // agreements of the best candidate, -1 when none exists
  int needed;      // minimum agreements a valid codeword must reach
  DecodeFailure(const std::string& what, int agreements_, int needed_)
      : Error(what), agreements(agreements_), needed(needed_) {}
};

struct EmptyPartition : Error {
  using Error::Error;
};

struct RefusedSmallSet : Error {
  using Error::Error;
};

struct PhaseOrderViolation : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct RoundAbort : Error {
  std::string phase;
  RoundAbort(std::string phase_, const std::string& reason)
      : Error("round aborted in phase " + phase_ + ": " + reason),
        phase(std::move(phase_)) {}
};

}  // namespace brea
