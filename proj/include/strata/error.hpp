#pragma once

#include <stdexcept>
#include <string>

namespace strata {

// Every failure mode surfaced by the library. Codes are stable; tests and
// the CLI dispatch on them.
enum class Errc {
  // design construction
  NonPositiveCount,
  SampleExceedsStratum,
  ZeroAuxMean,
  CorrelationOutOfRange,
  InvariantViolation,
  // point estimation
  StrataMismatch,
  ZeroSampleAuxMean,
  ZeroDenominator,
  DegenerateSlope,
  NonFiniteResult,
  // moment analysis
  UndefinedCorrelation,
  ZeroTuning,
  UncorrelatedStratum,
  SingularSystem,
  // monte carlo
  InvalidSpec,
  TooManySamples,
  EmptyRange,
  // data io
  MalformedHeader,
  MalformedRow,
  SingletonStratum,
  UnknownDataset,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace strata
