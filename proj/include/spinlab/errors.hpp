#pragma once
#include <stdexcept>
#include <string>

namespace spinlab {

// Exit code mapping used by the CLI: 0 ok, 1 internal, 2 bad parameters,
// 3 verification mismatch.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParamError : Error {
  using Error::Error;
};

struct ZeroElement : Error {
  ZeroElement() : Error("element is zero") {}
};

struct PrecisionExhausted : Error {
  using Error::Error;
};

struct NotAUnit : Error {
  NotAUnit() : Error("element is not a unit mod 2") {}
};

struct ReduciblePolynomial : Error {
  using Error::Error;
};

struct OrbitInvariantViolation : Error {
  using Error::Error;
};

struct DegreeTooLarge : Error {
  using Error::Error;
};

struct ValidationFailed : Error {
  using Error::Error;
};

struct StarInconsistency : Error {
  using Error::Error;
};

struct BoundViolation : Error {
  using Error::Error;
};

struct WellDefinednessFailure : Error {
  using Error::Error;
};

struct BadPrime : Error {
  using Error::Error;
};

struct DenominatorClash : Error {
  using Error::Error;
};

struct EnumerationExhausted : Error {
  using Error::Error;
};

struct SignatureSpanFailure : Error {
  using Error::Error;
};

struct UnreachableSignature : Error {
  using Error::Error;
};

struct NonUnitResidue : Error {
  using Error::Error;
};

}  // namespace spinlab
