#pragma once

#include <stdexcept>
#include <string>

namespace qcoex {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotSquare : Error {
  using Error::Error;
};
struct NotHermitian : Error {
  using Error::Error;
};
struct NotPSD : Error {
  using Error::Error;
};
struct NotUnitary : Error {
  using Error::Error;
};
struct NotPure : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct TraceBoundViolated : Error {
  using Error::Error;
};
struct InvalidOperation : Error {
  using Error::Error;
};
struct InvalidEffect : Error {
  using Error::Error;
};
struct InvalidState : Error {
  using Error::Error;
};
struct InvalidInstrument : Error {
  using Error::Error;
};
struct OutOfRange : Error {
  using Error::Error;
};
struct MalformedSpec : Error {
  using Error::Error;
};
struct MalformedInstance : Error {
  using Error::Error;
};
struct UnsupportedDimension : Error {
  using Error::Error;
};
struct InfeasiblePoint : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

}  // namespace qcoex
