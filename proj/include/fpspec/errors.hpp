#pragma once

#include <stdexcept>
#include <string>

namespace fpspec {

/// Base class for all domain errors thrown by this library.
/// CLI tools map these to exit code 1; usage errors exit 2.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateGrid : Error {
  using Error::Error;
};
struct MomentOrderTooHigh : Error {
  using Error::Error;
};
struct OrderTooHigh : Error {
  using Error::Error;
};
struct ZeroDerivative : Error {
  using Error::Error;
};
struct OffStrip : Error {
  using Error::Error;
};
struct MisalignedShift : Error {
  using Error::Error;
};
struct InvalidKernel : Error {
  using Error::Error;
};
struct NotMassless : Error {
  using Error::Error;
};
struct SpectrumHit : Error {
  using Error::Error;
};
struct PreconditionFailed : Error {
  using Error::Error;
};
struct NegativeTime : Error {
  using Error::Error;
};
struct SolverBreakdown : Error {
  using Error::Error;
};
struct NoSnapshots : Error {
  using Error::Error;
};
struct UnknownInitial : Error {
  using Error::Error;
};
struct WindowTooSparse : Error {
  using Error::Error;
};
struct NonpositiveNorm : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

}  // namespace fpspec
