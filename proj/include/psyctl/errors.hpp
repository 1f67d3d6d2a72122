#pragma once

#include <stdexcept>
#include <string>

namespace psyctl {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parsing / validation of bundled and user-supplied files.
struct ParseError : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};

// Persona construction.
struct MissingDescription : Error {
  using Error::Error;
};
struct PlacementUnsupported : Error {
  using Error::Error;
};

// Scoring.
struct UnknownItem : Error {
  using Error::Error;
};
struct DuplicateAnswer : Error {
  using Error::Error;
};

// Metrics.
struct EmptySet : Error {
  using Error::Error;
};
struct TargetNotTrait : Error {
  using Error::Error;
};
struct TargetNotPersonality : Error {
  using Error::Error;
};

// Transport.
struct EndpointError : Error {
  using Error::Error;
};
struct AuthError : Error {
  using Error::Error;
};
struct SchemaError : Error {
  using Error::Error;
};
struct PreconditionError : Error {
  using Error::Error;
};

// Data forging.
struct EmptyBatch : Error {
  using Error::Error;
};
struct EmptyResponse : Error {
  using Error::Error;
};
struct SplitError : Error {
  using Error::Error;
};

// Reporting / orchestration.
struct PlanInvalid : Error {
  using Error::Error;
};
struct FormatError : Error {
  using Error::Error;
};

}  // namespace psyctl
