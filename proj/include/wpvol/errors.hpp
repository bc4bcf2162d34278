#pragma once

#include <stdexcept>
#include <string>

namespace wpvol {

// Every mathematical precondition failure derives from this; the CLI maps it to exit code 1.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RingMismatch : DomainError { using DomainError::DomainError; };
struct DimensionMismatch : DomainError { using DomainError::DomainError; };
struct Unstable : DomainError { using DomainError::DomainError; };
struct BoundExceeded : DomainError { using DomainError::DomainError; };
struct OnWall : DomainError { using DomainError::DomainError; };
struct NotIncident : DomainError { using DomainError::DomainError; };
struct NotRealizable : DomainError { using DomainError::DomainError; };
struct NotComparable : DomainError { using DomainError::DomainError; };
struct DegenerateSegment : DomainError { using DomainError::DomainError; };
struct NotFlat : DomainError { using DomainError::DomainError; };
struct InvalidPath : DomainError { using DomainError::DomainError; };

}  // namespace wpvol
