#pragma once

#include <stdexcept>
#include <string>

namespace isc3 {

// Base class for all library errors. Subtypes map 1:1 onto the failure
// modes callers are expected to distinguish (and onto CLI exit codes).
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input-side failures.
struct ParseError : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct ArgumentError : Error { using Error::Error; };
struct FrameMismatch : Error { using Error::Error; };
struct UnknownStation : Error { using Error::Error; };
struct IndexError : Error { using Error::Error; };

// Solve-side failures.
struct InstanceInfeasible : Error { using Error::Error; };
struct NoFeasiblePlan : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct InfeasiblePlanRejected : Error { using Error::Error; };

// Agent / network failures.
struct AgentUnavailable : Error { using Error::Error; };
struct AgentInvalidResponse : Error { using Error::Error; };
struct TransportError : Error { using Error::Error; };
struct BindError : Error { using Error::Error; };

// Error response from a remote solve; preserves the wire error code.
struct RemoteError : Error {
    int code;
    RemoteError(int c, const std::string& msg) : Error(msg), code(c) {}
};

}  // namespace isc3
