#pragma once

#include <stdexcept>
#include <string>

namespace nibe {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Serialization input of the wrong byte length for the active backend.
struct WrongLength : Error {
    using Error::Error;
};

// Bytes decode but do not name a group element (off curve, wrong subgroup,
// non-canonical, out of range).
struct NotCanonical : Error {
    using Error::Error;
};

// Operation not offered by this backend (e.g. dlog on the curve backend).
struct Unsupported : Error {
    using Error::Error;
};

// Bad parameters: violated SchemeConfig constraints, infeasible enumeration.
struct InvalidConfig : Error {
    using Error::Error;
};

// An adversary broke the game contract (too many queries, queried the
// challenge identity, ...).
struct ProtocolViolation : Error {
    using Error::Error;
};

// File-format problems: bad magic, unknown version, truncation.
struct FormatError : Error {
    using Error::Error;
};

// Authenticated decryption failed; no plaintext was released.
struct TagMismatch : Error {
    using Error::Error;
};

struct RngFailure : Error {
    using Error::Error;
};

}  // namespace nibe
