#pragma once

#include <stdexcept>
#include <string>

namespace evote {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid group parameters, non-members, unavailable pairing.
struct GroupError : Error {
  using Error::Error;
};

/// Malformed encodings, headers or files.
struct FormatError : Error {
  using Error::Error;
};

/// A party was driven out of order or handed inconsistent protocol data.
struct ProtocolError : Error {
  using Error::Error;
};

/// Authentication tag or signature failure on data that must verify.
struct VerificationError : Error {
  using Error::Error;
};

}  // namespace evote
