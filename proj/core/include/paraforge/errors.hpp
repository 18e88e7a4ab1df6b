#pragma once

#include <stdexcept>
#include <string>

namespace paraforge {

// Input data violated a schema or a type invariant. Messages carry the
// offending file/line or record id where known.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Transport-level failure from a generation backend (connect error, bad
// HTTP status, malformed transport envelope). Retriable.
class BackendError : public std::runtime_error {
 public:
  explicit BackendError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace paraforge
