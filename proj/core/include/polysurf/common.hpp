#pragma once

#include <stdexcept>
#include <string>

namespace polysurf {

/// Failure categories surfaced by the numeric and geometric kernels.
/// The CLI maps these onto process exit codes.
enum class ErrorKind {
  domain,              // non-finite evaluation where a finite value was required
  divergence,          // integral or bracket growth failed to terminate
  bracket,             // root finder given a bracket without a sign change
  degenerate_density,  // density with zero total mass
  range,               // argument outside the range an operation supports
  parse,               // malformed text input
  dimension,           // mismatched vector/polytope dimensions
  usage,               // bad configuration or flag combination
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

}  // namespace polysurf
