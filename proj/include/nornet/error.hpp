#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nornet {

// Error classes double as the CLI's machine-parsable `error:<class>:` prefix.
enum class ErrorClass {
  Domain,
  IncompleteAssignment,
  InconsistentEvidence,
  Validation,
  Parse,
  Config,
  Exhaustion,
  DegenerateVariance,
  Capacity,
  Io,
};

std::string_view to_string(ErrorClass c);

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

}  // namespace nornet
