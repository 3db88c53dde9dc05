#ifndef MVC2GEN_DIAGNOSTICS_HPP
#define MVC2GEN_DIAGNOSTICS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace mvc2gen {

// Hard failure with a stable machine-readable code ("parse-error",
// "duplicate-rule", ...). Codes are part of the tool contract; messages
// are for humans.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

private:
  std::string code_;
};

// A well-formedness violation found by a validator. Violations are data,
// not failures: validators collect them instead of throwing.
struct Violation {
  std::string path;     // element path, e.g. "/classifier.2/operation.1"
  std::string code;     // e.g. "reserved-name"
  std::string message;

  bool operator==(const Violation&) const = default;
};

using Violations = std::vector<Violation>;

} // namespace mvc2gen

#endif
