#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cone {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

struct UnsupportedArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised for k = 0 requests with sin(gamma)cos(gamma) != 0.
struct AdmissibilityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ResolutionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SpanError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RegimeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class ValidationError : public std::invalid_argument {
public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

private:
  std::string field_;
};

// Non-fatal accuracy notes collected by callers that care.
struct Diagnostics {
  std::vector<std::string> warnings;
  void warn(std::string msg) { warnings.push_back(std::move(msg)); }
  bool empty() const { return warnings.empty(); }
};

inline void warn(Diagnostics* d, std::string msg) {
  if (d) d->warn(std::move(msg));
}

}  // namespace cone
