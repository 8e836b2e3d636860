#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ncc {

enum class ErrorKind {
  contract_violation,
  numerical_failure,
  empty_body,
  unbounded_body,
  degenerate_body,
  facet_budget,
  violated_nesting,
  depth_exceeded,
  scale_underflow,
  estimation_failure,
  parse_error,
  feasibility_violation,
  config_error,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it to an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, const char* what) {
  if (!cond) throw Error(ErrorKind::contract_violation, what);
}

}  // namespace ncc
