#pragma once

#include <stdexcept>
#include <string>

namespace gwt {

/// Every failure raised by the library carries a stable kind tag
/// ("MissingEntry", "NotCNumber", ...) that the CLI reports verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

namespace detail {
[[noreturn]] inline void fail(const char* kind, const std::string& message) {
  throw Error(kind, std::string(kind) + ": " + message);
}
}  // namespace detail

}  // namespace gwt
