#pragma once

#include <stdexcept>
#include <string>

namespace textlab {

// Error taxonomy mirrors the CLI exit codes:
//   config -> 1 (usage / bad config), data -> 2 (bad or empty input),
//   numeric -> 3 (NaN abort, divergence), io -> 2.
enum class ErrorKind { config, data, numeric, io };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  int exit_code() const {
    switch (kind_) {
      case ErrorKind::config: return 1;
      case ErrorKind::numeric: return 3;
      default: return 2;
    }
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_config(const std::string& msg) {
  throw Error(ErrorKind::config, msg);
}
[[noreturn]] inline void throw_data(const std::string& msg) {
  throw Error(ErrorKind::data, msg);
}
[[noreturn]] inline void throw_numeric(const std::string& msg) {
  throw Error(ErrorKind::numeric, msg);
}
[[noreturn]] inline void throw_io(const std::string& msg) {
  throw Error(ErrorKind::io, msg);
}

}  // namespace textlab
