#pragma once

#include <stdexcept>
#include <string>

namespace rtbbo {

enum class ErrorCode {
  kInvalidArgument = 1,
  kCapacity = 2,
  kConfig = 3,
  kIo = 4,
};

// Base exception for every failure raised by the library. The C API maps
// `code()` onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void throw_invalid(const std::string& what);
[[noreturn]] void throw_capacity(const std::string& what);
[[noreturn]] void throw_config(const std::string& what);
[[noreturn]] void throw_io(const std::string& what);

}  // namespace rtbbo
