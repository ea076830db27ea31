#include "rtbbo/error.hpp"

namespace rtbbo {

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(what), code_(code) {}

void throw_invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, what);
}

void throw_capacity(const std::string& what) {
  throw Error(ErrorCode::kCapacity, what);
}

void throw_config(const std::string& what) {
  throw Error(ErrorCode::kConfig, what);
}

void throw_io(const std::string& what) { throw Error(ErrorCode::kIo, what); }

}  // namespace rtbbo
