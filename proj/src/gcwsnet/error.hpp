#pragma once

#include <stdexcept>
#include <string>

namespace gcwsnet {

enum class ErrorCode {
    EmptyVector = 1,
    InvalidParameter = 2,
    Overflow = 3,
    ConfigMismatch = 4,
    CorruptInput = 5,
    Io = 6,
    Divergence = 7,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& msg) {
    throw Error(code, msg);
}

} // namespace gcwsnet
