#pragma once

#include <stdexcept>
#include <string>

namespace bclab {

enum class ErrorCode {
    Syntax,
    ZeroPolynomial,
    DegreeZero,
    DegreeCapExceeded,
    Reducible,
    PrecisionExhausted,
    NoRealRootAboveOne,
    ReductionDidNotTerminate,
    BudgetExceeded,
    NotMonic,
    NotSalem,
    InvalidArgument,
    CacheIO,
};

const char* error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace bclab
