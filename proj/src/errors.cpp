#include "bclab/errors.hpp"

namespace bclab {

const char* error_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::Syntax: return "SyntaxError";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::DegreeZero: return "DegreeZero";
    case ErrorCode::DegreeCapExceeded: return "DegreeCapExceeded";
    case ErrorCode::Reducible: return "Reducible";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::NoRealRootAboveOne: return "NoRealRootAboveOne";
    case ErrorCode::ReductionDidNotTerminate: return "ReductionDidNotTerminate";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotMonic: return "NotMonic";
    case ErrorCode::NotSalem: return "NotSalem";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::CacheIO: return "CacheIO";
    }
    return "Error";
}

}  // namespace bclab
