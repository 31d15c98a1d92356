#ifndef FBLEARN_ERRORS_HPP
#define FBLEARN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fblearn {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define FBLEARN_DEFINE_ERROR(NAME)                                   \
    struct NAME : Error {                                             \
        explicit NAME(const std::string& msg) : Error(#NAME ": " + msg) {} \
    }

FBLEARN_DEFINE_ERROR(RowNotStochastic);
FBLEARN_DEFINE_ERROR(NegativeEntry);
FBLEARN_DEFINE_ERROR(DimensionMismatch);
FBLEARN_DEFINE_ERROR(UnreachableOutputWithMass);
FBLEARN_DEFINE_ERROR(SupportViolation);
FBLEARN_DEFINE_ERROR(InvalidDelta);
FBLEARN_DEFINE_ERROR(InvalidAlpha);
FBLEARN_DEFINE_ERROR(InvalidN0);
FBLEARN_DEFINE_ERROR(InvalidArgument);
FBLEARN_DEFINE_ERROR(AtomBudgetExceeded);
FBLEARN_DEFINE_ERROR(NotConverged);
FBLEARN_DEFINE_ERROR(InfeasibleLp);
FBLEARN_DEFINE_ERROR(UnboundedLp);
FBLEARN_DEFINE_ERROR(DomainError);
FBLEARN_DEFINE_ERROR(ZeroVariance);
FBLEARN_DEFINE_ERROR(CodebookTooLarge);
FBLEARN_DEFINE_ERROR(LengthMismatch);
FBLEARN_DEFINE_ERROR(ParseError);
FBLEARN_DEFINE_ERROR(IndexOutOfRange);

#undef FBLEARN_DEFINE_ERROR

}  // namespace fblearn

#endif
