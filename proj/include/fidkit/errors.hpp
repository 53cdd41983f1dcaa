#ifndef FIDKIT_ERRORS_HPP
#define FIDKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fidkit {

// Base class for all domain errors raised by the library. The CLI maps
// these to exit code 1; anything else is a bug.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define FIDKIT_DEFINE_ERROR(Name)                                    \
    class Name : public Error {                                      \
    public:                                                          \
        explicit Name(const std::string& message)                    \
            : Error(#Name, message) {}                               \
    }

FIDKIT_DEFINE_ERROR(ThresholdUnreachable);
FIDKIT_DEFINE_ERROR(DegenerateModel);
FIDKIT_DEFINE_ERROR(TargetOutOfRange);
FIDKIT_DEFINE_ERROR(InsufficientData);
FIDKIT_DEFINE_ERROR(AbscissaMismatch);
FIDKIT_DEFINE_ERROR(EmptySample);
FIDKIT_DEFINE_ERROR(MissingGroup);
FIDKIT_DEFINE_ERROR(UnitMismatch);
FIDKIT_DEFINE_ERROR(SchemaError);
FIDKIT_DEFINE_ERROR(ParseError);
FIDKIT_DEFINE_ERROR(MixedUnits);
FIDKIT_DEFINE_ERROR(EmptyInput);
FIDKIT_DEFINE_ERROR(TimeDomainModel);
FIDKIT_DEFINE_ERROR(Infeasible);
FIDKIT_DEFINE_ERROR(InvalidArgument);

#undef FIDKIT_DEFINE_ERROR

}  // namespace fidkit

#endif
