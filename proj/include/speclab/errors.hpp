#ifndef SPECLAB_ERRORS_HPP
#define SPECLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace speclab {

// Base class for all failures raised by the library.  The CLI maps these to
// exit code 1; verification verdicts are data, not exceptions.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define SPECLAB_DEFINE_ERROR(NAME)                                    \
    class NAME : public Error {                                       \
    public:                                                           \
        explicit NAME(const std::string& what) : Error(#NAME ": " + what) {} \
    }

SPECLAB_DEFINE_ERROR(RootFindingFailure);
SPECLAB_DEFINE_ERROR(DegenerateCritical);
SPECLAB_DEFINE_ERROR(NonInvertible);
SPECLAB_DEFINE_ERROR(InfiniteCriticalValue);
SPECLAB_DEFINE_ERROR(QuadratureUnderflow);
SPECLAB_DEFINE_ERROR(TailUnreliable);
SPECLAB_DEFINE_ERROR(IllConditionedFit);
SPECLAB_DEFINE_ERROR(CoincidentValues);
SPECLAB_DEFINE_ERROR(CollisionDetected);
SPECLAB_DEFINE_ERROR(TrackingLost);
SPECLAB_DEFINE_ERROR(IncompleteGroup);
SPECLAB_DEFINE_ERROR(HalfIntegerNu);
SPECLAB_DEFINE_ERROR(ConfigError);

#undef SPECLAB_DEFINE_ERROR

} // namespace speclab

#endif
