#ifndef ETN_ERRORS_HPP
#define ETN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace etn {

enum class ErrorCode {
    Ok = 0,
    ShapeMismatch,
    InvalidOrder,
    OddOrder,
    NonSquare,
    IndexOutOfRange,
    SingularTensor,
    NotSymmetric,
    ZeroDiagonal,
    Diverged,
    Breakdown,
    RankOneViolation,
    SeparabilityViolation,
    UnsupportedOrder,
    UnsupportedLayout,
    SingularNormal,
    InvalidSize,
    InvalidSpec,
    InvalidArgument,
    IoError,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

const char* error_code_name(ErrorCode code) noexcept;

} // namespace etn

#endif
