#pragma once

#include <stdexcept>
#include <string>

namespace lowbit {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroInBinaryInput : Error {
    ZeroInBinaryInput() : Error("binary matrix contains a zero element") {}
};

struct InvalidCode : Error {
    InvalidCode() : Error("ternary code (1,1) is invalid") {}
};

struct OutOfBounds : Error {
    explicit OutOfBounds(const std::string& what) : Error("out of bounds: " + what) {}
};

struct DepthOverflow : Error {
    explicit DepthOverflow(long k, long k_max)
        : Error("depth " + std::to_string(k) + " exceeds k_max " + std::to_string(k_max)) {}
};

struct ModeMismatch : Error {
    explicit ModeMismatch(const std::string& what) : Error("mode mismatch: " + what) {}
};

struct ChannelOverflow : Error {
    ChannelOverflow(long c_in, long c_in_max)
        : Error("input channels " + std::to_string(c_in) + " exceed c_in_max " +
                std::to_string(c_in_max)) {}
};

struct EmptyOutput : Error {
    EmptyOutput() : Error("convolution produces empty output") {}
};

struct InvalidPlan : Error {
    explicit InvalidPlan(const std::string& what) : Error("invalid plan: " + what) {}
};

}  // namespace lowbit
