#pragma once

#include <stdexcept>
#include <string>

namespace ivlab {

// Bad arguments: dimension mismatch, out-of-domain parameter, malformed input.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The requested operation has no exact rule for this kind of body.
class CapabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ivlab
