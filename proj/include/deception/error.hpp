#pragma once

#include <stdexcept>
#include <string>

namespace deception {

// Base of every error the library raises on bad input.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed documents, dangling references, contract violations by the caller.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A computation refused to run because its input exceeds a configured bound.
class SizeGuardError : public Error {
public:
    using Error::Error;
};

} // namespace deception
