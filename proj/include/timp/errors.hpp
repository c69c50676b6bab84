#pragma once

#include <stdexcept>
#include <string>

namespace timp {

// Error taxonomy mirrors the CLI exit codes: validation 2, I/O 3, cap 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class CapExceededError : public Error {
public:
    using Error::Error;
};

} // namespace timp
