#pragma once

#include <stdexcept>
#include <string>

namespace wcsed {

// Base class for all recoverable failures raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when an entropy vector contains no frame above the core threshold,
// i.e. the recording holds no detectable speech activity.
class NoSpeechError : public Error {
public:
    explicit NoSpeechError(const std::string& msg) : Error(msg) {}
};

} // namespace wcsed
