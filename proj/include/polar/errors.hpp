#pragma once

#include <stdexcept>
#include <string>

namespace polar {

// Invalid code, decoder or simulation parameters, detected at construction.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed external input: option strings, frozen/puncture/LLR files.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem failures.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace polar
