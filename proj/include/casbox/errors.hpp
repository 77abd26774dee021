#pragma once

#include <stdexcept>
#include <string>

namespace casbox {

// Every error thrown by the library derives from Error so callers can
// catch the family in one place and still dispatch on the concrete kind.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PoleError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

// Point lies on an edge (or corner) of a side, where the outer normal is undefined.
struct EdgeError : Error {
    using Error::Error;
};

struct BracketError : Error {
    using Error::Error;
};

struct FitError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace casbox
