#pragma once

#include <stdexcept>
#include <string>

namespace unipotent {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configured size bound (field degree, Witt length, truncation degree, ...) was exceeded.
class CapExceeded : public Error {
public:
    using Error::Error;
};

/// Malformed input: mismatched rings, invalid parameters, unsupported names.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A mathematical identity that must hold did not.
class CheckFailed : public Error {
public:
    using Error::Error;
};

namespace detail {

[[noreturn]] inline void fail_invalid(const std::string& what) { throw InvalidArgument(what); }
[[noreturn]] inline void fail_cap(const std::string& what) { throw CapExceeded(what); }
[[noreturn]] inline void fail_check(const std::string& what) { throw CheckFailed(what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) fail_invalid(what);
}

}  // namespace detail
}  // namespace unipotent
