#pragma once

#include <stdexcept>
#include <string>

namespace tfmod {

enum class errc {
    invalid_argument,  // malformed parameters, bad descriptors, bad files
    precondition,      // a documented operation precondition is violated
    numeric,           // quadrature/iteration budget exhausted, non-finite data
    io,                // file read/write failure
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, errc code, const std::string& what) {
    if (!ok) fail(code, what);
}

}  // namespace tfmod
