#ifndef XNET_ERRORS_HPP
#define XNET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace xnet {

// Malformed input: wrong sizes, unknown labels, bad files. CLI exit code 1.
class StructuralError : public std::invalid_argument {
public:
    explicit StructuralError(const std::string& what) : std::invalid_argument(what) {}
};

// An enumeration or search guard refused the request. CLI exit code 2.
class GuardRefusal : public std::runtime_error {
public:
    explicit GuardRefusal(const std::string& what) : std::runtime_error(what) {}
};

// A derivative was requested at a zero-length segment.
class SingularityError : public std::domain_error {
public:
    explicit SingularityError(const std::string& what) : std::domain_error(what) {}
};

} // namespace xnet

#endif
