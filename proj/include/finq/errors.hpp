#pragma once

#include <stdexcept>
#include <string>

namespace finq {

// Bad user input: unknown keys, out-of-range arguments. CLI exit code 2.
class ValidationError : public std::invalid_argument {
  public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerically ill-posed request: poles, singular systems, Bessel nodes. CLI exit code 3.
class DomainError : public std::domain_error {
  public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

}  // namespace finq
