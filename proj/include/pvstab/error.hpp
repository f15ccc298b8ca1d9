#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pvstab {

/// Base of every error thrown by the library. `is_numerical()` separates
/// numerical failures (root not bracketed, iteration budget spent) from bad
/// input, which the CLI maps to distinct exit codes.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what, bool numerical = false)
        : std::runtime_error(what), numerical_(numerical) {}

    bool is_numerical() const noexcept { return numerical_; }

  private:
    bool numerical_;
};

class NonFiniteAmount : public Error {
  public:
    explicit NonFiniteAmount(std::size_t index)
        : Error("non-finite cashflow amount at period " + std::to_string(index)), index_(index) {}
    std::size_t index() const noexcept { return index_; }

  private:
    std::size_t index_;
};

class RateOutOfDomain : public Error {
  public:
    explicit RateOutOfDomain(const std::string& what) : Error(what) {}
};

class IndexOutOfRange : public Error {
  public:
    explicit IndexOutOfRange(const std::string& what) : Error(what) {}
};

class LengthMismatch : public Error {
  public:
    explicit LengthMismatch(const std::string& what) : Error(what) {}
};

class ZeroUncertainty : public Error {
  public:
    ZeroUncertainty()
        : Error("rate uncertainty is zero; supply the rate error explicitly or solve the IRR") {}
};

class NonPositivePrincipal : public Error {
  public:
    NonPositivePrincipal() : Error("loan principal must be positive") {}
};

class NoSignChange : public Error {
  public:
    explicit NoSignChange(const std::string& what) : Error(what, true) {}
};

class MaxIterationsExceeded : public Error {
  public:
    explicit MaxIterationsExceeded(const std::string& what) : Error(what, true) {}
};

/// Malformed files or flags.
class InputError : public Error {
  public:
    explicit InputError(const std::string& what) : Error(what) {}
};

}  // namespace pvstab
