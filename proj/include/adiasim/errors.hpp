#ifndef ADIASIM_ERRORS_HPP
#define ADIASIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace adiasim {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Operands of incompatible dimension.
class DimensionError : public Error {
public:
    using Error::Error;
};

// A spectral gap fell below the admissible tolerance. Carries the offending
// path step (-1 when not tied to a path) and the gap that was found.
class DegeneracyError : public Error {
public:
    DegeneracyError(const std::string& msg, long step = -1, double gap = 0.0)
        : Error(msg), step_(step), gap_(gap) {}

    long step() const noexcept { return step_; }
    double gap() const noexcept { return gap_; }

private:
    long step_;
    double gap_;
};

// Iterative eigensolver exhausted its sweep budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace adiasim

#endif  // ADIASIM_ERRORS_HPP
