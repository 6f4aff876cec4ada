#ifndef ARSK_ERRORS_HPP
#define ARSK_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace arsk {

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A parameter outside its documented domain (negative lambda, a <= 2, K > n...).
class InvalidParameter : public Error {
public:
    using Error::Error;
};

// Inputs that are individually valid but inconsistent with each other.
class InvalidInput : public Error {
public:
    using Error::Error;
};

// Every variable weight was thresholded to zero; lambda2 is too large.
class DegenerateWeights : public Error {
public:
    using Error::Error;
};

// The weighted robust between-cluster sum of squares is not positive.
class DegenerateStructure : public Error {
public:
    using Error::Error;
};

// A (lambda1, lambda2) pair whose fit, or one of its null-reference fits, is
// degenerate, so its Gap value is undefined.
class InfeasibleLambda : public Error {
public:
    using Error::Error;
};

// No grid point of a tuning sweep produced a feasible fit.
class TuningFailed : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace arsk

#endif  // ARSK_ERRORS_HPP
