#pragma once

#include <stdexcept>
#include <string>

namespace fracsig {

// Argument outside the mathematical domain of an operation. Alias kept so
// callers can catch the standard type.
using DomainError = std::domain_error;

// A series or iteration failed to converge within its cap.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A brute-force oracle was asked for more work than its budget allows.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input data (IDX payloads, CSV files).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fracsig
