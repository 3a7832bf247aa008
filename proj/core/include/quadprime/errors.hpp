#pragma once

#include <stdexcept>
#include <string>

namespace quadprime {

/// A requested table or grid would exceed the configured memory budget.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A table does not cover the integers a computation needs.
class CoverageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A truncated series would need more terms than its configured ceiling.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or mismatched table cache file.
class CacheFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace quadprime
