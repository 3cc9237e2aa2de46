#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dampwave {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates an operation's precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Vector or matrix sizes do not agree.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A factorization hit a pivot below the singularity threshold.
class SingularMatrix : public Error {
public:
    SingularMatrix(std::size_t row, double pivot, const std::string& what)
        : Error(what), row_(row), pivot_(pivot) {}

    std::size_t row() const noexcept { return row_; }
    double pivot() const noexcept { return pivot_; }

private:
    std::size_t row_;
    double pivot_;
};

/// Syntax error in an expression, located by byte offset.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& what)
        : Error(what), offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

/// Evaluation produced a domain error or a non-finite value.
class EvalError : public Error {
public:
    EvalError(std::string subexpression, const std::string& what)
        : Error(what), subexpression_(std::move(subexpression)) {}

    const std::string& subexpression() const noexcept { return subexpression_; }

private:
    std::string subexpression_;
};

/// A problem configuration document does not match the schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace dampwave
