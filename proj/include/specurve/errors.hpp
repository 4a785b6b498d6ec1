#pragma once

#include <stdexcept>
#include <string>

namespace specurve {

/// Bad user input: unknown columns, overlapping roles, invalid option values.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unreadable or malformed input data.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure that is fatal for the whole run.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class RejectReason {
    insufficient_rows,
    empty_column,
    collinear,
    degenerate_outcome,
    nonconvergence,
};

const char* to_string(RejectReason r) noexcept;

/// A single specification cannot be fitted. Recorded per spec, never fatal to a run.
class SpecRejected : public std::runtime_error {
public:
    SpecRejected(RejectReason reason, const std::string& detail)
        : std::runtime_error(std::string(to_string(reason)) + ": " + detail), reason_(reason) {}

    RejectReason reason() const noexcept { return reason_; }

private:
    RejectReason reason_;
};

}  // namespace specurve
