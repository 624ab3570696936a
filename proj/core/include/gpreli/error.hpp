#pragma once

#include <stdexcept>
#include <string>

namespace gpreli {

// Base class for all library errors. The two subtrees matter to callers:
// usage_error (bad parameters, inputs, config) and numeric_error (conditioning
// failures) — the CLI maps them to exit codes 1 and 2 respectively.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class usage_error : public error {
public:
    using error::error;
};

// Invalid model/kernel parameters (nu <= d/2, kappa <= 0, beta outside (0,1), ...).
class parameter_error : public usage_error {
public:
    using usage_error::usage_error;
};

// Malformed data arguments (length mismatch, duplicate centers, empty input).
class input_error : public usage_error {
public:
    using usage_error::usage_error;
};

// Argument outside the mathematical domain (bessel_k at r <= 0, quantile at p >= 1).
class domain_error : public usage_error {
public:
    using usage_error::usage_error;
};

// Structurally impossible sizes (grid n not a d-th power).
class shape_error : public usage_error {
public:
    using usage_error::usage_error;
};

// Operation requires a different fit mode (native norm with mu_hat > 0).
class mode_error : public usage_error {
public:
    using usage_error::usage_error;
};

// Bad or inconsistent configuration file contents.
class config_error : public usage_error {
public:
    using usage_error::usage_error;
};

// File-system failures (unwritable path, refusing to reuse an output dir).
class io_error : public usage_error {
public:
    using usage_error::usage_error;
};

class numeric_error : public error {
public:
    using error::error;
};

// Factorization failed even after jitter escalation.
class conditioning_error : public numeric_error {
public:
    using numeric_error::numeric_error;
};

} // namespace gpreli
