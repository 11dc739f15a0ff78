#pragma once

#include <stdexcept>
#include <string>

namespace dtdr {

/// Base of all library errors. The CLI maps subclasses onto exit codes.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition or dimension violation by the caller.
class argument_error : public error {
public:
    using error::error;
};

/// Configuration text or typed config failed validation.
class config_error : public error {
public:
    using error::error;
};

/// Non-finite state during time integration.
class blowup_error : public error {
public:
    using error::error;
};

/// Input with zero variance where a spread is required.
class degenerate_error : public error {
public:
    using error::error;
};

/// No ridge grid point produced a usable readout.
class training_error : public error {
public:
    using error::error;
};

class io_error : public error {
public:
    using error::error;
};

} // namespace dtdr
