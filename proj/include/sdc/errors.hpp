#pragma once

#include <stdexcept>
#include <string>

namespace sdc {

// Base for every error raised by the library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Precondition violated by caller-supplied parameters (bad q, bad sizes, incompatible spec).
class invalid_argument : public error {
  public:
    using error::error;
};

// A configured size cap (enumeration, orbit, action) would be exceeded.
class cap_exceeded : public error {
  public:
    using error::error;
};

// A mathematical object does not exist or could not be found (singular inverse, no isotropic vector).
class not_found : public error {
  public:
    using error::error;
};

// An internal consistency check failed. Indicates a bug, not bad input.
class internal_error : public error {
  public:
    using error::error;
};

class io_error : public error {
  public:
    using error::error;
};

}  // namespace sdc
