#pragma once

#include <stdexcept>
#include <string>

namespace lg {

// Base of every error raised by the library. The CLI maps all of them to
// exit code 3 except where a command gives a narrower meaning.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Raised while loading a document; the message carries the JSON location.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class NoPathError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class LocalConvexityViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace lg
