#pragma once

#include <stdexcept>
#include <string>

namespace unitext {

/// Base for every error raised by the library. The CLI maps subclasses to
/// exit statuses.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input data: catalog, raw corpus, record files, predictions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A key that was expected to be registered was not.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// A value cannot be rendered in the flat target format.
class SerializationError : public Error {
 public:
  using Error::Error;
};

}  // namespace unitext
