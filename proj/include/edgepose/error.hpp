#pragma once

#include <stdexcept>
#include <string>

namespace edgepose {

// Base of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Image too small or two images of different size.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Out-of-range or inconsistent parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Empty input where at least one element is required.
class EmptyInputError : public Error {
 public:
  using Error::Error;
};

// Filesystem or codec failure.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed record in an input file. `where()` names the file and the
// record (line, scene/image, array index) that failed to parse.
class ParseError : public Error {
 public:
  ParseError(std::string where, const std::string &what)
      : Error(where + ": " + what), where_(std::move(where)) {}

  const std::string &where() const { return where_; }

 private:
  std::string where_;
};

// Point at or behind the camera plane.
class BehindCameraError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class DegenerateConfigurationError : public Error {
 public:
  using Error::Error;
};

class InitializationError : public Error {
 public:
  using Error::Error;
};

}  // namespace edgepose
