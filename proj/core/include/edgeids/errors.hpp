#pragma once

#include <stdexcept>
#include <string>

namespace edgeids {

/// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Schema file problems: missing columns, bad roles, wrong feature count.
class SchemaError : public Error {
public:
  using Error::Error;
};

/// Data-level problems: unreadable files, arity mismatches, empty datasets.
class DataError : public Error {
public:
  using Error::Error;
};

/// Invalid run/engine/training configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Training diverged or produced non-finite values.
class TrainError : public Error {
public:
  using Error::Error;
};

/// Model file decoding failures, one code per defect.
class FormatError : public Error {
public:
  enum class Code {
    BadMagic,
    BadVersion,
    BadKind,
    BadTarget,
    Truncated,
    BadDimensions,
  };

  FormatError(Code code, const std::string& msg) : Error(msg), code_(code) {}
  Code code() const { return code_; }

private:
  Code code_;
};

} // namespace edgeids
