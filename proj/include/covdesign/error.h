#ifndef COVDESIGN_ERROR_H_
#define COVDESIGN_ERROR_H_

#include <stdexcept>
#include <string>

namespace covdesign {

// Base class for every error raised by the library. The CLI maps these to a
// nonzero exit code and prints what().
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& path, long line, const std::string& what)
      : Error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace covdesign

#endif  // COVDESIGN_ERROR_H_
