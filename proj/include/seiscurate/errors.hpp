#ifndef SEISCURATE_ERRORS_HPP
#define SEISCURATE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace seiscurate {

// Base for everything thrown by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. `position` is a byte offset for binary formats
// and a 1-based line number for text formats.
class ParseError : public Error {
public:
  ParseError(std::string file, std::size_t position, const std::string& what)
      : Error(file + ":" + std::to_string(position) + ": " + what),
        file_(std::move(file)), position_(position) {}

  const std::string& file() const { return file_; }
  std::size_t position() const { return position_; }

private:
  std::string file_;
  std::size_t position_;
};

// Violated precondition or domain invariant.
class ValidationError : public Error {
public:
  using Error::Error;
};

// Pipeline stage failure: carries the stage name and the offending file.
class StageError : public Error {
public:
  StageError(std::string stage, std::string file, const std::string& cause)
      : Error("stage " + stage + (file.empty() ? "" : " (" + file + ")") +
              ": " + cause),
        stage_(std::move(stage)), file_(std::move(file)), cause_(cause) {}

  const std::string& stage() const { return stage_; }
  const std::string& file() const { return file_; }
  const std::string& cause() const { return cause_; }

private:
  std::string stage_;
  std::string file_;
  std::string cause_;
};

} // namespace seiscurate

#endif
