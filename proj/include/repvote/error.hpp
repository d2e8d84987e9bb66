#pragma once

#include <stdexcept>
#include <string>

namespace repvote {

// Process exit codes used by the command-line tool.
enum class ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kInfeasible = 3,
  kTooLarge = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept = 0;
};

// Malformed input: unknown party, bad order, malformed record, bad parameters.
class InputError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kInputError; }
};

// A tie the configured policy cannot resolve, or a request that has no
// representative solution.
class Unresolvable : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kInfeasible; }
};

class TooLarge : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kTooLarge; }
};

}  // namespace repvote
