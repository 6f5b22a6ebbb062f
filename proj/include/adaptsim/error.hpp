#ifndef ADAPTSIM_ERROR_HPP
#define ADAPTSIM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace adaptsim {

enum class ErrorCode {
  DuplicateNode,
  UnknownNode,
  WrongLevel,
  OutOfDomain,
  InvalidProfile,
  MissingContext,
  InvalidParam,
  EmptyTrace,
  ParseError,
  ScenarioError,
  IncomparableTraces,
  IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace adaptsim

#endif
